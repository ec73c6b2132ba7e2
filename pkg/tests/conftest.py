import sys

import pytest

from conjnet import make_background

TANGENTS3 = [["exp(u1)", "u1", "1"], ["1", "exp(2*u2)", "0"], ["0", "u3", "exp(-u3)"]]
LAME3 = ["exp(u1)", "1 + exp(u2)", "exp(2*u3)"]
SEEDS3 = [
    ("a", ["exp(u1) + 2*exp(-u1)", "exp(u2)", "exp(u3) + 1"]),
    ("b", ["exp(2*u1)", "3*exp(-u2) + exp(u2)", "exp(2*u3)"]),
    ("c", ["exp(-u1)", "exp(2*u2)", "exp(-2*u3) + exp(u3)"]),
    ("d", ["exp(3*u1) + u1", "exp(-u2)", "2*exp(u3)"]),
]

TANGENTS2 = [["exp(u1)", "0", "u1"], ["0", "exp(u2)", "1"]]
LAME2 = ["exp(u1)", "exp(u2)"]
SEEDS2 = [
    ("a", ["exp(u1)", "exp(u2)"]),
    ("b", ["exp(2*u1)", "exp(2*u2)"]),
    ("c", ["exp(-u1) + 1", "exp(3*u2)"]),
]


def background3(n_seeds=4):
    return make_background(3, 3, TANGENTS3, LAME3, SEEDS3[:n_seeds])


def background2(n_seeds=3):
    return make_background(2, 3, TANGENTS2, LAME2, SEEDS2[:n_seeds])


@pytest.fixture
def bg3():
    return background3()


@pytest.fixture
def bg2():
    return background2()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_result(number))
