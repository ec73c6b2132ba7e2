import csv
import json

import pytest

from conjnet.cli import (
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_SINGULAR,
    cmd_surface,
    cmd_transform,
    demo_config_path,
    main,
)
from conjnet.expr import FLOAT
from conjnet.netcore import net_from_document
from conjnet.parser import parse_expr
from conjnet.wronski import closed_form

DEMO = demo_config_path()
SURFACE = demo_config_path("surface_demo.json")


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def demo_doc():
    return json.loads(DEMO.read_text())


@pytest.mark.parametrize("mode", ["float", "exact"])
def test_verify_demo(tmp_path, mode):
    out = tmp_path / "report.json"
    assert main(["verify", str(DEMO), "--mode", mode, "--rng-seed", "3", "--points", "4", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["meta"]["rng_seed"] == 3 and doc["meta"]["mode"] == mode
    names = {c["name"].split(":")[0] for c in doc["checks"]}
    assert {"darboux", "tangent", "lame", "point", "bilinear_X", "bilinear_H", "oracle"} <= names


def test_verify_default_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["verify", "--points", "2"]) == EXIT_OK
    assert (tmp_path / "report.json").exists()


def test_verify_duplicate_seeds(tmp_path, demo_doc):
    demo_doc["seeds"][1]["components"] = demo_doc["seeds"][0]["components"]
    cfg = write(tmp_path, demo_doc)
    assert main(["verify", cfg, "--out", str(tmp_path / "r.json")]) == EXIT_SINGULAR


def test_verify_malformed_expression(tmp_path, demo_doc):
    demo_doc["lame"][0] = "exp(u1*u2)"
    assert main(["verify", write(tmp_path, demo_doc), "--out", str(tmp_path / "r.json")]) == EXIT_INPUT
    demo_doc["lame"][0] = "exp(u1"
    assert main(["verify", write(tmp_path, demo_doc), "--out", str(tmp_path / "r.json")]) == EXIT_INPUT


def test_verify_missing_file(tmp_path):
    assert main(["verify", str(tmp_path / "nope.json")]) == EXIT_INPUT


def test_verify_bad_partition(tmp_path, demo_doc):
    demo_doc["partition"] = [1, 2]
    assert main(["verify", write(tmp_path, demo_doc), "--out", str(tmp_path / "r.json")]) == EXIT_INPUT


def test_verify_failure_exit_code(tmp_path, demo_doc, monkeypatch):
    from conjnet import cli
    from conjnet.verify import Check, Report

    def failing(*a, **k):
        rep = Report("residuals")
        rep.add(Check("darboux", (1, 2, 3), None, "symbolic", None, "fail"))
        return rep

    monkeypatch.setattr(cli, "full_residual_suite", failing)
    assert main(["verify", str(DEMO), "--points", "2", "--out", str(tmp_path / "r.json")]) == EXIT_FAIL


def test_surface_background_2x2(tmp_path):
    doc = json.loads(SURFACE.read_text())
    del doc["partition"]
    out = tmp_path / "s.obj"
    info = cmd_surface(write(tmp_path, doc), "0:1:2,0:1:2", out)
    assert info == {"vertices": 4, "faces": 2, "skipped": 0}
    lines = out.read_text().split("\n")
    assert sum(l.startswith("v ") for l in lines) == 4
    assert [l for l in lines if l.startswith("f ")] == ["f 1 3 4", "f 1 4 2"]


def test_surface_transformed_50x50(tmp_path):
    out = tmp_path / "s.obj"
    assert main(["surface", str(SURFACE), "--grid", "-1:1:50,-1:1:50", "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    verts = text.count("\nv ") + text.startswith("v ")
    assert verts <= 2500
    info = cmd_surface(str(SURFACE), "-1:1:50,-1:1:50", tmp_path / "t.obj")
    assert info["vertices"] == verts
    assert info["vertices"] + info["skipped"] == 2500


def test_surface_csv_round_trip(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["surface", str(SURFACE), "--grid", "-0.5:0.5:4,0:1:3", "--format", "csv", "--out", str(out)]) == EXIT_OK
    doc = json.loads(SURFACE.read_text())
    net = closed_form(net_from_document(doc), doc["partition"])
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 12
    for row in rows:
        pt = (float(row["u1"]), float(row["u2"]))
        v = net.evaluate(pt, FLOAT, keys=[("x", 1), ("x", 2), ("x", 3)])
        for l in (1, 2, 3):
            assert abs(float(row[f"x{l}"]) - v.x(l)) <= 1e-12 * max(1.0, abs(v.x(l)))


def test_surface_rejects_mesh_for_n3(tmp_path):
    assert main(["surface", str(DEMO), "--grid", "0:1:2,0:1:2,0:1:2", "--out", str(tmp_path / "m.obj")]) == EXIT_INPUT


def test_surface_bad_grid(tmp_path):
    assert main(["surface", str(SURFACE), "--grid", "0:1", "--out", str(tmp_path / "m.obj")]) == EXIT_INPUT
    assert main(["surface", str(SURFACE), "--grid", "0:1:1,0:1:2", "--out", str(tmp_path / "m.obj")]) == EXIT_INPUT


def test_surface_all_singular(tmp_path):
    doc = json.loads(SURFACE.read_text())
    doc["seeds"][1]["components"] = doc["seeds"][0]["components"]
    assert main(["surface", write(tmp_path, doc), "--grid", "0:1:3,0:1:3", "--out", str(tmp_path / "m.obj")]) \
        == EXIT_SINGULAR


def _equal_dumps(a, b):
    for key in ("tangents", "point", "lame"):
        flat_a = [c for row in a[key] for c in (row if isinstance(row, list) else [row])]
        flat_b = [c for row in b[key] for c in (row if isinstance(row, list) else [row])]
        assert all((parse_expr(x) - parse_expr(y)).is_zero() for x, y in zip(flat_a, flat_b))
    assert a["beta"].keys() == b["beta"].keys()
    assert all((parse_expr(a["beta"][k]) - parse_expr(b["beta"][k])).is_zero() for k in a["beta"])


def test_transform_zero_steps(tmp_path, demo_doc):
    cfg = write(tmp_path, {k: v for k, v in demo_doc.items() if k != "steps"})
    dump = cmd_transform(cfg, out=tmp_path / "d.json")
    assert dump["history"] == []
    original = net_from_document(demo_doc)
    for row, orig in zip(dump["tangents"], original.X):
        assert [parse_expr(c) for c in row] == list(orig)
    assert [sd["label"] for sd in dump["seeds"]] == ["a", "b", "c"]


def test_transform_one_step_round_trip(tmp_path, demo_doc):
    out = tmp_path / "d.json"
    assert main(["transform", str(DEMO), "--steps", "1:a", "--out", str(out)]) == EXIT_OK
    dump = json.loads(out.read_text())
    xi = [parse_expr(c) for c in demo_doc["seeds"][0]["components"]]
    for k in (2, 3):
        assert (parse_expr(dump["beta"][f"{k},1"]) + xi[k - 1] / xi[0]).is_zero()
    again = net_from_document(dump)
    from conjnet.netcore import dump_state

    _equal_dumps(dump_state(again), dump)


def test_transform_config_steps(tmp_path, capsys):
    assert main(["transform", str(DEMO)]) == EXIT_OK
    dump = json.loads(capsys.readouterr().out)
    assert dump["history"] == [[1, "a"], [2, "b"], [3, "c"]]
    assert dump["seeds"] == []


def test_transform_reused_seed(tmp_path, capsys):
    assert main(["transform", str(DEMO), "--steps", "1:a,2:a"]) == EXIT_INPUT
    assert "a" in capsys.readouterr().err


def test_transform_bad_step_syntax():
    assert main(["transform", str(DEMO), "--steps", "1a"]) == EXIT_INPUT
