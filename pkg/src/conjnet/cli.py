"""Command-line front end.

    conjnet verify CONFIG [--mode float|exact] [--rng-seed N] [--points N] [--out report.json]
    conjnet surface CONFIG --grid u1min:u1max:n1,u2min:u2max:n2 [--format obj|csv] --out PATH
    conjnet transform CONFIG [--steps 1:a,2:b] [--out PATH]

Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 singular configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .expr import FLOAT, EvalContext, ExprError, PoleError
from .levy import DegenerateSeedError, levy_sequence
from .netcore import NetError, dump_state, net_from_document
from .verify import (
    Report,
    bilinear_suite,
    default_order,
    full_residual_suite,
    nonsingular_points,
    oracle_equivalence,
)
from .wronski import Partition, SingularNetError, closed_form

log = logging.getLogger("conjnet")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SINGULAR = 0, 1, 2, 3

# symbolic determinant expansion is used up to this many seeds
SYMBOLIC_MAX_M = 4


class InputError(Exception):
    pass


def demo_config_path(name: str = "demo.json") -> Path:
    return Path(str(resources.files("conjnet") / "data" / name))


def _load(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc


def _net_and_partition(doc: dict, need_partition: bool = True):
    try:
        s0 = net_from_document(doc)
        p = Partition(tuple(doc["partition"])) if "partition" in doc else None
    except (ExprError, NetError, ValueError, TypeError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    if need_partition and p is None:
        raise InputError("config has no 'partition'")
    return s0, p


def _parse_steps(text: str | None, doc: dict):
    if text:
        steps = []
        for part in text.split(","):
            d, _, lab = part.partition(":")
            if not lab:
                raise InputError(f"step {part!r} must look like DIRECTION:LABEL")
            steps.append((int(d), lab))
        return steps
    return [(int(d), str(lab)) for d, lab in doc.get("steps", [])]


def _parse_grid(text: str):
    axes = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 3:
            raise InputError(f"grid axis {part!r} must be min:max:count")
        try:
            lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
        except ValueError as exc:
            raise InputError(f"bad grid axis {part!r}: {exc}") from None
        if n < 2:
            raise InputError("each grid axis needs at least 2 nodes")
        axes.append(np.linspace(lo, hi, n))
    return axes


# ---------------------------------------------------------------------------
# verify


def cmd_verify(config, mode: str = "float", rng_seed: int = 0, points: int = 10, out=None) -> tuple[int, Report]:
    """Run residual, bilinear and oracle checks; return ``(exit_code, report)``."""
    doc = _load(config)
    s0, p = _net_and_partition(doc)
    try:
        net = closed_form(s0, p)
    except NetError as exc:
        raise InputError(str(exc)) from exc
    exact = mode == "exact"
    report = Report("verify", meta={"config": str(config), "mode": mode, "rng_seed": rng_seed,
                                     "partition": list(p.m)})

    if p.M <= SYMBOLIC_MAX_M and net.symbolic_det("W").is_zero():
        raise SingularNetError((), "multi-Wronskian vanishes identically")
    pts = nonsingular_points(net, points, rng_seed, exact=exact)
    if len(pts) < points:
        raise SingularNetError((), f"found only {len(pts)} of {points} nonsingular sample points")
    float_pts = pts if not exact else nonsingular_points(net, points, rng_seed)

    report.extend(full_residual_suite(s0))
    report.extend(full_residual_suite(net, pts))
    method = "symbolic" if p.M <= SYMBOLIC_MAX_M else "fd"
    report.extend(bilinear_suite(net, None, float_pts[:1] if method == "symbolic" else float_pts, method))
    order = _parse_steps(None, doc) or default_order(s0, p)
    try:
        oracle = oracle_equivalence(s0, p, order, pts)
    except ZeroDivisionError as exc:
        raise SingularNetError((), f"Levy composition degenerates: {exc}") from exc
    report.extend(oracle)
    report.meta["first_divergent"] = oracle.meta["first_divergent"]
    report.meta["order"] = order
    if out:
        report.write(out)
    return (EXIT_OK if report.passed else EXIT_FAIL), report


# ---------------------------------------------------------------------------
# surface


def surface_values(doc: dict, axes) -> tuple[list, int]:
    """Evaluate the (transformed) surface point on a tensor grid.

    Returns ``(nodes, skipped)`` where ``nodes`` is a row-major list with
    ``(coords, x)`` for each grid node, ``x`` being None at singular nodes.
    """
    s0, p = _net_and_partition(doc, need_partition=False)
    if len(axes) != s0.N:
        raise InputError(f"grid has {len(axes)} axes for an N={s0.N} net")
    net = closed_form(s0, p) if p is not None else None
    keys = [("x", l) for l in range(1, s0.P + 1)]
    nodes, skipped = [], 0
    for coords in _grid_coords(axes):
        try:
            if net is not None:
                v = net.evaluate(coords, FLOAT, keys=keys)
                x = [v.values[k] for k in keys]
            else:
                ctx = EvalContext(coords, FLOAT)
                x = [ctx.value(c) for c in s0.x]
            if not all(np.isfinite(x)):
                raise SingularNetError(coords, "non-finite value")
        except (SingularNetError, PoleError):
            x = None
            skipped += 1
        nodes.append((coords, x))
    return nodes, skipped


def _grid_coords(axes):
    # row-major with the first axis slowest
    mesh = np.meshgrid(*axes, indexing="ij")
    return [tuple(float(m[idx]) for m in mesh) for idx in np.ndindex(mesh[0].shape)]


def write_obj(nodes, shape, path):
    n1, n2 = shape
    index = {}
    lines = []
    for flat, (_, x) in enumerate(nodes):
        if x is not None:
            index[flat] = len(index) + 1
            lines.append("v " + " ".join(repr(float(c)) for c in x))
    faces = 0
    for a in range(n1 - 1):
        for b in range(n2 - 1):
            q00, q10 = a * n2 + b, (a + 1) * n2 + b
            q11, q01 = (a + 1) * n2 + b + 1, a * n2 + b + 1
            for tri in ((q00, q10, q11), (q00, q11, q01)):
                if all(t in index for t in tri):
                    lines.append("f " + " ".join(str(index[t]) for t in tri))
                    faces += 1
    Path(path).write_text("\n".join(lines) + "\n")
    return len(index), faces


def write_csv(nodes, N, P, path):
    header = [f"u{j}" for j in range(1, N + 1)] + [f"x{l}" for l in range(1, P + 1)]
    lines = [",".join(header)]
    count = 0
    for coords, x in nodes:
        if x is None:
            continue
        lines.append(",".join(repr(float(c)) for c in (*coords, *x)))
        count += 1
    Path(path).write_text("\n".join(lines) + "\n")
    return count


def cmd_surface(config, grid: str, out, fmt: str = "obj") -> dict:
    doc = _load(config)
    axes = _parse_grid(grid)
    N, P = int(doc.get("N", 0)), int(doc.get("P", 0))
    if fmt == "obj" and (N, P) != (2, 3):
        raise InputError(f"OBJ export needs N=2, P=3, got N={N}, P={P}; use --format csv")
    nodes, skipped = surface_values(doc, axes)
    if skipped == len(nodes):
        raise SingularNetError((), "every grid node is singular")
    if skipped:
        log.warning("skipped %d singular grid nodes", skipped)
    if fmt == "obj":
        verts, faces = write_obj(nodes, tuple(len(a) for a in axes), out)
        return {"vertices": verts, "faces": faces, "skipped": skipped}
    rows = write_csv(nodes, N, P, out)
    return {"rows": rows, "skipped": skipped}


# ---------------------------------------------------------------------------
# transform


def cmd_transform(config, steps: str | None = None, out=None) -> dict:
    doc = _load(config)
    s0, _ = _net_and_partition(doc, need_partition=False)
    seq = _parse_steps(steps, doc)
    try:
        s = levy_sequence(s0, seq)
    except DegenerateSeedError:
        raise
    except NetError as exc:
        raise InputError(str(exc)) from exc
    dump = dump_state(s)
    text = json.dumps(dump, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    return dump


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conjnet", description="Levy transformations of conjugate nets")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run residual, bilinear and oracle checks")
    v.add_argument("config", nargs="?", default=None, help="config JSON (default: bundled demo)")
    v.add_argument("--mode", choices=["float", "exact"], default="float")
    v.add_argument("--rng-seed", type=int, default=0)
    v.add_argument("--points", type=int, default=10)
    v.add_argument("--out", default="report.json")

    s = sub.add_parser("surface", help="sample the surface point on a grid")
    s.add_argument("config")
    s.add_argument("--grid", required=True, help="u1min:u1max:n1,u2min:u2max:n2")
    s.add_argument("--format", choices=["obj", "csv"], default="obj")
    s.add_argument("--out", required=True)

    t = sub.add_parser("transform", help="apply Levy steps and dump the net")
    t.add_argument("config")
    t.add_argument("--steps", default=None, help="comma list of DIRECTION:LABEL")
    t.add_argument("--out", default=None)
    return ap


def _join_grid(argv: list[str]) -> list[str]:
    # "--grid -1:1:50,..." would otherwise read the range as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--grid={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_grid(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "verify":
            config = args.config or demo_config_path()
            code, report = cmd_verify(config, args.mode, args.rng_seed, args.points, args.out)
            counts = report.counts()
            print(f"verify: {counts.get('pass', 0)} passed, {counts.get('fail', 0)} failed, "
                  f"{counts.get('singular', 0)} singular (rng seed {args.rng_seed}); report: {args.out}")
            for c in report.failures[:10]:
                print(f"  FAIL {c.name} {c.indices} at {c.point}: {c.value}")
            return code
        if args.command == "surface":
            info = cmd_surface(args.config, args.grid, args.out, args.format)
            print(json.dumps(info))
            return EXIT_OK
        if args.command == "transform":
            cmd_transform(args.config, args.steps, args.out)
            return EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SingularNetError, DegenerateSeedError) as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
