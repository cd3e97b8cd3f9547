"""Command-line entry point: ``gsteiner {solve,verify,graph,baseline,axioms}``.

Exit status: 0 success / pass, 1 failed certificate or inequality,
2 input error, 3 resource cap or non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from math import comb
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx

from . import io, svg
from .calibration import (
    BUILTIN_FORMS,
    BUILTIN_TERMINALS,
    TOL_CALIB,
    CalibrationError,
    box_around,
    builtin_form,
    verify_calibration,
)
from .currents import TOL_GEOM, CurrentError, canonical_current, mass
from .flows import (
    BUILTIN_GRAPHS,
    ClassicalBoundary,
    MAX_NODES,
    FlowError,
    ResourceCapError,
    builtin_graph,
    exhaustive_integer_min,
    homogeneity_scan,
    integerize,
    transport_min,
)
from .group import DimensionError, GroupSetup, check_axioms
from .steiner import ConvergenceError, SteinerError, steiner_optima

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

# Square with alternating +-1 multiplicities at its corners.
SQUARE_BOUNDARY = ClassicalBoundary(
    sources=[((1.0, 1.0), 1), ((-1.0, -1.0), 1)],
    sinks=[((1.0, -1.0), 1), ((-1.0, 1.0), 1)],
)
BUILTIN_BOUNDARIES = {"square": SQUARE_BOUNDARY}
BUILTIN_POINTS = dict(BUILTIN_TERMINALS)

# exhaustive integer plans are only enumerated for boundaries this small
_EXHAUSTIVE_LIMIT = 200_000


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    tol_geom: float = TOL_GEOM
    tol_calib: float = TOL_CALIB
    kmax: int = 2
    max_nodes: int = MAX_NODES
    n: list[int] = field(default_factory=list)
    json_out: str | None = None
    svg_out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise io.InputError(f"unknown command {self.command!r}")
        if self.tol_geom <= 0 or self.tol_calib <= 0:
            raise io.InputError("tolerances must be positive")
        if self.kmax < 1:
            raise io.InputError("--kmax must be >= 1")
        if self.max_nodes < 1:
            raise io.InputError("--max-nodes must be >= 1")


# -- helpers -----------------------------------------------------------------------


def _source(arg: str, builtins: dict, what: str):
    """``(kind, value)``: a built-in name or a parsed JSON file."""
    if arg in builtins and not Path(arg).exists():
        return "builtin", arg
    if not Path(arg).exists():
        raise io.InputError(f"{arg}: no such file and not a built-in {what} ({', '.join(sorted(builtins))})")
    return "file", io.load_json(arg)


def _points(arg: str):
    kind, val = _source(arg, BUILTIN_POINTS, "point set")
    return list(BUILTIN_POINTS[val]) if kind == "builtin" else io.points_from_json(val, arg)


def _solve(points, tol_geom):
    optima = steiner_optima(points, tol=tol_geom)
    setup = GroupSetup(len(points))
    currents = [canonical_current(setup, sol.segments, points, tol=tol_geom) for sol in optima]
    return optima, currents


# -- commands ----------------------------------------------------------------------


def cmd_solve(cfg: RunConfig):
    points = _points(cfg.inputs[0])
    optima, currents = _solve(points, cfg.tol_geom)
    report = {
        "command": "solve",
        "n": len(points),
        "terminals": [list(p) for p in points],
        "length": optima[0].length,
        "mass": mass(currents[0]),
        "optima": [
            {"solution": io.solution_to_json(sol), "current": io.current_to_json(T), "mass": mass(T)}
            for sol, T in zip(optima, currents)
        ],
    }
    if cfg.svg_out:
        canvas = svg.Canvas()
        svg.draw_current(canvas, currents[0], points)
        canvas.save(cfg.svg_out)
    return report, EXIT_OK


def cmd_verify(cfg: RunConfig):
    form_arg = cfg.inputs[0]
    kind, val = _source(form_arg, BUILTIN_FORMS, "calibration")
    terminals = BUILTIN_TERMINALS.get(val) if kind == "builtin" else None
    if len(cfg.inputs) > 1:
        ckind, cval = _source(cfg.inputs[1], BUILTIN_POINTS, "point set or current")
        if ckind == "builtin":
            terminals = BUILTIN_POINTS[cval]
            currents = _solve(terminals, cfg.tol_geom)[1]
        elif isinstance(cval, dict) and "segments" in cval:
            currents = [io.current_from_json(cval, cfg.inputs[1], tol=cfg.tol_geom)]
            terminals = None
        else:
            terminals = io.points_from_json(cval, cfg.inputs[1])
            currents = _solve(terminals, cfg.tol_geom)[1]
    else:
        if terminals is None:
            raise io.InputError("verify needs a current (or points) file for a calibration read from disk")
        currents = _solve(terminals, cfg.tol_geom)[1]
    if kind == "builtin":
        form = builtin_form(val)
    else:
        # a file without a "box" is evaluated on twice the hull of the instance
        pts = [p for T in currents for p in T.vertices()] or list(terminals or [])
        form = io.form_from_json(val, form_arg, default_box=box_around(pts) if pts else None)
    for T in currents:
        if T.setup.n != form.setup.n:
            raise io.InputError(f"calibration is for n={form.setup.n} but the current has n={T.setup.n}")
    certs = [verify_calibration(form, T, tol=cfg.tol_calib) for T in currents]
    passed = all(c.passed for c in certs)
    report = {
        "command": "verify",
        "form": form.name or form_arg,
        "passed": passed,
        "certificates": [
            dict(c.to_dict(), current=io.current_to_json(T)) for c, T in zip(certs, currents)
        ],
    }
    if cfg.svg_out:
        svg.form_svg(form, currents[0], terminals or (), path=cfg.svg_out)
    return report, EXIT_OK if passed else EXIT_FAIL


def cmd_graph(cfg: RunConfig):
    kind, val = _source(cfg.inputs[0], BUILTIN_GRAPHS, "graph")
    g = builtin_graph(val) if kind == "builtin" else io.graph_from_json(val, cfg.inputs[0])
    rows = homogeneity_scan(g, cfg.kmax, cfg.max_nodes)
    report = {
        "command": "graph",
        "graph": io.graph_to_json(g),
        "kmax": cfg.kmax,
        "rows": [dict(r.to_dict(), current=io.graph_current_to_json(r.current)) for r in rows],
        "flagged": [r.k for r in rows if r.flagged],
    }
    if cfg.svg_out:
        flagged = [r for r in rows if r.flagged]
        svg.graph_svg(g, (flagged[0] if flagged else rows[-1]).current, path=cfg.svg_out)
    return report, EXIT_OK


def cmd_baseline(cfg: RunConfig):
    kind, val = _source(cfg.inputs[0], BUILTIN_BOUNDARIES, "boundary")
    B = BUILTIN_BOUNDARIES[val] if kind == "builtin" else io.boundary_from_json(val, cfg.inputs[0])
    value, plan = transport_min(B)
    log: list = []
    integral = integerize(plan, log)
    report = {
        "command": "baseline",
        "boundary": io.boundary_to_json(B),
        "real_min": value,
        "real_plan": io.plan_to_json(plan),
        "integer_plan": io.plan_to_json(integral),
        "integer_mass": integral.mass(),
        "integerize_steps": len(log),
    }
    equal = abs(integral.mass() - value) <= cfg.tol_geom * max(1.0, value)
    if _plan_count_small(B):
        best, _ = exhaustive_integer_min(B)
        report["exhaustive_integer_min"] = best
        equal = equal and abs(best - value) <= cfg.tol_geom * max(1.0, value)
    report["real_equals_integer"] = equal
    report["support_components"] = plan_components(B, integral)
    points = [p for p, _ in B.sources] + [p for p, _ in B.sinks]
    if all(len(p) == 2 for p in points) and 2 <= len(set(points)) == len(points) <= 8:
        # the connected competitor: a Steiner tree through every boundary point
        report["steiner_length"] = steiner_optima(points, tol=cfg.tol_geom)[0].length
    if cfg.svg_out:
        svg.plan_svg(B, integral, path=cfg.svg_out)
    return report, EXIT_OK if equal else EXIT_FAIL


def plan_components(B: ClassicalBoundary, plan) -> int:
    """Connected components of the support of a plan (isolated boundary points excluded)."""
    G = nx.Graph()
    for i, j in plan.weights:
        G.add_edge(("x", i), ("y", j))
    return nx.number_connected_components(G)


def _plan_count_small(B: ClassicalBoundary) -> bool:
    # crude count of integer plans: product over rows of compositions into len(sinks) parts
    total = 1
    for a in B.a:
        total *= comb(a + len(B.b) - 1, len(B.b) - 1)
        if total > _EXHAUSTIVE_LIMIT:
            return False
    return True


def cmd_axioms(cfg: RunConfig):
    ns = cfg.n or list(range(2, 8))
    reports = [check_axioms(GroupSetup(n)) for n in ns]
    passed = all(r.passed for r in reports)
    report = {
        "command": "axioms",
        "passed": passed,
        "reports": [
            {"n": r.n, "passed": r.passed, "checked": r.checked, "failure": r.failure, "witness": r.witness}
            for r in reports
        ],
    }
    return report, EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "graph": cmd_graph,
    "baseline": cmd_baseline,
    "axioms": cmd_axioms,
}


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", dest="json_out", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--svg", dest="svg_out", metavar="PATH", help="draw a figure to PATH")
    common.add_argument("--tol-geom", type=float, default=TOL_GEOM, help="geometric tolerance (default %(default)g)")
    common.add_argument("--tol-calib", type=float, default=TOL_CALIB, help="calibration tolerance (default %(default)g)")

    p = argparse.ArgumentParser(prog="gsteiner", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", parents=[common], help="Steiner tree and its canonical G-current")
    s.add_argument("points", help="points JSON file or built-in name (triangle, square, hexagon7)")
    s = sub.add_parser("verify", parents=[common], help="check a piecewise-constant calibration")
    s.add_argument("form", help="calibration JSON file or built-in name (triangle, square, hexagon7)")
    s.add_argument("current", nargs="?", help="current or points JSON file (default: the built-in instance)")
    s = sub.add_parser("graph", parents=[common], help="homogeneity scan M(kR) vs k M(R) on a metric graph")
    s.add_argument("graph", help="graph JSON file or built-in name (" + ", ".join(sorted(BUILTIN_GRAPHS)) + ")")
    s.add_argument("--kmax", type=int, default=2)
    s.add_argument("--max-nodes", type=int, default=MAX_NODES, help="branch-and-bound node cap (default %(default)d)")
    s = sub.add_parser("baseline", parents=[common], help="real transport minimum vs integer plans")
    s.add_argument("boundary", help="boundary JSON file or built-in name (square)")
    s = sub.add_parser("axioms", parents=[common], help="check properties (P1)-(P4)")
    s.add_argument("--n", type=int, action="append", default=[], help="terminal count (repeatable; default 2..7)")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    inputs = [getattr(ns, k) for k in ("points", "form", "current", "graph", "boundary") if getattr(ns, k, None)]
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        tol_geom=ns.tol_geom,
        tol_calib=ns.tol_calib,
        kmax=getattr(ns, "kmax", 2),
        max_nodes=getattr(ns, "max_nodes", MAX_NODES),
        n=getattr(ns, "n", []),
        json_out=ns.json_out,
        svg_out=ns.svg_out,
    )


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        cfg = _config(ns)
        report, code = COMMANDS[cfg.command](cfg)
    except (ResourceCapError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (io.InputError, SteinerError, CurrentError, CalibrationError, FlowError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = io.dump_json(report, cfg.json_out)
    print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
