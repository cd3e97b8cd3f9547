import io as stdio
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from gsteiner import io
from gsteiner.calibration import SQUARE_POINTS, TRIANGLE_POINTS, builtin_form
from gsteiner.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, RunConfig, run
from gsteiner.currents import PolyCurrent, canonical_current
from gsteiner.flows import ClassicalBoundary, SegmentPlan, homogeneity_failure_graph, transport_min
from gsteiner.group import GroupSetup
from gsteiner.steiner import solve_steiner
from gsteiner.svg import PADDING, Canvas, current_svg, form_svg, graph_svg, plan_svg

SQ3 = math.sqrt(3)
SVG_NS = "{http://www.w3.org/2000/svg}"


def cli(*argv):
    out = stdio.StringIO()
    code = run(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# -- JSON round trips ---------------------------------------------------------------


def roundtrip(obj):
    return json.loads(json.dumps(obj))


def test_points_roundtrip():
    assert io.points_from_json(roundtrip(io.points_to_json(SQUARE_POINTS))) == SQUARE_POINTS


def test_current_roundtrip():
    setup = GroupSetup(3)
    T = canonical_current(setup, solve_steiner(TRIANGLE_POINTS).segments, TRIANGLE_POINTS)
    data = roundtrip(io.current_to_json(T))
    assert data["n"] == 3 and data["d"] == 2
    assert io.current_from_json(data) == T


def test_form_roundtrip():
    for name in ("triangle", "square", "hexagon7"):
        form = builtin_form(name)
        back = io.form_from_json(roundtrip(io.form_to_json(form)))
        assert back.setup == form.setup and back.box == form.box and len(back.cells) == len(form.cells)
        for a, b in zip(form.cells, back.cells):
            assert a.halfplanes == b.halfplanes and (a.omega == b.omega).all()


def test_solution_roundtrip():
    sol = solve_steiner(SQUARE_POINTS)
    back = io.solution_from_json(roundtrip(io.solution_to_json(sol)))
    assert back.same_tree(sol, tol=1e-15) and back.length == sol.length and back.topology == sol.topology


def test_graph_roundtrip_is_exact():
    g = homogeneity_failure_graph()
    g.edges[0] = (g.edges[0][0], g.edges[0][1], Fraction(7, 3))
    data = roundtrip(io.graph_to_json(g))
    assert data["edges"][0]["len"] == "7/3"
    back = io.graph_from_json(data)
    assert back.edges == g.edges and back.terminals == g.terminals and back.pos == g.pos


def test_boundary_and_plan_roundtrip():
    B = ClassicalBoundary([((0, 0), 2), ((1, 1), 1)], [((1, 0), 1), ((0, 1), 2)])
    assert io.boundary_from_json(roundtrip(io.boundary_to_json(B))) == B
    plan = SegmentPlan(B, {(0, 0): Fraction(1, 3), (0, 1): Fraction(5, 3), (1, 0): Fraction(2, 3), (1, 1): Fraction(1, 3)})
    data = roundtrip(io.plan_to_json(plan))
    assert data["weights"][0]["w"] == "1/3"
    assert io.plan_from_json(data, B).weights == plan.weights


def test_rationals():
    assert io.rational_str(Fraction(6, 4)) == "3/2" and io.rational_str(5) == "5"
    assert io.parse_rational("3/2", "x") == Fraction(3, 2)
    assert io.parse_rational(0.5, "x") == Fraction(1, 2)
    for bad in ("1/0", "abc", True, None, float("nan")):
        with pytest.raises(io.InputError):
            io.parse_rational(bad, "x")


# -- validation messages ------------------------------------------------------------


@pytest.mark.parametrize(
    "parser,obj,fragment",
    [
        (io.points_from_json, {"pts": []}, "missing field 'points'"),
        (io.points_from_json, {"points": [[0, 0], [1]]}, "points[1]"),
        (io.points_from_json, {"points": [[0, "x"]]}, "points[0][1]"),
        (io.current_from_json, {"n": 3, "segments": [{"a": [0, 0], "b": [1, 0], "theta": [1]}]}, "segments[0].theta"),
        (io.current_from_json, {"n": 1, "segments": []}, ".n"),
        (io.current_from_json, {"n": 2, "d": 3, "segments": [{"a": [0, 0], "b": [1, 0], "theta": [1]}]}, "segments[0].a"),
        (io.form_from_json, {"n": 3, "box": [0, 0, 1], "cells": []}, ".box"),
        (io.form_from_json, {"n": 3, "box": [0, 0, 1, 1], "cells": [{"halfplanes": [], "omega": [[1, 0]]}]}, "cells[0].omega"),
        (io.graph_from_json, {"n": 2, "vertices": [{"id": "a"}], "edges": [{"u": "a", "v": "a", "len": "x"}], "terminals": []}, "edges[0].len"),
        (io.graph_from_json, {"n": 2, "vertices": [{"id": 3}], "edges": [], "terminals": []}, "vertices[0].id"),
        (io.boundary_from_json, {"sources": [{"p": [0, 0]}], "sinks": []}, "sources[0]"),
    ],
)
def test_errors_name_the_field(parser, obj, fragment):
    with pytest.raises(io.InputError) as exc:
        parser(obj)
    assert fragment in str(exc.value)


def test_load_json_reports_position(tmp_path):
    path = write(tmp_path, "bad.json", '{\n  "points": [\n    [0, 0],,\n  ]\n}')
    with pytest.raises(io.InputError, match="line 3"):
        io.load_json(path)
    with pytest.raises(io.InputError, match="cannot read"):
        io.load_json(tmp_path / "missing.json")


def test_run_config_validation():
    with pytest.raises(io.InputError):
        RunConfig("solve", tol_geom=0)
    with pytest.raises(io.InputError):
        RunConfig("graph", kmax=0)
    with pytest.raises(io.InputError):
        RunConfig("frobnicate")


# -- SVG ----------------------------------------------------------------------------


def _lines(svg_text):
    root = ET.fromstring(svg_text)
    return root, [
        (float(e.get("x1")), float(e.get("y1")), float(e.get("x2")), float(e.get("y2"))) for e in root.iter(SVG_NS + "line")
    ]


def test_svg_is_y_up_and_padded():
    c = Canvas(width=500)
    c.line((0, 0), (0, 10))
    root, lines = _lines(c.render())
    (x1, y1, x2, y2), = lines
    assert y2 < y1  # the higher world point is drawn nearer the top
    height = float(root.get("height"))
    assert y2 == pytest.approx(height * PADDING / (1 + 2 * PADDING), abs=0.01)
    assert y1 == pytest.approx(height - height * PADDING / (1 + 2 * PADDING), abs=0.01)


def test_current_svg_labels_multiplicities():
    setup = GroupSetup(3)
    T = canonical_current(setup, solve_steiner(TRIANGLE_POINTS).segments, TRIANGLE_POINTS)
    text = current_svg(T, TRIANGLE_POINTS)
    root = ET.fromstring(text)
    labels = [t.text for t in root.iter(SVG_NS + "text")]
    assert {"p1", "p2", "p3"} <= set(labels)
    assert any(lab in labels for lab in ("(1,0)", "(-1,0)"))
    assert len(list(root.iter(SVG_NS + "circle"))) == 3


def test_other_figures_render(tmp_path):
    form_svg(builtin_form("square"), path=tmp_path / "f.svg")
    assert "omega_4" in (tmp_path / "f.svg").read_text()
    g = homogeneity_failure_graph()
    assert "p4 (-1,-1,-1)" in graph_svg(g)
    B = ClassicalBoundary([((0, 0), 1)], [((1, 0), 1)])
    ET.fromstring(plan_svg(B, transport_min(B)[1]))


# -- commands -----------------------------------------------------------------------


def test_solve_examples(tmp_path):
    code, rep = cli("solve", "triangle")
    assert code == EXIT_OK and rep["length"] == pytest.approx(3, abs=1e-9) and rep["mass"] == pytest.approx(3, abs=1e-9)
    code, rep = cli("solve", write(tmp_path, "two.json", {"points": [[0, 0], [3, 4]]}))
    assert code == EXIT_OK and rep["length"] == pytest.approx(5)
    assert len(rep["optima"][0]["solution"]["segments"]) == 1
    svg_path = tmp_path / "sq.svg"
    code, rep = cli("solve", write(tmp_path, "sq.json", {"points": SQUARE_POINTS}), "--svg", str(svg_path))
    assert code == EXIT_OK and rep["length"] == pytest.approx(2 + 2 * SQ3, abs=1e-9)
    assert len(rep["optima"]) == 2
    assert svg_path.read_text().startswith("<svg")


def test_solve_output_reparses(tmp_path):
    out = tmp_path / "out.json"
    code, rep = cli("solve", "square", "--json", str(out))
    assert json.loads(out.read_text()) == rep
    for opt in rep["optima"]:
        T = io.current_from_json(opt["current"])
        assert io.current_to_json(T) == opt["current"]
        assert io.solution_to_json(io.solution_from_json(opt["solution"])) == opt["solution"]


def test_verify_examples(tmp_path):
    code, rep = cli("verify", "triangle")
    assert code == EXIT_OK and rep["passed"]
    code, rep = cli("verify", "hexagon7")
    assert code == EXIT_OK and rep["passed"]
    code, rep = cli("verify", "square")
    assert code == EXIT_OK and len(rep["certificates"]) == 2
    # a current file and a form file
    T = io.current_from_json(rep["certificates"][0]["current"])
    form_path = write(tmp_path, "form.json", io.form_to_json(builtin_form("square")))
    cur_path = write(tmp_path, "cur.json", io.current_to_json(T))
    code, rep2 = cli("verify", form_path, cur_path)
    assert code == EXIT_OK and rep2["passed"]


def test_verify_mismatch_and_failure(tmp_path):
    assert cli("verify", "triangle", "square")[0] == EXIT_INPUT
    bad = PolyCurrent(GroupSetup(4), [((-1, -1), (1, 1), [1, 0, 0])])
    code, rep = cli("verify", "square", write(tmp_path, "diag.json", io.current_to_json(bad)))
    assert code == EXIT_FAIL and not rep["passed"]
    form_path = write(tmp_path, "form.json", io.form_to_json(builtin_form("square")))
    assert cli("verify", form_path)[0] == EXIT_INPUT


def test_graph_examples(tmp_path):
    code, rep = cli("graph", "homogeneity_failure", "--kmax", "2")
    assert code == EXIT_OK
    assert [r["M_k"] for r in rep["rows"]] == ["12", "23"] and rep["flagged"] == [2]
    code, rep = cli("graph", "single_edge", "--kmax", "3")
    assert code == EXIT_OK and rep["flagged"] == [] and all(r["ratio"] == "1" for r in rep["rows"])
    path = write(tmp_path, "tri.json", io.graph_to_json(__import__("gsteiner.flows").flows.triangle_graph()))
    code, rep = cli("graph", path, "--kmax", "2", "--svg", str(tmp_path / "g.svg"))
    assert code == EXIT_OK and rep["flagged"] == []
    assert io.graph_to_json(io.graph_from_json(rep["graph"])) == rep["graph"]


def test_baseline_examples(tmp_path):
    code, rep = cli("baseline", "square")
    assert code == EXIT_OK
    assert rep["real_min"] == pytest.approx(4) and rep["integer_mass"] == pytest.approx(4)
    assert rep["support_components"] == 2 and rep["steiner_length"] == pytest.approx(2 + 2 * SQ3)
    one = {"sources": [{"p": [0, 0], "mult": 1}], "sinks": [{"p": [3, 4], "mult": 1}]}
    code, rep = cli("baseline", write(tmp_path, "one.json", one))
    assert code == EXIT_OK and rep["real_min"] == pytest.approx(5)
    rnd = {
        "sources": [{"p": [k, 0], "mult": m} for k, m in enumerate([1, 2, 1, 3])],
        "sinks": [{"p": [k * 0.7, 2 + k % 2], "mult": m} for k, m in enumerate([2, 2, 2, 1])],
    }
    code, rep = cli("baseline", write(tmp_path, "rnd.json", rnd))
    assert code == EXIT_OK and rep["real_equals_integer"]
    assert rep["exhaustive_integer_min"] == pytest.approx(rep["real_min"], abs=1e-9)


def test_exit_codes(tmp_path):
    assert cli("axioms", "--n", "3")[0] == EXIT_OK
    assert cli("solve", "nosuch")[0] == EXIT_INPUT
    assert cli("solve", write(tmp_path, "dup.json", {"points": [[0, 0], [0, 0]]}))[0] == EXIT_INPUT
    unbalanced = {"sources": [{"p": [0, 0], "mult": 2}], "sinks": [{"p": [1, 0], "mult": 1}]}
    assert cli("baseline", write(tmp_path, "u.json", unbalanced))[0] == EXIT_INPUT
    assert cli("graph", "homogeneity_failure", "--max-nodes", "2")[0] == EXIT_RESOURCE
    assert cli("solve", write(tmp_path, "broken.json", "{"))[0] == EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "gsteiner.cli", "solve", "triangle"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["length"] == pytest.approx(3, abs=1e-9)


def test_verify_form_file_without_box(tmp_path):
    data = io.form_to_json(builtin_form("square"))
    del data["box"]
    form_path = write(tmp_path, "form.json", data)
    code, rep = cli("verify", form_path, write(tmp_path, "pts.json", {"points": SQUARE_POINTS}))
    assert code == EXIT_OK and rep["passed"]
    with pytest.raises(io.InputError, match="missing field 'box'"):
        io.form_from_json(data)
