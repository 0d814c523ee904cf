"""Command line interface: file parsing, exit codes, byte-deterministic
output, and the pretty printer."""

import pytest

from qtrace.cli import (
    ParseError,
    emit_polynomial,
    explain_polynomial,
    main,
    parse_link_file,
    parse_polynomial_file,
    parse_surface_file,
    render_coefficient,
    render_h_power,
    render_monomial,
)
from qtrace.fock_goncharov import CurveStep, classical_trace_polynomial
from qtrace.surface import build_surface, once_punctured_torus

TORUS_SURFACE = """\
# once-punctured torus
n 3
triangles 2
edge d T0.0 T1.2
edge r T0.1 T1.0
edge b T0.2 T1.1
"""

CURVE_A = """\
arc T1 0 right 1
arc T0 0 left 1
"""

CURVE_A_MOVED = """\
arc T1 0 right 1
arc T0 0 right 2
arc T0 2 right 1
slice b inc_cw 1
"""

UNKNOT = """\
slice d inc_ccw 1
slice d dec_ccw 1
"""


@pytest.fixture
def torus_files(tmp_path):
    surface = tmp_path / "torus.surface"
    surface.write_text(TORUS_SURFACE)
    return tmp_path, surface


class TestParsers:
    def test_surface_round_trip(self):
        n, tr = parse_surface_file("torus.surface", TORUS_SURFACE)
        assert n == 3
        assert tr.n_triangles == 2
        assert tuple(e.id for e in tr.edges) == ("d", "r", "b")
        assert tr.edge_by_id("r").incidences == ((0, 1), (1, 0))

    def test_surface_errors_carry_position(self):
        with pytest.raises(ParseError, match=r"s\.surface:2"):
            parse_surface_file("s.surface", "n 3\nedge d T0.x\ntriangles 1\n")
        with pytest.raises(ParseError, match="missing 'n'"):
            parse_surface_file("s.surface", "triangles 1\n")
        with pytest.raises(ParseError, match="missing triangle"):
            parse_surface_file(
                "s.surface",
                "n 3\ntriangles 1\nedge d T0.0 T9.2\nedge p T0.1\nedge q T0.2\n",
            )

    def test_link_round_trip(self):
        link = parse_link_file(
            "l.link", "arc T0 2 left 1\nslice d inc_ccw 1\nstate q 1 2\n"
        )
        assert len(link.arcs) == 1
        assert link.arcs[0].exit == 0
        assert link.slices["d"][0].kind == "inc_ccw"
        assert link.boundary_states[("q", 1)] == 2

    def test_link_errors(self):
        with pytest.raises(ParseError, match=r"l\.link:1"):
            parse_link_file("l.link", "arc T0 2 sideways 1\n")
        with pytest.raises(ParseError):
            parse_link_file("l.link", "slice d sideways_kind 1\n")
        with pytest.raises(ParseError, match="unknown directive"):
            parse_link_file("l.link", "loop d\n")

    def test_polynomial_round_trip(self):
        terms = {(1, -2): {0: 3, -4: 1}, (0, 0): {6: -1}}
        text = emit_polynomial(3, ("a.1", "a.2"), terms)
        n, gens, parsed = parse_polynomial_file("p.poly", text)
        assert (n, gens) == (3, ("a.1", "a.2"))
        assert parsed == terms

    def test_polynomial_errors(self):
        with pytest.raises(ParseError, match="missing 'polynomial'"):
            parse_polynomial_file("p.poly", "n 3\ngenerators a\n")
        with pytest.raises(ParseError, match="expected 2 exponents"):
            parse_polynomial_file(
                "p.poly", "polynomial\nn 3\ngenerators a b\nterm 1 ; 0 1\n"
            )
        with pytest.raises(ParseError, match="duplicate"):
            parse_polynomial_file(
                "p.poly",
                "polynomial\nn 3\ngenerators a\nterm 1 ; 0 1\nterm 1 ; 2 1\n",
            )


class TestRendering:
    def test_h_power_grouping(self):
        assert render_h_power(3, 0, 7) == "7"
        assert render_h_power(3, 18, 1) == "q"
        assert render_h_power(3, 48, 1) == "q^(8/3)"
        assert render_h_power(3, -48, 1) == "q^(-8/3)"
        assert render_h_power(3, 6, -1) == "-q^(1/3)"
        assert render_h_power(3, 4, 2) == "2*w^2"
        assert render_h_power(3, 1, 1) == "h"

    def test_coefficient_and_monomial(self):
        assert render_coefficient(3, {0: 1, 18: -1}) == "1 - q"
        assert render_coefficient(3, {0: 0}) == "0"
        assert render_monomial(3, ("a", "b", "c"), (3, -2, 0)) == "a b^(-2/3)"

    def test_explain_scalar_term(self):
        text = explain_polynomial(3, ("a",), {(0,): {48: 1}})
        assert text == "q^(8/3)\n"


class TestTraceCommand:
    def test_two_good_positions_byte_identical(self, torus_files):
        tmp_path, surface = torus_files
        outputs = []
        for i, content in enumerate((CURVE_A, CURVE_A_MOVED)):
            link = tmp_path / f"pos{i}.link"
            link.write_text(content)
            out = tmp_path / f"pos{i}.poly"
            assert main(["trace", str(surface), str(link), "--out", str(out)]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_repeated_runs_are_deterministic(self, torus_files, capsys):
        tmp_path, surface = torus_files
        link = tmp_path / "a.link"
        link.write_text(CURVE_A)
        assert main(["trace", str(surface), str(link)]) == 0
        first = capsys.readouterr().out
        assert main(["trace", str(surface), str(link)]) == 0
        assert capsys.readouterr().out == first
        assert first.startswith("polynomial\nn 3\ngenerators d.1 d.2 r.1 r.2 b.1 b.2")

    def test_unknot_is_a_single_scalar_term(self, torus_files, capsys):
        tmp_path, surface = torus_files
        link = tmp_path / "unknot.link"
        link.write_text(UNKNOT)
        assert main(["trace", str(surface), str(link)]) == 0
        out = capsys.readouterr().out
        assert "term 0 0 0 0 0 0 0 0 ; -36 1 0 1 36 1" in out
        assert out.count("term") == 1

    def test_classical_flag_matches_reference(self, torus_files, capsys):
        tmp_path, surface = torus_files
        link = tmp_path / "a.link"
        link.write_text(CURVE_A)
        assert main(["trace", str(surface), str(link), "--classical"]) == 0
        out = capsys.readouterr().out
        _, _, terms = parse_polynomial_file("out.poly", out)
        surf = build_surface(once_punctured_torus(), 3)
        reference = classical_trace_polynomial(
            [CurveStep("r", 1, "right"), CurveStep("d", 0, "left")], surf
        )
        assert terms == {e: {0: c} for e, c in reference.items()}

    def test_invalid_link_exits_one(self, torus_files, capsys):
        tmp_path, surface = torus_files
        link = tmp_path / "bad.link"
        link.write_text("arc T1 0 right 1\narc T0 0 right 1\n")
        assert main(["trace", str(surface), str(link)]) == 1
        assert capsys.readouterr().err

    def test_parse_error_exits_two(self, tmp_path, capsys):
        surface = tmp_path / "bad.surface"
        surface.write_text("n 3\ntriangles 1\nedge d T0.0 T9.2\nedge p T0.1\nedge q T0.2\n")
        link = tmp_path / "a.link"
        link.write_text(CURVE_A)
        assert main(["trace", str(surface), str(link)]) == 2
        assert "bad.surface:1" in capsys.readouterr().err

    def test_missing_file_exits_two(self, tmp_path, capsys):
        assert main(["trace", str(tmp_path / "no.surface"), str(tmp_path / "no.link")]) == 2
        assert "cannot read file" in capsys.readouterr().err


class TestVerifyCommand:
    def test_full_suite_passes(self, capsys):
        assert main(["verify", "--suite", "all"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        lines = [l for l in out.splitlines() if l.startswith("PASS")]
        passed, total = out.splitlines()[-1].split()[0].split("/")
        assert int(passed) == int(total) == len(lines)

    def test_single_suite_selection(self, capsys):
        assert main(["verify", "--suite", "duality", "--n", "3"]) == 0
        out = capsys.readouterr().out
        assert "duality.lemma_at_lambda_plus n=3" in out
        assert "matrices." not in out

    def test_unsupported_rank_rejected(self, capsys):
        assert main(["verify", "--suite", "matrices", "--n", "7"]) == 1
        assert "2..4" in capsys.readouterr().err


class TestExplainCommand:
    def test_explain_polynomial_file(self, tmp_path, capsys):
        poly = tmp_path / "p.poly"
        poly.write_text(
            "polynomial\nn 3\ngenerators d.1 d.2\nterm 3 -2 ; 0 1 18 -1\n"
        )
        assert main(["explain", str(poly)]) == 0
        assert capsys.readouterr().out == "(1 - q) d.1 d.2^(-2/3)\n"
