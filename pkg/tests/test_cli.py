"""Drives the command line in process and pins its printed output."""

import os

import pytest

from spineforms import cli, parse_graph, validate

from conftest import FIXTURES, fixture_text


def fx(name):
    return os.path.join(FIXTURES, name + ".graph")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


VARIED_QUAD = """surface g=0 sh=1 so=0 n=4
vertex va ccw: p1_v e_a p4_v
vertex vb ccw: p2_v p3_v e_b
cusp c1 half: p1_c
cusp c2 half: p2_c
cusp c3 half: p3_c
cusp c4 half: p4_c
edge e inner e_a e_b Z=2
edge p1 pending p1_v p1_c pi=3
edge p2 pending p2_v p2_c pi=5/2
edge p3 pending p3_v p3_c pi=7
edge p4 pending p4_v p4_c pi=1/3
"""


def test_validate_clean_graph(capsys):
    code, out, _ = run(capsys, "validate", fx("sigma_0_5_1"))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 11
    assert all(" ok " in ln for ln in lines)
    assert lines[-1].startswith("header")


def test_validate_flags_header_mismatch(capsys, tmp_path):
    text = fixture_text("t3").replace("surface g=0", "surface g=1")
    target = tmp_path / "claim.graph"
    target.write_text(text)
    code, out, _ = run(capsys, "validate", str(target))
    assert code == 1
    assert "header             FAIL" in out
    assert "computed g=0" in out


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "no/such/file.graph")
    assert code == 2
    assert err.startswith("error: ")


def test_validate_unpaired_half(capsys, tmp_path):
    target = tmp_path / "torn.graph"
    target.write_text(
        "surface g=0 sh=1 so=0 n=1\n"
        "vertex v ccw: p_v p_v2 x_a\n"
        "cusp c half: p_c\n"
        "edge p pending p_v p_c pi=1\n"
    )
    code, _, err = run(capsys, "validate", str(target))
    assert code == 2
    assert "belongs to no edge" in err


def test_windows_text_five_holes(capsys):
    code, out, _ = run(capsys, "windows", fx("sigma_0_5_1"))
    assert code == 0
    assert "window 0 of hole 0: c0 -> c0" in out
    assert "  tokens pi,a1,w1+,a1,b1,a2,w2+,a2,b2,a3,w3+,a3,b3,w4+,b3,b2,b1,pi" in out
    assert "  order  pi,a1,a1,b1,a2,a2,b2,a3,a3,b3,b3,b2,b1,pi" in out


def test_windows_tsv_t3(capsys):
    code, out, _ = run(capsys, "windows", fx("t3"), "--format", "tsv")
    assert code == 0
    assert out.splitlines() == [
        "window\thole\tstart\tend\ttokens\torder",
        "0\t0\tc2\tc3\tp2,p3\tp2,p3",
        "1\t0\tc3\tc1\tp3,p1\tp3,p1",
        "2\t0\tc1\tc2\tp1,p2\tp1,p2",
    ]


def test_dual_arcs_two_loops(capsys):
    code, out, _ = run(capsys, "dual-arcs", fx("sigma_0_3_1"))
    assert code == 0
    assert "dual a1: c0 -> c0" in out
    assert "  path   pi,a1,w1-,a1,pi" in out
    assert "  word   X[pi]*R*X[a1]*-Finv[w1]*X[a1]*L*X[pi]" in out
    assert "  lambda t_a1^2*t_pi^2" in out
    assert "  lambda t_a1^4*t_b1^2*t_pi^2" in out


def test_dual_arcs_edge_filter(capsys):
    code, out, _ = run(capsys, "dual-arcs", fx("sigma_0_3_1"), "b1")
    assert code == 0
    assert out.count("dual ") == 1
    assert out.startswith("dual b1:")


def test_lambda_command(capsys):
    code, out, _ = run(capsys, "lambda", fx("t3"), "p2,p3")
    assert code == 0
    assert out.splitlines() == ["formal t_p2*t_p3", "value  1"]


def test_geodesic_command(capsys):
    code, out, _ = run(capsys, "geodesic", fx("sigma_0_5_1"), "pi,a1,w1+,a1,pi")
    assert code == 0
    assert out.splitlines() == [
        "word   X[pi]*R*X[a1]*F[w1]*X[a1]*L*X[pi]",
        "formal w_w1",
        "trace  2",
        "value  2",
    ]


def test_geodesic_rejects_open_path(capsys):
    code, _, err = run(capsys, "geodesic", fx("t3"), "p2,p3")
    assert code == 2
    assert err.startswith("error: ")


def test_lambda_from_shear_exact_round_trip(capsys, tmp_path):
    source = tmp_path / "varied.graph"
    source.write_text(VARIED_QUAD)
    code, out, _ = run(capsys, "lambda-from-shear", str(source))
    assert code == 0
    assert out.splitlines() == [
        "lambda e = sqrt(42)",
        "lambda p1 = 1",
        "lambda p2 = sqrt(15)",
        "lambda p3 = 1/2*sqrt(70)",
        "lambda p4 = 1/3*sqrt(42)",
    ]
    lam = tmp_path / "varied.lam"
    lam.write_text(out)
    code, back, _ = run(capsys, "shear-from-lambda", str(source), str(lam))
    assert code == 0
    assert back == VARIED_QUAD


def test_lambda_from_shear_lists_loop_weights(capsys, tmp_path):
    text = fixture_text("sigma_0_3_1").replace("omega=2", "omega=3", 1)
    source = tmp_path / "loops.graph"
    source.write_text(text)
    code, out, _ = run(capsys, "lambda-from-shear", str(source))
    assert code == 0
    assert "omega w1 = 3" in out
    assert "omega w2 = 2" in out


def test_lambda_from_shear_tsv(capsys):
    code, out, _ = run(capsys, "lambda-from-shear", fx("sigma_0_2_1"), "--format", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kind\tedge\tvalue"
    assert "lambda\tpi\t1" in lines
    assert "omega\tw\t2" in lines


def test_flip_prints_transformed_graph(capsys, tmp_path):
    source = tmp_path / "varied.graph"
    source.write_text(VARIED_QUAD)
    code, out, _ = run(capsys, "flip", str(source), "e")
    assert code == 0
    assert "edge e inner e_a e_b Z=1/2" in out
    assert "edge p1 pending p1_v p1_c pi=2" in out
    assert "edge p2 pending p2_v p2_c pi=15/2" in out
    assert "edge p3 pending p3_v p3_c pi=14/3" in out
    assert "edge p4 pending p4_v p4_c pi=1" in out
    assert validate(parse_graph(out)).ok


def test_flip_output_file_and_summary(capsys, tmp_path):
    source = tmp_path / "varied.graph"
    source.write_text(VARIED_QUAD)
    target = tmp_path / "flipped.graph"
    code, out, _ = run(capsys, "flip", str(source), "e", "-o", str(target))
    assert code == 0
    assert out == "flipped e (inner); slots A=p4 B=p1 C=p2 D=p3\n"
    assert validate(parse_graph(target.read_text())).ok


def test_flip_loop_stem_goes_through_loop_rule(capsys, tmp_path):
    target = tmp_path / "out.graph"
    code, out, _ = run(capsys, "flip", fx("sigma_0_3_1"), "a1", "-o", str(target))
    assert code == 0
    assert out == "flipped a1 (loop-stem); slots A=b1 B=pi loop=w1\n"


def test_flip_refuses_pending(capsys):
    code, _, err = run(capsys, "flip", fx("sigma_0_3_1"), "pi")
    assert code == 2
    assert err == "error: only inner edges flip; pi is pending\n"


def test_verify_inverse_five_holes(capsys):
    code, out, _ = run(capsys, "verify-inverse", fx("sigma_0_5_1"))
    assert code == 0
    assert out.splitlines() == [
        "block a1 a2 a3 b1 b2 b3",
        "c = -4",
        "residual = 0",
    ]


def test_verify_inverse_leaf_mode(capsys):
    code, out, _ = run(capsys, "verify-inverse", fx("t3"), "--leaf")
    assert code == 0
    assert "block p1 p2 p3" in out
    assert "c = -3" in out
    assert "residual = 0" in out


def test_verify_inverse_multi_cusp_fails(capsys):
    code, out, _ = run(capsys, "verify-inverse", fx("sigma_0_1_4"))
    assert code == 1


def test_verify_flip_identities(capsys):
    code, out, _ = run(capsys, "verify-flip-identities")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    assert all(ln.endswith("ok") for ln in lines)
    assert lines[0].startswith("quad-right-right")


def test_forms_sections(capsys):
    code, out, _ = run(capsys, "forms", fx("t3"))
    assert code == 0
    assert "# poisson bracket table" in out
    assert "# window form" in out
    assert "# vertex-sum form" in out
    assert "# centers" in out
    assert "hole 0  p1:2 p2:2 p3:2" in out
    assert " 1/4" in out


def test_forms_tsv(capsys):
    code, out, _ = run(capsys, "forms", fx("t3"), "--format", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "matrix\trow\tcol\tvalue"
    assert "vertex-sum form\tp1\tp2\t1/4" in lines
    assert "center\thole 0\tp1\t2" in lines


def test_fuzz_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "fuzz", "--seed", "5", "--trials", "4")
    code2, out2, _ = run(capsys, "fuzz", "--seed", "5", "--trials", "4")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.startswith("fuzz seed=5 trials=4\n")
    assert out1.count("pass") == 8


def test_fuzz_suite_filter(capsys):
    code, out, _ = run(capsys, "fuzz", "--seed", "2", "--trials", "4",
                       "--suite", "centers,involution")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("centers")
    assert lines[2].startswith("involution")


def test_fuzz_unknown_suite(capsys):
    code, _, err = run(capsys, "fuzz", "--suite", "bogus")
    assert code == 2
    assert "unknown suite 'bogus'" in err


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
