"""Spine structure: parsing, validation, boundary windows, dual arcs."""

import pytest

from spineforms import parse_graph, validate
from spineforms.ribbon import GraphError, dual_arc, emit_graph, windows

from conftest import ALL_FIXTURES, fixture_text, load_fixture


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_validates(name):
    report = validate(load_fixture(name))
    assert report.ok, "\n".join(report.lines())


@pytest.mark.parametrize(
    "name, edges, faces, monogons, cusps",
    [
        ("t3", 3, 1, 0, 3),
        ("sigma_0_2_1", 2, 2, 1, 1),
        ("sigma_0_3_1", 5, 3, 2, 1),
        ("sigma_0_1_4", 5, 1, 0, 4),
        ("sigma_0_5_1", 11, 5, 4, 1),
    ],
)
def test_fixture_counts(name, edges, faces, monogons, cusps):
    c = load_fixture(name).counts()
    assert c["edges"] == edges
    assert c["faces"] == faces
    assert c["monogons"] == monogons
    assert c["cusps"] == cusps
    assert c["genus2x"] == 0  # every shipped fixture is planar


def test_faces_partition_arrival_halves(five_holes):
    seen = [h for orbit in five_holes.faces() for h in orbit]
    assert sorted(seen) == sorted(five_holes._half_order)
    assert len(seen) == len(set(seen))


def test_parse_rejects_duplicate_half():
    text = fixture_text("t3").replace("p2_v p3_v", "p1_v p3_v")
    with pytest.raises(GraphError):
        parse_graph(text)


def test_parse_rejects_bad_value_key():
    text = fixture_text("t3").replace("pi=1", "omega=1", 1)
    with pytest.raises(GraphError, match="pi="):
        parse_graph(text)


def test_parse_rejects_nonpositive_exact_value():
    text = fixture_text("t3").replace("pi=1", "pi=0", 1)
    with pytest.raises(GraphError, match="positive"):
        parse_graph(text)


def test_parse_reports_line_numbers():
    with pytest.raises(GraphError, match="line 2"):
        parse_graph("surface g=0 sh=1 so=0 n=3\nvertex v ccw: a b\n")


def test_orbifold_weights():
    base = fixture_text("sigma_0_2_1")
    g2 = parse_graph(base.replace("omega=2", "orbifold=2"))
    assert g2.point().omega_value("w") == 0
    g3 = parse_graph(base.replace("omega=2", "orbifold=3"))
    assert g3.point().omega_value("w") == 1
    with pytest.raises(GraphError):
        parse_graph(base.replace("omega=2", "orbifold=1"))


def test_perimeter_weight_is_float():
    import math

    g = parse_graph(fixture_text("sigma_0_2_1").replace("omega=2", "perimeter=2"))
    point = g.point()
    assert not point.exact
    assert point.omega_value("w") == pytest.approx(2 * math.cosh(1.0))


def test_disconnected_graph_flagged():
    second = fixture_text("t3").replace("vertex v ", "vertex u ")
    for a, b in (("p1", "q1"), ("p2", "q2"), ("p3", "q3"), ("c1", "d1"), ("c2", "d2"), ("c3", "d3")):
        second = second.replace(a, b)
    text = fixture_text("t3") + second
    # the doubled file redeclares the surface line; drop the second one
    lines = [ln for i, ln in enumerate(text.splitlines()) if not (i > 0 and ln.startswith("surface"))]
    graph = parse_graph("\n".join(lines))
    report = validate(graph)
    assert not report.ok
    failed = {name for name, passed, _ in report.checks if not passed}
    assert "connected" in failed


def test_header_mismatch_detected():
    text = fixture_text("t3").replace("g=0", "g=1")
    report = validate(parse_graph(text))
    failed = {name for name, passed, _ in report.checks if not passed}
    assert failed == {"header"}


def test_windows_t3(t3):
    wins = windows(t3)
    orders = [tuple(w.coordinate_tokens(t3)) for w in wins]
    assert orders == [("p2", "p3"), ("p3", "p1"), ("p1", "p2")]
    assert all(w.hole == 0 for w in wins)


def test_windows_five_holes(five_holes):
    wins = windows(five_holes)
    cusped = [w for w in wins if w.steps]
    assert len(cusped) == 1
    assert ",".join(cusped[0].coordinate_tokens(five_holes)) == "pi,a1,a1,b1,a2,a2,b2,a3,a3,b3,b3,b2,b1,pi"


def test_window_loop_tokens_keep_signs(one_loop):
    w = windows(one_loop)[0]
    assert w.tokens == ["pi", "w+", "pi"]
    assert w.coordinate_tokens(one_loop) == ["pi", "pi"]


def test_dual_arc_of_pending_ends_at_its_cusp(t3):
    arc = dual_arc(t3, "p3")
    assert arc.tokens == ["p2", "p3"]
    assert arc.end_cusp == "c3"


def test_dual_arc_of_inner_crosses_it_once(four_cusps):
    arc = dual_arc(four_cusps, "e")
    assert arc.tokens.count("e") == 1
    assert arc.tokens[0].startswith("p") and arc.tokens[-1].startswith("p")


def test_dual_arc_loop_refused(one_loop):
    with pytest.raises(GraphError):
        dual_arc(one_loop, "w")


def test_dual_arc_unknown_edge(t3):
    with pytest.raises(KeyError):
        dual_arc(t3, "zz")


def test_emit_parse_round_trip():
    for name in ALL_FIXTURES:
        graph = load_fixture(name)
        again = parse_graph(emit_graph(graph))
        assert again.canonical_key() == graph.canonical_key()
        assert validate(again).ok


def test_emit_preserves_pending_value_key(t3):
    text = emit_graph(t3)
    assert " pi=1" in text
    assert "pending" in text


def test_canonical_key_ignores_vertex_names_and_order():
    base = fixture_text("sigma_0_1_4")
    lines = base.splitlines()
    vertex_lines = [ln for ln in lines if ln.startswith("vertex")]
    rest = [ln for ln in lines if not ln.startswith("vertex")]
    renamed = [ln.replace("va", "zz").replace("vb", "aa") for ln in vertex_lines]
    shuffled = rest[:1] + renamed[::-1] + rest[1:]
    other = parse_graph("\n".join(shuffled))
    assert other.canonical_key() == load_fixture("sigma_0_1_4").canonical_key()


def test_canonical_key_distinguishes_fixtures():
    keys = {load_fixture(n).canonical_key() for n in ALL_FIXTURES}
    assert len(keys) == len(ALL_FIXTURES)


def test_with_vertices_rotation_is_same_graph(five_holes):
    vid, halves = next(iter(five_holes.vertices.items()))
    rotated = dict(five_holes.vertices)
    rotated[vid] = halves[1:] + halves[:1]
    other = five_holes.with_vertices(rotated)
    assert other.canonical_key() == five_holes.canonical_key()


def test_sigma_cycles_through_vertex(two_loops):
    for vid, halves in two_loops.vertices.items():
        a, b, c = halves
        assert two_loops.sigma(a) == b
        assert two_loops.sigma(b) == c
        assert two_loops.sigma(c) == a
        assert two_loops.sigma_inv(b) == a


def test_monogons_follow_loops(five_holes):
    assert len(five_holes.monogon_faces()) == len(five_holes.loop_edges())


def test_coordinate_edges_keep_file_order(five_holes):
    assert list(five_holes.coordinate_edges()) == ["pi", "a1", "a2", "a3", "b1", "b2", "b3"]
