"""Coordinate points and the lambda-length bijection."""

import math
import random
from fractions import Fraction

import pytest

from spineforms import (
    CoordinatePoint,
    LambdaAssignment,
    cross_ratio,
    lambda_of_dual_arcs,
    pending_ratio,
    shear_from_lambda,
)
from spineforms.coords import dual_multiplicity_matrix
from spineforms.ribbon import dual_arc

from conftest import ALL_FIXTURES, load_fixture


def rational_point(graph, rng):
    q = {n: Fraction(rng.randint(1, 12), rng.randint(1, 12)) for n in graph.coordinate_edges()}
    omega = {n: Fraction(rng.randint(2, 9)) for n in graph.loop_edges()}
    return CoordinatePoint(True, q=q, omega=omega)


def test_unit_point_gives_unit_lambdas(t3):
    lam = lambda_of_dual_arcs(t3)
    assert all(v == 1 for _, v in lam.items())
    back = shear_from_lambda(t3, lam)
    assert all(back.q_value(n) == 1 for n in t3.coordinate_edges())


def test_exact_point_validation():
    with pytest.raises(ValueError, match="positive"):
        CoordinatePoint(True, q={"e": Fraction(-1)})
    with pytest.raises(ValueError):
        CoordinatePoint(True, y={"e": 0.5})
    with pytest.raises(ValueError):
        CoordinatePoint(False, q={"e": Fraction(1)})


def test_point_accessors(one_loop):
    point = CoordinatePoint(True, q={"pi": Fraction(9, 4)}, omega={"w": Fraction(3)})
    assert point.q_value("pi") == Fraction(9, 4)
    assert point.t_value("pi") * point.t_value("pi") == point.t_value("pi") ** 2
    assert point.omega_value("w") == 3
    assert point.y_value("pi") == pytest.approx(math.log(2.25))
    floated = point.as_float()
    assert not floated.exact
    assert floated.y_value("pi") == pytest.approx(math.log(2.25))


def test_cross_ratio_substitution():
    assert cross_ratio(2, 1, 3, 1) == Fraction(6)


def test_pending_ratio_substitution():
    assert pending_ratio(2, 3, 4) == Fraction(3, 2)


def test_cross_ratio_recovers_inner_coordinate(four_cusps):
    rng = random.Random(40)
    for _ in range(10):
        point = rational_point(four_cusps, rng)
        lam = lambda_of_dual_arcs(four_cusps, point)
        assert cross_ratio(lam["p1"], lam["p2"], lam["p3"], lam["p4"]) == point.q_value("e")


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_round_trip_exact(name):
    graph = load_fixture(name)
    rng = random.Random(hash(name) % 100000)
    for _ in range(5):
        point = rational_point(graph, rng)
        lam = lambda_of_dual_arcs(graph, point)
        assert shear_from_lambda(graph, lam) == point


def test_round_trip_carries_loop_weights(two_loops):
    point = CoordinatePoint(
        True,
        q={"pi": Fraction(2), "a1": Fraction(3), "b1": Fraction(5, 2)},
        omega={"w1": Fraction(4), "w2": Fraction(7)},
    )
    lam = lambda_of_dual_arcs(two_loops, point)
    assert lam.omega == {"w1": Fraction(4), "w2": Fraction(7)}
    back = shear_from_lambda(two_loops, lam)
    assert back == point
    assert back.omega == point.omega


def test_round_trip_float(two_loops):
    point = CoordinatePoint(False, y={"pi": 0.3, "a1": -0.7, "b1": 1.1}, omega={"w1": 2.5, "w2": 3.0})
    lam = lambda_of_dual_arcs(two_loops, point)
    back = shear_from_lambda(two_loops, lam)
    for n in two_loops.coordinate_edges():
        assert back.y_value(n) == pytest.approx(point.y_value(n), abs=1e-12)


def test_multiplicity_matrix_is_invertible_on_fixtures():
    from spineforms.algebra import frac_inverse

    for name in ALL_FIXTURES:
        graph = load_fixture(name)
        names, rows = dual_multiplicity_matrix(graph)
        m = [[Fraction(x) for x in row] for row in rows]
        inv = frac_inverse(m)
        for row in inv:
            for x in row:
                assert (2 * x).denominator == 1, name


def test_multiplicities_match_arc_traversals(five_holes):
    names, rows = dual_multiplicity_matrix(five_holes)
    for i, edge in enumerate(names):
        arc = dual_arc(five_holes, edge)
        for j, other in enumerate(names):
            assert rows[i][j] == arc.tokens.count(other)


def test_assignment_getitem(two_loops):
    lam = lambda_of_dual_arcs(two_loops)
    assert lam["pi"] == lam.values["pi"]
    assert lam.exact


def test_inconsistent_lambdas_rejected(t3):
    lam = LambdaAssignment({"p1": Fraction(1), "p2": Fraction(1)}, True)
    with pytest.raises(Exception):
        shear_from_lambda(t3, lam)


def test_with_updates_and_shift(two_loops):
    point = two_loops.point()
    bumped = point.with_updates(q={"a1": Fraction(5)})
    assert bumped.q_value("a1") == 5
    assert bumped.q_value("pi") == point.q_value("pi")
    moved = point.as_float().shifted("a1", 0.25)
    assert moved.y_value("a1") == pytest.approx(0.25)
