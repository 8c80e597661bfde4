"""Flip moves: matrix identities, rewiring, coordinate rules, lambda
mutation, and their exact involutivity."""

import random
from fractions import Fraction

import pytest

from spineforms import (
    CoordinatePoint,
    flip_inner,
    flip_loop_adjacent,
    lambda_of_dual_arcs,
    mutate_lambda,
    shear_from_lambda,
    verify_flip_matrix_identities,
)
from spineforms.ribbon import GraphError, validate

from conftest import load_fixture


def test_symbolic_identities_all_hold():
    results = verify_flip_matrix_identities()
    assert [label for label, _ in results] == [
        "quad-right-right",
        "quad-right-left",
        "quad-adjacent",
        "loop-left",
        "loop-right",
    ]
    assert all(ok for _, ok in results)


def test_inner_flip_slots_and_values(four_cusps):
    point = CoordinatePoint(
        True,
        q={"e": Fraction(2), "p1": Fraction(3), "p2": Fraction(5, 2), "p3": Fraction(7), "p4": Fraction(1, 3)},
    )
    flipped, new_point, record = flip_inner(four_cusps, "e", point)
    assert record.kind == "inner"
    assert record.slots == {"A": "p1", "B": "p2", "C": "p3", "D": "p4"}
    assert new_point.q_value("e") == Fraction(1, 2)
    assert new_point.q_value("p1") == Fraction(9)  # 3 * (1 + 2)
    assert new_point.q_value("p2") == Fraction(5, 3)  # 5/2 * 2/3
    assert new_point.q_value("p3") == Fraction(21)
    assert new_point.q_value("p4") == Fraction(2, 9)
    assert validate(flipped).ok


def test_inner_flip_is_involution(four_cusps):
    point = CoordinatePoint(
        True,
        q={"e": Fraction(7, 3), "p1": Fraction(1), "p2": Fraction(2), "p3": Fraction(3), "p4": Fraction(4)},
    )
    g1, p1, _ = flip_inner(four_cusps, "e", point)
    g2, p2, _ = flip_inner(g1, "e", p1)
    assert g2.canonical_key() == four_cusps.canonical_key()
    assert p2 == point


def test_five_holes_flip_rewiring(five_holes):
    _, _, record = flip_inner(five_holes, "b1", five_holes.point())
    assert record.slots == {"A": "pi", "B": "a1", "C": "a2", "D": "b2"}
    after = record.after
    assert after.vertices["v1"] == ("b1_l", "b2_l", "pi_v")
    assert after.vertices["v2"] == ("b1_r", "a1_d", "a2_d")


def test_five_holes_involution_with_values(five_holes):
    rng = random.Random(3)
    q = {n: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for n in five_holes.coordinate_edges()}
    omega = {n: Fraction(rng.randint(2, 5)) for n in five_holes.loop_edges()}
    point = CoordinatePoint(True, q=q, omega=omega)
    g1, p1, _ = flip_inner(five_holes, "b1", point)
    g2, p2, _ = flip_inner(g1, "b1", p1)
    assert g2.canonical_key() == five_holes.canonical_key()
    assert p2 == point


def test_loop_stem_flip_and_alias(two_loops):
    point = CoordinatePoint(
        True,
        q={"pi": Fraction(3, 2), "a1": Fraction(2), "b1": Fraction(5)},
        omega={"w1": Fraction(3), "w2": Fraction(2)},
    )
    by_stem, p_stem, rec = flip_loop_adjacent(two_loops, "a1", point)
    by_loop, p_loop, _ = flip_loop_adjacent(two_loops, "w1", point)
    assert rec.kind == "loop-stem"
    assert by_stem.canonical_key() == by_loop.canonical_key()
    assert p_stem == p_loop
    assert validate(by_stem).ok

    g2, p2, _ = flip_loop_adjacent(by_stem, "a1", p_stem)
    assert g2.canonical_key() == two_loops.canonical_key()
    assert p2 == point


def test_loop_stem_coordinate_rule(two_loops):
    point = CoordinatePoint(
        True,
        q={"pi": Fraction(1), "a1": Fraction(2), "b1": Fraction(1)},
        omega={"w1": Fraction(3), "w2": Fraction(2)},
    )
    _, new_point, record = flip_loop_adjacent(two_loops, "a1", point)
    # grow factor 1 + w*q + q^2 with q = 2, w = 3 is 11
    s = Fraction(11)
    assert new_point.q_value("a1") == Fraction(1, 2)
    assert new_point.q_value(record.slots["A"]) == point.q_value(record.slots["A"]) * s
    assert new_point.q_value(record.slots["B"]) == point.q_value(record.slots["B"]) * 4 / s


def test_float_flip_matches_exact(four_cusps):
    exact = CoordinatePoint(
        True,
        q={"e": Fraction(3), "p1": Fraction(2), "p2": Fraction(1, 2), "p3": Fraction(4), "p4": Fraction(5)},
    )
    _, exact_after, _ = flip_inner(four_cusps, "e", exact)
    _, float_after, _ = flip_inner(four_cusps, "e", exact.as_float())
    for n in four_cusps.coordinate_edges():
        assert float_after.y_value(n) == pytest.approx(exact_after.y_value(n), abs=1e-12)


def test_float_loop_flip_involution(two_loops):
    point = CoordinatePoint(False, y={"pi": 0.4, "a1": -1.2, "b1": 0.9}, omega={"w1": 2.5, "w2": 2.0})
    g1, p1, _ = flip_loop_adjacent(two_loops, "a1", point)
    g2, p2, _ = flip_loop_adjacent(g1, "a1", p1)
    assert g2.canonical_key() == two_loops.canonical_key()
    for n in two_loops.coordinate_edges():
        assert p2.y_value(n) == pytest.approx(point.y_value(n), abs=1e-12)


def test_flip_refusals(two_loops, four_cusps):
    with pytest.raises(GraphError, match="no edge named"):
        flip_inner(four_cusps, "zz")
    with pytest.raises(GraphError, match="only inner edges flip"):
        flip_inner(four_cusps, "p1")
    with pytest.raises(GraphError, match="use flip_loop_adjacent"):
        flip_inner(two_loops, "a1")
    with pytest.raises(GraphError, match="use flip_inner"):
        flip_loop_adjacent(four_cusps, "e")
    with pytest.raises(GraphError, match="inner edge"):
        flip_loop_adjacent(two_loops, "pi")


def test_mutation_matches_flip_inner(four_cusps):
    rng = random.Random(14)
    for _ in range(5):
        q = {n: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for n in four_cusps.coordinate_edges()}
        point = CoordinatePoint(True, q=q)
        lam = lambda_of_dual_arcs(four_cusps, point)
        mutated = mutate_lambda(four_cusps, lam, "e")
        g1, p1, _ = flip_inner(four_cusps, "e", point)
        actual = lambda_of_dual_arcs(g1, p1)
        assert mutated.values == actual.values
        assert shear_from_lambda(g1, mutated) == p1


def test_mutation_matches_loop_flip(two_loops):
    point = CoordinatePoint(
        True,
        q={"pi": Fraction(5, 3), "a1": Fraction(7, 2), "b1": Fraction(2)},
        omega={"w1": Fraction(5), "w2": Fraction(3)},
    )
    lam = lambda_of_dual_arcs(two_loops, point)
    mutated = mutate_lambda(two_loops, lam, "a1")
    g1, p1, _ = flip_loop_adjacent(two_loops, "a1", point)
    actual = lambda_of_dual_arcs(g1, p1)
    assert mutated.values == actual.values


def test_mutation_exchange_relations(four_cusps, two_loops):
    point = CoordinatePoint(
        True,
        q={"e": Fraction(3, 2), "p1": Fraction(2), "p2": Fraction(3), "p3": Fraction(4), "p4": Fraction(5)},
    )
    lam = lambda_of_dual_arcs(four_cusps, point)
    mutated = mutate_lambda(four_cusps, lam, "e")
    lhs = lam["e"] * mutated["e"]
    rhs = lam["p1"] * lam["p3"] + lam["p2"] * lam["p4"]
    assert lhs == rhs

    point2 = CoordinatePoint(
        True,
        q={"pi": Fraction(2), "a1": Fraction(3), "b1": Fraction(7, 5)},
        omega={"w1": Fraction(4), "w2": Fraction(2)},
    )
    lam2 = lambda_of_dual_arcs(two_loops, point2)
    mutated2 = mutate_lambda(two_loops, lam2, "a1")
    _, _, record = flip_loop_adjacent(two_loops, "a1", point2)
    la = lam2[record.slots["A"]]
    lb = lam2[record.slots["B"]]
    assert lam2["a1"] * mutated2["a1"] == la * la + 4 * la * lb + lb * lb


def test_mutation_rejects_mixed_arithmetic(two_loops):
    lam = lambda_of_dual_arcs(two_loops, two_loops.point())
    with pytest.raises(GraphError, match="rational weight"):
        mutate_lambda(two_loops, lam, "a1", omega=2.5)


def test_record_keeps_both_points(four_cusps):
    point = four_cusps.point()
    _, new_point, record = flip_inner(four_cusps, "e", point)
    assert record.point_before == point
    assert record.point_after == new_point
    assert record.before is four_cusps
