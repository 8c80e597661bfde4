"""Random spines and randomized property suites.

Generation is rejection sampling: draw a surface signature, scatter
loops, pendings and a perfect matching over the vertex slots, then keep
the graph only if the full validator passes (connected, right number of
holes, monogons exactly at the loops, Euler count).  Everything is
driven by one ``random.Random`` so a seed reproduces the corpus.

The suites re-check the structural invariants on that corpus: dual-arc
lambdas stay monomial, compiled words stay sign-definite, flips are
involutions, lambda-lengths invert back to the coordinates, hole
vectors stay central, and the boundary-ordered form stays proportional
to the vertex-sum form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .coords import CoordinatePoint, lambda_of_dual_arcs, shear_from_lambda
from .flips import flip_inner, flip_loop_adjacent, mutate_lambda
from .forms import penner_form_matrix, poisson_matrix, verify_inverse, window_form_matrix, center_vectors
from .paths import PathWord, Step, compile_path, evaluate, lambda_length
from .ribbon import Edge, FatGraph, dual_arc, validate

__all__ = [
    "random_spine",
    "random_exact_point",
    "random_arc",
    "random_closed_word",
    "SuiteResult",
    "SUITES",
    "run_suite",
]


def _signature(rng: random.Random) -> tuple[int, int, int, int]:
    while True:
        g = rng.choice([0, 0, 0, 0, 1, 1, 2])
        s_h = rng.randint(1, 3)
        n = rng.randint(s_h, 4)
        s_o = rng.randint(0, max(0, 5 - s_h))
        s = s_h + s_o
        v3 = 4 * g - 4 + 2 * s + n
        if v3 < max(1, s_o):
            continue
        if 3 * v3 - 2 * s_o - n < 0:
            continue
        return g, s_h, s_o, n


def _attempt(rng: random.Random, sig: tuple[int, int, int, int]) -> Optional[FatGraph]:
    g, s_h, s_o, n = sig
    s = s_h + s_o
    v3 = 4 * g - 4 + 2 * s + n
    slots = [(v, i) for v in range(v3) for i in range(3)]
    half_id = {sl: "h%d_%d" % sl for sl in slots}

    vertices_halves: dict[int, list[Optional[str]]] = {v: [None, None, None] for v in range(v3)}
    edges: dict[str, Edge] = {}

    loop_vertices = rng.sample(range(v3), s_o)
    used: set[tuple[int, int]] = set()
    for k, v in enumerate(loop_vertices):
        i, j = sorted(rng.sample(range(3), 2))
        name = "w%d" % (k + 1)
        edges[name] = Edge(name, "loop", (half_id[(v, i)], half_id[(v, j)]))
        used.add((v, i))
        used.add((v, j))

    free = [sl for sl in slots if sl not in used]
    rng.shuffle(free)
    cusps: dict[str, str] = {}
    for k in range(n):
        sl = free.pop()
        name = "p%d" % (k + 1)
        cusp = "c%d" % (k + 1)
        cusp_half = "hc%d" % (k + 1)
        cusps[cusp] = cusp_half
        edges[name] = Edge(name, "pending", (half_id[sl], cusp_half))

    if len(free) % 2 != 0:
        return None
    rng.shuffle(free)
    for k in range(0, len(free), 2):
        a, b = free[k], free[k + 1]
        name = "e%d" % (k // 2 + 1)
        edges[name] = Edge(name, "inner", (half_id[a], half_id[b]))

    for v in range(v3):
        vertices_halves[v] = [half_id[(v, i)] for i in range(3)]
    vertices = {"v%d" % v: tuple(vertices_halves[v]) for v in range(v3)}

    try:
        graph = FatGraph(vertices, cusps, edges)
    except ValueError:
        return None
    report = validate(graph)
    if not report.ok:
        return None
    if (report.genus, report.holes_with_cusps, report.monogon_holes, report.cusps) != sig:
        return None
    return graph


def random_spine(seed_or_rng, max_tries: int = 2000) -> FatGraph:
    """A validated random spine; deterministic for a given seed."""
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)
    for _ in range(max_tries):
        graph = _attempt(rng, _signature(rng))
        if graph is not None:
            return graph
    raise RuntimeError("no valid spine found in %d attempts" % max_tries)


def random_exact_point(rng: random.Random, graph: FatGraph) -> CoordinatePoint:
    q = {n: Fraction(rng.randint(1, 10), rng.randint(1, 10)) for n in graph.coordinate_edges()}
    omega = {n: Fraction(rng.randint(2, 6)) for n in graph.loop_edges()}
    return CoordinatePoint(True, q=q, omega=omega)


def _walk(rng: random.Random, graph: FatGraph, start_cusp: str, want_closed: bool, max_len: int):
    steps: list[Step] = []
    exit_half = graph.cusp_half(start_cusp)
    steps.append(Step(graph.edge_of(exit_half), None, exit_half))
    arrival = graph.mate(exit_half)
    while len(steps) < max_len:
        choices = [graph.sigma(arrival), graph.sigma_inv(arrival)]
        x = rng.choice(choices)
        name = graph.edge_of(x)
        kind = graph.edges[name].kind
        if kind == "loop":
            sign = "+" if x == graph.sigma(arrival) else "-"
            steps.append(Step(name, sign, x))
            loop_arrival = graph.mate(x)
            x = graph.sigma(loop_arrival) if sign == "+" else graph.sigma_inv(loop_arrival)
            name = graph.edge_of(x)
            kind = graph.edges[name].kind
        steps.append(Step(name, None, x))
        arrival = graph.mate(x)
        if kind == "pending":
            end = graph.cusp_of_pending(name)
            if want_closed and end != start_cusp:
                return None
            return PathWord(start_cusp, tuple(steps), end, closed=want_closed)
    return None


def random_arc(rng: random.Random, graph: FatGraph, max_len: int = 20, tries: int = 40) -> Optional[PathWord]:
    """Random realizable cusp-to-cusp path (never an invented word)."""
    cusp_names = list(graph.cusps)
    for _ in range(tries):
        path = _walk(rng, graph, rng.choice(cusp_names), False, max_len)
        if path is not None:
            return path
    return None


def random_closed_word(rng: random.Random, graph: FatGraph, max_len: int = 24, tries: int = 60) -> Optional[PathWord]:
    """Random realizable based loop: leaves a cusp and first returns to
    the same cusp."""
    cusp_names = list(graph.cusps)
    for _ in range(tries):
        path = _walk(rng, graph, rng.choice(cusp_names), True, max_len)
        if path is not None and len(path.steps) > 2:
            return path
    return None


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        extra = ""
        if self.info:
            extra = "  " + " ".join("%s=%s" % kv for kv in sorted(self.info.items()))
        out = "%-16s %s  (%d trials)%s" % (self.name, status, self.trials, extra)
        for f in self.failures[:5]:
            out += "\n    " + f
        if len(self.failures) > 5:
            out += "\n    ... %d more" % (len(self.failures) - 5)
        return out


def suite_monomiality(trials: int, seed: int) -> SuiteResult:
    """Dual-arc lambdas are single monomials with unit coefficient."""
    rng = random.Random(seed)
    res = SuiteResult("monomiality", trials)
    for k in range(trials):
        graph = random_spine(rng)
        for name in graph.coordinate_edges():
            lam = lambda_length(graph, dual_arc(graph, name))
            if not lam.is_monomial():
                res.failures.append("graph %d dual(%s): %s" % (k, name, lam))
                continue
            coeff, powers = lam.monomial()
            if coeff != 1:
                res.failures.append("graph %d dual(%s) coefficient %d" % (k, name, coeff))
            if any(var.startswith("w_") for var in powers):
                res.failures.append("graph %d dual(%s) depends on a loop weight" % (k, name))
    return res


def suite_positivity(trials: int, seed: int) -> SuiteResult:
    """Entries of compiled arc words and traces of closed words have one
    sign as Laurent polynomials."""
    rng = random.Random(seed)
    closed_trials = max(1, (trials * 2) // 5)
    res = SuiteResult("positivity", trials + closed_trials)
    # term counts grow exponentially with word length; the default caps
    # in random_arc / random_closed_word keep evaluation in memory
    graph = random_spine(rng)
    made = 0
    while made < trials:
        if made % 10 == 0:
            graph = random_spine(rng)
        path = random_arc(rng, graph)
        if path is None:
            graph = random_spine(rng)
            continue
        m = evaluate(compile_path(graph, path))
        for label, entry in (("ul", m.a), ("ur", m.b), ("ll", m.c), ("lr", m.d)):
            if entry.sign_definite() is None:
                res.failures.append("arc %s entry %s mixed: %s" % (path.token_string(), label, entry))
        made += 1
    made = 0
    while made < closed_trials:
        if made % 10 == 0:
            graph = random_spine(rng)
        path = random_closed_word(rng, graph)
        if path is None:
            graph = random_spine(rng)
            continue
        tr = evaluate(compile_path(graph, path)).trace()
        if tr.sign_definite() is None:
            res.failures.append("closed %s trace mixed: %s" % (path.token_string(), tr))
        made += 1
    return res


def _flippable(graph: FatGraph) -> list[tuple[str, str]]:
    out = []
    for e in graph.edges.values():
        if e.kind != "inner":
            continue
        v1 = graph.vertex_of(e.halves[0])
        v2 = graph.vertex_of(e.halves[1])
        if v1 == v2:
            continue
        has1 = any(graph.edges[graph.edge_of(h)].kind == "loop" for h in graph.halves_at(v1))
        has2 = any(graph.edges[graph.edge_of(h)].kind == "loop" for h in graph.halves_at(v2))
        if not has1 and not has2:
            out.append((e.name, "inner"))
        elif has1 != has2:
            out.append((e.name, "loop-stem"))
    return out


def suite_involution(trials: int, seed: int) -> SuiteResult:
    """Flipping any edge twice restores the graph and the point."""
    rng = random.Random(seed)
    res = SuiteResult("involution", trials)
    done = 0
    while done < trials:
        graph = random_spine(rng)
        options = _flippable(graph)
        if not options:
            continue
        name, kind = rng.choice(options)
        point = random_exact_point(rng, graph)
        flip = flip_inner if kind == "inner" else flip_loop_adjacent
        g1, p1, _ = flip(graph, name, point)
        g2, p2, _ = flip(g1, name, p1)
        if g2.canonical_key() != graph.canonical_key():
            res.failures.append("trial %d edge %s: graph not restored" % (done, name))
        if p2 != point:
            res.failures.append("trial %d edge %s: point not restored" % (done, name))
        done += 1
    return res


def suite_roundtrip(trials: int, seed: int) -> SuiteResult:
    """shear_from_lambda undoes lambda_of_dual_arcs exactly."""
    rng = random.Random(seed)
    res = SuiteResult("roundtrip", trials)
    for k in range(trials):
        graph = random_spine(rng)
        point = random_exact_point(rng, graph)
        try:
            lam = lambda_of_dual_arcs(graph, point)
            back = shear_from_lambda(graph, lam)
        except ValueError as exc:
            res.failures.append("trial %d: %s" % (k, exc))
            continue
        if back != point:
            res.failures.append("trial %d: reconstruction differs" % k)
    return res


def suite_mutation(trials: int, seed: int) -> SuiteResult:
    """Exchange-relation lambdas match the flipped graph's dual arcs."""
    rng = random.Random(seed)
    res = SuiteResult("mutation", trials)
    done = 0
    while done < trials:
        graph = random_spine(rng)
        options = _flippable(graph)
        if not options:
            continue
        name, kind = rng.choice(options)
        point = random_exact_point(rng, graph)
        flip = flip_inner if kind == "inner" else flip_loop_adjacent
        g1, p1, _ = flip(graph, name, point)
        lam = lambda_of_dual_arcs(graph, point)
        mutated = mutate_lambda(graph, lam, name)
        actual = lambda_of_dual_arcs(g1, p1)
        for n in graph.coordinate_edges():
            if mutated[n] != actual[n]:
                res.failures.append("trial %d edge %s: lambda[%s] mismatch" % (done, name, n))
        done += 1
    return res


def suite_centers(trials: int, seed: int) -> SuiteResult:
    """Hole vectors annihilate the bracket table."""
    rng = random.Random(seed)
    res = SuiteResult("centers", trials)
    for k in range(trials):
        graph = random_spine(rng)
        table = poisson_matrix(graph)
        basis = center_vectors(graph)
        for face, vec in basis.holes:
            prod = [
                sum(table.data[i][j] * vec[j] for j in range(len(vec)))
                for i in range(len(vec))
            ]
            if any(x != 0 for x in prod):
                res.failures.append("graph %d hole %d: P v != 0" % (k, face))
    return res


def suite_proportionality(trials: int, seed: int) -> SuiteResult:
    """Vertex-sum form equals kappa times the window form; tabulates
    the kappa values seen."""
    rng = random.Random(seed)
    res = SuiteResult("proportionality", trials)
    seen: dict[str, int] = {}
    for k in range(trials):
        graph = random_spine(rng)
        window = window_form_matrix(graph)
        penner = penner_form_matrix(graph)
        kappa = None
        for i in range(len(window.names)):
            for j in range(len(window.names)):
                if window.data[i][j] != 0:
                    kappa = penner.data[i][j] / window.data[i][j]
                    break
            if kappa is not None:
                break
        if kappa is None:
            seen["(zero)"] = seen.get("(zero)", 0) + 1
            if any(x != 0 for row in penner.data for x in row):
                res.failures.append("graph %d: window form zero but vertex form not" % k)
            continue
        if penner != window.scaled(kappa):
            res.failures.append("graph %d: forms not proportional" % k)
        key = str(kappa)
        seen[key] = seen.get(key, 0) + 1
    res.info["kappa"] = ",".join("%s:%d" % kv for kv in sorted(seen.items()))
    return res


def suite_inversion(trials: int, seed: int) -> SuiteResult:
    """On single-cusp graphs the window form inverts the bracket up to
    one scalar on the nonzero block; multi-cusp graphs are only
    reported, their product need not be scalar."""
    rng = random.Random(seed)
    res = SuiteResult("inversion", trials)
    scalars: dict[str, int] = {}
    skipped = 0
    for k in range(trials):
        graph = random_spine(rng)
        if len(graph.cusps) != 1:
            skipped += 1
            continue
        window = window_form_matrix(graph)
        table = poisson_matrix(graph)
        sub = window.nonzero_row_names()
        if not sub:
            continue
        c, residual = verify_inverse(window.restrict(sub), table.restrict(sub))
        if c is None or residual != 0:
            res.failures.append("graph %d: product not scalar (c=%s residual=%s)" % (k, c, residual))
            continue
        scalars[str(c)] = scalars.get(str(c), 0) + 1
    res.info["c"] = ",".join("%s:%d" % kv for kv in sorted(scalars.items())) or "(none)"
    res.info["multicusp_skipped"] = skipped
    return res


SUITES: dict[str, Callable[[int, int], SuiteResult]] = {
    "monomiality": suite_monomiality,
    "positivity": suite_positivity,
    "involution": suite_involution,
    "roundtrip": suite_roundtrip,
    "mutation": suite_mutation,
    "centers": suite_centers,
    "proportionality": suite_proportionality,
    "inversion": suite_inversion,
}


def run_suite(name: str, trials: int, seed: int) -> SuiteResult:
    if name not in SUITES:
        raise ValueError("unknown suite %r; choose from %s" % (name, ", ".join(sorted(SUITES))))
    return SUITES[name](trials, seed)
