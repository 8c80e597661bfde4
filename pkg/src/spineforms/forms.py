"""Poisson and symplectic structure of the coordinate ring.

Three coordinate-indexed matrices are built combinatorially:

* ``poisson_matrix``: the vertex-local bracket table.  Each trivalent
  vertex contributes +1 for every cyclically adjacent ordered pair of
  its coordinate-bearing slots (loop half-edges carry no coordinate and
  are skipped).
* ``window_form_matrix``: the boundary-ordered two-form.  Every window
  contributes +1 for every ordered pair of coordinate tokens along it.
* ``penner_form_matrix``: the sum over trivalent vertices (away from
  loops) of the wedge products of the dual-arc length differentials of
  the three legs, expressed in the coordinate differentials through the
  dual-arc traversal counts.

Centers of the bracket: one counting vector per cusped hole (the
traversal counts of its full boundary walk) and the loop weights, which
are parameters rather than coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .algebra import frac_inverse, frac_kernel, frac_matmul
from .coords import CoordinatePoint, dual_multiplicity_matrix
from .ribbon import FatGraph, windows

__all__ = [
    "CoordinateIndexedMatrix",
    "CenterBasis",
    "poisson_matrix",
    "window_form_matrix",
    "penner_form_matrix",
    "center_vectors",
    "verify_inverse",
    "poisson_bracket_numeric",
]


class CoordinateIndexedMatrix:
    """Square matrix with rows and columns labeled by edge names."""

    __slots__ = ("names", "data", "_index")

    def __init__(self, names: Sequence[str], data=None):
        self.names = tuple(names)
        n = len(self.names)
        if data is None:
            self.data = [[Fraction(0)] * n for _ in range(n)]
        else:
            if len(data) != n or any(len(row) != n for row in data):
                raise ValueError("data shape does not match names")
            self.data = [[Fraction(x) for x in row] for row in data]
        self._index = {nm: i for i, nm in enumerate(self.names)}

    def add_at(self, u: str, v: str, amount) -> None:
        self.data[self._index[u]][self._index[v]] += Fraction(amount)

    def __getitem__(self, key):
        u, v = key
        return self.data[self._index[u]][self._index[v]]

    def row(self, u: str) -> list[Fraction]:
        return list(self.data[self._index[u]])

    def restrict(self, names: Sequence[str]) -> "CoordinateIndexedMatrix":
        idx = [self._index[n] for n in names]
        data = [[self.data[i][j] for j in idx] for i in idx]
        return CoordinateIndexedMatrix(names, data)

    def nonzero_row_names(self) -> list[str]:
        return [nm for i, nm in enumerate(self.names) if any(x != 0 for x in self.data[i])]

    def scaled(self, c) -> "CoordinateIndexedMatrix":
        c = Fraction(c)
        return CoordinateIndexedMatrix(self.names, [[c * x for x in row] for row in self.data])

    def is_antisymmetric(self) -> bool:
        n = len(self.names)
        return all(self.data[i][j] == -self.data[j][i] for i in range(n) for j in range(i, n))

    def __eq__(self, other):
        if not isinstance(other, CoordinateIndexedMatrix):
            return NotImplemented
        return self.names == other.names and self.data == other.data

    def lines(self, fmt: str = "%s") -> list[str]:
        def cell(x: Fraction) -> str:
            return str(x) if x.denominator != 1 else str(x.numerator)

        width = max([len(n) for n in self.names] + [4])
        width = max(width, max((len(cell(x)) for row in self.data for x in row), default=1))
        head = " " * (width + 1) + " ".join(n.rjust(width) for n in self.names)
        out = [head]
        for nm, row in zip(self.names, self.data):
            out.append(nm.rjust(width) + "  " + " ".join(cell(x).rjust(width) for x in row))
        return out

    def __repr__(self):
        return "CoordinateIndexedMatrix(%s)" % (self.names,)


def poisson_matrix(graph: FatGraph) -> CoordinateIndexedMatrix:
    """Bracket table {Y_u, Y_v} over the coordinate edges."""
    m = CoordinateIndexedMatrix(graph.coordinate_edges())
    for halves in graph.vertices.values():
        slots = [graph.edge_of(h) for h in halves if graph.edges[graph.edge_of(h)].kind != "loop"]
        if len(slots) < 2:
            continue
        k = len(slots)
        for i in range(k):
            u, v = slots[i], slots[(i + 1) % k]
            m.add_at(u, v, 1)
            m.add_at(v, u, -1)
    return m


def window_form_matrix(graph: FatGraph) -> CoordinateIndexedMatrix:
    """Two-form from the window orderings: +1 for every ordered pair of
    coordinate tokens inside one window."""
    m = CoordinateIndexedMatrix(graph.coordinate_edges())
    for w in windows(graph):
        tokens = w.coordinate_tokens(graph)
        for p in range(len(tokens)):
            for q in range(p + 1, len(tokens)):
                m.add_at(tokens[p], tokens[q], 1)
                m.add_at(tokens[q], tokens[p], -1)
    return m


def penner_form_matrix(graph: FatGraph) -> CoordinateIndexedMatrix:
    """Vertex-sum of wedge products of dual-arc length differentials.

    d(log lambda) of a leg's dual arc is half the traversal-count row of
    that leg; vertices carrying a loop are skipped because their two
    loop legs have no dual arc and the stem wedge cancels.
    """
    names, rows = dual_multiplicity_matrix(graph)
    index = {n: i for i, n in enumerate(names)}
    m = CoordinateIndexedMatrix(names)
    quarter = Fraction(1, 4)
    for halves in graph.vertices.values():
        kinds = [graph.edges[graph.edge_of(h)].kind for h in halves]
        if "loop" in kinds:
            continue
        legs = [rows[index[graph.edge_of(h)]] for h in halves]
        for i in range(3):
            a, b = legs[i], legs[(i + 1) % 3]
            for f in range(len(names)):
                af = a[f]
                if af == 0 and b[f] == 0:
                    continue
                for g in range(len(names)):
                    val = af * b[g] - a[g] * b[f]
                    if val:
                        m.data[f][g] += quarter * val
    return m


@dataclass
class CenterBasis:
    """Central elements: one coordinate-count vector per cusped hole
    plus the loop weights (Casimir parameters, no vector)."""

    names: tuple[str, ...]
    holes: list[tuple[int, list[int]]]
    loop_names: list[str]

    def lines(self) -> list[str]:
        out = []
        for face, vec in self.holes:
            body = " ".join("%s:%d" % (n, c) for n, c in zip(self.names, vec) if c)
            out.append("hole %d  %s" % (face, body))
        for nm in self.loop_names:
            out.append("loop %s  weight is a Casimir" % nm)
        return out


def center_vectors(graph: FatGraph) -> CenterBasis:
    names = tuple(graph.coordinate_edges())
    index = {n: i for i, n in enumerate(names)}
    monogons = set(graph.monogon_faces())
    holes = []
    for fi, orbit in enumerate(graph.faces()):
        if fi in monogons:
            continue
        vec = [0] * len(names)
        for h in orbit:
            name = graph.edge_of(graph.sigma(h))
            j = index.get(name)
            if j is not None:
                vec[j] += 1
        holes.append((fi, vec))
    return CenterBasis(names, holes, graph.loop_edges())


def verify_inverse(
    form: CoordinateIndexedMatrix,
    bracket: CoordinateIndexedMatrix,
    subspace: Optional[Sequence[str]] = None,
    leaf: bool = False,
) -> tuple[Optional[Fraction], Fraction]:
    """Check that form*bracket is a scalar multiple of the identity.

    Restricted to ``subspace`` when given.  With ``leaf=True`` both
    sides are compared after projecting off the kernel of the bracket
    (the direction of the Casimirs), i.e. the product is compared to
    c * P where P projects onto a complement of the kernel.  Returns
    (c, residual); c is None when the product has no nonzero entry to
    read the scalar from.
    """
    if form.names != bracket.names:
        raise ValueError("mismatched coordinate labels")
    f = form.restrict(subspace).data if subspace is not None else [list(r) for r in form.data]
    p = bracket.restrict(subspace).data if subspace is not None else [list(r) for r in bracket.data]
    n = len(f)
    prod = frac_matmul(f, p)
    if leaf:
        kernel = frac_kernel(p)
        target = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        if kernel:
            k = len(kernel)
            bt = [[kernel[r][c] for r in range(k)] for c in range(n)]
            gram = frac_matmul(kernel, bt)
            ginv = frac_inverse(gram)
            proj = frac_matmul(frac_matmul(bt, ginv), kernel)
            target = [
                [target[i][j] - proj[i][j] for j in range(n)]
                for i in range(n)
            ]
            prod = frac_matmul(frac_matmul(target, prod), target)
    else:
        target = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    c: Optional[Fraction] = None
    for i in range(n):
        for j in range(n):
            if target[i][j] != 0:
                c = prod[i][j] / target[i][j]
                break
        if c is not None:
            break
    if c is None:
        residual = max((abs(x) for row in prod for x in row), default=Fraction(0))
        return None, residual
    residual = Fraction(0)
    for i in range(n):
        for j in range(n):
            diff = abs(prod[i][j] - c * target[i][j])
            if diff > residual:
                residual = diff
    return c, residual


def poisson_bracket_numeric(
    graph: FatGraph,
    f: Callable[[CoordinatePoint], float],
    g: Callable[[CoordinatePoint], float],
    point: Optional[CoordinatePoint] = None,
    step: float = 1e-4,
) -> float:
    """{f, g} at a point by central finite differences against the
    combinatorial bracket table."""
    if point is None:
        point = graph.point()
    base = point.as_float()
    table = poisson_matrix(graph)
    names = table.names

    def grad(func):
        out = {}
        for name in names:
            hi = func(base.shifted(name, step))
            lo = func(base.shifted(name, -step))
            out[name] = (hi - lo) / (2.0 * step)
        return out

    df = grad(f)
    dg = grad(g)
    total = 0.0
    for u in names:
        for v in names:
            coeff = table[u, v]
            if coeff:
                total += float(coeff) * df[u] * dg[v]
    return total
