"""Paths on a spine and their 2x2 matrix words.

A path is a token sequence: pending and inner edges by name, loop
traversals as signed tokens (``w1+`` bounces clockwise through the loop
w1, ``w1-`` counterclockwise).  Compilation inserts one edge matrix per
coordinate edge traversal and one turn or loop atom per vertex passage:

    X(Y)  = [[0, -e^{Y/2}], [e^{-Y/2}, 0]]
    R     = [[1, 1], [-1, 0]]          L = R^2 = [[0, 1], [-1, -1]]
    F(w)  = [[0, 1], [-1, -w]]         -F(w)^-1 = [[w, 1], [-1, 0]]

A left turn exits through the half-edge right after the arrival half in
the stored (counterclockwise) cyclic order, a right turn through the one
before.  A loop bounce contributes its single loop atom and swallows the
turns on both sides: the stem arrival, the forced passage around the
loop, and the stem exit compile to X_stem * F * X_stem.

Words multiply right to left: the first atom of the path is the
rightmost factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional

from .algebra import Fraction, LaurentPoly, Mat2, SqrtRational

if TYPE_CHECKING:
    from .coords import CoordinatePoint
    from .ribbon import FatGraph

__all__ = [
    "Step",
    "PathWord",
    "MatrixWord",
    "GeodesicFunction",
    "compile_path",
    "evaluate",
    "lambda_length",
    "geodesic_function",
    "positivity_check",
    "t_var",
    "w_var",
]


def t_var(edge: str) -> str:
    """Formal variable name for e^{Y/2} of a coordinate edge."""
    return "t_" + edge

def w_var(edge: str) -> str:
    """Formal variable name for the weight of a loop edge."""
    return "w_" + edge


@dataclass(frozen=True)
class Step:
    """One edge traversal: the edge's name, the loop direction sign
    ('+'/'-' for loop edges, None otherwise), and optionally the half
    edge the traversal exits through (resolves multi-edge ambiguity)."""

    edge: str
    sign: Optional[str] = None
    exit_half: Optional[str] = None

    def token(self) -> str:
        return self.edge + (self.sign or "")


@dataclass(frozen=True)
class PathWord:
    """Cusp-to-cusp token sequence.

    ``closed`` marks a based loop (trace semantics) rather than an arc;
    both kinds may start and end at the same cusp, so the flag is the
    only way to tell them apart on single-cusp surfaces.
    """

    start_cusp: str
    steps: tuple[Step, ...]
    end_cusp: str
    closed: bool = False

    @property
    def tokens(self) -> list[str]:
        return [s.token() for s in self.steps]

    def token_string(self) -> str:
        return ",".join(self.tokens)

    @classmethod
    def from_tokens(cls, graph: "FatGraph", tokens: Iterable[str], closed: bool = False) -> "PathWord":
        """Build from name-level tokens, resolving half edges greedily.

        Raises ValueError when a token is not incident to the current
        vertex or the incidence is ambiguous (parallel edges sharing
        both endpoints need explicit half-edge data instead).
        """
        toks = [t.strip() for t in tokens if t.strip()]
        if not toks:
            raise ValueError("empty path")
        steps: list[Step] = []
        first = _split_token(graph, toks[0])
        if first[1] is not None or graph.edges[first[0]].kind != "pending":
            raise ValueError("path must start with a pending edge, got %r" % toks[0])
        start_cusp = graph.cusp_of_pending(first[0])
        exit_half = graph.cusp_half(start_cusp)
        steps.append(Step(first[0], None, exit_half))
        arrival = graph.mate(exit_half)
        forced_exit: Optional[str] = None  # the stem half after a loop bounce
        for tok in toks[1:]:
            name, sign = _split_token(graph, tok)
            if graph.edges[name].kind == "loop":
                if forced_exit is not None:
                    raise ValueError("two loop tokens in a row around %r" % tok)
                want = graph.sigma(arrival) if sign == "+" else graph.sigma_inv(arrival)
                if graph.edge_of(want) != name:
                    raise ValueError("loop %s is not reachable where token %r is used" % (name, tok))
                steps.append(Step(name, sign, want))
                loop_arrival = graph.mate(want)
                forced_exit = graph.sigma(loop_arrival) if sign == "+" else graph.sigma_inv(loop_arrival)
                continue
            if forced_exit is not None:
                if graph.edge_of(forced_exit) != name:
                    raise ValueError(
                        "after a loop bounce the walk must leave through %s, not %s"
                        % (graph.edge_of(forced_exit), name)
                    )
                exit_half = forced_exit
                forced_exit = None
            else:
                vertex = graph.vertex_of(arrival)
                candidates = [
                    h for h in graph.halves_at(vertex) if graph.edge_of(h) == name and h != arrival
                ]
                if not candidates:
                    raise ValueError("edge %s is not incident to the vertex reached before it" % name)
                if len(candidates) > 1:
                    raise ValueError("ambiguous token %r (parallel edge); supply half-edge data" % tok)
                exit_half = candidates[0]
            steps.append(Step(name, None, exit_half))
            arrival = graph.mate(exit_half)
        if forced_exit is not None:
            raise ValueError("path ends in the middle of a loop bounce")
        last = steps[-1]
        if graph.edges[last.edge].kind != "pending":
            raise ValueError("path must end with a pending edge")
        end_cusp = graph.cusp_of_pending(last.edge)
        return cls(start_cusp, tuple(steps), end_cusp, closed)

    def reversed(self, graph: "FatGraph") -> "PathWord":
        """Same underlying arc walked the other way: step order reversed,
        loop signs flipped, exit halves swapped to the mates."""
        steps = []
        for s in self.steps[::-1]:
            sign = {"+": "-", "-": "+"}.get(s.sign) if s.sign else None
            exit_half = graph.mate(s.exit_half) if s.exit_half is not None else None
            steps.append(Step(s.edge, sign, exit_half))
        return PathWord(self.end_cusp, tuple(steps), self.start_cusp, self.closed)


def _split_token(graph: "FatGraph", token: str) -> tuple[str, Optional[str]]:
    sign: Optional[str] = None
    name = token
    if token.endswith("+") or token.endswith("-"):
        name, sign = token[:-1], token[-1]
    if name not in graph.edges:
        raise ValueError("unknown edge %r in path" % token)
    kind = graph.edges[name].kind
    if (sign is not None) != (kind == "loop"):
        raise ValueError("token %r: loop edges need +/-, others must not carry one" % token)
    return name, sign


# Matrix word atoms: ("X", edge), ("L",), ("R",), ("F", loop), ("Fi", loop).
Atom = tuple


@dataclass(frozen=True)
class MatrixWord:
    """Atoms in path order; the product applies them right to left, so
    atoms[0] is the rightmost factor."""

    atoms: tuple[Atom, ...]

    def __str__(self):
        names = []
        for atom in self.atoms[::-1]:
            if atom[0] == "X":
                names.append("X[%s]" % atom[1])
            elif atom[0] == "F":
                names.append("F[%s]" % atom[1])
            elif atom[0] == "Fi":
                names.append("-Finv[%s]" % atom[1])
            else:
                names.append(atom[0])
        return "*".join(names)


@dataclass(frozen=True)
class GeodesicFunction:
    """Sign-normalized trace of a closed word, with the raw trace kept
    for debugging."""

    value: object
    raw_trace: object
    path: PathWord


def compile_path(graph: "FatGraph", path: PathWord) -> MatrixWord:
    """Compile a PathWord to its matrix word.

    One X per pending/inner traversal; between consecutive coordinate
    edges a turn atom L (exit right after arrival in the stored cyclic
    order) or R (right before); a loop step becomes the single atom F
    for '+' or -F^-1 for '-', with no adjacent turns.
    """
    steps = _resolve_steps(graph, path)
    atoms: list[Atom] = []
    prev_arrival: Optional[str] = None
    forced_stem: Optional[str] = None
    for i, step in enumerate(steps):
        kind = graph.edges[step.edge].kind
        if kind == "loop":
            if i == 0:
                raise ValueError("path cannot start on a loop edge")
            if prev_arrival is not None:
                want = graph.sigma(prev_arrival) if step.sign == "+" else graph.sigma_inv(prev_arrival)
                if step.exit_half != want:
                    raise ValueError("loop sign %s%s disagrees with the cyclic order" % (step.edge, step.sign))
            atoms.append(("F", step.edge) if step.sign == "+" else ("Fi", step.edge))
            loop_arrival = graph.mate(step.exit_half)
            forced_stem = graph.sigma(loop_arrival) if step.sign == "+" else graph.sigma_inv(loop_arrival)
            prev_arrival = None
            continue
        if forced_stem is not None:
            # the bounce swallows the turns on both sides of the loop atom
            if step.exit_half != forced_stem:
                raise ValueError("loop bounce must leave through %s" % graph.edge_of(forced_stem))
            forced_stem = None
        elif prev_arrival is not None:
            exit_half = step.exit_half
            # at a cusp sigma fixes the lone half, so test this first
            if exit_half == prev_arrival:
                raise ValueError("backtracking at edge %s" % step.edge)
            if exit_half == graph.sigma(prev_arrival):
                atoms.append(("L",))
            elif exit_half == graph.sigma_inv(prev_arrival):
                atoms.append(("R",))
            else:
                raise ValueError("steps %s -> %s do not meet at a vertex" % (prev_arrival, exit_half))
        atoms.append(("X", step.edge))
        prev_arrival = graph.mate(step.exit_half)
    return MatrixWord(tuple(atoms))


def _resolve_steps(graph: "FatGraph", path: PathWord) -> list[Step]:
    """Ensure every step carries its exit half, re-deriving from token
    names when the path was built by hand."""
    if all(s.exit_half is not None for s in path.steps):
        out = []
        prev_arrival: Optional[str] = None
        for s in path.steps:
            kind = graph.edges[s.edge].kind
            if kind == "loop" and s.sign is None:
                raise ValueError("loop step %s lacks a direction sign" % s.edge)
            out.append(s)
            if kind == "loop":
                loop_arrival = graph.mate(s.exit_half)
                stem = graph.sigma(loop_arrival) if s.sign == "+" else graph.sigma_inv(loop_arrival)
                prev_arrival = graph.mate(stem)
            else:
                prev_arrival = graph.mate(s.exit_half)
        return out
    rebuilt = PathWord.from_tokens(graph, path.tokens, path.closed)
    if rebuilt.start_cusp != path.start_cusp:
        raise ValueError("path does not start at cusp %s" % path.start_cusp)
    return list(rebuilt.steps)


def _atom_matrix_formal(atom: Atom) -> Mat2:
    one = LaurentPoly.const(1)
    zero = LaurentPoly()
    if atom[0] == "X":
        t = LaurentPoly.var(t_var(atom[1]))
        return Mat2(zero, -t, t.inverse(), zero)
    if atom[0] == "L":
        return Mat2(zero, one, -one, -one)
    if atom[0] == "R":
        return Mat2(one, one, -one, zero)
    if atom[0] == "F":
        w = LaurentPoly.var(w_var(atom[1]))
        return Mat2(zero, one, -one, -w)
    if atom[0] == "Fi":
        w = LaurentPoly.var(w_var(atom[1]))
        return Mat2(w, one, -one, zero)
    raise ValueError("unknown atom %r" % (atom,))


def _atom_matrix_numeric(atom: Atom, point: "CoordinatePoint") -> Mat2:
    if point.exact:
        one: object = SqrtRational(1)
        zero: object = SqrtRational(0)
    else:
        one, zero = 1.0, 0.0
    if atom[0] == "X":
        t = point.t_value(atom[1])
        return Mat2(zero, -t, one / t, zero)
    if atom[0] == "L":
        return Mat2(zero, one, -one, -one)
    if atom[0] == "R":
        return Mat2(one, one, -one, zero)
    w = point.omega_value(atom[1])
    if point.exact:
        w = SqrtRational(w)
    if atom[0] == "F":
        return Mat2(zero, one, -one, -w)
    if atom[0] == "Fi":
        return Mat2(w, one, -one, zero)
    raise ValueError("unknown atom %r" % (atom,))


def evaluate(word: MatrixWord, point: Optional["CoordinatePoint"] = None) -> Mat2:
    """Multiply the word out over LaurentPoly (point=None) or numbers."""
    if not word.atoms:
        raise ValueError("empty word")
    mats = []
    for atom in word.atoms:
        mats.append(_atom_matrix_formal(atom) if point is None else _atom_matrix_numeric(atom, point))
    result = mats[0]
    for m in mats[1:]:
        result = m * result
    return result


def _sign_normalize(value):
    """Flip the PSL(2) sign so the result is positive (numeric) or has
    positive coefficients (formal); mixed-sign formal values are
    returned as-is with their leading coefficient made positive."""
    if isinstance(value, LaurentPoly):
        sd = value.sign_definite()
        if sd == -1:
            return -value
        if sd is None:
            lead = min(value.terms)
            if value.terms[lead] < 0:
                return -value
        return value
    if isinstance(value, SqrtRational):
        return -value if value.sign() < 0 else value
    return -value if value < 0 else value


def lambda_length(graph: "FatGraph", path: PathWord, point: Optional["CoordinatePoint"] = None):
    """Sign-normalized upper-right entry of the compiled path."""
    if path.closed:
        raise ValueError("closed path has no lambda-length; use geodesic_function")
    m = evaluate(compile_path(graph, path), point)
    return _sign_normalize(m.b)


def geodesic_function(graph: "FatGraph", path: PathWord, point: Optional["CoordinatePoint"] = None) -> GeodesicFunction:
    """Sign-normalized trace of a closed path based at a cusp."""
    if path.start_cusp != path.end_cusp:
        raise ValueError("open path: starts at %s, ends at %s" % (path.start_cusp, path.end_cusp))
    raw = evaluate(compile_path(graph, path), point).trace()
    return GeodesicFunction(_sign_normalize(raw), raw, path)


def positivity_check(p: LaurentPoly) -> bool:
    """True when all coefficients share one sign (zero counts as
    sign-definite)."""
    return p.sign_definite() is not None
