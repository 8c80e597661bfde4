"""Fat-graph spines with half-edge combinatorics.

A spine is a connected ribbon graph whose vertices are trivalent except
for one univalent cusp vertex per marked boundary point.  Edges come in
three kinds: ``inner`` (carrying a shear-type coordinate), ``pending``
(one end at a cusp, carrying an extended coordinate), and ``loop`` (both
halves at one trivalent vertex, bounding a monogon around a hole or
orbifold point and carrying a weight instead of a coordinate).

The stored cyclic order at each vertex is counterclockwise.  Boundary
walks arrive along a half-edge h and leave through sigma(h), the next
half counterclockwise; the segments of a walk between consecutive cusp
visits are the windows of the underlying hole.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .paths import PathWord, Step

__all__ = [
    "GraphError",
    "HalfEdge",
    "Edge",
    "FatGraph",
    "Window",
    "ValidationReport",
    "parse_graph",
    "validate",
    "windows",
    "dual_arc",
    "emit_graph",
]


class GraphError(ValueError):
    """Structural problem in a graph file or graph mutation."""


@dataclass(frozen=True)
class HalfEdge:
    id: str
    vertex: str
    edge: str


@dataclass
class Edge:
    """Value payloads keep the raw file semantics:

    ("exp", Fraction)    exact coordinate, stored as e^Y
    ("lin", float)       float coordinate, stored as Y
    ("omega", Fraction)  exact loop weight
    ("omega_float", float)
    None                 no value in the file
    """

    name: str
    kind: str
    halves: tuple[str, str]
    value: Optional[tuple] = None


class FatGraph:
    """Immutable-by-convention half-edge structure.

    vertices: id -> tuple of half ids in stored (counterclockwise)
    cyclic order; cusps: id -> single half id; edges: name -> Edge in
    file order.  All cross-reference maps are built eagerly so lookups
    during walks are dict hits.
    """

    def __init__(
        self,
        vertices: dict[str, tuple[str, ...]],
        cusps: dict[str, str],
        edges: dict[str, Edge],
        declared: Optional[dict[str, int]] = None,
    ):
        self.vertices = {v: tuple(hs) for v, hs in vertices.items()}
        self.cusps = dict(cusps)
        self.edges = dict(edges)
        self.declared = dict(declared) if declared else None

        owner: dict[str, str] = {}
        self._half_order: list[str] = []
        for vid, halves in self.vertices.items():
            if len(halves) != 3:
                raise GraphError("vertex %s must list exactly 3 half-edges" % vid)
            for h in halves:
                if h in owner:
                    raise GraphError("half-edge %s used twice" % h)
                owner[h] = vid
                self._half_order.append(h)
        for cid, h in self.cusps.items():
            if h in owner:
                raise GraphError("half-edge %s used twice" % h)
            owner[h] = cid
            self._half_order.append(h)
        self._owner = owner

        edge_of: dict[str, str] = {}
        mate: dict[str, str] = {}
        for e in self.edges.values():
            if len(e.halves) != 2 or e.halves[0] == e.halves[1]:
                raise GraphError("edge %s needs two distinct half-edges" % e.name)
            for h in e.halves:
                if h not in owner:
                    raise GraphError("edge %s references unknown half-edge %s" % (e.name, h))
                if h in edge_of:
                    raise GraphError("half-edge %s referenced by two edges" % h)
                edge_of[h] = e.name
            a, b = e.halves
            mate[a], mate[b] = b, a
        for h in owner:
            if h not in edge_of:
                raise GraphError("half-edge %s belongs to no edge" % h)
        self._edge_of = edge_of
        self._mate = mate

        sigma: dict[str, str] = {}
        sigma_inv: dict[str, str] = {}
        for halves in self.vertices.values():
            for i, h in enumerate(halves):
                nxt = halves[(i + 1) % 3]
                sigma[h] = nxt
                sigma_inv[nxt] = h
        for h in self.cusps.values():
            sigma[h] = h
            sigma_inv[h] = h
        self._sigma = sigma
        self._sigma_inv = sigma_inv
        self._faces: Optional[list[list[str]]] = None

    # basic accessors

    def sigma(self, h: str) -> str:
        return self._sigma[h]

    def sigma_inv(self, h: str) -> str:
        return self._sigma_inv[h]

    def mate(self, h: str) -> str:
        return self._mate[h]

    def edge_of(self, h: str) -> str:
        return self._edge_of[h]

    def vertex_of(self, h: str) -> str:
        return self._owner[h]

    def halves_at(self, vertex: str) -> tuple[str, ...]:
        if vertex in self.vertices:
            return self.vertices[vertex]
        return (self.cusps[vertex],)

    def is_cusp_half(self, h: str) -> bool:
        return self._owner[h] in self.cusps

    def cusp_half(self, cusp: str) -> str:
        return self.cusps[cusp]

    def cusp_of_pending(self, name: str) -> str:
        e = self.edges[name]
        for h in e.halves:
            if self.is_cusp_half(h):
                return self._owner[h]
        raise GraphError("pending edge %s touches no cusp" % name)

    def pending_inner_half(self, name: str) -> str:
        """The trivalent-side half of a pending edge."""
        e = self.edges[name]
        for h in e.halves:
            if not self.is_cusp_half(h):
                return h
        raise GraphError("pending edge %s has no trivalent end" % name)

    def coordinate_edges(self) -> list[str]:
        return [e.name for e in self.edges.values() if e.kind != "loop"]

    def loop_edges(self) -> list[str]:
        return [e.name for e in self.edges.values() if e.kind == "loop"]

    def point(self):
        from .coords import CoordinatePoint

        return CoordinatePoint.from_graph(self)

    # faces and derived counts

    def faces(self) -> list[list[str]]:
        """Orbits of arrival halves under h -> mate(sigma(h)); each orbit
        is one boundary walk (one hole)."""
        if self._faces is None:
            seen: set[str] = set()
            out: list[list[str]] = []
            for h in self._half_order:
                if h in seen:
                    continue
                orbit = []
                cur = h
                while cur not in seen:
                    seen.add(cur)
                    orbit.append(cur)
                    cur = self._mate[self._sigma[cur]]
                out.append(orbit)
            self._faces = out
        return self._faces

    def monogon_faces(self) -> list[int]:
        return [i for i, orbit in enumerate(self.faces()) if len(orbit) == 1]

    def counts(self) -> dict[str, int]:
        faces = self.faces()
        monogons = self.monogon_faces()
        V = len(self.vertices) + len(self.cusps)
        E = len(self.edges)
        F = len(faces)
        euler = V - E + F
        return {
            "trivalent": len(self.vertices),
            "cusps": len(self.cusps),
            "edges": E,
            "faces": F,
            "monogons": len(monogons),
            "cusped_faces": F - len(monogons),
            "genus2x": 2 - euler,
        }

    def is_connected(self) -> bool:
        if not self._half_order:
            return False
        start = self._owner[self._half_order[0]]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for h in self.halves_at(v):
                u = self._owner[self._mate[h]]
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices) + len(self.cusps)

    def with_vertices(self, new_vertices: dict[str, tuple[str, ...]], new_edges: Optional[dict[str, Edge]] = None) -> "FatGraph":
        """Copy with some vertex cyclic orders (and optionally edge
        payloads) replaced; flips go through here."""
        vertices = dict(self.vertices)
        vertices.update(new_vertices)
        edges = {n: replace(e) for n, e in (new_edges or self.edges).items()}
        return FatGraph(vertices, self.cusps, edges, self.declared)

    def canonical_key(self):
        """Certificate invariant under renaming of vertex and cusp ids.

        Edge names are part of the key (they are stable under flips);
        the minimum over all BFS roots and rotations makes the key
        independent of the stored vertex labels.
        """
        best = None
        for v0 in self.vertices:
            for rot in range(3):
                cert = self._certificate(v0, rot)
                if best is None or cert < best:
                    best = cert
        return best

    def _certificate(self, v0: str, rot: int):
        order0 = self.vertices[v0]
        queue: list[tuple[str, tuple[str, ...]]] = [(v0, order0[rot:] + order0[:rot])]
        placed = {v0}
        halfnum: dict[str, int] = {}
        entries = []
        while queue:
            vid, halves = queue.pop(0)
            row = []
            for h in halves:
                if h not in halfnum:
                    halfnum[h] = len(halfnum)
                m = self._mate[h]
                row.append((self._edge_of[h], self.edges[self._edge_of[h]].kind, halfnum.get(m, -1)))
                peer = self._owner[m]
                if peer in self.vertices and peer not in placed:
                    placed.add(peer)
                    porder = self.vertices[peer]
                    i = porder.index(m)
                    queue.append((peer, porder[i:] + porder[:i]))
            entries.append(tuple(row))
        return tuple(entries)


@dataclass(frozen=True)
class Window:
    """Boundary segment of a cusped hole between consecutive cusps,
    inclusive of the bounding pending edges."""

    hole: int
    start_cusp: str
    end_cusp: str
    steps: tuple[Step, ...]

    @property
    def tokens(self) -> list[str]:
        return [s.token() for s in self.steps]

    def coordinate_tokens(self, graph: FatGraph) -> list[str]:
        return [s.edge for s in self.steps if graph.edges[s.edge].kind != "loop"]

    def to_path(self) -> PathWord:
        return PathWord(self.start_cusp, self.steps, self.end_cusp)


def windows(graph: FatGraph) -> list[Window]:
    """All windows, in face order, each starting at a cusp visit."""
    out: list[Window] = []
    for fi, orbit in enumerate(graph.faces()):
        cusp_pos = [i for i, h in enumerate(orbit) if graph.is_cusp_half(h)]
        if not cusp_pos:
            continue
        k = len(orbit)
        for a, i in enumerate(cusp_pos):
            j = cusp_pos[(a + 1) % len(cusp_pos)]
            length = (j - i) % k or k
            steps = []
            for off in range(length):
                h = orbit[(i + off) % k]
                x = graph.sigma(h)
                name = graph.edge_of(x)
                sign = "+" if graph.edges[name].kind == "loop" else None
                steps.append(Step(name, sign, x))
            out.append(
                Window(
                    hole=fi,
                    start_cusp=graph.vertex_of(orbit[i]),
                    end_cusp=graph.vertex_of(orbit[j]),
                    steps=tuple(steps),
                )
            )
    return out


def _hug_walk(graph: FatGraph, start_half: str) -> list[Step]:
    """From an arrival half, repeatedly exit through sigma_inv (hugging
    the triangulation) until a pending edge drops into a cusp."""
    steps: list[Step] = []
    arrival = start_half
    limit = 2 * len(graph._half_order) + 2
    while True:
        if len(steps) > limit:
            raise GraphError("hugging walk does not reach a cusp (invalid graph?)")
        x = graph.sigma_inv(arrival)
        name = graph.edge_of(x)
        kind = graph.edges[name].kind
        steps.append(Step(name, "-" if kind == "loop" else None, x))
        arrival = graph.mate(x)
        if kind == "pending":
            return steps


def _reverse_steps(graph: FatGraph, steps: list[Step]) -> list[Step]:
    out = []
    for s in steps[::-1]:
        sign = {"+": "-", "-": "+"}.get(s.sign) if s.sign else None
        out.append(Step(s.edge, sign, graph.mate(s.exit_half)))
    return out


def dual_arc(graph: FatGraph, name: str) -> PathWord:
    """The arc of the dual triangulation crossing the given edge.

    Pending edge: the window of its hole that ends at its cusp (the
    boundary side joining the two neighboring cusps; on a single-cusp
    hole that is the whole boundary walk).  Inner edge: hug the
    triangulation from both ends until a cusp is reached on each side.
    """
    edge = graph.edges[name]
    if edge.kind == "loop":
        raise GraphError("loop edge %s has no dual arc" % name)
    if edge.kind == "pending":
        for w in windows(graph):
            if w.steps[-1].edge == name:
                return w.to_path()
        raise GraphError("no window ends at pending edge %s" % name)
    h1, h2 = edge.halves
    walk_a = _hug_walk(graph, h1)
    walk_b = _hug_walk(graph, h2)
    steps = _reverse_steps(graph, walk_a) + [Step(name, None, h1)] + walk_b
    start = graph.cusp_of_pending(walk_a[-1].edge)
    end = graph.cusp_of_pending(walk_b[-1].edge)
    return PathWord(start, tuple(steps), end)


@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]]
    genus: int
    holes_with_cusps: int
    monogon_holes: int
    cusps: int
    edges: int

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def lines(self) -> list[str]:
        out = []
        for nm, passed, detail in self.checks:
            status = "ok" if passed else "FAIL"
            out.append("%-18s %-4s %s" % (nm, status, detail))
        return out


def validate(graph: FatGraph) -> ValidationReport:
    """Run every spine axiom on the graph and report per check."""
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, passed: bool, detail: str = ""):
        checks.append((name, bool(passed), detail))

    check("pairing", True, "%d half-edges in %d edges" % (len(graph._half_order), len(graph.edges)))

    bad_val = [v for v, hs in graph.vertices.items() if len(hs) != 3]
    check("valence", not bad_val, "all trivalent or cusp" if not bad_val else "bad: %s" % bad_val)

    pending = [e for e in graph.edges.values() if e.kind == "pending"]
    ok_pending = all(sum(graph.is_cusp_half(h) for h in e.halves) == 1 for e in pending)
    cusp_halves = set(graph.cusps.values())
    pend_cusp_halves = {h for e in pending for h in e.halves if graph.is_cusp_half(h)}
    ok_pending = ok_pending and pend_cusp_halves == cusp_halves and len(pending) == len(graph.cusps)
    check("pending-cusps", ok_pending, "%d pending edges, %d cusps" % (len(pending), len(graph.cusps)))

    loops = [e for e in graph.edges.values() if e.kind == "loop"]
    ok_loops = all(
        not graph.is_cusp_half(e.halves[0])
        and graph.vertex_of(e.halves[0]) == graph.vertex_of(e.halves[1])
        for e in loops
    )
    check("loop-placement", ok_loops, "%d loops" % len(loops))

    inner = [e for e in graph.edges.values() if e.kind == "inner"]
    ok_inner = all(not graph.is_cusp_half(h) for e in inner for h in e.halves)
    check("inner-placement", ok_inner, "%d inner edges" % len(inner))

    connected = graph.is_connected()
    check("connected", connected)

    faces = graph.faces()
    monogons = graph.monogon_faces()
    mono_ok = True
    mono_loops = set()
    for i in monogons:
        h = faces[i][0]
        name = graph.edge_of(graph.sigma(h))
        if graph.edges[name].kind != "loop":
            mono_ok = False
        mono_loops.add(name)
    mono_ok = mono_ok and len(monogons) == len(loops) and len(mono_loops) == len(loops)
    check("monogon-loops", mono_ok, "%d monogons for %d loops" % (len(monogons), len(loops)))

    cusp_halves_set = set(graph.cusps.values())
    cusped_ok = all(
        any(h in cusp_halves_set for h in orbit)
        for i, orbit in enumerate(faces)
        if i not in set(monogons)
    )
    check("faces-have-cusps", cusped_ok)

    n = len(graph.cusps)
    s_o = len(monogons)
    s_h = len(faces) - s_o
    s = len(faces)
    V = len(graph.vertices) + n
    E = len(graph.edges)
    F = len(faces)
    euler = V - E + F
    genus2x = 2 - euler
    check("euler", genus2x >= 0 and genus2x % 2 == 0, "V-E+F = %d" % euler)
    g = genus2x // 2 if genus2x >= 0 and genus2x % 2 == 0 else -1

    expected_e = 6 * g - 6 + 3 * s + 2 * n
    check("edge-count", g >= 0 and E == expected_e, "E = %d, 6g-6+3s+2n = %d" % (E, expected_e))

    if graph.declared:
        d = graph.declared
        match = (
            d.get("g", g) == g
            and d.get("sh", s_h) == s_h
            and d.get("so", s_o) == s_o
            and d.get("n", n) == n
        )
        check(
            "header",
            match,
            "declared g=%s sh=%s so=%s n=%s, computed g=%d sh=%d so=%d n=%d"
            % (d.get("g"), d.get("sh"), d.get("so"), d.get("n"), g, s_h, s_o, n),
        )

    return ValidationReport(
        checks=checks,
        genus=g,
        holes_with_cusps=s_h,
        monogon_holes=s_o,
        cusps=n,
        edges=E,
    )


_EXACT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def _parse_value(kind: str, key: str, raw: str, where: str):
    if kind in ("inner", "pending"):
        expected = "Z" if kind == "inner" else "pi"
        if key != expected:
            raise GraphError("%s: %s edges take %s=, got %s=" % (where, kind, expected, key))
        if _EXACT_RE.match(raw):
            q = Fraction(raw)
            if q <= 0:
                raise GraphError("%s: exact value is e^Y and must be positive" % where)
            return ("exp", q)
        try:
            return ("lin", float(raw))
        except ValueError:
            raise GraphError("%s: bad value %r" % (where, raw)) from None
    if key == "omega":
        if _EXACT_RE.match(raw):
            return ("omega", Fraction(raw))
        try:
            return ("omega_float", float(raw))
        except ValueError:
            raise GraphError("%s: bad value %r" % (where, raw)) from None
    if key == "perimeter":
        try:
            p = float(raw)
        except ValueError:
            raise GraphError("%s: bad value %r" % (where, raw)) from None
        return ("omega_float", 2.0 * math.cosh(p / 2.0))
    if key == "orbifold":
        if not raw.isdigit() or int(raw) < 2:
            raise GraphError("%s: orbifold order must be an integer >= 2" % where)
        p = int(raw)
        if p == 2:
            return ("omega", Fraction(0))
        if p == 3:
            return ("omega", Fraction(1))
        return ("omega_float", 2.0 * math.cos(math.pi / p))
    raise GraphError("%s: unknown value key %s=" % (where, key))


def parse_graph(text: str) -> FatGraph:
    """Parse the line-oriented graph format.

    Grammar (# starts a comment):
      surface g=<int> sh=<int> so=<int> n=<int>
      vertex <id> ccw: <he> <he> <he>
      cusp <id> half: <he>
      edge <name> inner   <he> <he> [Z=<value>]
      edge <name> pending <he> <he> [pi=<value>]
      edge <name> loop    <he> <he> [omega=<v> | perimeter=<v> | orbifold=<int>]

    An integer or fraction coordinate value is exact and denotes e^Y; a
    decimal value is a float Y.  Loop weights are given directly
    (omega=), via the hole perimeter (omega = 2cosh(P/2)), or via an
    orbifold order p (omega = 2cos(pi/p)).
    """
    vertices: dict[str, tuple[str, ...]] = {}
    cusps: dict[str, str] = {}
    edges: dict[str, Edge] = {}
    declared: Optional[dict[str, int]] = None

    for lineno, rawline in enumerate(text.splitlines(), 1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        where = "line %d" % lineno
        parts = line.split()
        head = parts[0]
        if head == "surface":
            declared = {}
            for item in parts[1:]:
                if "=" not in item:
                    raise GraphError("%s: malformed surface field %r" % (where, item))
                k, v = item.split("=", 1)
                if k not in ("g", "sh", "so", "n") or not v.lstrip("-").isdigit():
                    raise GraphError("%s: malformed surface field %r" % (where, item))
                declared[k] = int(v)
        elif head == "vertex":
            if len(parts) != 6 or parts[2] != "ccw:":
                raise GraphError("%s: expected 'vertex <id> ccw: <he> <he> <he>'" % where)
            vid = parts[1]
            if vid in vertices or vid in cusps:
                raise GraphError("%s: duplicate vertex id %s" % (where, vid))
            hs = tuple(parts[3:6])
            if len(set(hs)) != 3:
                raise GraphError("%s: repeated half-edge at vertex %s" % (where, vid))
            vertices[vid] = hs
        elif head == "cusp":
            if len(parts) != 4 or parts[2] != "half:":
                raise GraphError("%s: expected 'cusp <id> half: <he>'" % where)
            cid = parts[1]
            if cid in vertices or cid in cusps:
                raise GraphError("%s: duplicate vertex id %s" % (where, cid))
            cusps[cid] = parts[3]
        elif head == "edge":
            if len(parts) not in (5, 6):
                raise GraphError("%s: expected 'edge <name> <kind> <he> <he> [k=v]'" % where)
            name, kind = parts[1], parts[2]
            if kind not in ("inner", "pending", "loop"):
                raise GraphError("%s: unknown edge kind %r" % (where, kind))
            if name in edges:
                raise GraphError("%s: duplicate edge name %s" % (where, name))
            value = None
            if len(parts) == 6:
                if "=" not in parts[5]:
                    raise GraphError("%s: malformed value %r" % (where, parts[5]))
                key, raw = parts[5].split("=", 1)
                value = _parse_value(kind, key, raw, where)
            edges[name] = Edge(name, kind, (parts[3], parts[4]), value)
        else:
            raise GraphError("%s: unknown directive %r" % (where, head))

    try:
        return FatGraph(vertices, cusps, edges, declared)
    except GraphError:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise GraphError(str(exc)) from exc


def _format_value(value: Optional[tuple]) -> str:
    if value is None:
        return ""
    tag, payload = value
    if tag == "exp":
        return " Z=%s" % payload
    if tag == "lin":
        return " Z=%r" % payload
    if tag == "omega":
        return " omega=%s" % payload
    if tag == "omega_float":
        return " omega=%r" % payload
    raise GraphError("unknown value payload %r" % (value,))


def emit_graph(graph: FatGraph, point=None) -> str:
    """Serialize back to the file format, optionally writing the value
    fields from a coordinate point."""
    counts = graph.counts()
    lines = [
        "surface g=%d sh=%d so=%d n=%d"
        % (counts["genus2x"] // 2, counts["cusped_faces"], counts["monogons"], counts["cusps"])
    ]
    for vid, hs in graph.vertices.items():
        lines.append("vertex %s ccw: %s %s %s" % (vid, *hs))
    for cid, h in graph.cusps.items():
        lines.append("cusp %s half: %s" % (cid, h))
    for e in graph.edges.values():
        value = e.value
        if point is not None:
            value = point.edge_payload(e.name)
        field = _format_value(value)
        if e.kind == "pending" and field.startswith(" Z="):
            field = " pi=" + field[3:]
        lines.append("edge %s %s %s %s%s" % (e.name, e.kind, e.halves[0], e.halves[1], field))
    return "\n".join(lines) + "\n"
