"""Command line front end.

Every subcommand reads the line-oriented graph format, prints
deterministic text (exact values as integers or fractions, floats with
explicit precision), and exits 0 on success and nonzero with a
diagnostic on stderr otherwise.  Output is byte-identical for identical
command, input, and seed.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import SqrtRational
from .coords import LambdaAssignment, lambda_of_dual_arcs, shear_from_lambda
from .flips import flip_inner, flip_loop_adjacent, verify_flip_matrix_identities
from .forms import center_vectors, penner_form_matrix, poisson_matrix, verify_inverse, window_form_matrix
from .fuzz import SUITES, run_suite
from .paths import PathWord, compile_path, evaluate, geodesic_function, lambda_length
from .ribbon import FatGraph, GraphError, dual_arc, emit_graph, parse_graph, validate, windows

__all__ = ["FuzzConfig", "main"]


@dataclass
class FuzzConfig:
    """Settings for one fuzz run; the same seed replays the same corpus."""

    seed: int = 1
    trials: int = 50
    tolerance: float = 1e-6
    suites: tuple[str, ...] = field(default_factory=lambda: tuple(SUITES))


def _die(msg: str) -> int:
    print("error: %s" % msg, file=sys.stderr)
    return 2


def _load(path: str) -> FatGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _render(v) -> str:
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def cmd_validate(args) -> int:
    graph = _load(args.graph)
    report = validate(graph)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def cmd_windows(args) -> int:
    graph = _load(args.graph)
    wins = windows(graph)
    if args.format == "tsv":
        print("window\thole\tstart\tend\ttokens\torder")
        for i, w in enumerate(wins):
            print("%d\t%d\t%s\t%s\t%s\t%s" % (
                i, w.hole, w.start_cusp, w.end_cusp,
                ",".join(w.tokens), ",".join(w.coordinate_tokens(graph))))
        return 0
    for i, w in enumerate(wins):
        print("window %d of hole %d: %s -> %s" % (i, w.hole, w.start_cusp, w.end_cusp))
        print("  tokens %s" % ",".join(w.tokens))
        print("  order  %s" % ",".join(w.coordinate_tokens(graph)))
    return 0


def cmd_dual_arcs(args) -> int:
    graph = _load(args.graph)
    names = args.edges or graph.coordinate_edges()
    rows = []
    for name in names:
        arc = dual_arc(graph, name)
        word = compile_path(graph, arc)
        lam = lambda_length(graph, arc)
        rows.append((name, arc, word, lam))
    if args.format == "tsv":
        print("edge\tstart\tend\tpath\tword\tlambda")
        for name, arc, word, lam in rows:
            print("%s\t%s\t%s\t%s\t%s\t%s" % (name, arc.start_cusp, arc.end_cusp, arc.token_string(), word, lam))
        return 0
    for name, arc, word, lam in rows:
        print("dual %s: %s -> %s" % (name, arc.start_cusp, arc.end_cusp))
        print("  path   %s" % arc.token_string())
        print("  word   %s" % word)
        print("  lambda %s" % lam)
    return 0


def cmd_lambda(args) -> int:
    graph = _load(args.graph)
    path = PathWord.from_tokens(graph, args.path.split(","))
    formal = lambda_length(graph, path)
    value = lambda_length(graph, path, graph.point())
    print("formal %s" % formal)
    print("value  %s" % _render(value))
    return 0


def cmd_geodesic(args) -> int:
    graph = _load(args.graph)
    path = PathWord.from_tokens(graph, args.path.split(","), closed=True)
    word = compile_path(graph, path)
    formal = evaluate(word).trace()
    gf = geodesic_function(graph, path, graph.point())
    print("word   %s" % word)
    print("formal %s" % formal)
    print("trace  %s" % _render(gf.raw_trace))
    print("value  %s" % _render(gf.value))
    return 0


def cmd_lambda_from_shear(args) -> int:
    graph = _load(args.graph)
    assignment = lambda_of_dual_arcs(graph, graph.point())
    if args.format == "tsv":
        print("kind\tedge\tvalue")
        for name, value in assignment.items():
            print("lambda\t%s\t%s" % (name, _render(value)))
        for name, value in sorted(assignment.omega.items()):
            print("omega\t%s\t%s" % (name, _render(value)))
        return 0
    for name, value in assignment.items():
        print("lambda %s = %s" % (name, _render(value)))
    for name, value in sorted(assignment.omega.items()):
        print("omega %s = %s" % (name, _render(value)))
    return 0


_SQRT_RE = re.compile(r"^(?:([+-]?\d+(?:/\d+)?)\*)?sqrt\((\d+)\)$")
_FRAC_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_value(text: str):
    text = text.strip()
    m = _SQRT_RE.match(text)
    if m:
        rat = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        return SqrtRational(rat, int(m.group(2)))
    if _FRAC_RE.match(text):
        return SqrtRational(Fraction(text))
    return float(text)


def _read_lambda_file(path: str) -> LambdaAssignment:
    values: dict[str, object] = {}
    omega: dict[str, object] = {}
    exact = True
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.match(r"^(lambda|omega)\s+(\S+)\s*=\s*(\S+)$", line)
            if not m:
                raise ValueError("line %d: expected 'lambda <edge> = <value>' or 'omega <loop> = <value>'" % lineno)
            kind, name, text = m.groups()
            value = _parse_value(text)
            if isinstance(value, float):
                exact = False
            if kind == "lambda":
                values[name] = value
            else:
                omega[name] = value
    if not exact:
        values = {k: float(v) if isinstance(v, SqrtRational) else v for k, v in values.items()}
        omega = {k: float(v) if isinstance(v, SqrtRational) else v for k, v in omega.items()}
    else:
        omega = {k: v.rat if isinstance(v, SqrtRational) else v for k, v in omega.items()}
    return LambdaAssignment(values, exact, omega)


def cmd_shear_from_lambda(args) -> int:
    graph = _load(args.graph)
    assignment = _read_lambda_file(args.lambdas)
    point = shear_from_lambda(graph, assignment)
    sys.stdout.write(emit_graph(graph, point))
    return 0


def _touches_loop(graph: FatGraph, name: str) -> bool:
    for h in graph.edges[name].halves:
        v = graph.vertex_of(h)
        if any(graph.edges[graph.edge_of(x)].kind == "loop" for x in graph.halves_at(v)):
            return True
    return False


def cmd_flip(args) -> int:
    graph = _load(args.graph)
    if args.edge not in graph.edges:
        return _die("no edge named %s" % args.edge)
    point = graph.point()
    kind = graph.edges[args.edge].kind
    if kind == "loop" or (kind == "inner" and _touches_loop(graph, args.edge)):
        flipped, new_point, record = flip_loop_adjacent(graph, args.edge, point)
    else:
        flipped, new_point, record = flip_inner(graph, args.edge, point)
    text = emit_graph(flipped, new_point)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print("flipped %s (%s); slots %s" % (
            record.edge, record.kind,
            " ".join("%s=%s" % kv for kv in sorted(record.slots.items()))))
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify_flip_identities(args) -> int:
    results = verify_flip_matrix_identities()
    ok = True
    for label, passed in results:
        print("%-18s %s" % (label, "ok" if passed else "FAIL"))
        ok = ok and passed
    return 0 if ok else 1


def cmd_forms(args) -> int:
    graph = _load(args.graph)
    sections = [
        ("poisson bracket table", poisson_matrix(graph)),
        ("window form", window_form_matrix(graph)),
        ("vertex-sum form", penner_form_matrix(graph)),
    ]
    if args.format == "tsv":
        print("matrix\trow\tcol\tvalue")
        for title, mat in sections:
            for i, u in enumerate(mat.names):
                for j, v in enumerate(mat.names):
                    if mat.data[i][j]:
                        print("%s\t%s\t%s\t%s" % (title, u, v, mat.data[i][j]))
        basis = center_vectors(graph)
        for face, vec in basis.holes:
            for name, c in zip(basis.names, vec):
                if c:
                    print("center\thole %d\t%s\t%s" % (face, name, c))
        return 0
    for title, mat in sections:
        print("# %s" % title)
        for line in mat.lines():
            print(line)
    print("# centers")
    for line in center_vectors(graph).lines():
        print(line)
    return 0


def cmd_verify_inverse(args) -> int:
    graph = _load(args.graph)
    window = window_form_matrix(graph)
    table = poisson_matrix(graph)
    block = window.nonzero_row_names()
    if not block:
        return _die("window form is identically zero; nothing to invert")
    c, residual = verify_inverse(window.restrict(block), table.restrict(block), leaf=args.leaf)
    print("block %s" % " ".join(block))
    if c is None:
        print("product is not a scalar matrix")
        return 1
    print("c = %s" % c)
    print("residual = %s" % residual)
    return 0 if residual == 0 else 1


def cmd_fuzz(args) -> int:
    if args.suite:
        names = [s.strip() for s in args.suite.split(",") if s.strip()]
    else:
        names = list(SUITES)
    for name in names:
        if name not in SUITES:
            return _die("unknown suite %r; choose from %s" % (name, ", ".join(SUITES)))
    config = FuzzConfig(seed=args.seed, trials=args.trials, tolerance=args.tolerance, suites=tuple(names))
    ok = True
    if args.format == "tsv":
        print("suite\tstatus\ttrials\tfailures\tinfo")
        for name in config.suites:
            r = run_suite(name, config.trials, config.seed)
            info = " ".join("%s=%s" % kv for kv in sorted(r.info.items()))
            print("%s\t%s\t%d\t%d\t%s" % (r.name, "pass" if r.ok else "FAIL", r.trials, len(r.failures), info))
            ok = ok and r.ok
        return 0 if ok else 1
    print("fuzz seed=%d trials=%d" % (config.seed, config.trials))
    for name in config.suites:
        r = run_suite(name, config.trials, config.seed)
        print(r.summary())
        ok = ok and r.ok
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spineforms",
        description="Exact fat-graph spines: windows, lambda-lengths, flips, Poisson and symplectic forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate, "check a graph file against the structural rules")
    p.add_argument("graph")

    p = add("windows", cmd_windows, "print each hole's boundary windows")
    p.add_argument("graph")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = add("dual-arcs", cmd_dual_arcs, "print the dual arc of each coordinate edge")
    p.add_argument("graph")
    p.add_argument("edges", nargs="*", metavar="edge")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = add("lambda", cmd_lambda, "lambda-length of a comma-separated arc, e.g. p2,e,p3")
    p.add_argument("graph")
    p.add_argument("path")

    p = add("geodesic", cmd_geodesic, "geodesic function of a closed path, e.g. pi,a1,w1+,a1,pi")
    p.add_argument("graph")
    p.add_argument("path")

    p = add("lambda-from-shear", cmd_lambda_from_shear, "lambda-lengths of all dual arcs at the file's values")
    p.add_argument("graph")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = add("shear-from-lambda", cmd_shear_from_lambda, "rebuild the graph file's values from a lambda listing")
    p.add_argument("graph")
    p.add_argument("lambdas", help="file of 'lambda <edge> = <value>' and 'omega <loop> = <value>' lines")

    p = add("flip", cmd_flip, "flip an edge and write the transformed graph file")
    p.add_argument("graph")
    p.add_argument("edge")
    p.add_argument("-o", "--output", help="write here instead of stdout")

    add("verify-flip-identities", cmd_verify_flip_identities, "check the flip matrix identities symbolically")

    p = add("forms", cmd_forms, "dump the bracket table, both 2-forms, and the centers")
    p.add_argument("graph")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = add("verify-inverse", cmd_verify_inverse, "check the window form inverts the bracket on its nonzero block")
    p.add_argument("graph")
    p.add_argument("--leaf", action="store_true", help="project onto the symplectic leaf first")

    p = add("fuzz", cmd_fuzz, "run randomized property suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--tolerance", type=float, default=1e-6, help="numeric comparison tolerance")
    p.add_argument("--suite", help="comma-separated suite names (default: all)")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, ValueError) as exc:
        return _die(str(exc))
    except OSError as exc:
        return _die("%s: %s" % (exc.filename, exc.strerror))


if __name__ == "__main__":
    sys.exit(main())
