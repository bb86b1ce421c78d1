"""Command-line front end.

Subcommands: mutate, enumerate, forms, verify, export.  Matrices come from
a file or an inline argument, either as JSON {"n", "m", "rows"} or as
plain whitespace-separated rows for m = 0.  Directions are 1-based and
paths are comma-separated.  Identical invocations print identical bytes.

Exit codes: 0 success, 1 refuted verification, 2 usage error, 3 budget
exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .errors import (
    BadDirection,
    BudgetExceeded,
    ClusterMutError,
    ContextMismatch,
    NondegenerateRequired,
    NotSkewSymmetrizable,
    ParseError,
    ZeroRowUnsupported,
)
from .forms import compatible_form_space, mutate_form
from .graph import (
    DEFAULT_DEPTH,
    DEFAULT_MAX_TERMS,
    DEFAULT_MAX_VERTICES,
    enumerate_graph,
    reduced_paths,
)
from .seeds import (
    ExchangeMatrix,
    Seed,
    coefficient_free_seed,
    int_det,
    principal_seed,
)
from .semifield import TropicalElement, TropicalSemifield
from .verify import (
    INCONCLUSIVE,
    REFUTED,
    VerificationReport,
    check_adjacency,
    check_cluster_determines_seed,
    check_g_specialization,
    check_graph_coincidence,
    check_laurent,
    check_toric_invariance,
    merge_reports,
    random_tropical_tuple,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

ALL_CHECKS = ("cluster-seed", "adjacency", "coincide", "g-spec", "toric", "laurent")


def load_matrix(source: str) -> ExchangeMatrix:
    """Accept a file path, inline JSON, or inline whitespace rows."""
    text = source
    if os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("{"):
        return ExchangeMatrix.from_json(text)
    rows = []
    for lineno, line in enumerate(text.replace(";", "\n").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        row = []
        for col, tok in enumerate(line.replace(",", " ").split(), start=1):
            try:
                row.append(int(tok))
            except ValueError:
                raise ParseError(f"line {lineno}, column {col}: {tok!r} is not an integer")
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix")
    n = len(rows)
    for lineno, row in enumerate(rows, start=1):
        if len(row) != n:
            raise ParseError(
                f"line {lineno}: expected {n} entries for a square matrix, got {len(row)}"
            )
    return ExchangeMatrix.from_rows(rows, 0)


def build_seed(matrix: ExchangeMatrix, coeffs: str, rng_seed: int) -> Seed:
    """Coefficient mode: trivial | principal | tropical:M | file:PATH; an
    extended input matrix always selects geometric mode directly."""
    if matrix.m > 0:
        if coeffs != "trivial":
            raise ParseError("an extended matrix already fixes the coefficients")
        return Seed.initial_geometric(matrix)
    if coeffs == "trivial":
        return coefficient_free_seed(matrix)
    if coeffs == "principal":
        return principal_seed(matrix)
    if coeffs.startswith("tropical:"):
        try:
            rank = int(coeffs.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad tropical rank in {coeffs!r}")
        rng = random.Random(rng_seed)
        return Seed.initial_general(
            matrix, TropicalSemifield(rank), random_tropical_tuple(matrix.n, rank, rng)
        )
    if coeffs.startswith("file:"):
        with open(coeffs.split(":", 1)[1]) as fh:
            obj = json.load(fh)
        rank = int(obj["rank"])
        tuples = [TropicalElement(t) for t in obj["coefficients"]]
        if len(tuples) != matrix.n:
            raise ParseError(f"need {matrix.n} coefficient vectors")
        return Seed.initial_general(matrix, TropicalSemifield(rank), tuple(tuples))
    raise ParseError(f"unknown coefficient mode {coeffs!r}")


def parse_path(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParseError(f"bad mutation path {text!r}; expected comma-separated directions")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustermut",
        description="Exact cluster-algebra seeds, mutations, exchange graphs, "
        "compatible 2-forms, and theorem checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_coeffs=True):
        p.add_argument("matrix", help="matrix file, inline JSON, or whitespace rows")
        if with_coeffs:
            p.add_argument(
                "--coeffs",
                default="trivial",
                help="trivial | principal | tropical:M | file:PATH (default: trivial)",
            )
        p.add_argument("--format", default="text", choices=["text", "json", "dot"])
        p.add_argument("--depth", type=int, default=None, help="mutation depth limit")
        p.add_argument("--max-vertices", type=int, default=None)
        p.add_argument("--max-terms", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0, help="seed for randomized coefficients")

    p_mutate = sub.add_parser("mutate", help="apply a mutation path and print the seed")
    add_common(p_mutate)
    p_mutate.add_argument("path", help="comma-separated 1-based directions, e.g. 1,2,1")

    p_enum = sub.add_parser("enumerate", help="enumerate the exchange graph")
    add_common(p_enum)

    p_export = sub.add_parser("export", help="export the exchange graph")
    add_common(p_export)
    p_export.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    p_forms = sub.add_parser("forms", help="compatible 2-form basis")
    p_forms.add_argument("matrix")
    p_forms.add_argument("--format", default="text", choices=["text", "json"])
    p_forms.add_argument("--mutate", type=int, default=None, metavar="K",
                         help="also print the basis mutated in direction K")

    p_verify = sub.add_parser("verify", help="machine-check the structural theorems")
    add_common(p_verify)
    p_verify.add_argument("--check", default="all", choices=("all",) + ALL_CHECKS)
    p_verify.add_argument("--timings", action="store_true", help="include wall-clock times")
    return parser


def _budgets(args) -> tuple[int, int]:
    max_vertices = args.max_vertices
    if max_vertices is None:
        max_vertices = int(os.environ.get("CLUSTERMUT_MAX_VERTICES", DEFAULT_MAX_VERTICES))
    max_terms = args.max_terms
    if max_terms is None:
        max_terms = int(os.environ.get("CLUSTERMUT_MAX_TERMS", DEFAULT_MAX_TERMS))
    return max_vertices, max_terms


def cmd_mutate(args, out) -> int:
    matrix = load_matrix(args.matrix)
    seed = build_seed(matrix, args.coeffs, args.seed)
    seed = seed.mutate_path(parse_path(args.path))
    if args.format == "json":
        obj = {
            "cluster": [str(p) for p in seed.cluster],
            "coefficients": [str(y) for y in seed.coefficient_tuple()],
            "matrix": {"n": seed.matrix.n, "m": seed.matrix.m,
                       "rows": [list(r) for r in seed.matrix.rows]},
        }
        out.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    else:
        out.write(str(seed) + "\n")
    return EXIT_OK


def _enumerate(args):
    matrix = load_matrix(args.matrix)
    seed = build_seed(matrix, args.coeffs, args.seed)
    depth = args.depth if args.depth is not None else DEFAULT_DEPTH
    max_vertices, max_terms = _budgets(args)
    return enumerate_graph(
        seed, depth, max_vertices=max_vertices, max_terms=max_terms, workers=args.workers
    )


def cmd_enumerate(args, out) -> int:
    graph = _enumerate(args)
    if args.format == "json":
        out.write(graph.to_json() + "\n")
    elif args.format == "dot":
        out.write(graph.to_dot())
    else:
        status = "complete" if graph.complete else "frontier"
        out.write(f"{graph.vertex_count} vertices, {graph.edge_count} edges, {status}\n")
    return EXIT_OK


def cmd_export(args, out) -> int:
    graph = _enumerate(args)
    fmt = "dot" if args.format == "text" else args.format
    data = graph.export(fmt)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        out.write(data.decode())
    return EXIT_OK


def cmd_forms(args, out) -> int:
    matrix = load_matrix(args.matrix)
    space = compatible_form_space(matrix)
    mutated = None
    if args.mutate is not None:
        mutated = [mutate_form(f, matrix, args.mutate) for f in space.basis]
    if args.format == "json":
        obj = {
            "dimension": space.dimension,
            "basis": [[[str(x) for x in row] for row in f.omega] for f in space.basis],
        }
        if mutated is not None:
            obj["mutated"] = [[[str(x) for x in row] for row in f.omega] for f in mutated]
        out.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    else:
        out.write(f"dimension {space.dimension}\n")
        for i, f in enumerate(space.basis):
            out.write(f"basis element {i + 1}:\n{f}\n")
        if mutated is not None:
            for i, f in enumerate(mutated):
                out.write(f"mutated element {i + 1} (direction {args.mutate}):\n{f}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    matrix = load_matrix(args.matrix)
    depth = args.depth if args.depth is not None else 6
    max_vertices, max_terms = _budgets(args)
    wanted = ALL_CHECKS if args.check == "all" else (args.check,)
    reports: list[VerificationReport] = []
    if "cluster-seed" in wanted or "adjacency" in wanted:
        seed = build_seed(matrix, args.coeffs, args.seed)
        graph = enumerate_graph(
            seed, depth, max_vertices=max_vertices, max_terms=max_terms,
            workers=args.workers,
        )
        if "cluster-seed" in wanted:
            reports.append(check_cluster_determines_seed(graph))
        if "adjacency" in wanted:
            reports.append(check_adjacency(graph))
    if "coincide" in wanted:
        reports.append(check_graph_coincidence(matrix, depth, args.seed))
    path_depth = min(depth, 4)
    if "g-spec" in wanted:
        reports.extend(
            check_g_specialization(matrix, path)
            for path in reduced_paths(matrix.n, path_depth)
        )
    if "toric" in wanted:
        if int_det(matrix.principal().rows) == 0:
            reports.append(
                VerificationReport(
                    "toric", f"B={matrix.principal().to_json()}", INCONCLUSIVE,
                    "det B = 0: nondegeneracy hypothesis unmet",
                )
            )
        else:
            reports.extend(
                check_toric_invariance(matrix, path)
                for path in reduced_paths(matrix.n, path_depth)
            )
    if "laurent" in wanted:
        seed = build_seed(matrix, args.coeffs, args.seed)
        reports.append(
            check_laurent(seed, depth, max_vertices=max_vertices, max_terms=max_terms,
                          workers=args.workers)
        )
    merged = merge_reports(reports)
    if args.format == "json":
        out.write(
            json.dumps([r.to_dict(include_timing=args.timings) for r in merged],
                       indent=1, sort_keys=True) + "\n"
        )
    else:
        for r in merged:
            line = f"{r.check}: {r.verdict}"
            if r.witness:
                line += f" [{r.witness}]"
            out.write(line + "\n")
    if any(r.verdict == REFUTED for r in merged):
        return EXIT_REFUTED
    return EXIT_OK


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "mutate":
            return cmd_mutate(args, out)
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        if args.command == "export":
            return cmd_export(args, out)
        if args.command == "forms":
            return cmd_forms(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        parser.error(f"unknown command {args.command!r}")
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        ParseError,
        NondegenerateRequired,
        BadDirection,
        ContextMismatch,
        NotSkewSymmetrizable,
        ZeroRowUnsupported,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClusterMutError as exc:
        # NotDivisible and friends: the engine caught a broken invariant
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
