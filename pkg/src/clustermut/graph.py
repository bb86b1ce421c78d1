"""Exchange graph enumeration: the quotient of the n-regular tree by seed
equivalence.

Vertices are canonical seed representatives, deduplicated by the stable key
from Seed.key(); breadth-first layers expand in a fixed order (and may fan
out over a thread pool), so the resulting graph is byte-deterministic
regardless of worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import BudgetExceeded, ContextMismatch, ParseError
from .laurent import parse_poly
from .seeds import (
    GEOMETRIC,
    ExchangeMatrix,
    Seed,
    TrivialSemifield,
    TropicalSemifield,
)
from .semifield import parse_tropical

DEFAULT_DEPTH = 8
DEFAULT_MAX_VERTICES = 10 ** 6
DEFAULT_MAX_TERMS = 10 ** 7


def canonicalize_seed(seed: Seed) -> bytes:
    """Permutation-invariant key; equal iff the seeds are equivalent."""
    return seed.key()


@dataclass
class ExchangeGraph:
    """Quotient graph with per-vertex direction maps.

    neighbors[u][k] = index reached from the canonical representative of u
    by mutating in direction k; only expanded (non-frontier) vertices carry
    all n directions.
    """

    seeds: list[Seed]
    keys: list[bytes]
    depths: list[int]
    frontier: list[bool]
    neighbors: list[dict[int, int]]
    complete: bool
    stats: dict = field(default_factory=dict)

    @property
    def vertex_count(self) -> int:
        return len(self.seeds)

    def edges(self) -> list[tuple[int, int, tuple[int, ...]]]:
        """Undirected edge list (u < v) with the union of direction labels
        realizing the edge from either endpoint."""
        labels: dict[tuple[int, int], set[int]] = {}
        for u, nbrs in enumerate(self.neighbors):
            for k, v in nbrs.items():
                a, b = (u, v) if u <= v else (v, u)
                labels.setdefault((a, b), set()).add(k)
        return [(u, v, tuple(sorted(ks))) for (u, v), ks in sorted(labels.items())]

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    def degrees(self) -> list[int]:
        degree = [0] * self.vertex_count
        for u, v, _ in self.edges():
            degree[u] += 1
            if v != u:
                degree[v] += 1
        return degree

    def cluster_sets(self) -> list[tuple[str, ...]]:
        """Rendered cluster of each canonical representative; entries are
        already sorted by the term order, so equal sets compare equal."""
        return [tuple(str(p) for p in s.cluster) for s in self.seeds]

    def __eq__(self, other):
        if not isinstance(other, ExchangeGraph):
            return NotImplemented
        return (
            self.keys == other.keys
            and self.depths == other.depths
            and self.frontier == other.frontier
            and self.neighbors == other.neighbors
            and self.complete == other.complete
        )

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        seed0 = self.seeds[0]
        if seed0.mode == GEOMETRIC:
            coeff_kind = "geometric"
        else:
            coeff_kind = seed0.semifield.kind
        obj = {
            "mode": seed0.mode,
            "coefficients": coeff_kind,
            "rank": getattr(seed0.semifield, "rank", seed0.m),
            "n": seed0.n,
            "m": seed0.m,
            "vars": list(seed0.vars),
            "complete": self.complete,
            "vertices": [
                {
                    "id": i,
                    "depth": self.depths[i],
                    "frontier": self.frontier[i],
                    "cluster": [str(p) for p in s.cluster],
                    "coeffs": None if s.coeffs is None else [str(y) for y in s.coeffs],
                    "matrix": {"n": s.matrix.n, "m": s.matrix.m, "rows": [list(r) for r in s.matrix.rows]},
                    "neighbors": {str(k): v for k, v in sorted(self.neighbors[i].items())},
                }
                for i, s in enumerate(self.seeds)
            ],
            "edges": [
                {"u": u, "v": v, "labels": list(ks)} for u, v, ks in self.edges()
            ],
        }
        return json.dumps(obj, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExchangeGraph":
        try:
            obj = json.loads(text)
            vars = tuple(obj["vars"])
            mode = obj["mode"]
            kind = obj["coefficients"]
            rank = int(obj["rank"])
            seeds = []
            depths, frontier, neighbors = [], [], []
            for vtx in obj["vertices"]:
                matrix = ExchangeMatrix.from_rows(vtx["matrix"]["rows"], vtx["matrix"]["m"])
                cluster = tuple(parse_poly(vars, s) for s in vtx["cluster"])
                if mode == GEOMETRIC:
                    seed = Seed(matrix, cluster, GEOMETRIC, None, None, vars)
                elif kind == "trivial":
                    sf = TrivialSemifield()
                    seed = Seed(matrix, cluster, "general", sf, tuple(sf.one() for _ in cluster), vars)
                elif kind == "tropical":
                    sf = TropicalSemifield(rank)
                    coeffs = tuple(parse_tropical(rank, s) for s in vtx["coeffs"])
                    seed = Seed(matrix, cluster, "general", sf, coeffs, vars)
                else:
                    raise ParseError(f"cannot rebuild seeds over {kind!r} coefficients")
                seeds.append(seed)
                depths.append(int(vtx["depth"]))
                frontier.append(bool(vtx["frontier"]))
                neighbors.append({int(k): int(v) for k, v in vtx["neighbors"].items()})
            keys = [s.key() for s in seeds]
            return cls(seeds, keys, depths, frontier, neighbors, bool(obj["complete"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from exc

    def to_dot(self) -> str:
        lines = ["graph exchange {"]
        for i, s in enumerate(self.seeds):
            label = ", ".join(str(p) for p in s.cluster)
            suffix = " (frontier)" if self.frontier[i] else ""
            lines.append(f'  v{i} [label="{label}{suffix}"];')
        for u, v, ks in self.edges():
            lines.append(f'  v{u} -- v{v} [label="{",".join(str(k) for k in ks)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def export(self, format: str) -> bytes:
        """Reproducible byte-exact export; identical graphs give identical
        bytes."""
        if format == "dot":
            return self.to_dot().encode()
        if format == "json":
            return (self.to_json() + "\n").encode()
        raise ParseError(f"unknown export format {format!r}")


def enumerate_graph(
    initial: Seed,
    depth_limit: int = DEFAULT_DEPTH,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_terms: int = DEFAULT_MAX_TERMS,
    workers: int = 1,
) -> ExchangeGraph:
    """Breadth-first closure of mutation in all n directions.

    Expansion stops after depth_limit layers; vertices discovered in the
    last layer that never expanded are flagged as frontier.  Vertex or term
    budget overruns raise BudgetExceeded carrying the partial graph.
    """
    if depth_limit < 0:
        raise ContextMismatch("depth_limit must be nonnegative")
    n = initial.n
    rep0 = initial.canonicalized()
    seeds = [rep0]
    keys = [rep0.key()]
    index = {keys[0]: 0}
    depths = [0]
    neighbors: list[dict[int, int]] = [{}]
    term_total = sum(len(p.terms) for p in rep0.cluster)

    def snapshot(complete: bool) -> ExchangeGraph:
        # a vertex is frontier exactly when it never resolved all n directions
        frontier = [len(nbrs) < n for nbrs in neighbors]
        return ExchangeGraph(seeds, keys, depths, frontier, neighbors, complete and not any(frontier))

    layer = [0]
    depth = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while layer and depth < depth_limit:
            jobs = [(u, k) for u in layer for k in range(1, n + 1)]

            def expand(job: tuple[int, int]):
                u, k = job
                child = seeds[u].mutate(k).canonicalized()
                return child, child.key()

            results = list(pool.map(expand, jobs)) if pool else [expand(j) for j in jobs]
            new_layer: list[int] = []
            for (u, k), (child, ck) in zip(jobs, results):
                idx = index.get(ck)
                if idx is None:
                    if len(seeds) + 1 > max_vertices:
                        raise BudgetExceeded(
                            f"vertex budget {max_vertices} exhausted", snapshot(False)
                        )
                    term_total += sum(len(p.terms) for p in child.cluster)
                    if term_total > max_terms:
                        raise BudgetExceeded(
                            f"term budget {max_terms} exhausted", snapshot(False)
                        )
                    idx = len(seeds)
                    seeds.append(child)
                    keys.append(ck)
                    index[ck] = idx
                    depths.append(depth + 1)
                    neighbors.append({})
                    new_layer.append(idx)
                neighbors[u][k] = idx
            layer = new_layer
            depth += 1
    finally:
        if pool:
            pool.shutdown(wait=False)

    graph = snapshot(True)
    graph.stats = {"vertices": len(seeds), "depth_reached": depth}
    return graph


@dataclass
class LockstepResult:
    """Outcome of walking the n-regular tree with two seeds in lockstep."""

    coincide: bool
    divergence: tuple[tuple[int, ...], tuple[int, ...]] | None
    nodes: int
    a_covers_b: bool
    b_covers_a: bool


def compare_by_paths(a: Seed, b: Seed, depth: int) -> LockstepResult:
    """Walk all reduced mutation paths to the given depth and compare the
    two quotient identifications.

    Both seeds must share the principal exchange matrix and rank; the
    result reports whether the same pairs of tree vertices are glued, and
    if not, the first divergent pair of paths in breadth-first order.
    """
    if a.n != b.n:
        raise ContextMismatch("seeds have different ranks")
    if a.matrix.principal().rows != b.matrix.principal().rows:
        raise ContextMismatch("seeds have different principal exchange matrices")
    n = a.n
    paths: list[tuple[int, ...]] = [()]
    seeds_a, seeds_b = [a], [b]
    first_a: dict[bytes, int] = {}
    first_b: dict[bytes, int] = {}
    labels_a: list[int] = []
    labels_b: list[int] = []
    head = 0
    while head < len(paths):
        path = paths[head]
        sa, sb = seeds_a[head], seeds_b[head]
        labels_a.append(first_a.setdefault(sa.key(), head))
        labels_b.append(first_b.setdefault(sb.key(), head))
        if len(path) < depth:
            last = path[-1] if path else 0
            for k in range(1, n + 1):
                if k == last:
                    continue
                paths.append(path + (k,))
                seeds_a.append(sa.mutate(k))
                seeds_b.append(sb.mutate(k))
        head += 1

    divergence = None
    coincide = True
    a_covers_b = True
    b_covers_a = True
    for v in range(len(paths)):
        la, lb = labels_a[v], labels_b[v]
        if la != lb and coincide:
            coincide = False
            partner = min(la, lb)
            divergence = (paths[v], paths[partner])
        if labels_b[la] != labels_b[v]:
            a_covers_b = False
        if labels_a[lb] != labels_a[v]:
            b_covers_a = False
    return LockstepResult(coincide, divergence, len(paths), a_covers_b, b_covers_a)


def reduced_paths(n: int, max_len: int) -> list[tuple[int, ...]]:
    """All mutation paths up to max_len with no immediate backtracking,
    in breadth-first order."""
    out: list[tuple[int, ...]] = [()]
    head = 0
    while head < len(out):
        path = out[head]
        if len(path) < max_len:
            last = path[-1] if path else 0
            for k in range(1, n + 1):
                if k != last:
                    out.append(path + (k,))
        head += 1
    return out
