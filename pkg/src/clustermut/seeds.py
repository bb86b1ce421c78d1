"""Seeds, exchange matrices, and the mutation rules.

Directions are 1-based throughout, matching the usual [1, n] edge labels of
the n-regular tree.  Seeds are immutable; mutation returns a fresh seed.

A geometric seed carries an extended n x (n+m) matrix whose stable columns
encode the coefficients; its ambient context is x1..x{n+m} (possibly with
extra formal parameters appended).  A general seed carries an n x n matrix
plus an explicit coefficient tuple over one of the concrete semifields; the
semifield generators occupy ambient positions n..n+rank-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    BadDirection,
    ContextMismatch,
    DegenerateSeed,
    NondegenerateRequired,
    NotSkewSymmetrizable,
    ParseError,
)
from .laurent import LaurentFraction, LaurentPolynomial, ambient_vars
from .semifield import (
    SubtractionFreeRational,
    SubtractionFreeSemifield,
    TrivialSemifield,
    TropicalElement,
    TropicalSemifield,
)

GENERAL = "general"
GEOMETRIC = "geometric"


@dataclass(frozen=True)
class ExchangeMatrix:
    """Integer n x (n+m) matrix; the principal n x n part drives mutation."""

    rows: tuple[tuple[int, ...], ...]
    n: int
    m: int

    def __post_init__(self):
        if len(self.rows) != self.n or any(len(r) != self.n + self.m for r in self.rows):
            raise ParseError(f"matrix shape must be {self.n} x {self.n + self.m}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], m: int | None = None) -> "ExchangeMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if m is None:
            m = (len(rows[0]) - n) if rows else 0
        return cls(rows, n, m)

    def principal(self) -> "ExchangeMatrix":
        if self.m == 0:
            return self
        return ExchangeMatrix(tuple(r[: self.n] for r in self.rows), self.n, 0)

    def entry(self, i: int, j: int) -> int:
        """1-based accessor b_ij."""
        return self.rows[i - 1][j - 1]

    def mutate(self, k: int) -> "ExchangeMatrix":
        """Matrix mutation in direction k: sign flip on row/column k, else
        b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2 (always an integer)."""
        if not 1 <= k <= self.n:
            raise BadDirection(f"direction {k} outside [1, {self.n}]")
        kk = k - 1
        out = []
        for i in range(self.n):
            bik = self.rows[i][kk]
            row = []
            for j in range(self.n + self.m):
                if i == kk or j == kk:
                    row.append(-self.rows[i][j])
                else:
                    bkj = self.rows[kk][j]
                    row.append(self.rows[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
            out.append(tuple(row))
        return ExchangeMatrix(tuple(out), self.n, self.m)

    def permuted(self, perm: Sequence[int]) -> "ExchangeMatrix":
        """Apply a permutation of [0, n) to rows and principal columns.

        perm[i] is the old index that lands in new slot i; stable columns
        never move.
        """
        out = []
        for i in range(self.n):
            old = self.rows[perm[i]]
            row = [old[perm[j]] for j in range(self.n)]
            row.extend(old[self.n :])
            out.append(tuple(row))
        return ExchangeMatrix(tuple(out), self.n, self.m)

    def has_zero_row(self) -> bool:
        return any(all(x == 0 for x in r) for r in self.rows)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "m": self.m, "rows": [list(r) for r in self.rows]})

    @classmethod
    def from_json(cls, text: str) -> "ExchangeMatrix":
        try:
            obj = json.loads(text)
            return cls.from_rows(obj["rows"], int(obj["m"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix JSON: {exc}") from exc

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


@dataclass(frozen=True)
class Skewsymmetrizer:
    """Minimal positive diagonal D with D B skew-symmetric, plus the block
    partition of [1, n] (connected components on nonzero entries)."""

    d: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def rho(self) -> int:
        return len(self.blocks)


@lru_cache(maxsize=None)
def validate_and_symmetrize(matrix: ExchangeMatrix) -> Skewsymmetrizer:
    """Solve d_i b_ij = -d_j b_ji for positive integers, per-block gcd 1.

    Raises NotSkewSymmetrizable when the sign pattern or a cycle constraint
    rules every D out.
    """
    n = matrix.n
    b = matrix.principal().rows
    for i in range(n):
        for j in range(i + 1, n):
            if b[i][j] * b[j][i] > 0 or (b[i][j] == 0) != (b[j][i] == 0):
                raise NotSkewSymmetrizable(
                    f"sign-skew violated at ({i + 1}, {j + 1}): {b[i][j]}, {b[j][i]}"
                )
    d: list[Fraction | None] = [None] * n
    blocks = []
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        comp = [root]
        queue = [root]
        while queue:
            i = queue.pop()
            for j in range(n):
                if b[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(b[i][j], -b[j][i])
                    comp.append(j)
                    queue.append(j)
        blocks.append(tuple(sorted(comp)))
    for i in range(n):
        for j in range(n):
            if d[i] * b[i][j] != -d[j] * b[j][i]:
                raise NotSkewSymmetrizable(f"no consistent symmetrizer at ({i + 1}, {j + 1})")
    ints = [0] * n
    for comp in blocks:
        lcm = 1
        for i in comp:
            lcm = lcm * d[i].denominator // _gcd(lcm, d[i].denominator)
        vals = [int(d[i] * lcm) for i in comp]
        g = 0
        for v in vals:
            g = _gcd(g, v)
        for i, v in zip(comp, vals):
            ints[i] = v // g
    return Skewsymmetrizer(tuple(ints), tuple(sorted(blocks)))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def matrix_mutate(matrix: ExchangeMatrix, k: int) -> ExchangeMatrix:
    return matrix.mutate(k)


def principal_extension(matrix: ExchangeMatrix) -> ExchangeMatrix:
    """B_pr = [B | I]: principal part B, stable block the identity."""
    if matrix.m != 0:
        raise ContextMismatch("principal extension starts from a plain n x n matrix")
    n = matrix.n
    rows = tuple(
        r + tuple(1 if j == i else 0 for j in range(n)) for i, r in enumerate(matrix.rows)
    )
    return ExchangeMatrix(rows, n, n)


def coefficients_from_extended(matrix: ExchangeMatrix) -> tuple[TropicalElement, ...]:
    """Read y_i off the stable columns of row i."""
    return tuple(TropicalElement(r[matrix.n :]) for r in matrix.rows)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by cofactor expansion; fine for the small n here."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    rest = [r[1:] for r in rows]
    sign = 1
    for i in range(n):
        if rows[i][0]:
            minor = [rest[r] for r in range(n) if r != i]
            total += sign * rows[i][0] * int_det(minor)
        sign = -sign
    return total


def int_adjugate(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """adj(B) = det(B) * B^{-1}, computed entrywise from cofactors."""
    n = len(rows)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


def compute_toric_weights(matrix: ExchangeMatrix) -> tuple[tuple[int, ...], ...]:
    """Weight vectors w^1..w^n of length 2n in the kernel of B_pr.

    First n entries of w^j are the jth column of det(B) * B^{-1} (the
    adjugate column; the row form fails the kernel condition), last n are
    -det(B) * e_j.  The kernel identity B_pr (w^j)^T = 0 is asserted on
    every call.
    """
    b = matrix.principal().rows
    n = matrix.n
    det = int_det(b)
    if det == 0:
        raise NondegenerateRequired("toric weights need det(B) != 0")
    adj = int_adjugate(b)
    weights = []
    for j in range(n):
        w = tuple(adj[i][j] for i in range(n)) + tuple(
            -det if i == j else 0 for i in range(n)
        )
        for i in range(n):
            assert sum(b[i][t] * w[t] for t in range(n)) + w[n + i] == 0, (
                "kernel condition failed"
            )
        weights.append(w)
    return tuple(weights)


def mutate_coefficients(coeffs: tuple, matrix: ExchangeMatrix, k: int, semifield) -> tuple:
    """Coefficient tuple mutation: y_k inverts; otherwise y_j picks up
    y_k^{b_jk} (y_k (+) 1)^{-b_jk} for b_jk > 0 or (y_k (+) 1)^{-b_jk} for
    b_jk <= 0."""
    if not 1 <= k <= matrix.n:
        raise BadDirection(f"direction {k} outside [1, {matrix.n}]")
    yk = coeffs[k - 1]
    u = yk.oplus(semifield.one())
    out = []
    for j in range(1, matrix.n + 1):
        if j == k:
            out.append(yk.inv())
            continue
        bjk = matrix.entry(j, k)
        if bjk > 0:
            out.append(coeffs[j - 1] * yk.pow(bjk) * u.pow(-bjk))
        else:
            out.append(coeffs[j - 1] * u.pow(-bjk))
    return tuple(out)


@dataclass(frozen=True)
class Seed:
    """Triple of cluster, coefficients, and exchange matrix.

    mode "geometric": matrix is extended, coeffs/semifield are None and the
    coefficient tuple is implicit in the stable columns.
    mode "general": matrix is n x n and coeffs holds semifield elements.
    """

    matrix: ExchangeMatrix
    cluster: tuple[LaurentPolynomial, ...]
    mode: str
    semifield: object | None
    coeffs: tuple | None
    vars: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def m(self) -> int:
        return self.matrix.m

    # -- constructors ------------------------------------------------------

    @classmethod
    def initial_geometric(cls, matrix: ExchangeMatrix, extra_vars: Sequence[str] = ()) -> "Seed":
        vars = ambient_vars(matrix.n, matrix.m, extra_vars)
        cluster = tuple(LaurentPolynomial.variable(vars, i) for i in range(matrix.n))
        return cls(matrix, cluster, GEOMETRIC, None, None, vars)

    @classmethod
    def initial_general(
        cls, matrix: ExchangeMatrix, semifield, coeffs: tuple | None = None,
        extra_vars: Sequence[str] = (),
    ) -> "Seed":
        if matrix.m != 0:
            raise ContextMismatch("general seeds take a plain n x n matrix")
        rank = semifield.rank
        if semifield.kind == "tropical":
            vars = ambient_vars(matrix.n) + tuple(f"g{j}" for j in range(1, rank + 1))
        elif semifield.kind == "subtraction-free":
            vars = ambient_vars(matrix.n) + semifield.vars
        else:
            vars = ambient_vars(matrix.n)
        vars = vars + tuple(extra_vars)
        if coeffs is None:
            coeffs = tuple(semifield.one() for _ in range(matrix.n))
        if len(coeffs) != matrix.n:
            raise ContextMismatch(f"need {matrix.n} coefficients")
        cluster = tuple(LaurentPolynomial.variable(vars, i) for i in range(matrix.n))
        return cls(matrix, cluster, GENERAL, semifield, coeffs, vars)

    # -- coefficient access --------------------------------------------------

    def coefficient_tuple(self) -> tuple:
        """The y-tuple: explicit in general mode, read off stable columns
        in geometric mode."""
        if self.mode == GENERAL:
            return self.coeffs
        return coefficients_from_extended(self.matrix)

    def extended_value(self, i: int) -> LaurentPolynomial:
        """0-based entry of the extended cluster: mutable variables first,
        then the stable ambient variables."""
        if i < self.n:
            return self.cluster[i]
        return LaurentPolynomial.variable(self.vars, i)

    def _embed(self, element) -> LaurentPolynomial:
        """Semifield element as a Laurent monomial over the ambient context
        (generator j at position n + j - 1)."""
        if isinstance(element, TropicalElement):
            exps = [0] * len(self.vars)
            for j, a in enumerate(element.exps):
                exps[self.n + j] = a
            return LaurentPolynomial.monomial(self.vars, exps)
        return LaurentPolynomial.one(self.vars)

    def _embed_fraction(self, element) -> LaurentFraction:
        if isinstance(element, SubtractionFreeRational):
            return LaurentFraction(
                element.num.with_vars(self.vars), element.den.with_vars(self.vars)
            )
        return LaurentFraction.from_polynomial(self._embed(element))

    # -- mutation ------------------------------------------------------------

    def mutate(self, k: int) -> "Seed":
        if not 1 <= k <= self.n:
            raise BadDirection(f"direction {k} outside [1, {self.n}]")
        if self.mode == GEOMETRIC:
            return self._mutate_geometric(k)
        return self._mutate_general(k)

    def mutate_path(self, path: Sequence[int]) -> "Seed":
        seed = self
        for k in path:
            seed = seed.mutate(k)
        return seed

    def _mutate_geometric(self, k: int) -> "Seed":
        row = self.matrix.rows[k - 1]
        plus = LaurentPolynomial.one(self.vars)
        minus = LaurentPolynomial.one(self.vars)
        for i, b in enumerate(row):
            if b > 0:
                plus = plus * self.extended_value(i) ** b
            elif b < 0:
                minus = minus * self.extended_value(i) ** (-b)
        new_var = (plus + minus).exact_div(self.cluster[k - 1])
        cluster = self.cluster[: k - 1] + (new_var,) + self.cluster[k:]
        return Seed(self.matrix.mutate(k), cluster, GEOMETRIC, None, None, self.vars)

    def _mutate_general(self, k: int) -> "Seed":
        if self.semifield.kind == "subtraction-free":
            raise ContextMismatch(
                "cluster mutation over subtraction-free coefficients is not "
                "supported; mutate the y-tuple with mutate_coefficients instead"
            )
        yk = self.coeffs[k - 1]
        u_inv = yk.oplus(self.semifield.one()).inv()
        c_plus = self._embed(yk * u_inv)
        c_minus = self._embed(u_inv)
        plus = LaurentPolynomial.one(self.vars)
        minus = LaurentPolynomial.one(self.vars)
        for i in range(self.n):
            b = self.matrix.rows[k - 1][i]
            if b > 0:
                plus = plus * self.cluster[i] ** b
            elif b < 0:
                minus = minus * self.cluster[i] ** (-b)
        new_var = (c_plus * plus + c_minus * minus).exact_div(self.cluster[k - 1])
        cluster = self.cluster[: k - 1] + (new_var,) + self.cluster[k:]
        coeffs = mutate_coefficients(self.coeffs, self.matrix, k, self.semifield)
        return Seed(self.matrix.mutate(k), cluster, GENERAL, self.semifield, coeffs, self.vars)

    # -- derived data ----------------------------------------------------------

    def yhat(self) -> tuple[LaurentFraction, ...]:
        """yhat_j = y_j * prod_k x_k^{b_jk} as exact fractions."""
        out = []
        if self.mode == GEOMETRIC:
            for j in range(self.n):
                acc = LaurentFraction.from_polynomial(LaurentPolynomial.one(self.vars))
                for i in range(self.n + self.m):
                    b = self.matrix.rows[j][i]
                    if b:
                        acc = acc * LaurentFraction.from_polynomial(self.extended_value(i)).pow(b)
                out.append(acc.normalized())
            return tuple(out)
        for j in range(self.n):
            acc = self._embed_fraction(self.coeffs[j])
            for i in range(self.n):
                b = self.matrix.rows[j][i]
                if b:
                    acc = acc * LaurentFraction.from_polynomial(self.cluster[i]).pow(b)
            out.append(acc.normalized())
        return tuple(out)

    def to_general(self) -> "Seed":
        """Geometric seed viewed over the tropical semifield; same ambient
        context, so clusters stay directly comparable."""
        if self.mode == GENERAL:
            return self
        return Seed(
            self.matrix.principal(),
            self.cluster,
            GENERAL,
            TropicalSemifield(self.m),
            coefficients_from_extended(self.matrix),
            self.vars,
        )

    # -- canonical form ----------------------------------------------------------

    def canonical_permutation(self) -> tuple[int, ...]:
        order = sorted(range(self.n), key=lambda i: self.cluster[i]._sort_key())
        for a, b in zip(order, order[1:]):
            if self.cluster[a] == self.cluster[b]:
                raise DegenerateSeed("duplicate cluster variables")
        return tuple(order)

    def permuted(self, perm: Sequence[int]) -> "Seed":
        """perm[i] = old index landing in slot i; coeffs and matrix follow."""
        cluster = tuple(self.cluster[p] for p in perm)
        coeffs = tuple(self.coeffs[p] for p in perm) if self.coeffs is not None else None
        return Seed(self.matrix.permuted(perm), cluster, self.mode, self.semifield, coeffs, self.vars)

    def canonicalized(self) -> "Seed":
        return self.permuted(self.canonical_permutation())

    def key(self) -> bytes:
        """Stable byte string identifying the seed up to simultaneous
        permutation of cluster, coefficients, and matrix."""
        c = self.canonicalized()
        parts = [c.mode, repr(c.vars), c.matrix.to_json()]
        parts.extend(str(p) for p in c.cluster)
        if c.coeffs is not None:
            parts.extend(str(y) for y in c.coeffs)
        return "\x1f".join(parts).encode()

    def __str__(self):
        lines = [f"cluster: ({', '.join(str(p) for p in self.cluster)})"]
        ys = self.coefficient_tuple()
        lines.append(f"coefficients: ({', '.join(str(y) for y in ys)})")
        lines.append("matrix:")
        lines.append(str(self.matrix))
        return "\n".join(lines)


def coefficient_free_seed(matrix: ExchangeMatrix) -> Seed:
    """Initial seed over the one-element semifield."""
    return Seed.initial_general(matrix.principal(), TrivialSemifield())


def principal_seed(matrix: ExchangeMatrix, extra_vars: Sequence[str] = ()) -> Seed:
    """Initial seed with principal coefficients: stable block the identity,
    so the initial coefficients are the stable variables themselves."""
    return Seed.initial_geometric(principal_extension(matrix.principal()), extra_vars)


def seed_mutate_general(seed: Seed, k: int) -> Seed:
    if seed.mode != GENERAL:
        raise ContextMismatch("seed is not in general mode")
    return seed.mutate(k)


def seed_mutate_geometric(seed: Seed, k: int) -> Seed:
    if seed.mode != GEOMETRIC:
        raise ContextMismatch("seed is not in geometric mode")
    return seed.mutate(k)


def compute_yhat(seed: Seed) -> tuple[LaurentFraction, ...]:
    return seed.yhat()


def y_pattern_tuple(matrix: ExchangeMatrix, path: Sequence[int]) -> tuple[SubtractionFreeRational, ...]:
    """Mutate the identity y-tuple along a path in the subtraction-free
    semifield; entry j is the Y-pattern expression for y_j at the end seed."""
    sf = SubtractionFreeSemifield(matrix.n)
    coeffs = sf.identity_tuple()
    b = matrix.principal()
    for k in path:
        coeffs = mutate_coefficients(coeffs, b, k, sf)
        b = b.mutate(k)
    return coeffs
