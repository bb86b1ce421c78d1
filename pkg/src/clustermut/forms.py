"""Closed 2-forms compatible with a cluster algebra of geometric type.

A form is stored as its skew-symmetric coefficient matrix over exact
rationals.  Compatibility with an extended matrix B~ means the top n rows
equal Lambda D B~ for a diagonal Lambda constant on the blocks of B; the
compatible forms make a space of dimension rho(B) + C(m, 2), the extra
dimensions being the pure stable-pair forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotCompatible, ZeroRowUnsupported
from .seeds import ExchangeMatrix, Seed, validate_and_symmetrize

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FormCoefficientMatrix:
    """(n+m) x (n+m) skew-symmetric matrix of exact rationals."""

    omega: Matrix
    n: int
    m: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], n: int, m: int) -> "FormCoefficientMatrix":
        omega = tuple(tuple(Fraction(x) for x in r) for r in rows)
        size = n + m
        if len(omega) != size or any(len(r) != size for r in omega):
            raise NotCompatible(f"coefficient matrix must be {size} x {size}")
        return cls(omega, n, m)

    def entry(self, i: int, j: int) -> Fraction:
        """1-based accessor."""
        return self.omega[i - 1][j - 1]

    def is_skew_symmetric(self) -> bool:
        size = self.n + self.m
        return all(
            self.omega[i][j] == -self.omega[j][i] for i in range(size) for j in range(i, size)
        )

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.omega)


@dataclass(frozen=True)
class FormBasis:
    basis: tuple[FormCoefficientMatrix, ...]
    dimension: int


def compatible_form_space(matrix: ExchangeMatrix) -> FormBasis:
    """Basis of the compatible-form space: one element per block of B (the
    form Lambda D B~ with Lambda the block indicator, completed by
    skew-symmetry) plus one elementary skew form per stable pair."""
    if matrix.has_zero_row():
        raise ZeroRowUnsupported("extended matrix has a zero row")
    n, m = matrix.n, matrix.m
    size = n + m
    sym = validate_and_symmetrize(matrix)
    basis = []
    for block in sym.blocks:
        rows = [[Fraction(0)] * size for _ in range(size)]
        for i in block:
            for j in range(size):
                rows[i][j] = Fraction(sym.d[i] * matrix.rows[i][j])
        # skew-complete: stable rows mirror the stable columns of block rows
        for i in range(n):
            for j in range(n, size):
                rows[j][i] = -rows[i][j]
        for i in block:
            for j in range(n):
                if j not in block and rows[i][j] != -rows[j][i]:
                    raise NotCompatible("block structure inconsistent with matrix")
        basis.append(FormCoefficientMatrix(tuple(tuple(r) for r in rows), n, m))
    for p in range(n, size):
        for q in range(p + 1, size):
            rows = [[Fraction(0)] * size for _ in range(size)]
            rows[p][q] = Fraction(1)
            rows[q][p] = Fraction(-1)
            basis.append(FormCoefficientMatrix(tuple(tuple(r) for r in rows), n, m))
    dim = sym.rho + m * (m - 1) // 2
    assert len(basis) == dim
    return FormBasis(tuple(basis), dim)


def verify_compatibility(form: FormCoefficientMatrix, matrix: ExchangeMatrix):
    """Diagnostic check: skew-symmetry, a block-constant Lambda solving
    Omega[n; n+m] = Lambda D B~, and the proportionality relations
    omega_ij b_ik = omega_ik b_ij.  Returns (True, None) or (False, witness).
    """
    n, m = matrix.n, matrix.m
    size = n + m
    if form.n != n or form.m != m:
        return False, "shape mismatch"
    if not form.is_skew_symmetric():
        return False, "not skew-symmetric"
    sym = validate_and_symmetrize(matrix)
    for block in sym.blocks:
        lam = None
        for i in block:
            for j in range(size):
                if matrix.rows[i][j] != 0:
                    lam = form.omega[i][j] / (sym.d[i] * matrix.rows[i][j])
                    break
            if lam is not None:
                break
        if lam is None:
            # zero rows leave lambda free; all entries must vanish then
            lam = Fraction(0)
        for i in block:
            for j in range(size):
                if form.omega[i][j] != lam * sym.d[i] * matrix.rows[i][j]:
                    return False, f"entry ({i + 1}, {j + 1}) breaks Omega = Lambda D B"
    for i in range(n):
        for j in range(size):
            for k in range(size):
                if (
                    form.omega[i][j] * matrix.rows[i][k]
                    != form.omega[i][k] * matrix.rows[i][j]
                ):
                    return False, f"proportionality fails at ({i + 1}, {j + 1}, {k + 1})"
    return True, None


def mutate_form(form: FormCoefficientMatrix, seed_or_matrix, k: int) -> FormCoefficientMatrix:
    """Coefficient matrix of the same 2-form in the cluster adjacent in
    direction k.

    Row and column k flip sign; a pair (j, l) off direction k changes only
    in the mixed-sign case, picking up omega_{kl} b_kj (for b_kj > 0 and
    b_kl < 0, read from the pre-mutation matrix).
    """
    matrix = seed_or_matrix.matrix if isinstance(seed_or_matrix, Seed) else seed_or_matrix
    ok, witness = verify_compatibility(form, matrix)
    if not ok:
        raise NotCompatible(f"input form incompatible: {witness}")
    n, m = matrix.n, matrix.m
    size = n + m
    kk = k - 1
    row = matrix.rows[kk]
    out = [list(r) for r in form.omega]
    for j in range(size):
        out[kk][j] = -form.omega[kk][j]
        out[j][kk] = -form.omega[j][kk]
    for j in range(size):
        if j == kk:
            continue
        for l in range(j + 1, size):
            if l == kk:
                continue
            bj, bl = row[j], row[l]
            if bj > 0 and bl < 0:
                val = form.omega[j][l] + form.omega[kk][l] * bj
            elif bj < 0 and bl > 0:
                val = form.omega[j][l] - form.omega[kk][j] * bl
            else:
                val = form.omega[j][l]
            out[j][l] = val
            out[l][j] = -val
    return FormCoefficientMatrix(tuple(tuple(r) for r in out), n, m)
