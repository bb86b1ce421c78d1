"""Exact multivariate Laurent polynomial arithmetic over Python integers.

A polynomial is a map from exponent vectors (one integer per ambient
variable, negatives allowed) to nonzero integer coefficients.  The ambient
context is the tuple of variable names; two values interoperate only when
their contexts are identical.  All values are immutable and hashable, so
they can be shared freely across threads.

The term order is graded lexicographic on exponent vectors (total degree
first, then lex), fixed once per context.  It gives unique canonical forms
and a deterministic exact-division algorithm.
"""

from __future__ import annotations

import math
import re
from typing import Mapping, Sequence

from .errors import ContextMismatch, DivisionByZero, NotDivisible, ParseError

Exps = tuple[int, ...]


def grlex_key(exps: Exps) -> tuple[int, Exps]:
    """Sort key realizing the graded-lex term order (larger key = larger term)."""
    return (sum(exps), exps)


def ambient_vars(n: int, m: int = 0, extra: Sequence[str] = ()) -> tuple[str, ...]:
    """Standard context: x1..xn mutable, x{n+1}..x{n+m} stable, then extras."""
    return tuple(f"x{i}" for i in range(1, n + m + 1)) + tuple(extra)


class LaurentPolynomial:
    """Canonical-form sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("vars", "terms", "_key", "_hash")

    def __init__(self, vars: tuple[str, ...], terms: Mapping[Exps, int]):
        clean = {e: c for e, c in terms.items() if c != 0}
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: tuple[str, ...]) -> "LaurentPolynomial":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: tuple[str, ...], c: int) -> "LaurentPolynomial":
        return cls(vars, {(0,) * len(vars): int(c)})

    @classmethod
    def one(cls, vars: tuple[str, ...]) -> "LaurentPolynomial":
        return cls.const(vars, 1)

    @classmethod
    def variable(cls, vars: tuple[str, ...], index: int) -> "LaurentPolynomial":
        """The single variable at 0-based ``index``."""
        e = [0] * len(vars)
        e[index] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars: tuple[str, ...], exps: Sequence[int], coeff: int = 1) -> "LaurentPolynomial":
        return cls(vars, {tuple(int(e) for e in exps): int(coeff)})

    # -- canonical order and hashing --------------------------------------

    def _sort_key(self):
        # descending-term sequence of ((degree, exps), coeff); cached
        key = self._key
        if key is None:
            key = tuple(
                (grlex_key(e), self.terms[e])
                for e in sorted(self.terms, key=grlex_key, reverse=True)
            )
            object.__setattr__(self, "_key", key)
        return key

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        """Terms in descending graded-lex order."""
        return [(k[1], c) for k, c in self._sort_key()]

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, self._sort_key()))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def compare(self, other: "LaurentPolynomial") -> int:
        """Total order on canonical forms: -1, 0, or +1."""
        self._check_context(other)
        a, b = self._sort_key(), other._sort_key()
        if a == b:
            return 0
        return -1 if a < b else 1

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.vars): 1}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def max_coeff_bits(self) -> int:
        """Bit length of the largest coefficient magnitude (0 for the zero polynomial)."""
        return max((abs(c).bit_length() for c in self.terms.values()), default=0)

    def _check_context(self, other: "LaurentPolynomial"):
        if self.vars != other.vars:
            raise ContextMismatch(f"contexts differ: {self.vars} vs {other.vars}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        self._check_context(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPolynomial(self.vars, terms)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        self._check_context(other)
        terms: dict[Exps, int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = terms.get(e, 0) + ca * cb
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return LaurentPolynomial(self.vars, terms)

    def scale(self, c: int) -> "LaurentPolynomial":
        if c == 0:
            return LaurentPolynomial.zero(self.vars)
        return LaurentPolynomial(self.vars, {e: k * c for e, k in self.terms.items()})

    def shift(self, exps: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial with the given exponent vector."""
        d = tuple(exps)
        return LaurentPolynomial(
            self.vars, {tuple(x + y for x, y in zip(e, d)): c for e, c in self.terms.items()}
        )

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if not self.is_monomial():
                raise DivisionByZero("negative power of a non-monomial")
            (e, c), = self.terms.items()
            if abs(c) != 1:
                raise NotDivisible(f"cannot invert coefficient {c} over the integers")
            return LaurentPolynomial(self.vars, {tuple(x * k for x in e): c if k % 2 else 1})
        result = LaurentPolynomial.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- exact division ----------------------------------------------------

    def min_exps(self) -> Exps:
        """Componentwise minimum exponent over all terms (zero vector if empty)."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def exact_div(self, den: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact quotient in the Laurent ring; raises NotDivisible otherwise.

        Both operands are shifted into the polynomial range by their
        componentwise-minimum monomials, then ordinary multivariate division
        runs under the graded-lex order demanding an exact step every time.
        The Laurent phenomenon guarantees success in all legal mutation uses,
        so a failure here must abort the caller loudly.
        """
        self._check_context(den)
        if den.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return self
        mn, md = self.min_exps(), den.min_exps()
        num_p = self.shift(tuple(-x for x in mn))
        den_p = den.shift(tuple(-x for x in md))

        den_lead = max(den_p.terms, key=grlex_key)
        den_lc = den_p.terms[den_lead]
        rem = dict(num_p.terms)
        quo: dict[Exps, int] = {}
        while rem:
            lead = max(rem, key=grlex_key)
            lc = rem[lead]
            e = tuple(x - y for x, y in zip(lead, den_lead))
            if any(x < 0 for x in e):
                raise NotDivisible("leading monomial not divisible")
            q, r = divmod(lc, den_lc)
            if r:
                raise NotDivisible(f"coefficient {lc} not divisible by {den_lc}")
            quo[e] = q
            for eb, cb in den_p.terms.items():
                t = tuple(x + y for x, y in zip(e, eb))
                s = rem.get(t, 0) - q * cb
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        shift_back = tuple(a - b for a, b in zip(mn, md))
        return LaurentPolynomial(self.vars, quo).shift(shift_back)

    def divides(self, other: "LaurentPolynomial") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    def derivative(self, index: int) -> "LaurentPolynomial":
        """Formal partial derivative with respect to the variable at
        0-based ``index`` (Laurent terms differentiate the same way)."""
        terms: dict[Exps, int] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k == 0:
                continue
            d = e[:index] + (k - 1,) + e[index + 1 :]
            s = terms.get(d, 0) + c * k
            if s:
                terms[d] = s
            else:
                terms.pop(d, None)
        return LaurentPolynomial(self.vars, terms)

    # -- substitution ------------------------------------------------------

    def substitute(self, images: Sequence["LaurentFraction | LaurentPolynomial"]) -> "LaurentFraction":
        """Exact composition; images are fractions over a common target context.

        One image per ambient variable.  Substituting something with zero
        numerator into a negatively-exponented variable raises DivisionByZero.
        """
        if len(images) != len(self.vars):
            raise ContextMismatch(
                f"{len(self.vars)} variables but {len(images)} images"
            )
        fracs = [im if isinstance(im, LaurentFraction) else LaurentFraction.from_polynomial(im) for im in images]
        if not fracs:
            raise ContextMismatch("empty context cannot be substituted")
        target = fracs[0].num.vars
        total = LaurentFraction.from_polynomial(LaurentPolynomial.zero(target))
        for exps, coeff in self.sorted_terms():
            term = LaurentFraction.from_polynomial(LaurentPolynomial.const(target, coeff))
            for frac, e in zip(fracs, exps):
                if e:
                    term = term * frac.pow(e)
            total = total + term
        return total.normalized()

    # -- context projection ------------------------------------------------

    def with_vars(self, new_vars: tuple[str, ...]) -> "LaurentPolynomial":
        """Re-express over another context, matching variables by name.

        Every variable actually used must exist in the new context; this
        covers both extension (adding fresh variables) and restriction
        (dropping unused ones).
        """
        if new_vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(new_vars)}
        width = len(new_vars)
        mapping = []
        for i, v in enumerate(self.vars):
            j = pos.get(v)
            if j is None and any(e[i] for e in self.terms):
                raise ContextMismatch(f"variable {v} used but absent from target context")
            mapping.append(j)
        terms: dict[Exps, int] = {}
        for e, c in self.terms.items():
            out = [0] * width
            for i, x in enumerate(e):
                if x:
                    out[mapping[i]] = x
            terms[tuple(out)] = c
        return LaurentPolynomial(new_vars, terms)

    # -- rendering and parsing ---------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({render_poly(self)!r})"


def render_monomial(vars: tuple[str, ...], exps: Exps) -> str:
    parts = [f"{v}^{e}" if e != 1 else v for v, e in zip(vars, exps) if e != 0]
    return "*".join(parts) if parts else "1"


def render_poly(p: LaurentPolynomial) -> str:
    """Terms in descending term order, `x1^2*x2^-1` exponents, explicit signs."""
    if p.is_zero():
        return "0"
    out = []
    for exps, coeff in p.sorted_terms():
        mono = render_monomial(p.vars, exps)
        mag = abs(coeff)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(out)


_FACTOR_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    # split on top-level +/-; a sign directly after '^' belongs to an exponent
    chunks: list[tuple[int, str]] = []
    sign, buf = 1, []
    prev = ""
    for ch in text:
        if ch in "+-" and prev != "^":
            if "".join(buf).strip():
                chunks.append((sign, "".join(buf).strip()))
            sign = 1 if ch == "+" else -1
            buf = []
        else:
            buf.append(ch)
            if not ch.isspace():
                prev = ch
    if "".join(buf).strip():
        chunks.append((sign, "".join(buf).strip()))
    return chunks


def parse_poly(vars: tuple[str, ...], text: str) -> LaurentPolynomial:
    """Parse the grammar produced by render_poly."""
    pos = {v: i for i, v in enumerate(vars)}
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial text")
    if text == "0":
        return LaurentPolynomial.zero(vars)
    terms: dict[Exps, int] = {}
    for sign, chunk in _split_terms(text):
        coeff = sign
        exps = [0] * len(vars)
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ParseError(f"empty factor in term {chunk!r}")
            if factor.lstrip("-").isdigit():
                coeff *= int(factor)
                continue
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ParseError(f"bad factor {factor!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            if name not in pos:
                raise ParseError(f"unknown variable {name!r} (context {vars})")
            exps[pos[name]] += exp
        e = tuple(exps)
        s = terms.get(e, 0) + coeff
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)
    return LaurentPolynomial(vars, terms)


class LaurentFraction:
    """Transient numerator/denominator pair of Laurent polynomials.

    Cluster variables themselves are always reduced back to pure Laurent
    form; fractions only carry substitution results and y-hat values.
    Equality is by cross-multiplication, so no polynomial GCD is needed.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial):
        if den.is_zero():
            raise DivisionByZero("fraction with zero denominator")
        num._check_context(den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentFraction is immutable")

    @classmethod
    def from_polynomial(cls, p: LaurentPolynomial) -> "LaurentFraction":
        return cls(p, LaurentPolynomial.one(p.vars))

    def __mul__(self, other: "LaurentFraction") -> "LaurentFraction":
        return LaurentFraction(self.num * other.num, self.den * other.den)._strip()

    def __add__(self, other: "LaurentFraction") -> "LaurentFraction":
        if self.den == other.den:
            return LaurentFraction(self.num + other.num, self.den)._strip()
        return LaurentFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )._strip()

    def inv(self) -> "LaurentFraction":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return LaurentFraction(self.den, self.num)

    def pow(self, k: int) -> "LaurentFraction":
        if k < 0:
            return self.inv().pow(-k)
        num = self.num ** k
        den = self.den ** k
        return LaurentFraction(num, den)

    def equals(self, other: "LaurentFraction") -> bool:
        return self.num * other.den == other.num * self.den

    def _strip(self) -> "LaurentFraction":
        # remove common monomial and integer content; cheap, no GCD
        if self.num.is_zero():
            return LaurentFraction(self.num, LaurentPolynomial.one(self.num.vars))
        shift = tuple(
            -min(a, b) for a, b in zip(self.num.min_exps(), self.den.min_exps())
        )
        num, den = self.num.shift(shift), self.den.shift(shift)
        g = math.gcd(*num.terms.values(), *den.terms.values())
        if g > 1:
            num = LaurentPolynomial(num.vars, {e: c // g for e, c in num.terms.items()})
            den = LaurentPolynomial(den.vars, {e: c // g for e, c in den.terms.items()})
        return LaurentFraction(num, den)

    def normalized(self) -> "LaurentFraction":
        """Canonical form: clear the denominator entirely whenever possible."""
        if self.num.is_zero():
            return LaurentFraction(self.num, LaurentPolynomial.one(self.num.vars))
        try:
            return LaurentFraction.from_polynomial(self.num.exact_div(self.den))
        except NotDivisible:
            pass
        f = self._strip()
        # fix the sign of the denominator's leading coefficient
        lead = max(f.den.terms, key=grlex_key)
        if f.den.terms[lead] < 0:
            f = LaurentFraction(-f.num, -f.den)
        return f

    def as_polynomial(self) -> LaurentPolynomial:
        """Exact Laurent value; NotDivisible if the denominator does not clear."""
        return self.num.exact_div(self.den)

    def is_polynomial(self) -> bool:
        try:
            self.as_polynomial()
            return True
        except NotDivisible:
            return False

    def __eq__(self, other):
        if not isinstance(other, LaurentFraction):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        raise TypeError("LaurentFraction is unhashable; compare with equals()")

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"LaurentFraction({self.num!r}, {self.den!r})"


def lp_arith(a: LaurentPolynomial, b: LaurentPolynomial, op: str) -> LaurentPolynomial:
    """Dispatch add/sub/mul by name; mirrors the operator overloads."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def lp_exact_div(num: LaurentPolynomial, den: LaurentPolynomial) -> LaurentPolynomial:
    return num.exact_div(den)


def lp_substitute(
    p: LaurentPolynomial, images: Sequence[LaurentFraction | LaurentPolynomial]
) -> LaurentFraction:
    return p.substitute(images)


def lp_compare(a: LaurentPolynomial, b: LaurentPolynomial) -> int:
    return a.compare(b)
