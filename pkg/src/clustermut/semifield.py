"""The three concrete semifields used by the engine.

* tropical: free multiplicative group on g1..gm with a (+) b = componentwise
  minimum of exponent vectors; defines geometric type.
* trivial: the one-element semifield {1}; coefficient-free algebras.
* subtraction-free rationals: ratios of polynomials with nonnegative integer
  coefficients in y1..yn; carries Y-patterns.

Elements are immutable values; the semifield objects are small stateless
descriptors used to build identities and evaluate Y-pattern expressions.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import ContextMismatch
from .laurent import LaurentPolynomial

Y_PREFIX = "y"


def y_vars(n: int) -> tuple[str, ...]:
    return tuple(f"{Y_PREFIX}{i}" for i in range(1, n + 1))


class TropicalElement:
    """Monomial g1^a1*...*gm^am; the group operation adds exponent vectors."""

    __slots__ = ("exps",)

    def __init__(self, exps: Sequence[int]):
        object.__setattr__(self, "exps", tuple(int(e) for e in exps))

    def __setattr__(self, name, value):
        raise AttributeError("TropicalElement is immutable")

    def _check(self, other: "TropicalElement"):
        if not isinstance(other, TropicalElement) or len(self.exps) != len(other.exps):
            raise ContextMismatch("tropical rank mismatch")

    def __mul__(self, other: "TropicalElement") -> "TropicalElement":
        self._check(other)
        return TropicalElement(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def inv(self) -> "TropicalElement":
        return TropicalElement(tuple(-a for a in self.exps))

    def pow(self, k: int) -> "TropicalElement":
        return TropicalElement(tuple(a * k for a in self.exps))

    def oplus(self, other: "TropicalElement") -> "TropicalElement":
        self._check(other)
        return TropicalElement(tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def __eq__(self, other):
        return isinstance(other, TropicalElement) and self.exps == other.exps

    def __hash__(self):
        return hash(("trop", self.exps))

    def __str__(self):
        parts = [f"g{i+1}^{e}" if e != 1 else f"g{i+1}" for i, e in enumerate(self.exps) if e]
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"TropicalElement({self.exps})"


class TrivialElement:
    """The unique element of the one-element semifield."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __mul__(self, other):
        return self

    def inv(self):
        return self

    def pow(self, k):
        return self

    def oplus(self, other):
        return self

    def __eq__(self, other):
        return isinstance(other, TrivialElement)

    def __hash__(self):
        return hash("trivial-one")

    def __str__(self):
        return "1"

    def __repr__(self):
        return "TrivialElement()"


class SubtractionFreeRational:
    """num/den with nonnegative integer coefficients, both nonzero.

    Canonical form strips common monomial and integer content only; equality
    is the cross-multiplication test, so polynomial GCDs never happen.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial):
        if num.is_zero() or den.is_zero():
            raise ContextMismatch("subtraction-free elements are nonzero")
        if any(c < 0 for c in num.terms.values()) or any(c < 0 for c in den.terms.values()):
            raise ContextMismatch("subtraction-free elements have nonnegative coefficients")
        num._check_context(den)
        shift = tuple(-min(a, b) for a, b in zip(num.min_exps(), den.min_exps()))
        num, den = num.shift(shift), den.shift(shift)
        g = math.gcd(*num.terms.values(), *den.terms.values())
        if g > 1:
            num = LaurentPolynomial(num.vars, {e: c // g for e, c in num.terms.items()})
            den = LaurentPolynomial(den.vars, {e: c // g for e, c in den.terms.items()})
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("SubtractionFreeRational is immutable")

    def _check(self, other: "SubtractionFreeRational"):
        if not isinstance(other, SubtractionFreeRational) or self.num.vars != other.num.vars:
            raise ContextMismatch("subtraction-free context mismatch")

    def __mul__(self, other: "SubtractionFreeRational") -> "SubtractionFreeRational":
        self._check(other)
        return SubtractionFreeRational(self.num * other.num, self.den * other.den)

    def inv(self) -> "SubtractionFreeRational":
        return SubtractionFreeRational(self.den, self.num)

    def pow(self, k: int) -> "SubtractionFreeRational":
        if k < 0:
            return self.inv().pow(-k)
        return SubtractionFreeRational(self.num ** k, self.den ** k)

    def oplus(self, other: "SubtractionFreeRational") -> "SubtractionFreeRational":
        self._check(other)
        return SubtractionFreeRational(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __eq__(self, other):
        if not isinstance(other, SubtractionFreeRational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("SubtractionFreeRational is unhashable")

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"SubtractionFreeRational({self.num!r}, {self.den!r})"


class TropicalSemifield:
    """Descriptor for the rank-m tropical semifield."""

    kind = "tropical"

    def __init__(self, rank: int):
        self.rank = rank

    def one(self) -> TropicalElement:
        return TropicalElement((0,) * self.rank)

    def generator(self, j: int) -> TropicalElement:
        """g_j, 1-based."""
        e = [0] * self.rank
        e[j - 1] = 1
        return TropicalElement(e)

    def nat(self, c: int) -> TropicalElement:
        # 1 (+) 1 (+) ... = 1: tropical addition is idempotent
        return self.one()

    def __eq__(self, other):
        return isinstance(other, TropicalSemifield) and self.rank == other.rank

    def __hash__(self):
        return hash(("tropical", self.rank))

    def __repr__(self):
        return f"TropicalSemifield(rank={self.rank})"


class TrivialSemifield:
    kind = "trivial"
    rank = 0

    def one(self) -> TrivialElement:
        return TrivialElement()

    def nat(self, c: int) -> TrivialElement:
        return TrivialElement()

    def __eq__(self, other):
        return isinstance(other, TrivialSemifield)

    def __hash__(self):
        return hash("trivial")

    def __repr__(self):
        return "TrivialSemifield()"


class SubtractionFreeSemifield:
    """Subtraction-free rational functions in y1..yn."""

    kind = "subtraction-free"

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.vars = y_vars(nvars)

    @property
    def rank(self) -> int:
        return self.nvars

    def one(self) -> SubtractionFreeRational:
        unit = LaurentPolynomial.one(self.vars)
        return SubtractionFreeRational(unit, unit)

    def generator(self, j: int) -> SubtractionFreeRational:
        return SubtractionFreeRational(
            LaurentPolynomial.variable(self.vars, j - 1), LaurentPolynomial.one(self.vars)
        )

    def identity_tuple(self) -> tuple[SubtractionFreeRational, ...]:
        """(y1, ..., yn): the initial coefficients as formal expressions."""
        return tuple(self.generator(j) for j in range(1, self.nvars + 1))

    def nat(self, c: int) -> SubtractionFreeRational:
        return SubtractionFreeRational(
            LaurentPolynomial.const(self.vars, c), LaurentPolynomial.one(self.vars)
        )

    def __eq__(self, other):
        return isinstance(other, SubtractionFreeSemifield) and self.nvars == other.nvars

    def __hash__(self):
        return hash(("subtraction-free", self.nvars))

    def __repr__(self):
        return f"SubtractionFreeSemifield({self.nvars})"


def sf_mul(a, b):
    return a * b


def sf_inv(a):
    return a.inv()


def sf_oplus(a, b):
    return a.oplus(b)


def evaluate_y_pattern(expr: SubtractionFreeRational, target, images: Sequence) -> object:
    """Evaluate a subtraction-free expression in another semifield.

    Replaces y_i by images[i] and reinterprets +, *, / in the target; any
    subtraction-free identity stays valid under this map, which is what
    makes Y-patterns transportable between semifields.
    """
    if len(images) != len(expr.num.vars):
        raise ContextMismatch(f"need {len(expr.num.vars)} images, got {len(images)}")

    def eval_poly(p: LaurentPolynomial):
        acc = None
        for exps, coeff in p.sorted_terms():
            val = target.nat(coeff)
            for im, e in zip(images, exps):
                if e:
                    val = val * im.pow(e)
            acc = val if acc is None else acc.oplus(val)
        return acc

    return eval_poly(expr.num) * eval_poly(expr.den).inv()


def parse_tropical(rank: int, text: str) -> TropicalElement:
    """Parse `g1^2*g3^-1` style tropical monomials."""
    from .errors import ParseError

    text = text.strip()
    exps = [0] * rank
    if text == "1":
        return TropicalElement(exps)
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            name, _, exp = factor.partition("^")
            k = int(exp)
        else:
            name, k = factor, 1
        if not name.startswith("g") or not name[1:].isdigit():
            raise ParseError(f"bad tropical factor {factor!r}")
        j = int(name[1:])
        if not 1 <= j <= rank:
            raise ParseError(f"generator g{j} out of rank {rank}")
        exps[j - 1] += k
    return TropicalElement(exps)
