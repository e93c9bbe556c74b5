"""Exact arithmetic: pi-graded rationals, sparse polynomials, Wallis integrals.

Every constant that shows up in the tube computation is a rational multiple
of an integer power of pi, so the whole symbolic path stays exact. Rationals
are :class:`fractions.Fraction` (always reduced, positive denominator).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Iterator, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction, "PiNumber"]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` exactly. Decimal points are rejected."""
    text = text.strip()
    if not text or "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class PiNumber:
    """Finite sum ``sum(c_e * pi**e)`` with rational ``c_e`` and ``e >= 0``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Any] | None = None):
        clean: dict[int, Fraction] = {}
        for exp, coef in (terms or {}).items():
            if exp < 0:
                raise ValueError("pi exponents must be non-negative")
            coef = Fraction(coef)
            if coef:
                clean[int(exp)] = coef
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def rational(cls, q) -> "PiNumber":
        return cls({0: q})

    @classmethod
    def pi_power(cls, exp: int, coef=1) -> "PiNumber":
        return cls({exp: coef})

    @staticmethod
    def coerce(x) -> "PiNumber":
        if isinstance(x, PiNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return PiNumber({0: x})
        raise TypeError(f"cannot convert {type(x).__name__} to PiNumber exactly")

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def grades(self) -> frozenset[int]:
        return frozenset(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        try:
            other = PiNumber.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return PiNumber(out)

    __radd__ = __add__

    def __neg__(self):
        return PiNumber({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = PiNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = PiNumber.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PiNumber(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division only by rationals; pi-polynomials are not a field
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return PiNumber({e: c / other for e, c in self._terms.items()})
        if isinstance(other, PiNumber) and len(other._terms) == 1:
            (e2, c2), = other._terms.items()
            if all(e >= e2 for e in self._terms):
                return PiNumber({e - e2: c / c2 for e, c in self._terms.items()})
        return NotImplemented

    def __eq__(self, other):
        try:
            other = PiNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __float__(self) -> float:
        return math.fsum(float(c) * math.pi ** e for e, c in self._terms.items())

    def __repr__(self):
        return f"PiNumber({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                parts.append(str(c))
            else:
                pi = "pi" if e == 1 else f"pi^{e}"
                parts.append(pi if c == 1 else f"{c}*{pi}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [{"pi": e, "q": format_rational(c)} for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data: list[dict]) -> "PiNumber":
        return cls({int(d["pi"]): Fraction(d["q"]) for d in data})


ZERO = PiNumber()
ONE = PiNumber({0: 1})
PI = PiNumber({1: 1})


class _SparsePoly:
    """Shared machinery for BiPoly and UniPoly: a dict of key -> PiNumber."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for key, coef in (terms or {}).items():
            coef = PiNumber.coerce(coef)
            key = self._check_key(key)
            if coef:
                clean[key] = clean.get(key, ZERO) + coef
                if not clean[key]:
                    del clean[key]
        self._terms = dict(sorted(clean.items()))

    @staticmethod
    def _check_key(key):
        raise NotImplementedError

    @staticmethod
    def _key_add(k1, k2):
        raise NotImplementedError

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return type(self)(out)

    def __neg__(self):
        return type(self)({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, type(self)):
            out: dict = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = self._key_add(k1, k2)
                    out[k] = out.get(k, ZERO) + c1 * c2
            return type(self)(out)
        try:
            s = PiNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return type(self)({k: c * s for k, c in self._terms.items()})

    def __rmul__(self, other):
        # scalars commute; poly*poly is handled by __mul__
        return self.__mul__(other)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, tuple(self._terms.items())))

    def pi_grades(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self._terms.values():
            out |= c.grades
        return frozenset(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str):
        return cls.from_json(json.loads(text))


class BiPoly(_SparsePoly):
    """Sparse polynomial in ``(a, b)`` with PiNumber coefficients.

    Keys are exponent pairs ``(i, j)`` for the monomial ``a**i * b**j``.
    """

    __slots__ = ()

    @staticmethod
    def _check_key(key):
        i, j = key
        if i < 0 or j < 0:
            raise ValueError("negative exponent")
        return (int(i), int(j))

    @staticmethod
    def _key_add(k1, k2):
        return (k1[0] + k2[0], k1[1] + k2[1])

    @classmethod
    def monomial(cls, i: int, j: int, coef=1) -> "BiPoly":
        return cls({(i, j): coef})

    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def scale_a(self, lam) -> "BiPoly":
        """Substitute ``a -> lam * a`` for rational ``lam``."""
        lam = Fraction(lam)
        return BiPoly({(i, j): c * lam ** i for (i, j), c in self._terms.items()})

    def antiderivative_b(self) -> "BiPoly":
        return BiPoly({(i, j + 1): c / (j + 1) for (i, j), c in self._terms.items()})

    def evaluate(self, a, b) -> PiNumber:
        """Exact value at rational (or exactly-converted float) ``a, b``."""
        a, b = Fraction(a), Fraction(b)
        out = ZERO
        for (i, j), c in self._terms.items():
            out = out + c * (a ** i * b ** j)
        return out

    def __call__(self, a, b):
        """Floating-point evaluation; broadcasts over numpy arrays."""
        total = 0.0
        for (i, j), c in self._terms.items():
            total = total + float(c) * a ** i * b ** j
        return total

    def __repr__(self):
        return f"BiPoly({self.dumps()})"

    def to_json(self) -> dict:
        return {"terms": [{"a": i, "b": j, "coef": c.to_json()}
                          for (i, j), c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "BiPoly":
        return cls({(t["a"], t["b"]): PiNumber.from_json(t["coef"])
                    for t in data["terms"]})


class UniPoly(_SparsePoly):
    """Sparse univariate polynomial with PiNumber coefficients."""

    __slots__ = ()

    @staticmethod
    def _check_key(key):
        if key < 0:
            raise ValueError("negative exponent")
        return int(key)

    @staticmethod
    def _key_add(k1, k2):
        return k1 + k2

    def degree(self) -> int:
        return max(self._terms, default=-1)

    def evaluate(self, x) -> PiNumber:
        x = Fraction(x)
        out = ZERO
        for e, c in self._terms.items():
            out = out + c * x ** e
        return out

    def __call__(self, x):
        total = 0.0
        for e, c in self._terms.items():
            total = total + float(c) * x ** e
        return total

    def __repr__(self):
        return f"UniPoly({self.dumps()})"

    def to_json(self) -> dict:
        return {"terms": [{"e": e, "coef": c.to_json()} for e, c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "UniPoly":
        return cls({t["e"]: PiNumber.from_json(t["coef"]) for t in data["terms"]})


def poly_antiderivative_b(poly: BiPoly) -> BiPoly:
    """Antiderivative in ``b`` with zero constant (vanishes at ``b = 0``)."""
    return poly.antiderivative_b()


@lru_cache(maxsize=None)
def wallis(p: int, q: int) -> PiNumber:
    """Exact ``int_0^{pi/2} sin(t)**p * cos(t)**q dt``.

    Built upward from the four base cases (p, q in {0, 1}) with
    ``(p + q) W(p, q) = (p - 1) W(p - 2, q)`` and its mirror in ``q``.
    """
    if p < 0 or q < 0:
        raise ValueError("wallis exponents must be non-negative")
    p0, q0 = p % 2, q % 2
    if p0 == 0 and q0 == 0:
        value = PiNumber({1: Fraction(1, 2)})
    elif p0 == 1 and q0 == 1:
        value = PiNumber({0: Fraction(1, 2)})
    else:
        value = ONE
    ratio = Fraction(1)
    for pp in range(p0 + 2, p + 1, 2):
        ratio *= Fraction(pp - 1, pp + q0)
    for qq in range(q0 + 2, q + 1, 2):
        ratio *= Fraction(qq - 1, p + qq)
    return value * ratio


@lru_cache(maxsize=None)
def unit_ball_volume(p: int) -> PiNumber:
    """Volume of the unit ball in R^p."""
    if p < 0:
        raise ValueError("dimension must be non-negative")
    s, odd = divmod(p, 2)
    if not odd:
        return PiNumber({s: Fraction(1, math.factorial(s))})
    # v_{2s+1} = 2^(s+1) pi^s / (2s+1)!!
    double_fact = math.prod(range(1, p + 1, 2))
    return PiNumber({s: Fraction(2 ** (s + 1), double_fact)})
