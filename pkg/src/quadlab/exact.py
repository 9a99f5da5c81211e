"""Exact scalars: rationals, quadratic irrationals and certified signs.

Rationals are ``gmpy2.mpq``. Roots of rational quadratics live in a single
field Q(sqrt d) and are represented by :class:`AlgebraicNumber`. Arithmetic
that mixes two different radicands promotes to :class:`MultiQuadratic`, an
element of the compositum Q(sqrt d1, ..., sqrt dk). Signs of such elements
are decided by interval evaluation at increasing precision with an exact
recursive fallback, so every predicate built on top of this module is
decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpq, mpz

Rational = type(mpq(0))

START_PRECISION = 128
MAX_PRECISION = 2048

_SMALL_PRIMES = [p for p in range(2, 600) if all(p % q for q in range(2, int(p**0.5) + 1))]


def as_rational(x) -> mpq:
    """Convert ints, Fractions, mpq and rational strings ("3/4", "0.1") to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, mpz)):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        try:
            return mpq(s)
        except ValueError:
            pass
        try:
            return as_rational(Fraction(s))
        except ValueError as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, AlgebraicNumber) and x.is_rational():
        return x.a
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _squarefree_split(n: mpz) -> tuple[mpz, mpz]:
    """Return (f, m) with n = f**2 * m, removing small and perfect-square factors."""
    f = mpz(1)
    if gmpy2.is_square(n):
        return gmpy2.isqrt(n), mpz(1)
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            f *= p
    if gmpy2.is_square(n):
        r = gmpy2.isqrt(n)
        return f * r, mpz(1)
    return f, n


def _normalize_radical(coef: mpq, d: mpq) -> tuple[mpq, mpz]:
    """Rewrite coef*sqrt(d) as c*sqrt(D) with D an integer free of small square factors.

    D == 1 means the value is the rational c.
    """
    n = d.numerator * d.denominator
    f, m = _squarefree_split(mpz(n))
    return coef * f / d.denominator, m


class AlgebraicNumber:
    """The real number ``a + b*sqrt(d)`` with rational a, b and integer radicand d.

    Normalized so that a rational value is stored as (a, 0, 0) and otherwise d
    is a non-square integer > 1 with its small square factors pulled into b.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=0):
        a = as_rational(a)
        b = as_rational(b)
        d = as_rational(d)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if b == 0 or d == 0:
            self.a, self.b, self.d = a, mpq(0), mpz(0)
            return
        c, m = _normalize_radical(b, d)
        if m == 1:
            self.a, self.b, self.d = a + c, mpq(0), mpz(0)
        else:
            self.a, self.b, self.d = a, c, m

    @classmethod
    def _raw(cls, a: mpq, b: mpq, d: mpz) -> AlgebraicNumber:
        obj = object.__new__(cls)
        if b == 0:
            obj.a, obj.b, obj.d = a, mpq(0), mpz(0)
        else:
            obj.a, obj.b, obj.d = a, b, d
        return obj

    @classmethod
    def sqrt(cls, d) -> AlgebraicNumber:
        return cls(0, 1, d)

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> AlgebraicNumber:
        return AlgebraicNumber._raw(self.a, -self.b, self.d)

    def norm(self) -> mpq:
        return self.a * self.a - self.b * self.b * self.d

    def to_multi(self) -> MultiQuadratic:
        terms = {(): self.a} if self.a != 0 else {}
        if self.b != 0:
            terms[(self.d,)] = self.b
        return MultiQuadratic._raw(terms)

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            return other
        if isinstance(other, MultiQuadratic):
            return other
        try:
            return AlgebraicNumber._raw(as_rational(other), mpq(0), mpz(0))
        except TypeError:
            return NotImplemented

    def _common(self, other: AlgebraicNumber):
        """Radicand shared by both operands, or None when they differ."""
        if other.b == 0:
            return self.d
        if self.b == 0 or self.d == other.d:
            return other.d
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, MultiQuadratic):
            return self.to_multi() + other
        d = self._common(other)
        if d is None:
            return self.to_multi() + other.to_multi()
        return AlgebraicNumber._raw(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, MultiQuadratic):
            return self.to_multi() * other
        d = self._common(other)
        if d is None:
            return self.to_multi() * other.to_multi()
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return AlgebraicNumber._raw(a, b, d)

    __rmul__ = __mul__

    def inverse(self) -> AlgebraicNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicNumber._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, MultiQuadratic):
            return self.to_multi() / other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # comparison -------------------------------------------------------------

    def sign(self) -> int:
        sa = _rsign(self.a)
        sb = _rsign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # a and b*sqrt(d) have opposite signs: compare squares.
        return sa * _rsign(self.a * self.a - self.b * self.b * self.d)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return sign(self - other) == 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return float(to_mpf(self, 64))

    def __repr__(self):
        if self.b == 0:
            return f"AlgebraicNumber({format_rational(self.a)})"
        return (
            f"AlgebraicNumber({format_rational(self.a)}, "
            f"{format_rational(self.b)}, {self.d})"
        )

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)} + {format_rational(self.b)}*sqrt({self.d})"

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "d": format_rational(self.d),
        }

    @classmethod
    def from_json(cls, obj) -> AlgebraicNumber:
        if isinstance(obj, dict):
            return cls(as_rational(obj["a"]), as_rational(obj["b"]), as_rational(obj["d"]))
        return cls(as_rational(obj))


def _merge_keys(k1: tuple, k2: tuple) -> tuple[tuple, mpz]:
    """Product of two radical monomials: symmetric difference plus squared factors."""
    if not k1:
        return k2, mpz(1)
    if not k2:
        return k1, mpz(1)
    out = []
    factor = mpz(1)
    i = j = 0
    while i < len(k1) and j < len(k2):
        if k1[i] == k2[j]:
            factor *= k1[i]
            i += 1
            j += 1
        elif k1[i] < k2[j]:
            out.append(k1[i])
            i += 1
        else:
            out.append(k2[j])
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return tuple(out), factor


class MultiQuadratic:
    """Element of Q(sqrt d1, ..., sqrt dk) as a sum of rational multiples of
    radical monomials ``sqrt(d_a * d_b * ...)``.

    Radicands are not assumed multiplicatively independent, so the
    representation is not canonical; :func:`certified_sign` decides zero
    exactly regardless.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for key, c in (terms or {}).items():
            c = as_rational(c)
            if c != 0:
                self.terms[tuple(sorted(mpz(r) for r in key))] = c

    @classmethod
    def _raw(cls, terms: dict) -> MultiQuadratic:
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    def radicands(self) -> set:
        out = set()
        for key in self.terms:
            out.update(key)
        return out

    def simplify(self):
        """Collapse to a rational or AlgebraicNumber when at most one radicand remains."""
        rads = self.radicands()
        if not rads:
            return AlgebraicNumber._raw(self.terms.get((), mpq(0)), mpq(0), mpz(0))
        if len(rads) == 1:
            (d,) = rads
            return AlgebraicNumber._raw(self.terms.get((), mpq(0)), self.terms.get((d,), mpq(0)), d)
        return self

    def _coerce(self, other):
        if isinstance(other, MultiQuadratic):
            return other
        if isinstance(other, AlgebraicNumber):
            return other.to_multi()
        try:
            q = as_rational(other)
        except TypeError:
            return NotImplemented
        return MultiQuadratic._raw({(): q} if q != 0 else {})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for key, c in other.terms.items():
            v = terms.get(key, 0) + c
            if v == 0:
                terms.pop(key, None)
            else:
                terms[key] = v
        return MultiQuadratic._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiQuadratic._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key, f = _merge_keys(k1, k2)
                v = terms.get(key, 0) + c1 * c2 * f
                if v == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = v
        return MultiQuadratic._raw(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiQuadratic):
            other = other.simplify()
            if isinstance(other, MultiQuadratic):
                raise TypeError("division by a multi-radicand element is not supported")
        if isinstance(other, AlgebraicNumber):
            return self * other.inverse()
        q = as_rational(other)
        return MultiQuadratic._raw({k: c / q for k, c in self.terms.items()})

    def split(self, r: mpz) -> tuple[MultiQuadratic, MultiQuadratic]:
        """Write self = beta + gamma*sqrt(r) with beta, gamma free of r."""
        beta: dict = {}
        gamma: dict = {}
        for key, c in self.terms.items():
            if r in key:
                gamma[tuple(x for x in key if x != r)] = c
            else:
                beta[key] = c
        return MultiQuadratic._raw(beta), MultiQuadratic._raw(gamma)

    def sign(self) -> int:
        return certified_sign(self)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return sign(self - other) == 0

    __hash__ = None

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return float(to_mpf(self, 64))

    def __repr__(self):
        parts = []
        for key, c in sorted(self.terms.items()):
            rad = "*".join(f"sqrt({r})" for r in key)
            parts.append(format_rational(c) + (f"*{rad}" if rad else ""))
        return "MultiQuadratic(" + " + ".join(parts or ["0"]) + ")"


Number = Union[int, mpq, AlgebraicNumber, MultiQuadratic]


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval [lo, hi] known to contain an exact value.

    Endpoints are dyadic rationals with ``precision_bits`` fractional bits.
    """

    lo: mpq
    hi: mpq
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    def sign(self) -> int | None:
        """Sign of every point of the interval, or None if it straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


@lru_cache(maxsize=4096)
def _sqrt_floor(r: int, bits: int) -> mpz:
    """floor(sqrt(r) * 2**bits)."""
    return gmpy2.isqrt(mpz(r) << (2 * bits))


def _floordiv(n: mpz, m: mpz) -> mpz:
    return n // m


def _ceildiv(n: mpz, m: mpz) -> mpz:
    return -((-n) // m)


def enclose(x, bits: int = START_PRECISION) -> CertifiedInterval:
    """Certified enclosure of x with ``bits`` fractional bits per radical."""
    if isinstance(x, AlgebraicNumber):
        x = x.to_multi()
    if not isinstance(x, MultiQuadratic):
        q = as_rational(x)
        return CertifiedInterval(q, q, bits)
    kmax = max((len(k) for k in x.terms), default=0)
    scale = mpz(1) << (bits * kmax)
    lo_sum = mpz(0)
    hi_sum = mpz(0)
    for key, c in x.terms.items():
        lo = mpz(1)
        hi = mpz(1)
        for r in key:
            s = _sqrt_floor(int(r), bits)
            exact = s * s == (mpz(r) << (2 * bits))
            lo *= s
            hi *= s if exact else s + 1
        shift = mpz(1) << (bits * (kmax - len(key)))
        lo *= shift
        hi *= shift
        num, den = c.numerator, c.denominator
        if num >= 0:
            lo_sum += _floordiv(num * lo, den)
            hi_sum += _ceildiv(num * hi, den)
        else:
            lo_sum += _floordiv(num * hi, den)
            hi_sum += _ceildiv(num * lo, den)
    return CertifiedInterval(mpq(lo_sum, scale), mpq(hi_sum, scale), bits)


def _rsign(q) -> int:
    return (q > 0) - (q < 0)


def _exact_sign(x: MultiQuadratic) -> int:
    """Exact sign by recursion on the largest radicand.

    With x = beta + gamma*sqrt(r): if the two parts agree in sign (or one
    vanishes) that is the answer; otherwise sign(x) = sign(beta) *
    sign(beta**2 - r*gamma**2), an element with one radicand fewer.
    """
    rads = x.radicands()
    if not rads:
        return _rsign(x.terms.get((), mpq(0)))
    r = max(rads)
    beta, gamma = x.split(r)
    sg = _ladder_sign(gamma)
    if sg == 0:
        return _ladder_sign(beta)
    sb = _ladder_sign(beta)
    if sb == 0 or sb == sg:
        return sg
    return sb * _ladder_sign(beta * beta - gamma * gamma * r)


def _ladder_sign(x: MultiQuadratic) -> int:
    rads = x.radicands()
    if len(rads) <= 1:
        return x.simplify().sign()
    bits = START_PRECISION
    while bits <= MAX_PRECISION:
        s = enclose(x, bits).sign()
        if s is not None:
            return s
        bits *= 2
    return _exact_sign(x)


def certified_sign(x) -> int:
    """Exact sign (-1, 0, +1) of a rational, AlgebraicNumber or MultiQuadratic.

    Single-radicand values are decided symbolically. Mixed-radicand values
    are enclosed in intervals from 128 bits doubling to 2048 bits; if the
    enclosure still contains zero an exact recursion in the composite field
    settles it.
    """
    if isinstance(x, AlgebraicNumber):
        return x.sign()
    if isinstance(x, MultiQuadratic):
        return _ladder_sign(x)
    return _rsign(as_rational(x))


sign = certified_sign


def to_mpf(x, prec: int = 113):
    """High precision float approximation (mpmath mpf) of any exact number."""
    import mpmath

    with mpmath.workprec(prec + 16):
        if isinstance(x, AlgebraicNumber):
            x = x.to_multi()
        if isinstance(x, MultiQuadratic):
            total = mpmath.mpf(0)
            for key, c in x.terms.items():
                term = mpmath.mpf(int(c.numerator)) / int(c.denominator)
                for r in key:
                    term *= mpmath.sqrt(int(r))
                total += term
            return +total
        q = as_rational(x)
        return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def to_float(x) -> float:
    if isinstance(x, (AlgebraicNumber, MultiQuadratic)):
        return float(to_mpf(x, 64))
    return float(as_rational(x))


def is_rational_value(x) -> bool:
    if isinstance(x, AlgebraicNumber):
        return x.is_rational()
    if isinstance(x, MultiQuadratic):
        return not x.radicands()
    return True


def det3(u, v, w):
    """Determinant of the 3x3 matrix with columns u, v, w."""
    return (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - v[0] * (u[1] * w[2] - u[2] * w[1])
        + w[0] * (u[1] * v[2] - u[2] * v[1])
    )


@dataclass(frozen=True)
class QuadraticRoots:
    """Real roots of A x^2 + B x + C = 0.

    ``kind`` is one of "two", "double", "single", "none" or
    "identically_zero"; roots are ascending.
    """

    kind: str
    roots: tuple = ()
    discriminant: mpq | None = None

    @property
    def identically_zero(self) -> bool:
        return self.kind == "identically_zero"


def solve_quadratic_exact(A, B, C) -> QuadraticRoots:
    A, B, C = as_rational(A), as_rational(B), as_rational(C)
    if A == 0:
        if B == 0:
            if C == 0:
                return QuadraticRoots("identically_zero")
            return QuadraticRoots("none")
        return QuadraticRoots("single", (AlgebraicNumber(-C / B),))
    disc = B * B - 4 * A * C
    if disc < 0:
        return QuadraticRoots("none", discriminant=disc)
    center = -B / (2 * A)
    if disc == 0:
        return QuadraticRoots("double", (AlgebraicNumber(center),), disc)
    half = AlgebraicNumber(0, 1 / (2 * abs(A)), disc)
    return QuadraticRoots("two", (center - half, center + half), disc)
