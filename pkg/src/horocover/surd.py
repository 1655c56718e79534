"""Exact arithmetic for boundary points: rationals, quadratic surds, infinity.

A finite boundary point is stored in the canonical form (p + q*sqrt(d))/r with
integer p, q, r, r > 0, d squarefree, and gcd(p, q, r) = 1.  q = 0 forces
d = 0, so every rational has exactly one representation.  Arithmetic is closed
as long as at most one quadratic field is involved; mixing two distinct
irrational fields raises MixedFieldError and callers fall back to certified
interval evaluation.
"""

from __future__ import annotations

import math
from fractions import Fraction


class MixedFieldError(ArithmeticError):
    """Raised when an operation would mix two distinct quadratic fields."""


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n = s*s*d and d squarefree."""
    if n == 0:
        return 1, 0
    s, d, f = 1, 1, 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        s *= f ** (e // 2)
        if e % 2:
            d *= f
        f += 1 if f == 2 else 2
    return s, d * n


class Surd:
    """The real number (p + q*sqrt(d)) / r in canonical form."""

    __slots__ = ("p", "q", "d", "r")

    def __init__(self, p: int, q: int = 0, d: int = 0, r: int = 1):
        if r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if d < 0:
            raise ValueError("negative discriminant")
        s, d = _squarefree_split(d)
        q *= s
        if d == 1:
            p, q = p + q, 0
        if q == 0 or d == 0:
            q, d = 0, 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p, self.q, self.d, self.r = p, q, d, r

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_fraction(x) -> "Surd":
        f = Fraction(x)
        return Surd(f.numerator, 0, 0, f.denominator)

    @staticmethod
    def sqrt_of(n: int) -> "Surd":
        return Surd(0, 1, n, 1)

    # -- predicates -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q != 0:
            raise ValueError("not rational")
        return Fraction(self.p, self.r)

    def conjugate(self) -> "Surd":
        return Surd(self.p, -self.q, self.d, self.r)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Surd):
            return other
        return Surd.from_fraction(other)

    def _join_field(self, other: "Surd") -> int:
        if self.q == 0:
            return other.d
        if other.q == 0:
            return self.d
        if self.d != other.d:
            raise MixedFieldError(f"sqrt({self.d}) vs sqrt({other.d})")
        return self.d

    def __add__(self, other):
        o = self._coerce(other)
        d = self._join_field(o)
        return Surd(self.p * o.r + o.p * self.r,
                    self.q * o.r + o.q * self.r, d, self.r * o.r)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.p, -self.q, self.d, self.r)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._join_field(o)
        p = self.p * o.p + self.q * o.q * d
        q = self.p * o.q + self.q * o.p
        return Surd(p, q, d, self.r * o.r)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        # 1 / ((p+q*sqrt(d))/r) = r*(p-q*sqrt(d)) / (p^2 - q^2*d)
        n = self.p * self.p - self.q * self.q * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return Surd(self.r * self.p, -self.r * self.q, self.d, n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        p, q, d = self.p, self.q, self.d
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # p and q of opposite signs: compare p^2 with q^2*d
        big_p = p * p > q * q * d
        if p > 0:
            return 1 if big_p else -1
        return -1 if big_p else 1

    def compare(self, other) -> int:
        return (self - self._coerce(other)).sign()

    def __eq__(self, other):
        if other is INFINITY:
            return False
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.p, self.q, self.d, self.r) == (o.p, o.q, o.d, o.r)

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.d, self.r))

    def __lt__(self, other):
        try:
            return self.compare(other) < 0
        except MixedFieldError:
            return self._numeric_compare(other) < 0

    def __le__(self, other):
        try:
            return self.compare(other) <= 0
        except MixedFieldError:
            return self._numeric_compare(other) < 0

    def __gt__(self, other):
        try:
            return self.compare(other) > 0
        except MixedFieldError:
            return self._numeric_compare(other) > 0

    def __ge__(self, other):
        try:
            return self.compare(other) >= 0
        except MixedFieldError:
            return self._numeric_compare(other) > 0

    def _numeric_compare(self, other) -> int:
        # Distinct quadratic fields never produce equal irrational values,
        # so refinement terminates.
        from .certified import surd_interval
        o = self._coerce(other)
        dps = 30
        while True:
            lo1, hi1 = surd_interval(self, dps)
            lo2, hi2 = surd_interval(o, dps)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
            dps *= 2
            if dps > 10000:  # pragma: no cover
                raise ArithmeticError("comparison did not separate")

    # -- floor and continued fractions ------------------------------------

    def __floor__(self) -> int:
        if self.q == 0:
            return self.p // self.r
        t = math.isqrt(self.q * self.q * self.d)
        if self.q < 0:
            t = -t - 1
        n = (self.p + t) // self.r
        while self.compare(n + 1) >= 0:
            n += 1
        while self.compare(n) < 0:
            n -= 1
        return n

    def continued_fraction(self, max_terms: int = 64) -> tuple[list[int], list[int]]:
        """Partial quotients as (preperiod, period); period empty iff rational."""
        if self.q == 0:
            a, b = self.p, self.r
            terms = []
            while b:
                terms.append(a // b)
                a, b = b, a - (a // b) * b
            # canonical: last term > 1 unless expansion is just [a0]
            if len(terms) > 1 and terms[-1] == 1:
                terms[-2] += 1
                terms.pop()
            return terms, []
        # (P + sqrt(N)) / Q with Q | N - P^2
        if self.q > 0:
            P, Q, N = self.p, self.r, self.q * self.q * self.d
        else:
            P, Q, N = -self.p, -self.r, self.q * self.q * self.d
        if (N - P * P) % Q != 0:
            P, N, Q = P * abs(Q), N * Q * Q, Q * abs(Q)
        terms, seen = [], {}
        sqrt_n = math.isqrt(N)
        for _ in range(max_terms):
            key = (P, Q)
            if key in seen:
                i = seen[key]
                return terms[:i], terms[i:]
            seen[key] = len(terms)
            a = (P + (sqrt_n if Q > 0 else sqrt_n + 1)) // Q
            terms.append(a)
            P = a * Q - P
            Q = (N - P * P) // Q
        return terms, []

    def convergents(self, limit: int = 64):
        """Yield (numerator, denominator) convergents, exact and in order."""
        pre, per = self.continued_fraction(max_terms=limit)
        terms = pre + per * ((limit - len(pre)) // max(1, len(per)) + 1) if per else pre
        h0, h1, k0, k1 = 1, 0, 0, 1
        for a in terms[:limit]:
            h0, h1 = a * h0 + h1, h0
            k0, k1 = a * k0 + k1, k0
            yield h0, k0

    def min_poly(self) -> tuple[int, int, int]:
        """Integer (A, B, C), A > 0, with A*x^2 + B*x + C = 0 for this value."""
        if self.q == 0:
            return 0, self.r, -self.p
        # x = (p + q*sqrt(d))/r  =>  (r*x - p)^2 = q^2 d
        A = self.r * self.r
        B = -2 * self.r * self.p
        C = self.p * self.p - self.q * self.q * self.d
        g = math.gcd(math.gcd(A, abs(B)), abs(C) or A)
        return A // g, B // g, C // g

    # -- misc -------------------------------------------------------------

    def __float__(self):
        if self.q == 0:
            return self.p / self.r
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def __repr__(self):
        if self.q == 0:
            return f"Surd({Fraction(self.p, self.r)})"
        return f"Surd(({self.p}{self.q:+d}*sqrt({self.d}))/{self.r})"


class _Infinity:
    """The point at infinity on the boundary circle."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("horocover-infinity")


INFINITY = _Infinity()


def boundary(x):
    """Coerce int/Fraction/Surd/INFINITY to a boundary point."""
    if x is INFINITY or isinstance(x, Surd):
        return x
    return Surd.from_fraction(x)


PHI = Surd(1, 1, 5, 2)
SQRT2 = Surd(0, 1, 2, 1)
