"""Certified real values as refinable intervals with rational endpoints.

A CertifiedReal wraps a procedure dps -> enclosing interval (mpmath.iv under
the hood, endpoints exported as exact Fractions).  Comparisons against exact
rationals either decide or, after refining up to a depth limit, report
Undecided.  Exact rational values short-circuit every refinement.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import iv

from .surd import INFINITY, Surd


class Undecided(Exception):
    """A comparison could not be decided at the maximum refinement depth."""


DEFAULT_DPS = 30
MAX_DPS = 2000


def _mpf_to_fraction(t) -> Fraction:
    sign, man, exp, bc = t
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise OverflowError("non-finite interval endpoint")
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def iv_to_fractions(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def fraction_to_iv(f: Fraction):
    return iv.mpf(f.numerator) / f.denominator


def surd_iv(s: Surd):
    """Interval enclosure of a Surd at the current iv precision."""
    if s.q == 0:
        return iv.mpf(s.p) / s.r
    return (iv.mpf(s.p) + s.q * iv.sqrt(iv.mpf(s.d))) / s.r


def surd_interval(s: Surd, dps: int) -> tuple[Fraction, Fraction]:
    old = iv.dps
    try:
        iv.dps = dps
        return iv_to_fractions(surd_iv(s))
    finally:
        iv.dps = old


def iv_acos(x):
    """acos for interval arguments (mpmath.iv lacks the inverse trig)."""
    return iv.atan2(iv.sqrt(1 - x * x), x)


def iv_asin(x):
    return iv.atan2(x, iv.sqrt(1 - x * x))


def iv_acosh(x):
    return iv.log(x + iv.sqrt(x * x - 1))


class CertifiedReal:
    """An interval-refinable real number."""

    def __init__(self, refine=None, exact: Fraction | None = None):
        """`refine(dps)` must return an iv.mpf enclosure of the value."""
        if refine is None and exact is None:
            raise ValueError("need a refinement procedure or an exact value")
        self._refine = refine
        self.exact = Fraction(exact) if exact is not None else None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def of(value) -> "CertifiedReal":
        if isinstance(value, CertifiedReal):
            return value
        if isinstance(value, Surd):
            if value.is_rational:
                return CertifiedReal(exact=value.as_fraction())
            return CertifiedReal(refine=lambda dps: surd_iv(value))
        return CertifiedReal(exact=Fraction(value))

    @staticmethod
    def from_expression(fn) -> "CertifiedReal":
        """fn() is evaluated in iv arithmetic at the ambient precision."""
        return CertifiedReal(refine=lambda dps: fn())

    # -- core -------------------------------------------------------------

    def interval(self, dps: int = DEFAULT_DPS) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return self.exact, self.exact
        old = iv.dps
        try:
            iv.dps = dps
            return iv_to_fractions(self._refine(dps))
        finally:
            iv.dps = old

    def compare(self, other, max_dps: int = MAX_DPS) -> int:
        """-1, 0 or +1; raises Undecided when refinement cannot separate."""
        if isinstance(other, CertifiedReal):
            if self.exact is not None and other.exact is not None:
                v = self.exact - other.exact
                return (v > 0) - (v < 0)
            return self._compare_dynamic(other, max_dps)
        other = Fraction(other)
        if self.exact is not None:
            v = self.exact - other
            return (v > 0) - (v < 0)
        dps = DEFAULT_DPS
        while dps <= max_dps:
            lo, hi = self.interval(dps)
            if hi < other:
                return -1
            if lo > other:
                return 1
            if lo == hi == other:
                return 0
            dps *= 2
        raise Undecided(f"cannot separate from {other} at dps {max_dps}")

    def _compare_dynamic(self, other: "CertifiedReal", max_dps: int) -> int:
        dps = DEFAULT_DPS
        while dps <= max_dps:
            lo1, hi1 = self.interval(dps)
            lo2, hi2 = other.interval(dps)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
            dps *= 2
        raise Undecided("cannot separate two certified reals")

    def midpoint(self, dps: int = DEFAULT_DPS) -> Fraction:
        lo, hi = self.interval(dps)
        return (lo + hi) / 2

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        lo, hi = self.interval(DEFAULT_DPS)
        return float((lo + hi) / 2)

    def __repr__(self):
        if self.exact is not None:
            return f"CertifiedReal({self.exact})"
        return f"CertifiedReal(~{float(self):.12g})"


class Infinite:
    """Marker for an infinite projection distance or depth."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("horocover-infinite")


INFINITE = Infinite()


def is_infinite(x) -> bool:
    return x is INFINITE or x is INFINITY
