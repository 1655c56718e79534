"""Exact upper half-plane geometry for SL2(Z) with Ford horoballs.

Group elements are integer matrices of determinant one, identified with their
negatives (the boundary action factors through PSL2).  Boundary points are
exact rationals or quadratic surds (see surd.py).  Ford horoballs are indexed
by their rational tangency point; the horoball at p/q is the open Euclidean
disk of diameter 1/q^2 tangent at p/q, and the horoball at infinity is the
open region above height 1.  Projection distances are measured in the path
metric of the horocycle after moving the horoball to infinity, which gives an
exact closed form.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import iv

from .certified import (
    INFINITE,
    CertifiedReal,
    Undecided,
    fraction_to_iv,
    iv_acos,
    iv_acosh,
    iv_asin,
    surd_iv,
)
from .surd import INFINITY, MixedFieldError, Surd, boundary


class GroupElement:
    """An element of SL2(Z), sign-normalized to represent +/-g jointly."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        if a * d - b * c != 1:
            raise ValueError(f"determinant of ({a},{b},{c},{d}) is not 1")
        # normalize: first nonzero entry of (a, c, b, d) positive
        for entry in (a, c, b, d):
            if entry != 0:
                if entry < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        self.a, self.b, self.c, self.d = a, b, c, d

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"GroupElement({self.a},{self.b},{self.c},{self.d})"

    def apply_boundary(self, x):
        """The Moebius action on the boundary circle, exact."""
        x = boundary(x)
        a, b, c, d = self.a, self.b, self.c, self.d
        if x is INFINITY:
            if c == 0:
                return INFINITY
            return Surd(a, 0, 0, c)
        den = x * c + d
        if den.sign() == 0:
            return INFINITY
        return (x * a + b) / den

    def apply_point(self, x: Fraction, y: Fraction) -> tuple[Fraction, Fraction]:
        """The action on an interior point with rational coordinates."""
        a, b, c, d = self.a, self.b, self.c, self.d
        n = (c * x + d) ** 2 + c * c * y * y
        rx = ((a * x + b) * (c * x + d) + a * c * y * y) / n
        return rx, y / n


IDENTITY = GroupElement(1, 0, 0, 1)
GEN_T = GroupElement(1, 1, 0, 1)
GEN_S = GroupElement(0, -1, 1, 0)

BASEPOINT = (Fraction(0), Fraction(1))  # x0 = i


def mobius_apply(g: GroupElement, x):
    return g.apply_boundary(x)


class Horoball:
    """A Ford horoball, identified by its rational tangency point."""

    __slots__ = ("p", "q")

    def __init__(self, p: int, q: int):
        if q < 0:
            p, q = -p, -q
        g = math.gcd(abs(p), q)
        if g == 0:
            raise ValueError("tangency 0/0")
        p, q = p // g, q // g
        if q == 0:
            p = 1
        self.p, self.q = p, q

    @staticmethod
    def at(x) -> "Horoball":
        x = boundary(x)
        if x is INFINITY:
            return Horoball(1, 0)
        f = x.as_fraction()
        return Horoball(f.numerator, f.denominator)

    @property
    def tangency(self):
        if self.q == 0:
            return INFINITY
        return Surd(self.p, 0, 0, self.q)

    def translate(self, g: GroupElement) -> "Horoball":
        return Horoball.at(g.apply_boundary(self.tangency))

    def __eq__(self, other):
        if not isinstance(other, Horoball):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q)

    def __lt__(self, other):
        # lexicographic (q, p): the tie-break order used throughout
        return (self.q, self.p) < (other.q, other.p)

    def __hash__(self):
        return hash(("horoball", self.p, self.q))

    def __repr__(self):
        if self.q == 0:
            return "Horoball(oo)"
        return f"Horoball({self.p}/{self.q})"


HOROBALL_INF = Horoball(1, 0)


def normalizer(Y: Horoball) -> GroupElement:
    """The canonical M in SL2(Z) with M(tangency(Y)) = infinity.

    Canonical means the top-left entry is the minimal nonnegative one among
    all valid choices with bottom row (q, -p).
    """
    p, q = Y.p, Y.q
    if q == 0:
        return IDENTITY
    # need a*(-p) - b*q = 1; from extended gcd a0*p + b0*q = 1 take (-a0,-b0)
    a0, b0 = _ext_gcd(p, q)
    a = (-a0) % q
    b = (-1 - a * p) // q
    return GroupElement(a, b, q, -p)


def _ext_gcd(p: int, q: int) -> tuple[int, int]:
    """(x, y) with x*p + y*q = gcd(p, q) = 1."""
    old_r, r = p, q
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_x, x = x, old_x - quot * x
        old_y, y = y, old_y - quot * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y


def _as_point(u):
    """Coerce Horoball arguments to their tangency point."""
    if isinstance(u, Horoball):
        return u.tangency
    return boundary(u)


def _factor(Y: Horoball, x):
    """|q*x - p| for finite x, |q| for x = infinity (q > 0 there)."""
    if x is INFINITY:
        return Surd(Y.q)
    return abs(x * Y.q - Surd(Y.p))


def projection_distance(Y: Horoball, u, v):
    """Exact closed-form projection distance onto the horocycle of Y.

    Returns a CertifiedReal (exact when the data is rational or lies in a
    single quadratic field) or INFINITE when an argument is the tangency
    point of Y itself.
    """
    u, v = _as_point(u), _as_point(v)
    t = Y.tangency
    if u == t or v == t:
        return INFINITE
    if u == v:
        return CertifiedReal(exact=Fraction(0))
    try:
        fu, fv = _factor(Y, u), _factor(Y, v)
        if u is INFINITY or v is INFINITY:
            num = Surd(1)
        else:
            num = abs(u - v)
        val = num / (fu * fv)
        return CertifiedReal.of(val)
    except MixedFieldError:
        return CertifiedReal.from_expression(
            lambda: _proj_dist_iv(Y, u, v))


def _proj_dist_iv(Y: Horoball, u, v):
    def fac(x):
        if x is INFINITY:
            return iv.mpf(Y.q)
        return abs(surd_iv(x) * Y.q - Y.p)
    if u is INFINITY or v is INFINITY:
        num = iv.mpf(1)
    else:
        num = abs(surd_iv(u) - surd_iv(v))
    return num / (fac(u) * fac(v))


def proj_dist_frac(Y: Horoball, u, v):
    """Fast path: exact Fraction projection distance for rational endpoints.

    u, v are Fractions or INFINITY.  Returns a Fraction or INFINITE.
    """
    p, q = Y.p, Y.q
    if u is INFINITY:
        fu = Fraction(q)
        if q == 0:
            return INFINITE
    else:
        if q != 0 and u * q == p:
            return INFINITE
        if q == 0:
            fu = Fraction(1)
        else:
            fu = abs(u * q - p)
    if v is INFINITY:
        fv = Fraction(q)
        if q == 0:
            return INFINITE
    else:
        if q != 0 and v * q == p:
            return INFINITE
        if q == 0:
            fv = Fraction(1)
        else:
            fv = abs(v * q - p)
    if u is INFINITY and v is INFINITY:
        return Fraction(0)
    if u is INFINITY or v is INFINITY:
        num = Fraction(1)
    else:
        num = abs(u - v)
        if num == 0:
            return Fraction(0)
    return num / (fu * fv)


def penetration_depth(Y: Horoball, u, v) -> CertifiedReal:
    """log(d/2) for d the projection distance: the depth to which the full
    geodesic (u, v) dips into the open horoball (negative when disjoint)."""
    u, v = _as_point(u), _as_point(v)
    t = Y.tangency
    if u == t or v == t:
        raise ValueError("endpoint at the tangency point of Y")
    if u == v:
        raise ValueError("penetration depth needs distinct endpoints")
    d = projection_distance(Y, u, v)
    if d.exact is not None:
        ex = d.exact
        if ex == 2:
            return CertifiedReal(exact=Fraction(0))
        return CertifiedReal(
            refine=lambda dps: iv.log(fraction_to_iv(ex) / 2))
    return CertifiedReal(
        refine=lambda dps: iv.log(d._refine(dps) / 2))


# -- ray geometry ---------------------------------------------------------


def _geodesic_circle(x0: Fraction, y0: Fraction, xi):
    """Center and squared radius of the geodesic through (x0, y0) with
    boundary endpoint xi; None for a vertical line (xi = infinity or below
    the point)."""
    if xi is INFINITY:
        return None
    xi_m_x0 = xi - x0
    if xi_m_x0.sign() == 0:
        return None
    # (x0-c)^2 + y0^2 = (xi-c)^2
    c = (xi * xi - Surd.from_fraction(x0 * x0 + y0 * y0)) / (xi_m_x0 * 2)
    r2 = (xi - c) * (xi - c)
    return c, r2


def ray_penetration(g: GroupElement, xi, Y: Horoball):
    """Hyperbolic length of the intersection of the ray [g*x0, xi) with the
    open Ford horoball of Y; zero if disjoint, INFINITE if xi is the
    tangency point."""
    xi = boundary(xi)
    if xi == Y.tangency:
        return INFINITE
    m = normalizer(Y)
    mg = m * g
    x0, y0 = mg.apply_point(*BASEPOINT)
    xi_n = m.apply_boundary(xi)
    # horoball is now the region above height 1
    if xi_n is INFINITY:
        # vertical ray upward: eventually inside forever
        return INFINITE
    circ = _geodesic_circle(x0, y0, xi_n)
    if circ is None:
        # vertical ray downward from (x0, y0) toward xi_n = x0
        if y0 <= 1:
            return CertifiedReal(exact=Fraction(0))
        return CertifiedReal(
            refine=lambda dps: iv.log(fraction_to_iv(y0)))
    c, r2 = circ
    if r2.compare(1) <= 0:
        return CertifiedReal(exact=Fraction(0))
    # theta parametrization z = c + R e^{i theta}; horoball arc has
    # sin(theta) > 1/R; the ray runs from theta0 (at z0) toward the endpoint
    # xi_n (theta -> 0 if xi_n > c, theta -> pi otherwise)
    toward_zero = (xi_n - c).sign() > 0

    def _length():
        civ = surd_iv(c)
        riv = iv.sqrt(surd_iv(r2))
        x0v, y0v = fraction_to_iv(x0), fraction_to_iv(y0)
        # angle of z0: cos t0 = (x0-c)/R, sin t0 = y0/R
        cos0 = (x0v - civ) / riv
        theta0 = iv_acos(cos0)
        theta_h = iv_asin(1 / riv)       # entry angle, in (0, pi/2)
        lo, hi = (iv.mpf(0), theta0) if toward_zero else (theta0, iv.pi)
        a = _iv_max(lo, theta_h)
        b = _iv_min(hi, iv.pi - theta_h)
        if b <= a:
            return iv.mpf(0)
        # integral of d theta / sin theta = log tan(theta/2)
        return iv.log(iv.tan(b / 2)) - iv.log(iv.tan(a / 2))

    # decide emptiness exactly where possible: the ray is disjoint from the
    # horoball iff the angle interval misses (theta_h, pi - theta_h)
    val = CertifiedReal(refine=lambda dps: _length())
    try:
        if val.compare(0, max_dps=120) <= 0:
            return CertifiedReal(exact=Fraction(0))
    except Undecided:
        pass
    return val


def _iv_max(a, b):
    # exact interval max via (a + b + |a - b|) / 2
    return (a + b + abs(a - b)) / 2


def _iv_min(a, b):
    return (a + b - abs(a - b)) / 2


# -- fundamental domain reduction -----------------------------------------


def locate(z) -> GroupElement:
    """g with g^{-1} z in the standard fundamental domain.

    z is a GroupElement (meaning z = g*x0) or a rational coordinate pair
    (x, y) with y > 0; the reduction is exact in both cases.  The canonical
    representative satisfies -1/2 <= Re < 1/2, |z| >= 1, and Re <= 0 on the
    unit circle.
    """
    if isinstance(z, GroupElement):
        x, y = z.apply_point(*BASEPOINT)
    else:
        x, y = Fraction(z[0]), Fraction(z[1])
        if y <= 0:
            raise ValueError("interior point needs y > 0")
    acc = IDENTITY  # accumulates the reducing word; result is its inverse
    for _ in range(10000):
        n = _round_half_down(x)
        if n != 0:
            x -= n
            acc = GroupElement(1, -n, 0, 1) * acc
        norm = x * x + y * y
        if norm < 1:
            x, y = -x / norm, y / norm
            acc = GEN_S.inverse() * acc
            continue
        if norm == 1 and x > 0:
            x = -x
            acc = GEN_S.inverse() * acc
        break
    else:  # pragma: no cover
        raise RuntimeError("reduction loop did not terminate")
    return acc.inverse()


def _round_half_down(x: Fraction) -> int:
    """Nearest integer, mapping half-integers so that x - n in [-1/2, 1/2)."""
    n = math.floor(x + Fraction(1, 2))
    if x - n == Fraction(-1, 2):
        pass
    return n


# -- geodesic parametrization ---------------------------------------------


def geodesic_point(g: GroupElement, xi, t) -> tuple[CertifiedReal, CertifiedReal]:
    """The point at arclength t >= 0 along the unit-speed ray from g*x0
    toward xi, as certified coordinates."""
    xi = boundary(xi)
    x0, y0 = g.apply_point(*BASEPOINT)
    t = CertifiedReal.of(t)

    def tval():
        if t.exact is not None:
            return fraction_to_iv(t.exact)
        return t._refine(iv.dps)

    if xi is INFINITY:
        fx = CertifiedReal(exact=x0)
        fy = CertifiedReal(refine=lambda dps: fraction_to_iv(y0) * iv.exp(tval()))
        return fx, fy
    circ = _geodesic_circle(x0, y0, xi)
    if circ is None:
        fx = CertifiedReal(exact=x0)
        fy = CertifiedReal(refine=lambda dps: fraction_to_iv(y0) * iv.exp(-tval()))
        return fx, fy
    c, r2 = circ
    toward_zero = (xi - c).sign() > 0

    def coords():
        civ = surd_iv(c)
        riv = iv.sqrt(surd_iv(r2))
        x0v, y0v = fraction_to_iv(x0), fraction_to_iv(y0)
        theta0 = iv_acos((x0v - civ) / riv)
        u0 = iv.tan(theta0 / 2)
        u = u0 * iv.exp(-tval()) if toward_zero else u0 * iv.exp(tval())
        cos_t = (1 - u * u) / (1 + u * u)
        sin_t = 2 * u / (1 + u * u)
        return civ + riv * cos_t, riv * sin_t

    fx = CertifiedReal(refine=lambda dps: coords()[0])
    fy = CertifiedReal(refine=lambda dps: coords()[1])
    return fx, fy


def hyperbolic_distance(p1, p2) -> CertifiedReal:
    """Distance between interior points given as rational pairs or pairs of
    CertifiedReal coordinates."""

    def val(w):
        if isinstance(w, CertifiedReal):
            if w.exact is not None:
                return fraction_to_iv(w.exact)
            return w._refine(iv.dps)
        return fraction_to_iv(Fraction(w))

    def _d():
        x1, y1 = val(p1[0]), val(p1[1])
        x2, y2 = val(p2[0]), val(p2[1])
        arg = 1 + ((x1 - x2) ** 2 + (y1 - y2) ** 2) / (2 * y1 * y2)
        return iv_acosh(arg)

    return CertifiedReal(refine=lambda dps: _d())


def orbit_point(g: GroupElement) -> tuple[Fraction, Fraction]:
    """g * x0 as exact rational coordinates."""
    return g.apply_point(*BASEPOINT)


def word_ball(radius: int) -> list[GroupElement]:
    """All sign-normalized elements within the given word length in T, S."""
    seen = {IDENTITY}
    frontier = [IDENTITY]
    gens = [GEN_T, GEN_T.inverse(), GEN_S]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for h in gens:
                e = g * h
                if e not in seen:
                    seen.add(e)
                    nxt.append(e)
        frontier = nxt
    return sorted(seen, key=lambda g: (g.a, g.b, g.c, g.d))
