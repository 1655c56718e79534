"""Projection-distance families and the empirical axiom checkers.

The generic interface is ProjectionFamily; the one shipped instance is the
Farey family of Ford horoballs for SL2(Z) with Delta(Y) = the whole boundary
circle.  Large projections are enumerated exactly for rational data by
solving |q*u - p| * |q*v - p| < |u - v| / theta over integer points, and in a
certified window (with an explicit tail bound) for quadratic surds.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .certified import INFINITE, CertifiedReal, Undecided, surd_interval
from .hyperbolic import (
    HOROBALL_INF,
    GroupElement,
    Horoball,
    proj_dist_frac,
    projection_distance,
)
from .surd import INFINITY, PHI, SQRT2, Surd, boundary


class WindowRequiredError(ValueError):
    """Enumeration over an irrational endpoint needs an explicit window."""


class ProjectionFamily:
    """Abstract projection data: index family with G-action, open sets
    Delta(Y), distances d^pi, a basepoint and a color count."""

    colors = 1

    def basepoint(self):
        raise NotImplementedError

    def delta_contains(self, Y, xi) -> bool:
        raise NotImplementedError

    def distance(self, Y, X, xi):
        raise NotImplementedError

    def translate_index(self, g, Y):
        raise NotImplementedError


class FareyFamily(ProjectionFamily):
    """Ford horoballs acting on the boundary circle; Delta(Y) is everything."""

    colors = 1

    def basepoint(self) -> Horoball:
        return HOROBALL_INF

    def delta_contains(self, Y: Horoball, xi) -> bool:
        return True

    def distance(self, Y: Horoball, X, xi):
        return projection_distance(Y, X, xi)

    def distance_frac(self, Y: Horoball, u, v):
        return proj_dist_frac(Y, u, v)

    def translate_index(self, g: GroupElement, Y: Horoball) -> Horoball:
        return Y.translate(g)


# -- exact enumeration of large projections --------------------------------


def _tangency_frac(x):
    if isinstance(x, Horoball):
        return INFINITY if x.q == 0 else Fraction(x.p, x.q)
    x = boundary(x)
    if x is INFINITY:
        return INFINITY
    if x.is_rational:
        return x.as_fraction()
    return x  # a genuine surd


def enumerate_large_projections(u, v, theta: Fraction, window=None):
    """All Y with d^pi_Y(u, v) > theta, as (Horoball, value) pairs.

    Horoballs whose tangency coincides with u or v are excluded (there the
    distance is infinite by convention and the horoball is not a valid
    index against itself).  Exact for rational endpoints.  For surd
    endpoints a window (denominator bound Q) is required; the result then
    carries a tail-bound certificate when one is available, raised as part
    of the returned metadata by enumerate_large_projections_windowed.
    """
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError("theta must be positive")
    u, v = _tangency_frac(u), _tangency_frac(v)
    if isinstance(u, Surd) or isinstance(v, Surd):
        if window is None:
            raise WindowRequiredError(
                "irrational endpoint: supply a denominator bound")
        hits, _unc, _tail = enumerate_large_projections_windowed(
            u, v, theta, window)
        return hits
    return _enumerate_rational(u, v, theta)


def _enumerate_rational(u, v, theta: Fraction):
    if u == v:
        return []
    hits = []
    if u is INFINITY or v is INFINITY:
        w = v if u is INFINITY else u
        return _enumerate_inf_rational(w, theta)
    return _enumerate_two_rational(u, v, theta)


def _enumerate_inf_rational(w: Fraction, theta: Fraction):
    """Hits for the pair (infinity, a/b): Y = p/q with q*|q*a - p*b| < b/theta.

    Split on the residual e = |q*a - p*b|: small q by direct scan, large q
    (hence small e) along the arithmetic progressions q*a = +-e mod b.
    Runs in roughly O(sqrt(b/theta)).
    """
    a, b = w.numerator, w.denominator
    tn, td = theta.numerator, theta.denominator
    # condition: q * e * tn < b * td
    C = Fraction(b * td, tn)
    hits = {}

    def consider(p, q):
        if q < 1 or math.gcd(abs(p), q) != 1:
            return
        e = abs(q * a - p * b)
        if e == 0:
            return  # Y would be the tangency of w itself
        if q * e * tn < b * td:
            hits[(p, q)] = Fraction(b, q * e)

    qs = math.isqrt(math.ceil(C)) + 1
    for q in range(1, qs + 1):
        p0 = (q * a) // b
        k = math.ceil(C / (q * b)) + 1
        for p in range(p0 - k, p0 + k + 1):
            consider(p, q)
    emax = math.floor(C / (qs + 1))
    if emax >= 1 and b > 1:
        ainv = pow(a % b, -1, b)
        for e in range(1, emax + 1):
            for r in ((e * ainv) % b, (-e * ainv) % b):
                q = r if r > qs else r + b * ((qs - r) // b + 1)
                while q * e * tn < b * td:
                    p_num = q * a
                    for s in (e, -e):
                        if (p_num - s) % b == 0:
                            consider((p_num - s) // b, q)
                    q += b
    elif emax >= 1:
        # b == 1: w is an integer; every e = |q*a - p| works directly
        for q in range(qs + 1, math.floor(C) + 1):
            for e in range(1, math.floor(C / q) + 1):
                consider(q * a - e, q)
                consider(q * a + e, q)
    out = [(Horoball(p, q), d) for (p, q), d in hits.items()]
    out.sort(key=lambda t: (t[0].q, t[0].p))
    return out


def _enumerate_two_rational(u: Fraction, v: Fraction, theta: Fraction):
    hits = []
    a, b = u.numerator, u.denominator
    c, e = v.numerator, v.denominator
    D = a * e - c * b  # nonzero since u != v
    absD = abs(D)
    # condition: n1 * n2 * theta < |D| with n1 = |q*a - p*b|, n2 = |q*c - p*e|
    seen = set()
    n1 = 1
    while n1 * theta < absD:
        n2 = 1
        while n1 * n2 * theta < absD:
            for s1 in (1, -1):
                for s2 in (1, -1):
                    qn = e * s1 * n1 - b * s2 * n2
                    pn = c * s1 * n1 - a * s2 * n2
                    if qn % D == 0 and pn % D == 0:
                        q, p = qn // D, pn // D
                        if (p, q) == (0, 0):
                            continue
                        if q < 0 or (q == 0 and p < 0):
                            p, q = -p, -q
                        if q == 0 and abs(p) != 1:
                            continue
                        if math.gcd(abs(p), q) != 1:
                            continue
                        Y = Horoball(p, q)
                        if (Y.p, Y.q) in seen:
                            continue
                        d = proj_dist_frac(Y, u, v)
                        if d is INFINITE:
                            continue  # tangency equals u or v: excluded
                        if d > theta:
                            seen.add((Y.p, Y.q))
                            hits.append((Y, d))
            n2 += 1
        n1 += 1
    hits.sort(key=lambda t: (t[0].q, t[0].p))
    return hits


def brute_force_large_projections(u, v, theta: Fraction, qmax: int):
    """Oracle: scan every horoball with denominator <= qmax directly."""
    u, v = _tangency_frac(u), _tangency_frac(v)
    if u == v:
        return []
    hits = []
    finite = [w for w in (u, v) if w is not INFINITY]
    # a hit needs |qu - p| |qv - p| < B = num / theta, so p lies within
    # sqrt(B) of qu or qv (both finite) or within B / q of the finite one
    num = Fraction(1) if len(finite) < 2 else abs(u - v)
    B = num / theta
    root = math.isqrt(math.ceil(B)) + 1
    if INFINITY not in (u, v):
        d_inf = proj_dist_frac(HOROBALL_INF, u, v)
        if d_inf is not INFINITE and d_inf > theta:
            hits.append((HOROBALL_INF, d_inf))
    for q in range(1, qmax + 1):
        pad = root if len(finite) == 2 else math.ceil(B / q) + 1
        ps = set()
        for w in finite:
            center = math.floor(w * q)
            ps.update(range(center - pad, center + pad + 2))
        for p in sorted(ps):
            if math.gcd(abs(p), q) != 1:
                continue
            Y = Horoball(p, q)
            d = proj_dist_frac(Y, u, v)
            if d is INFINITE:
                continue
            if d > theta:
                hits.append((Y, d))
    hits.sort(key=lambda t: (t[0].q, t[0].p))
    return hits


def _surd_bounds(x, dps: int = 60) -> tuple[Fraction, Fraction]:
    if isinstance(x, Fraction):
        return x, x
    return surd_interval(x, dps)


def _liouville_floor(x: Surd, delta: Fraction) -> Fraction:
    """c with |x - p/q| >= c / q^2 for all p/q within delta of x (p/q != x)."""
    A, B, C = x.min_poly()
    if A == 0:
        # rational a/b: |x - p/q| >= 1/(b*q); report as c/q^2 with c = q/b...
        # handled separately by callers; return 0 sentinel
        return Fraction(0)
    # |x - p/q| = |A p^2 + B p q + C q^2| / (q^2 A |p/q - conj|)
    #          >= 1 / (q^2 A (|x - conj| + delta))
    gap = abs(Surd(0, 2 * abs(x.q), x.d, x.r))  # |x - conjugate|
    _, gap_hi = _surd_bounds(gap)
    return 1 / (A * (gap_hi + delta))


def enumerate_large_projections_windowed(u, v, theta: Fraction, qmax: int):
    """Windowed enumeration for (possibly) irrational endpoints.

    Returns (hits, uncertain, tail_bound) where tail_bound is a certified
    upper bound for d^pi_Y(u, v) over all Y with denominator > qmax, or
    None when no bound is available.
    """
    theta = Fraction(theta)
    u, v = _tangency_frac(u), _tangency_frac(v)
    su = u if isinstance(u, Surd) else (None if u is INFINITY else Surd.from_fraction(u))
    sv = v if isinstance(v, Surd) else (None if v is INFINITY else Surd.from_fraction(v))
    if u is not INFINITY and v is not INFINITY and su == sv:
        return [], [], Fraction(0)
    hits, uncertain = [], []
    seen = set()
    # certified numerator bound |u - v| (or the 1-replacement at infinity)
    if u is INFINITY or v is INFINITY:
        num_hi = Fraction(1)
        num_lo = Fraction(1)
    else:
        lo_u, hi_u = _surd_bounds(su)
        lo_v, hi_v = _surd_bounds(sv)
        num_hi = max(abs(hi_u - lo_v), abs(hi_v - lo_u))
        num_lo = max(Fraction(0), max(lo_u - hi_v, lo_v - hi_u))
    C = num_hi / theta
    margin = math.isqrt(math.ceil(C)) + 2
    targets = [w for w in (su, sv) if w is not None]
    for q in range(1, qmax + 1):
        cands = set()
        for w in targets:
            lo_w, hi_w = _surd_bounds(w)
            base = math.floor(lo_w * q)
            top = math.ceil(hi_w * q)
            for p in range(base - margin, top + margin + 1):
                if math.gcd(abs(p), q) == 1:
                    cands.add(p)
        for p in cands:
            if (p, q) in seen:
                continue
            seen.add((p, q))
            Y = Horoball(p, q)
            t = Y.tangency
            if (su is not None and t == su) or (sv is not None and t == sv):
                continue
            d = projection_distance(Y, u if u is INFINITY else su,
                                    v if v is INFINITY else sv)
            if d is INFINITE:
                continue
            try:
                cmp = d.compare(theta, max_dps=400)
            except Undecided:
                uncertain.append((Y, d))
                continue
            if cmp > 0:
                hits.append((Y, d))
    if u is INFINITY or v is INFINITY:
        # d = 1/(q |q w - p|) <= 1/q <= 1/qmax ... only if |q w - p| >= 1;
        # near w the Liouville bound gives |q w - p| >= c/q
        w = sv if u is INFINITY else su
        if w.is_rational:
            tail = None  # exact enumeration handles rational data
        else:
            # d = 1/(q^2 |w - p/q|); with delta = 1/qmax either the
            # approximation is delta-close (Liouville floor) or not
            delta = Fraction(1, qmax)
            cw = _liouville_floor(w, delta)
            tail = max(1 / cw, delta) if cw > 0 else None
    else:
        if num_lo == 0:
            tail = None
        else:
            delta = min(num_lo / 2, Fraction(1, qmax))
            parts = [num_hi / (Fraction(qmax) ** 2 * delta * delta)]
            ok = True
            for w in (su, sv):
                if w.is_rational:
                    b = w.as_fraction().denominator
                    parts.append(num_hi / ((num_lo - delta) / b * qmax))
                else:
                    cw = _liouville_floor(w, delta)
                    if cw == 0:
                        ok = False
                        break
                    parts.append(num_hi / (cw * (num_lo - delta)))
            tail = max(parts) if ok else None
    hits.sort(key=lambda t2: (t2[0].q, t2[0].p))
    return hits, uncertain, tail


@dataclass
class SupResult:
    """Windowed supremum information for Y -> d^pi_Y(X, xi).

    `attained` is the maximum over the window (INFINITE for rational xi,
    None for an empty window), `witness` realizes it, and `upper` is a
    certified upper bound for the supremum over ALL horoballs outside the
    window (None when the sup is infinite or no certificate exists).  The
    true supremum lies in [attained, max(attained, upper)] and can be a
    non-attained limit, so thresholds must be decided via `above`/`below`.
    """

    attained: object = None
    witness: Horoball | None = None
    upper: Fraction | None = None
    floor: Fraction = Fraction(0)

    def above(self, threshold: Fraction) -> bool:
        """Certified: sup > threshold."""
        if self.attained is INFINITE:
            return True
        if self.attained is None:
            return False
        return self.attained.compare(threshold, max_dps=400) > 0

    def below(self, threshold: Fraction) -> bool:
        """Certified: sup < threshold."""
        if self.attained is INFINITE or self.upper is None:
            return False
        if self.upper >= threshold:
            return False
        if self.attained is None:
            return self.floor < threshold
        return self.attained.compare(threshold, max_dps=400) < 0


def sup_projection(X: Horoball, xi, floor_theta: Fraction,
                   qmax: int = 4000) -> SupResult:
    """Windowed supremum of d^pi_Y(X, xi) over horoballs Y != X.

    For rational xi (or infinity) the sup is infinite, attained in the
    limit at the tangency horoball of xi.  For quadratic surds the window
    max is exact and the tail beyond denominator qmax carries a certified
    upper bound; values <= floor_theta inside the window are not tracked.
    """
    t = _tangency_frac(xi)
    if not isinstance(t, Surd):
        HY = Horoball(1, 0) if t is INFINITY else Horoball(t.numerator, t.denominator)
        if HY != X:
            return SupResult(attained=INFINITE, witness=HY)
        return SupResult(attained=None, witness=None, upper=None)
    xf = INFINITY if X.q == 0 else Fraction(X.p, X.q)
    hits, uncertain, tail = enumerate_large_projections_windowed(
        xf, t, floor_theta, qmax)
    if uncertain:
        raise WindowRequiredError("undecided candidates in window")
    best = None
    for Y, d in hits:
        if best is None or d.compare(best[1], max_dps=400) > 0:
            best = (Y, d)
    if best is None:
        if tail is None:
            raise WindowRequiredError("empty window and no tail certificate")
        return SupResult(attained=None, witness=None,
                         upper=max(tail, floor_theta), floor=floor_theta)
    upper = None if tail is None else max(tail, floor_theta)
    return SupResult(attained=best[1], witness=best[0], upper=upper,
                     floor=floor_theta)


def pair_maxmin(Y: Horoball, Yp: Horoball):
    """sup over xi of min{d^pi_Y(Y', xi), d^pi_Y'(Y, xi)}, exact.

    Moving Y to infinity sends Y' to some p/q; the two distances become
    |p/q - xi| and 1/(q^2 |xi - p/q|), whose min is maximized where they
    cross, at |xi - p/q| = 1/q.  The value 1/q is the reciprocal of the
    integer |p'q - pq'|.  Returns (value, witness xi in the original chart).
    """
    if Y == Yp:
        raise ValueError("distinct horoballs required")
    from .hyperbolic import normalizer
    m = normalizer(Y)
    Ypp = Yp.translate(m)
    q = Ypp.q
    if q == 0:
        # Y' maps to infinity: symmetric picture, crossing at distance 1
        # from Y's image 0/1... normalize the other way around instead
        m = normalizer(Yp)
        Ypp = Y.translate(m)
        q = Ypp.q
    xi_hat = Fraction(Ypp.p + 1, q)
    xi = m.inverse().apply_boundary(xi_hat)
    return Fraction(1, q), xi


def calibrate_behrstock(qmax: int = 50):
    """Exhaustive (P3) calibration over the window 0 <= p <= q <= qmax.

    Every pair of distinct horoballs is equivalent under the group action to
    a pair handled here (translate one tangency into [0,1] and shift), so
    the exhaustive window determines the constant.  Each pair's exact
    sup-min is evaluated at its crossing point as an independent check.
    Returns (theta_hat, report).
    """
    window = [Horoball(1, 0)]
    for q in range(1, qmax + 1):
        for p in range(0, q + 1):
            if math.gcd(p, q) == 1:
                window.append(Horoball(p, q))
    fam = FareyFamily()
    best = Fraction(0)
    witness = None
    checked = 0
    for i, Y in enumerate(window):
        for Yp in window[i + 1:]:
            val, xi = pair_maxmin(Y, Yp)
            if val > best:
                # independent evaluation at the crossing point
                xi_f = xi.as_fraction() if xi is not INFINITY and not isinstance(xi, Fraction) else xi
                d1 = fam.distance_frac(Y, _tangency_frac(Yp), xi_f)
                d2 = fam.distance_frac(Yp, _tangency_frac(Y), xi_f)
                got = min(d1, d2)
                if got != val:
                    raise AssertionError(
                        f"crossing check failed for {Y},{Yp}: {got} != {val}")
                best, witness = val, (Y, Yp, xi_f)
                checked += 1
    rep = AxiomReport("P3-calibration")
    rep.samples = len(window) * (len(window) - 1) // 2
    rep.constant = float(best)
    rep.witnesses = [{"Y": _hb_str(witness[0]), "Y'": _hb_str(witness[1]),
                      "xi": str(witness[2])}]
    return best, rep


# -- axiom reports ---------------------------------------------------------


@dataclass
class AxiomReport:
    axiom: str
    samples: int = 0
    violations: int = 0
    constant: float | None = None
    witnesses: list = field(default_factory=list)
    undecided: int = 0

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        if other.axiom != self.axiom:
            raise ValueError("cannot merge reports for different axioms")
        const = self.constant
        if other.constant is not None:
            const = other.constant if const is None else max(const, other.constant)
        return AxiomReport(
            axiom=self.axiom,
            samples=self.samples + other.samples,
            violations=self.violations + other.violations,
            constant=const,
            witnesses=(self.witnesses + other.witnesses)[:20],
            undecided=self.undecided + other.undecided,
        )

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "samples": self.samples,
            "violations": self.violations,
            "constant": None if self.constant is None else float(self.constant),
            "witnesses": self.witnesses,
            "undecided": self.undecided,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _hb_str(Y: Horoball) -> str:
    return "oo" if Y.q == 0 else f"{Y.p}/{Y.q}"


def check_symmetry(family: FareyFamily, sample) -> AxiomReport:
    """(P1): d^pi_Y(X, Z) = d^pi_Y(Z, X), exact on rational data."""
    rep = AxiomReport("P1")
    for (Y, u, v) in sample:
        rep.samples += 1
        d1 = family.distance_frac(Y, u, v)
        d2 = family.distance_frac(Y, v, u)
        if d1 != d2:
            rep.violations += 1
            rep.witnesses.append({"Y": _hb_str(Y), "u": str(u), "v": str(v)})
    return rep


def check_triangle(family: FareyFamily, sample) -> AxiomReport:
    """(P2): d^pi_Y(X, Z) + d^pi_Y(Z, xi) >= d^pi_Y(X, xi), exact."""
    rep = AxiomReport("P2")
    for (Y, u, v, w) in sample:
        rep.samples += 1
        duv = family.distance_frac(Y, u, v)
        dvw = family.distance_frac(Y, v, w)
        duw = family.distance_frac(Y, u, w)
        if duw is INFINITE:
            if duv is INFINITE or dvw is INFINITE:
                continue
            rep.violations += 1
        elif duv is INFINITE or dvw is INFINITE:
            continue
        elif duv + dvw < duw:
            rep.violations += 1
            rep.witnesses.append(
                {"Y": _hb_str(Y), "u": str(u), "v": str(v), "w": str(w)})
    return rep


def check_behrstock(family: FareyFamily, sample,
                    theta: Fraction | None = None) -> AxiomReport:
    """(P3): min{d^pi_Y(Y', xi), d^pi_Y'(Y, xi)} stays below theta.

    Reports the measured maximum of the min over the sample as `constant`.
    """
    rep = AxiomReport("P3")
    best = Fraction(0)
    for (Y, Yp, xi) in sample:
        if Y == Yp:
            continue
        rep.samples += 1
        d1 = family.distance_frac(Y, _tangency_frac(Yp), xi)
        d2 = family.distance_frac(Yp, _tangency_frac(Y), xi)
        if d1 is INFINITE and d2 is INFINITE:
            rep.violations += 1  # cannot happen for distinct tangencies
            continue
        m = d2 if d1 is INFINITE else (d1 if d2 is INFINITE else min(d1, d2))
        if m > best:
            best = m
            rep.witnesses = [{
                "Y": _hb_str(Y), "Y'": _hb_str(Yp), "xi": str(xi),
                "min": float(m)}]
        if theta is not None and m >= theta:
            rep.violations += 1
    rep.constant = float(best)
    rep.exact_constant = best
    return rep


def check_finiteness(family: FareyFamily, pairs, theta: Fraction,
                     qmax: int) -> AxiomReport:
    """(P4): the exact enumeration equals brute force over q <= qmax."""
    rep = AxiomReport("P4")
    for (u, v) in pairs:
        rep.samples += 1
        fast = {(Y.p, Y.q) for Y, _ in enumerate_large_projections(u, v, theta)}
        slow = {(Y.p, Y.q)
                for Y, _ in brute_force_large_projections(u, v, theta, qmax)}
        fast_win = {k for k in fast if k[1] <= qmax}
        if fast_win != slow:
            rep.violations += 1
            rep.witnesses.append({
                "u": str(u), "v": str(v),
                "missing": sorted(slow - fast_win)[:5],
                "extra": sorted(fast_win - slow)[:5]})
    return rep


def certify_semicontinuity(Y: Horoball, X: Horoball, xi, Theta: Fraction,
                           theta: Fraction, max_halvings: int = 60):
    """(P5), constructively: an interval U around xi with certified
    d^pi_Y(X, xi') > Theta - theta on U, or None.

    Works by exact endpoint evaluation of the closed form, which is a
    Moebius function of xi' and hence monotone away from its pole (the
    tangency of Y) and its zero (the tangency of X).
    """
    target = Theta - theta
    if target <= 0:
        return (None, None)  # trivially certified by the whole circle
    t = _tangency_frac(xi)
    if isinstance(t, Surd):
        lo0, hi0 = _surd_bounds(t)
        delta = Fraction(1, 4)
        center_lo, center_hi = lo0, hi0
    else:
        if t is INFINITY:
            # work in the chart w = -1/xi around infinity
            raise NotImplementedError(
                "semicontinuity certification at infinity is done by the "
                "caller after an inversion")
        delta = Fraction(1, 4)
        center_lo = center_hi = t
    for _ in range(max_halvings):
        lo, hi = center_lo - delta, center_hi + delta
        val = _interval_inf_dpi(Y, X, lo, hi)
        if val is not None and val > target:
            return (lo, hi)
        delta /= 2
    return None


def _interval_inf_dpi(Y: Horoball, X: Horoball, lo: Fraction, hi: Fraction):
    """Certified infimum of xi' -> d^pi_Y(X, xi') over [lo, hi].

    The map is a Moebius function of xi' in absolute value: monotone on each
    side of its pole (tangency of Y) and zero (tangency of X).  If the zero
    lies inside the interval the infimum is 0; a pole inside only increases
    the value, so endpoint evaluation is a correct lower bound.
    """
    xt = _tangency_frac(X)
    if xt is not INFINITY and lo <= xt <= hi:
        return Fraction(0)
    vals = []
    for e in (lo, hi):
        d = proj_dist_frac(Y, _tangency_frac(X), e)
        if d is INFINITE:
            continue
        vals.append(d)
    if not vals:
        return None
    yt = _tangency_frac(Y)
    if yt is not INFINITY and lo < yt < hi:
        return min(vals)  # pole inside: function dips only toward endpoints
    return min(vals)


def check_semicontinuity(family: FareyFamily, sample, Theta: Fraction,
                         theta: Fraction) -> AxiomReport:
    """(P5): for each (Y, X, xi) with d >= Theta, produce a certified
    neighborhood; counts certification failures as undecided."""
    rep = AxiomReport("P5")
    for (Y, X, xi) in sample:
        d = family.distance_frac(Y, _tangency_frac(X), _tangency_frac(xi)) \
            if not isinstance(_tangency_frac(xi), Surd) else None
        if d is None:
            dd = projection_distance(Y, X, xi)
            if dd is INFINITE:
                d = INFINITE
            else:
                try:
                    if dd.compare(Theta, max_dps=200) < 0:
                        continue
                except Undecided:
                    rep.undecided += 1
                    continue
                d = dd
        elif d is not INFINITE and d < Theta:
            continue
        rep.samples += 1
        try:
            got = certify_semicontinuity(Y, X, xi, Theta, theta)
        except NotImplementedError:
            rep.undecided += 1
            continue
        if got is None:
            rep.undecided += 1
        elif got == (None, None):
            pass  # trivially certified
    return rep


# -- samplers --------------------------------------------------------------


def stern_brocot_horoball(rng: random.Random, depth: int = 12) -> Horoball:
    """Uniform random descent in the Stern-Brocot tree, depth <= depth."""
    lo, hi = (0, 1), (1, 0)
    steps = rng.randint(0, depth)
    p, q = 1, 1
    for _ in range(steps):
        if rng.random() < 0.5:
            hi = (p, q)
        else:
            lo = (p, q)
        p, q = lo[0] + hi[0], lo[1] + hi[1]
    shift = rng.randint(-2, 2)
    return Horoball(p + shift * q, q)


def random_rational(rng: random.Random, qmax: int = 50) -> Fraction:
    q = rng.randint(1, qmax)
    p = rng.randint(-2 * q, 2 * q)
    return Fraction(p, q)


def surd_sample_set() -> list[Surd]:
    base = [PHI, SQRT2, Surd(1, 1, 3, 1)]
    out = list(base) + [s.conjugate() for s in base]
    return out


def sample_triples_rational(rng: random.Random, n: int, qmax: int = 50):
    """Triples (Y, u, v) for (P1) and quadruples for (P2)."""
    for _ in range(n):
        Y = stern_brocot_horoball(rng, 8)
        u = random_rational(rng, qmax) if rng.random() < 0.9 else INFINITY
        v = random_rational(rng, qmax) if rng.random() < 0.9 else INFINITY
        yield (Y, u, v)
