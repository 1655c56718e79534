"""The thick-part cover: ray classification, the coarse flow space,
flow-line charts, long thin covers along the flow, and pullbacks.

The compact thick part is encoded by a depth bound: a ray is thick when
every horoball penetration stays at or below D_max = log(Theta/2),
equivalently when no projection distance exceeds Theta.  The coarse flow
space is sampled as triples (x_-, v, xi_+) of orbit points within rho of a
witness ray; clusters toward a common forward endpoint form flow-line
charts with an arclength parameter, and the long thin cover lays two
staggered interval families of length 4*beta along each chart.  The coarse
flow map iota_tau pushes a pair (g, xi) to the orbit points near the time-
tau point of its ray, and covers pull back through it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .certified import CertifiedReal, INFINITE, Undecided
from .hyperbolic import (
    BASEPOINT,
    GroupElement,
    HOROBALL_INF,
    Horoball,
    IDENTITY,
    geodesic_point,
    hyperbolic_distance,
    locate,
    orbit_point,
    word_ball,
)
from .projection_data import WindowRequiredError, sup_projection
from .surd import INFINITY, Surd, boundary


@dataclass(frozen=True)
class ThickParams:
    """Parameters of the coarse flow space CF(K, rho).

    The compact set is the D_max-thick part, D_max = log(Theta/2); rho
    must dominate the distance from the basepoint to K and to its S-orbit.
    """

    Theta: Fraction
    rho: Fraction
    beta: Fraction
    t_max: Fraction = Fraction(12)
    t_step: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.Theta <= 2:
            raise ValueError("need Theta > 2 for a positive depth bound")
        if self.rho < 0 or self.beta <= 0:
            raise ValueError("need rho >= 0 and beta > 0")

    @property
    def depth_bound(self) -> float:
        return math.log(float(self.Theta) / 2)

    def t_grid(self):
        t = Fraction(0)
        while t <= self.t_max:
            yield t
            t += self.t_step


@dataclass
class ThickCertificate:
    """All penetrations of the ray [g x0, xi) are at most log(Theta/2):
    every projection distance onto a horoball is certified <= upper."""

    g: GroupElement
    xi: object
    upper: Fraction
    window_qmax: int


def classify(g: GroupElement, xi, Theta: Fraction, qmax: int = 4000):
    """Thick/thin dichotomy for the ray from g x0 toward xi.

    Returns a ThickCertificate, or a pair (Horoball, value) with certified
    projection distance above Theta.  Computed in the base chart at
    (e, g^{-1} xi), then translated back.
    """
    w = g.inverse().apply_boundary(boundary(xi))
    if w is INFINITY:
        return HOROBALL_INF.translate(g), INFINITE
    if w.is_rational:
        f = w.as_fraction()
        return Horoball(f.numerator, f.denominator).translate(g), INFINITE
    sup = sup_projection(HOROBALL_INF, w, Theta / 2, qmax)
    if sup.above(Theta):
        val = sup.attained
        return sup.witness.translate(g), val
    if sup.below(Theta):
        upper = sup.upper
        if sup.attained is not None:
            hi = sup.attained.interval(40)[1]
            upper = max(upper, hi) if upper is not None else hi
        return ThickCertificate(g, boundary(xi), upper, qmax)
    raise WindowRequiredError("classification undecided at this window")


# -- the coarse flow space --------------------------------------------------


def _point_snapshot(fx: CertifiedReal, fy: CertifiedReal,
                    dps: int = 40) -> tuple[Fraction, Fraction]:
    return fx.midpoint(dps), fy.midpoint(dps)


_NEIGHBOR_BALL = None


def _neighbors():
    global _NEIGHBOR_BALL
    if _NEIGHBOR_BALL is None:
        _NEIGHBOR_BALL = tuple(word_ball(2))
    return _NEIGHBOR_BALL


def orbit_points_near(point, rho: Fraction, slack: float = 0.05) -> list:
    """Orbit elements v with d_T(v x0, point) <= rho (certified; elements
    in the float slack band around rho are resolved by interval compare).

    `point` is a pair of CertifiedReal or rational coordinates.
    """
    px, py = point
    if isinstance(px, CertifiedReal):
        sx, sy = _point_snapshot(px, py)
    else:
        sx, sy = Fraction(px), Fraction(py)
    h = locate((sx, sy))
    out = []
    pf = (float(sx), float(sy))
    for u in _neighbors():
        v = h * u
        ox, oy = orbit_point(v)
        # cheap float prefilter before certified comparison
        fx, fy = float(ox), float(oy)
        arg = 1 + ((fx - pf[0]) ** 2 + (fy - pf[1]) ** 2) / (2 * fy * pf[1])
        d = math.acosh(max(arg, 1.0))
        if d > float(rho) + slack:
            continue
        dist = hyperbolic_distance((ox, oy), point)
        try:
            if dist.compare(rho, max_dps=60) <= 0:
                out.append(v)
        except Undecided:
            out.append(v)  # boundary case: keep (closure-approximate)
    return out


@dataclass(frozen=True)
class FlowTriple:
    x_minus: GroupElement
    v: GroupElement
    xi_plus: object  # boundary point

    def translate(self, gamma: GroupElement) -> "FlowTriple":
        return FlowTriple(gamma * self.x_minus, gamma * self.v,
                          gamma.apply_boundary(self.xi_plus))


@dataclass
class CoarseFlowSample:
    params: ThickParams
    triples: list = field(default_factory=list)  # (FlowTriple, t parameter)
    closure_approximate: bool = True

    def size(self) -> int:
        return len(self.triples)


def sample_coarse_flow(params: ThickParams, generators_radius: int,
                       xi_set) -> CoarseFlowSample:
    """Enumerate CF_0 triples: for g in the word ball and thick xi, walk
    the witness ray [g x0, xi) and record orbit points within rho."""
    sample = CoarseFlowSample(params)
    for g in word_ball(generators_radius):
        for xi in xi_set:
            xi = boundary(xi)
            for t in params.t_grid():
                pt = geodesic_point(g, xi, t)
                for v in orbit_points_near(pt, params.rho):
                    sample.triples.append((FlowTriple(g, v, xi), t))
    return sample


def flow_point(g: GroupElement, xi, tau, params: ThickParams) -> set:
    """iota_tau(g, xi): orbit points within rho of the time-tau point of
    the witness ray from g x0 toward xi."""
    pt = geodesic_point(g, boundary(xi), tau)
    return set(orbit_points_near(pt, params.rho))


# -- flow-line charts -------------------------------------------------------


def _ray_parameter_fn(xi):
    """Signed arclength along the geodesic from the basepoint toward xi,
    of the orthogonal projection of a point (x, y); float precision, which
    only feeds the interval combinatorics of the cover."""
    if xi is INFINITY:
        return lambda x, y: math.log(y)
    f = float(xi)
    if f == 0.0:
        return lambda x, y: -math.log(y)
    c = (f * f - 1) / (2 * f)
    u0 = math.tan(math.atan2(1.0, -c) / 2)
    toward_zero = f > c

    def param(x, y):
        u = math.tan(math.atan2(y, x - c) / 2)
        return math.log(u0 / u) if toward_zero else math.log(u / u0)

    return param


def _line_distance_fn(xi):
    """Distance from a point to the full geodesic line carrying the
    basepoint witness ray toward xi (float)."""
    if xi is INFINITY:
        return lambda x, y: math.asinh(abs(x) / y)
    f = float(xi)
    if f == 0.0:
        return lambda x, y: math.asinh(abs(x) / y)
    c = (f * f - 1) / (2 * f)
    r2 = (f - c) ** 2

    def dist(x, y):
        num = abs((x - c) ** 2 + y * y - r2)
        return math.asinh(num / (2 * math.sqrt(r2) * y))

    return dist


def _float_hyp(p, q) -> float:
    arg = 1 + ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2) / (2 * p[1] * q[1])
    return math.acosh(max(arg, 1.0))


@dataclass
class FlowLineChart:
    """Orbit points near a common forward endpoint, with an arclength
    parameter along the canonical witness ray from the basepoint.

    The parameter of a member is intrinsic (projection onto the witness
    ray, snapped to a quarter-integer grid); the tolerance records how far
    the discovering rays' own arclengths strayed from it.  Orbit points
    further than line_R from the carrying geodesic belong to other flow
    lines and are not admitted."""

    xi_plus: object
    line_R: float = 3.0
    members: dict = field(default_factory=dict)  # v -> parameter t
    tolerance: Fraction = Fraction(0)

    def __post_init__(self):
        self._param_fn = _ray_parameter_fn(self.xi_plus)
        self._dist_fn = _line_distance_fn(self.xi_plus)
        self._coords = {}

    def add(self, v: GroupElement, t_observed: Fraction) -> bool:
        if v not in self.members:
            x, y = (float(w) for w in orbit_point(v))
            if self._dist_fn(x, y) > self.line_R:
                return False
            self._coords[v] = (x, y)
            self.members[v] = Fraction(round(4 * self._param_fn(x, y)), 4)
        self.tolerance = max(self.tolerance,
                             abs(self.members[v] - t_observed))
        return True

    def parameter(self, v: GroupElement):
        return self.members.get(v)

    def audit_embedding(self, mu_hat: float = 2.0):
        """The parameter map is a (mu_hat, A_hat)-quasi-isometric embedding
        of (members, d_T) into the reals: measure the best additive A_hat
        for the given multiplicative bound, over all member pairs."""
        vs = sorted(self.members, key=lambda v: (self.members[v], v.a, v.b,
                                                 v.c, v.d))
        A_hat = 0.0
        for i, u in enumerate(vs):
            pu = self._coords.get(u) or tuple(
                float(w) for w in orbit_point(u))
            for w in vs[i + 1:]:
                pw = self._coords.get(w) or tuple(
                    float(z) for z in orbit_point(w))
                d = _float_hyp(pu, pw)
                dt = abs(float(self.members[u] - self.members[w]))
                A_hat = max(A_hat, dt - mu_hat * d, d - mu_hat * dt)
        return mu_hat, A_hat

    def to_dict(self):
        return {
            "xi_plus": str(self.xi_plus),
            "tolerance": str(self.tolerance),
            "members": [{"v": repr(v), "t": str(t)}
                        for v, t in sorted(
                            self.members.items(),
                            key=lambda kv: (kv[1], kv[0].a, kv[0].b))],
        }


def build_charts(sample: CoarseFlowSample, max_A: float | None = None):
    """Cluster the sample by forward endpoint; members must sit within
    line_R = rho + 1 of the carrying geodesic (points further out belong
    to other flow lines), with the intrinsic arclength parameter.  Charts
    violating the (2, max_A) embedding audit are rejected with
    diagnostics."""
    line_R = float(sample.params.rho) + 1.0
    if max_A is None:
        max_A = 2 * line_R + 1.0
    charts: dict = {}
    for triple, t in sample.triples:
        key = str(triple.xi_plus)
        chart = charts.setdefault(key,
                                  FlowLineChart(triple.xi_plus, line_R))
        chart.add(triple.v, t)
    accepted, rejected = {}, []
    for key, chart in charts.items():
        mu, A = chart.audit_embedding()
        if A <= max_A:
            accepted[key] = chart
        else:
            rejected.append({"xi_plus": key, "mu_hat": mu, "A_hat": A})
    return accepted, rejected


# -- the long thin cover ----------------------------------------------------


@dataclass(frozen=True)
class CoverElement:
    """(chart cluster) x (parameter interval [lo, hi)), fattened in the
    x_-/xi_+ coordinates by the cluster tolerance."""

    chart_key: str
    lo: Fraction
    hi: Fraction
    family: int  # 0 or 1 (stagger offset)

    def contains(self, chart_key: str, t: Fraction) -> bool:
        return chart_key == self.chart_key and self.lo <= t < self.hi


@dataclass
class LongThinCover:
    elements: list
    charts: dict
    beta: Fraction
    order_measured: int = 0
    longness_ok: bool = True
    rejected_charts: list = field(default_factory=list)

    def elements_containing(self, chart_key: str, t: Fraction):
        return [U for U in self.elements if U.contains(chart_key, t)]

    def member_elements(self, v: GroupElement, xi_plus=None):
        """Cover elements containing the flow point v.

        A flow triple belongs to the chart of its own forward endpoint, so
        when `xi_plus` is given only that chart is consulted; without it
        every chart whose line passes near v counts (the orbit-point
        relaxation used by the small-scale oracles)."""
        out = []
        want = None if xi_plus is None else str(xi_plus)
        for key, chart in self.charts.items():
            if want is not None and key != want:
                continue
            t = chart.parameter(v)
            if t is not None:
                out.extend(self.elements_containing(key, t))
        return out


def build_long_thin_cover(sample: CoarseFlowSample,
                          beta: Fraction) -> LongThinCover:
    """Two staggered families of parameter intervals of length 4*beta
    (offsets 0 and 2*beta) along each flow-line chart.  Order and
    beta-longness are measured on the sample."""
    if not sample.triples:
        raise ValueError("empty coarse flow sample")
    beta = Fraction(beta)
    charts, rejected = build_charts(sample)
    elements = []
    for key, chart in charts.items():
        ts = list(chart.members.values())
        lo, hi = min(ts), max(ts)
        for fam, offset in ((0, Fraction(0)), (1, 2 * beta)):
            k = math.floor((lo - offset) / (4 * beta))
            start = offset + 4 * beta * k
            while start <= hi:
                elements.append(CoverElement(key, start, start + 4 * beta,
                                             fam))
                start += 4 * beta
    cover = LongThinCover(elements, charts, beta,
                          rejected_charts=rejected)
    order = 0
    longness = True
    for key, chart in charts.items():
        for v, t in chart.members.items():
            hits = cover.elements_containing(key, t)
            order = max(order, len(hits))
            # beta-longness: the beta-ball around t in the parameter lies
            # inside a single element of one family
            if not any(U.lo <= t - beta and t + beta < U.hi for U in hits):
                longness = False
    cover.order_measured = order
    cover.longness_ok = longness
    return cover


def fsubset_check(cover: LongThinCover, sample: CoarseFlowSample,
                  radius: int = 2) -> int:
    """Empirical VCyc-subset property: gamma U and U meet in a sampled
    orbit point only when gamma stabilizes the chart's endpoint.  Returns
    the number of failures."""
    failures = 0
    for gamma in word_ball(radius):
        if gamma == IDENTITY:
            continue
        for U in cover.elements:
            chart = cover.charts[U.chart_key]
            gxi = gamma.apply_boundary(chart.xi_plus)
            if gxi == chart.xi_plus:
                continue  # gamma in the endpoint stabilizer: exempt
            # gamma U consists of triples with forward endpoint gamma xi,
            # so gamma U meets U only if the translated chart collides
            # with U's own chart
            if str(gxi) == U.chart_key:
                failures += 1
    return failures


# -- pullback through the coarse flow --------------------------------------


@dataclass
class PulledBackSet:
    """iota_S^{-tau} U, represented intensionally."""

    U: CoverElement
    cover: LongThinCover
    tau: Fraction
    params: ThickParams

    def contains(self, g: GroupElement, xi) -> bool:
        pts = flow_point(g, xi, self.tau, self.params)
        if not pts:
            return False
        for v in pts:
            if self.U not in self.cover.member_elements(v, xi):
                return False
        return True


def pullback(U: CoverElement, tau, cover: LongThinCover,
             params: ThickParams) -> PulledBackSet:
    return PulledBackSet(U, cover, Fraction(tau), params)


def _s_long_element(g: GroupElement, xi, S, tau, cover: LongThinCover,
                    params: ThickParams):
    """A cover element whose pullback contains (gs, xi) for every s in S,
    or None."""
    groups = []
    for s in S:
        pts = flow_point(g * s, xi, tau, params)
        if not pts:
            return None
        hit_sets = []
        for v in pts:
            hit_sets.append(set(cover.member_elements(v, xi)))
        common = set.intersection(*hit_sets) if hit_sets else set()
        if not common:
            return None
        groups.append(common)
    total = set.intersection(*groups)
    if not total:
        return None
    return sorted(total, key=lambda U: (U.chart_key, U.family, U.lo))[0]


def choose_tau(S, params: ThickParams, sample_pairs, cover: LongThinCover,
               tau_max: Fraction = Fraction(16)) -> dict:
    """Doubling search for a tau making every sampled thick pair S-long in
    the pulled-back cover.  `failed: not-found-within-budget` is reported
    when tau_max is reached; the underlying limit statement guarantees
    existence only asymptotically."""
    tau = params.beta
    report = {"tau_chosen": None, "attempts": [], "status": "not-found-within-budget"}
    while tau <= tau_max:
        failures = 0
        for g, xi in sample_pairs:
            if _s_long_element(g, xi, S, tau, cover, params) is None:
                failures += 1
        report["attempts"].append({"tau": str(tau), "failures": failures})
        if failures == 0:
            report["tau_chosen"] = str(tau)
            report["status"] = "ok"
            return report
        tau *= 2
    return report


# -- cover extension in the invariant ambient metric -----------------------


def word_distance(g: GroupElement, h: GroupElement, cap: int = 8) -> int:
    """Word distance in the generators, capped."""
    target = g.inverse() * h
    if target == IDENTITY:
        return 0
    ball = {IDENTITY}
    frontier = [IDENTITY]
    from .hyperbolic import GEN_S, GEN_T
    gens = [GEN_T, GEN_T.inverse(), GEN_S]
    for r in range(1, cap + 1):
        nxt = []
        for e in frontier:
            for u in gens:
                w = e * u
                if w == target:
                    return r
                if w not in ball:
                    ball.add(w)
                    nxt.append(w)
        frontier = nxt
    return cap + 1


def boundary_distance(x, y) -> float:
    """Chordal metric on the boundary circle (infinity at the pole)."""

    def chart(z):
        if z is INFINITY:
            return (0.0, 1.0)
        f = float(z)
        return (2 * f / (1 + f * f), (f * f - 1) / (1 + f * f))

    ax, ay = chart(boundary(x))
    bx, by = chart(boundary(y))
    return math.hypot(ax - bx, ay - by)


def ambient_metric(p, q) -> float:
    """Invariant metric on G x boundary: word distance plus the boundary
    distance between the base-chart endpoints."""
    (g, xi), (h, eta) = p, q
    wd = word_distance(g, h)
    bd = boundary_distance(g.inverse().apply_boundary(boundary(xi)),
                           h.inverse().apply_boundary(boundary(eta)))
    return wd + bd


@dataclass
class ExtendedCover:
    """Margin-based extension of a sample cover to arbitrary points:
    x belongs to ext(U) when d(x, U) < d(x, sample minus U)."""

    assignment: dict  # sample point index -> list of element ids
    points: list
    element_ids: list

    def membership(self, x) -> list:
        dist_to = {}
        dist_away = {}
        for idx, pt in enumerate(self.points):
            d = ambient_metric(x, pt)
            for e in self.element_ids:
                if e in self.assignment[idx]:
                    dist_to[e] = min(dist_to.get(e, math.inf), d)
                else:
                    dist_away[e] = min(dist_away.get(e, math.inf), d)
        return [e for e in self.element_ids
                if dist_to.get(e, math.inf) < dist_away.get(e, math.inf)]


def extend_cover(points, assignment, element_ids) -> ExtendedCover:
    """`points` are (g, xi) pairs; `assignment[i]` lists the element ids
    containing point i.  The extension preserves order on the sample and
    restricts back to the original sets (both checked by construction in
    membership: the nearest sample point to a sample point is itself)."""
    return ExtendedCover(dict(enumerate(assignment)), list(points),
                         list(element_ids))


# -- the end-to-end theorem check ------------------------------------------


def verify_thick_theorem(S, params: ThickParams, generators_radius: int,
                         xi_set, pinned_order: int | None = None,
                         tau_max: Fraction = Fraction(16)) -> dict:
    """Build the sample, the long thin cover, choose tau, pull back, and
    check order and S-longness on the thick pairs."""
    thick_xis = []
    undecided = 0
    for xi in xi_set:
        try:
            res = classify(IDENTITY, xi, params.Theta)
        except WindowRequiredError:
            undecided += 1
            continue
        if isinstance(res, ThickCertificate):
            thick_xis.append(boundary(xi))
    sample = sample_coarse_flow(params, generators_radius, thick_xis)
    cover = build_long_thin_cover(sample, params.beta)
    pairs = [(g, xi) for g in word_ball(max(1, generators_radius - 2))
             for xi in thick_xis]
    tau_rep = choose_tau(S, params, pairs, cover, tau_max)
    fsub = fsubset_check(cover, sample)
    order_extended = None
    extension_restricts = None
    if tau_rep["status"] == "ok":
        tau = Fraction(tau_rep["tau_chosen"])
        assignment = []
        for g, xi in pairs:
            pts = flow_point(g, xi, tau, params)
            hit_sets = [set(cover.member_elements(v, xi)) for v in pts]
            common = set.intersection(*hit_sets) if hit_sets else set()
            assignment.append(sorted(common, key=lambda U: (U.chart_key,
                                                            U.family, U.lo)))
        ids = sorted({U for row in assignment for U in row},
                     key=lambda U: (U.chart_key, U.family, U.lo))
        extended = extend_cover(pairs, assignment, ids)
        order_extended = max((len(row) for row in assignment), default=0)
        # the extension must restrict back to the assigned sets
        extension_restricts = all(
            set(extended.membership(pairs[i])) >= set(assignment[i])
            for i in range(0, len(pairs), max(1, len(pairs) // 10)))
    report = {
        "params": {"Theta": str(params.Theta), "rho": str(params.rho),
                   "beta": str(params.beta),
                   "D_max": params.depth_bound},
        "sample_size": sample.size(),
        "charts": len(cover.charts),
        "rejected_charts": cover.rejected_charts,
        "order_measured": cover.order_measured,
        "order_extended": order_extended,
        "extension_restricts": extension_restricts,
        "longness_ok": cover.longness_ok,
        "tau": tau_rep,
        "fsubset_failures": fsub,
        "undecided_xi": undecided,
        "closure_approximate": sample.closure_approximate,
    }
    if pinned_order is not None:
        worst = max(cover.order_measured, order_extended or 0)
        report["order_within_pin"] = worst <= pinned_order
    return report


# -- numeric flow-space properties (F1)-(F3) -------------------------------


def check_endpoint_convergence(xi: Surd, depth: int = 25,
                               tol: float = 1e-6) -> dict:
    """(F1) instance: the convergents of xi converge to xi in the boundary
    metric; the tail distance must drop below tol."""
    convs = list(xi.convergents(depth))
    dists = [boundary_distance(Fraction(p, q), xi) for p, q in convs]
    return {"xi": str(xi), "final": dists[-1], "ok": dists[-1] < tol,
            "monotone_tail": all(a >= b for a, b in zip(dists[-6:], dists[-5:]))}


def check_fellow_traveling(g: GroupElement, h: GroupElement, xi,
                           t_max: int = 20) -> dict:
    """(F2) instance: rays toward the same endpoint from nearby starting
    points stay at bounded measured distance R."""
    xi = boundary(xi)
    R = 0.0
    for k in range(0, 2 * t_max + 1):
        t = Fraction(k, 2)
        p1 = geodesic_point(g, xi, t)
        p2 = geodesic_point(h, xi, t)
        R = max(R, float(hyperbolic_distance(p1, p2)))
    start = float(hyperbolic_distance(orbit_point(g), orbit_point(h)))
    return {"start_distance": start, "R_measured": R}


def check_line_proximity(sample: CoarseFlowSample, xi_minus, xi_plus) -> dict:
    """(F3) instance: sampled T(xi_-, xi_+) members lie within measured R
    of the geodesic line through the two endpoints."""
    a, b = float(boundary(xi_minus)), float(boundary(xi_plus))
    c, r = (a + b) / 2, abs(b - a) / 2
    R = 0.0
    n = 0
    for triple, _t in sample.triples:
        if str(triple.xi_plus) != str(boundary(xi_plus)):
            continue
        x, y = (float(v) for v in orbit_point(triple.v))
        num = abs((x - c) ** 2 + y * y - r * r)
        d = math.asinh(num / (2 * r * y))
        R = max(R, d)
        n += 1
    return {"members": n, "R_measured": R}


def charts_to_json(cover: LongThinCover) -> str:
    data = {
        "beta": str(cover.beta),
        "order_measured": cover.order_measured,
        "charts": [cover.charts[k].to_dict() for k in sorted(cover.charts)],
        "elements": [{"chart": U.chart_key, "lo": str(U.lo),
                      "hi": str(U.hi), "family": U.family}
                     for U in sorted(cover.elements,
                                     key=lambda U: (U.chart_key, U.family,
                                                    U.lo))],
    }
    return json.dumps(data, sort_keys=True)
