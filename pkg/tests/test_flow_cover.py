"""Thick cover: classification, flow-line charts, the staggered interval
cover, pullback longness, and the numeric flow-space properties."""

from fractions import Fraction

import pytest

from horocover.certified import INFINITE
from horocover.flow_cover import (
    CoarseFlowSample,
    ThickCertificate,
    ThickParams,
    ambient_metric,
    boundary_distance,
    build_charts,
    build_long_thin_cover,
    check_endpoint_convergence,
    check_fellow_traveling,
    check_line_proximity,
    choose_tau,
    classify,
    flow_point,
    fsubset_check,
    pullback,
    sample_coarse_flow,
    verify_thick_theorem,
    word_distance,
)
from horocover.hyperbolic import GEN_S, GEN_T, IDENTITY, Horoball, word_ball
from horocover.surd import PHI, SQRT2, boundary


@pytest.fixture(scope="module")
def params():
    return ThickParams(Theta=Fraction(5437, 1000), rho=Fraction(2),
                       beta=Fraction(3))


@pytest.fixture(scope="module")
def sample(params):
    xis = [boundary(PHI), boundary(SQRT2),
           boundary(GEN_T.apply_boundary(PHI)),
           boundary(GEN_S.apply_boundary(SQRT2))]
    return sample_coarse_flow(params, 3, xis)


@pytest.fixture(scope="module")
def cover(sample, params):
    return build_long_thin_cover(sample, params.beta)


class TestClassify:
    def test_rational_is_thin(self, params):
        res = classify(IDENTITY, Fraction(1, 3), params.Theta)
        Y, d = res
        assert Y == Horoball(1, 3) and d is INFINITE

    def test_quadratic_is_thick(self, params):
        res = classify(IDENTITY, PHI, params.Theta)
        assert isinstance(res, ThickCertificate)

    def test_depth_bound(self, params):
        # D_max = log(Theta/2) pinned to 1
        assert params.depth_bound == pytest.approx(1.0, abs=1e-3)


class TestCharts:
    def test_charts_accepted(self, sample, params):
        charts, rejected = build_charts(sample)
        assert len(charts) >= 4
        assert rejected == []

    def test_embedding_audit(self, sample):
        charts, _ = build_charts(sample)
        for chart in charts.values():
            mu, A = chart.audit_embedding()
            assert mu <= 2.0
            assert A <= 2 * 3.0 + 1

    def test_cover_order_and_longness(self, cover):
        assert cover.order_measured <= 2
        assert cover.longness_ok
        assert not cover.rejected_charts

    def test_fsubset(self, cover, sample):
        assert fsubset_check(cover, sample) == 0


class TestPullback:
    def test_tau_found(self, sample, cover, params):
        pairs = [(g, boundary(PHI)) for g in word_ball(1)]
        rep = choose_tau([IDENTITY, GEN_T], params, pairs, cover,
                         Fraction(16))
        assert rep["status"] == "ok"
        assert Fraction(rep["tau_chosen"]) <= 4

    def test_pullback_membership(self, sample, cover, params):
        xi = boundary(PHI)
        pts = flow_point(IDENTITY, xi, Fraction(3), params)
        assert pts
        hits = [U for U in cover.elements
                if pullback(U, Fraction(3), cover, params).contains(
                    IDENTITY, xi)]
        assert 1 <= len(hits) <= 2

    def test_theorem_small_scale(self, params):
        rep = verify_thick_theorem(
            [IDENTITY, GEN_T, GEN_T.inverse(), GEN_S],
            params, 3, [PHI, SQRT2], pinned_order=2)
        assert rep["tau"]["status"] == "ok"
        assert rep["longness_ok"]
        assert rep["fsubset_failures"] == 0
        assert rep["order_within_pin"]
        assert rep["extension_restricts"]


class TestMetrics:
    def test_word_distance(self):
        assert word_distance(IDENTITY, IDENTITY) == 0
        assert word_distance(IDENTITY, GEN_T) == 1
        assert word_distance(GEN_S, GEN_S * GEN_T * GEN_T) == 2

    def test_boundary_distance_symmetric(self):
        a, b = Fraction(1, 3), boundary(SQRT2)
        assert boundary_distance(a, b) == pytest.approx(
            boundary_distance(b, a))
        assert boundary_distance(a, a) == 0

    def test_ambient_metric_separates(self):
        x = (IDENTITY, Fraction(1, 3))
        y = (GEN_T, Fraction(1, 3))
        assert ambient_metric(x, x) == 0
        assert ambient_metric(x, y) >= 1


class TestFlowProperties:
    def test_f1_endpoint_convergence(self):
        for xi in (PHI, SQRT2):
            assert check_endpoint_convergence(xi)["ok"]

    def test_f2_fellow_traveling(self):
        # rays toward the same endpoint only get closer: the measured bound
        # is attained at the start
        rep = check_fellow_traveling(IDENTITY, GEN_T, PHI)
        assert rep["R_measured"] <= rep["start_distance"] + 1e-9

    def test_f3_line_proximity(self, sample):
        rep = check_line_proximity(sample, Fraction(-1), boundary(PHI))
        assert rep["members"] > 0
        assert rep["R_measured"] < 4.0
