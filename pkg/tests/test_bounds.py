"""Bound formulas: Lambert W, k(v), q(v), the corollary/theorem bounds."""
from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from colourcount import (
    BoundParams,
    DomainError,
    Graph,
    HypothesisError,
    InputError,
    ListAssignment,
    LogValue,
    check_thm1_hypotheses,
    cor2_bound,
    lambert_w,
    local_density,
    named_graph,
    neighbour_thresholds,
    thm1_params,
    thm3_bound,
    thm3_sharpness_ceiling,
    thm4_bound,
    thm4_params,
)
from conftest import random_graph

W_GRID = [10.0 ** (-9 + 18 * i / 999) for i in range(1000)]


def bisect_w(z: float) -> float:
    """Independent oracle: solve w e^w = z by bisection on [0, 30]."""
    lo, hi = 0.0, 30.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid * math.exp(mid) < z:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestLambertW:
    def test_zero(self):
        assert lambert_w(0.0) == 0.0

    def test_w_of_e(self):
        assert abs(lambert_w(math.e) - 1.0) <= 1e-12

    def test_w_of_one(self):
        assert lambert_w(1.0) == pytest.approx(0.5671432904097838, abs=1e-12)
        assert lambert_w(1.0) == pytest.approx(bisect_w(1.0), abs=1e-11)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            lambert_w(-1e-9)

    def test_residual_on_grid(self):
        for z in W_GRID:
            w = lambert_w(z)
            assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, z)

    def test_monotone_on_grid(self):
        values = [lambert_w(z) for z in W_GRID]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_exp_identity(self):
        # e^W(z) = z / W(z)
        for z in W_GRID:
            if z < 1e-6:
                continue
            w = lambert_w(z)
            assert math.exp(w) == pytest.approx(z / w, rel=1e-10)

    def test_oracle_agreement(self):
        for z in (1e-6, 0.01, 0.5, 2.0, 17.0, 1e3, 1e6, 1e9):
            assert lambert_w(z) == pytest.approx(bisect_w(z), rel=1e-10)


class TestLogValue:
    def test_from_count_zero(self):
        zero = LogValue.from_count(0)
        assert zero.is_zero
        assert zero.compare(LogValue.from_count(1), 1e-9) == "less"

    def test_round_trip(self):
        for x in (1.0, 3.5, 1e300, 1e-300):
            assert math.exp(LogValue.from_real(x).log) == pytest.approx(x, rel=1e-12)

    def test_compare_band(self):
        base = LogValue.from_log(10.0)
        assert base.compare(LogValue.from_log(10.0 + 5e-10), 1e-9) == "marginal"
        assert base.compare(LogValue.from_log(10.0 - 5e-10), 1e-9) == "marginal"
        assert base.compare(LogValue.from_log(9.0), 1e-9) == "greater"
        assert base.compare(LogValue.from_log(11.0), 1e-9) == "less"

    def test_from_power_matches_big_int(self):
        assert LogValue.from_power(6.0, 12).log == pytest.approx(
            math.log(6 ** 12), rel=1e-12)

    def test_huge_counts(self):
        big = LogValue.from_count(50 * 49 ** 9999)
        assert big.log == pytest.approx(math.log(50) + 9999 * math.log(49),
                                        rel=1e-12)


class TestThm1Params:
    def test_k66_values(self):
        profile = local_density(named_graph("K6,6"))
        params = thm1_params(profile, 6.0)
        k_oracle = (1 + 2 / math.log(6)) * 6 / bisect_w(1.0)
        assert params.k is not None
        for v in range(12):
            assert params.k[v] == pytest.approx(k_oracle, rel=1e-10)
            assert params.k[v] == pytest.approx(22.388218, abs=1e-6)
        assert params.list_floor == (23,) * 12
        assert params.t == pytest.approx(math.log(6) + 1.0)
        assert params.rho == 6

    def test_degree_zero_limit(self):
        profile = local_density(Graph.from_edges(3, [(0, 1)]))
        # Delta = 1, d = 0 gives rho = 1: hypothesis error instead
        with pytest.raises(HypothesisError):
            thm1_params(profile, 4.0)

    def test_degree_zero_limit_value(self):
        g = Graph.from_edges(8, [(0, i) for i in range(1, 7)])  # K_{1,6} + isolated
        params = thm1_params(local_density(g), 5.0)
        assert params.k[7] == pytest.approx((1 + 2 / math.log(6)) * 5.0)

    def test_w_of_e_simplification(self):
        # deg = ell * e makes W(deg/ell) = 1, so k = (1 + 2/ln rho) deg
        deg = 6
        ell = deg / math.e
        rho = 6.0
        k = (1 + 2 / math.log(rho)) * deg / lambert_w(deg / ell)
        assert k == pytest.approx((1 + 2 / math.log(rho)) * deg, rel=1e-12)

    def test_k_at_least_ell(self):
        rng = random.Random(5)
        seen = 0
        for _ in range(200):
            g = random_graph(rng, rng.randint(2, 9), rng.random() * 0.5)
            profile = local_density(g)
            if profile.rho <= 1:
                continue
            ell = (float(profile.local_density) + 1) * float(
                math.log(profile.rho)) ** 3
            ell = max(ell, 1e-6)
            params = thm1_params(profile, ell)
            for v in range(g.n):
                if g.degree(v) >= 1:
                    assert params.k[v] >= ell * (1 - 1e-12)
                    seen += 1
        assert seen > 50

    def test_k_monotone_in_degree(self):
        ell, rho = 6.0, 6.0
        factor = 1 + 2 / math.log(rho)
        ks = [factor * deg / lambert_w(deg / ell) for deg in range(1, 40)]
        assert all(a < b for a, b in zip(ks, ks[1:]))

    def test_rho_le_one_rejected(self):
        with pytest.raises(HypothesisError):
            thm1_params(local_density(named_graph("K4")), 3.0)


class TestHypothesisChecks:
    def test_k66_all_pass(self):
        g = named_graph("K6,6")
        rep = check_thm1_hypotheses(g, local_density(g),
                                    ListAssignment.uniform(12, 23), 6.0)
        assert rep.passed
        names = [c.name for c in rep.conditions]
        assert names == ["density", "rho", "ell_floor", "list_sizes"]
        ell_floor = rep.conditions[2]
        assert float(ell_floor.rhs) == pytest.approx(math.log(6) ** 3, rel=1e-12)
        assert math.log(6) ** 3 == pytest.approx(5.752268, abs=1e-6)

    def test_k4_fails_gracefully(self):
        g = named_graph("K4")
        rep = check_thm1_hypotheses(g, local_density(g),
                                    ListAssignment.uniform(4, 4), 3.0)
        assert not rep.passed
        assert "density" in rep.failed_names() and "rho" in rep.failed_names()

    def test_small_lists_fail(self):
        g = named_graph("K6,6")
        rep = check_thm1_hypotheses(g, local_density(g),
                                    ListAssignment.uniform(12, 6), 6.0)
        assert rep.failed_names() == ["list_sizes"]


class TestNeighbourThresholds:
    def test_triangle_free_all_equal(self):
        g = named_graph("C5")
        t = neighbour_thresholds(g, 0, Fraction(2))
        assert set(t) == {1, 4}
        for value in t.values():
            assert value == pytest.approx(math.log(2) + 1)

    def test_paw_graph_distinguishes(self):
        # triangle 0-1-2 plus pendant 3 on vertex 2; N(2) = {0, 1, 3}
        g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        rho = local_density(g).rho
        t = neighbour_thresholds(g, 2, rho)
        base = math.log(float(rho)) + 1
        assert t[0] == pytest.approx(2 * base)   # 0 and 1 adjacent inside N(2)
        assert t[1] == pytest.approx(2 * base)
        assert t[3] == pytest.approx(base)       # the pendant sees no one


class TestCor2:
    def test_delta_300(self):
        out = cor2_bound(300, 300.0)
        rho = 100.0
        oracle = (1 + 2 / math.log(rho)) * 300 / bisect_w(rho / math.log(rho) ** 3)
        assert out.list_size == pytest.approx(oracle, rel=1e-10)
        assert out.asymptotic_ref == pytest.approx(300 / math.log(300), rel=1e-12)

    def test_large_f_clamps(self):
        assert cor2_bound(300, 1e6) == cor2_bound(300, 300.0)._replace_f(1e6) \
            if hasattr(cor2_bound(300, 300.0), "_replace_f") else True
        a, b = cor2_bound(300, 300.0), cor2_bound(300, 1e6)
        assert (a.list_size, a.asymptotic_ref, a.rho) == (b.list_size, b.asymptotic_ref, b.rho)

    def test_small_f_hypothesis_error(self):
        with pytest.raises(HypothesisError):
            cor2_bound(300, 3.0)

    def test_f_below_one_rejected(self):
        with pytest.raises(InputError):
            cor2_bound(300, 0.5)


class TestThm3:
    def test_example_values(self):
        out = thm3_bound(10, 15, 6, 12)
        delta = (4 / 12) * math.exp(6 / 12)
        assert delta == pytest.approx(0.5496, abs=1e-4)
        assert out.delta_param == pytest.approx(delta, rel=1e-12)
        assert not out.vacuous
        expected = 15 * math.log(11 / 12) + 10 * math.log((1 - delta) * 12)
        assert out.value.log == pytest.approx(expected, rel=1e-12)

    def test_vacuous_branch(self):
        out = thm3_bound(10, 15, 6, 2)     # delta = 2 e^3 >= 1
        assert out.vacuous and out.value is None

    def test_edgeless(self):
        out = thm3_bound(5, 0, 0, 9)
        delta = (4 / 9) * 1.0
        assert out.value.log == pytest.approx(5 * math.log((1 - delta) * 9))

    def test_q_below_two_rejected(self):
        with pytest.raises(InputError):
            thm3_bound(5, 4, 3, 1)

    def test_ceiling_example(self):
        out = thm3_sharpness_ceiling(10, 3, 4)
        expected = 15 * math.log(3 / 4) + 10 * math.log((1 + 2 * math.log(10) / 10) * 4)
        assert out.log == pytest.approx(expected, rel=1e-12)

    def test_ceiling_preconditions(self):
        with pytest.raises(InputError):
            thm3_sharpness_ceiling(10, 3, 1)
        with pytest.raises(InputError):
            thm3_sharpness_ceiling(1, 3, 4)

    def test_bound_below_ceiling_for_regular(self):
        # same n, q; m = Delta n / 2; non-vacuous cells only
        for n in (20, 50, 200):
            for delta in (3, 6):
                for q in (12, 24, 40):
                    bound = thm3_bound(n, delta * n // 2, delta, q)
                    if bound.vacuous:
                        continue
                    ceiling = thm3_sharpness_ceiling(n, delta, q)
                    assert bound.value.log < ceiling.log


class TestThm4:
    def test_k66_values(self):
        params = thm4_params(local_density(named_graph("K6,6")))
        ell_scale = math.log(6) ** 3
        oracle = (1 + 1 / math.log(6)) * 6 / bisect_w(6 / ell_scale)
        for v in range(12):
            assert params.q[v] == pytest.approx(oracle, rel=1e-10)
        assert params.list_floor == (math.ceil((1 + 1 / math.log(6)) * oracle),) * 12
        assert params.q_geomean_log == pytest.approx(math.log(oracle), rel=1e-10)

    def test_equivalence_with_density_condition(self):
        # d <= Delta/6 - 1 is exactly rho >= 6 for graphs without isolated vertices
        rng = random.Random(19)
        tested = 0
        for _ in range(300):
            g = random_graph(rng, rng.randint(2, 10), rng.random())
            profile = local_density(g)
            if any(deg == 0 for deg in profile.degrees):
                continue
            holds = profile.local_density <= Fraction(profile.max_degree, 6) - 1
            try:
                thm4_params(profile)
                assert holds
            except HypothesisError:
                assert not holds
            tested += 1
        assert tested > 100

    def test_rho_below_six_rejected(self):
        with pytest.raises(HypothesisError):
            thm4_params(local_density(named_graph("C5")))

    def test_isolated_vertex_rejected(self):
        with pytest.raises(DomainError):
            thm4_params(local_density(Graph.from_edges(8, [(0, i) for i in range(1, 7)])))

    def test_two_class_geometric_mean(self):
        # disjoint K_{6,6} and C_12: twelve vertices of degree 6, twelve of degree 2
        edges = [(a, b + 6) for a in range(6) for b in range(6)]
        edges += [(12 + i, 12 + (i + 1) % 12) for i in range(12)]
        params = thm4_params(local_density(Graph.from_edges(24, edges)))
        qa = params.q[0]
        qb = params.q[12]
        assert qa != qb
        assert math.exp(params.q_geomean_log) == pytest.approx(
            math.sqrt(qa * qb), rel=1e-10)

    def test_bound_example(self):
        params = BoundParams("thm4", Fraction(6), 0.0, 0.0, None, None, (),
                             math.log(24))
        out = thm4_bound(params, 6.0, 12)
        assert out.log == pytest.approx(12 * (math.log(24) - 0.5 * math.log(6)))

    def test_bound_cancellation(self):
        params = BoundParams("thm4", Fraction(6), 0.0, 0.0, None, None, (),
                             0.5 * math.log(9.0))
        assert thm4_bound(params, 9.0, 7).log == pytest.approx(0.0, abs=1e-12)

    def test_bound_empty(self):
        params = BoundParams("thm4", Fraction(6), 0.0, 0.0, None, None, (),
                             math.log(5.0))
        assert thm4_bound(params, 4.0, 0).log == 0.0
