"""Risk evaluation: quadrature vs oracles, Monte Carlo agreement, worst case."""

import math

import numpy as np
import pytest

from minmax_lab.errors import NonFiniteRiskError, QuadratureUnsupportedError
from minmax_lab.losses import Power, Scaled, loss_breakpoints, loss_of_error, scale_loss
from minmax_lab.model import AffineMean, GaussianLocationModel, Interval, SampleMedian
from minmax_lab.quadrature import node_doubling_gap
from minmax_lab.risk import (
    MonteCarlo,
    Quadrature,
    crosscheck_risk,
    golden_section_max,
    risk,
    worst_case_risk,
)

from oracles import abs_moment, affine_l2_worst, fourth_moment, quadpack_power_risk

M1 = GaussianLocationModel(n=1)
THETA3 = Interval(-3, 3)


class TestQuadratureRisk:
    def test_variance_over_n(self):
        model = GaussianLocationModel(n=4)
        r = risk(model, AffineMean(1, 0), Power(2, 1), theta=0.3, method=Quadrature())
        assert r.value == pytest.approx(0.25, rel=1e-12)
        assert r.std_error == 0.0

    def test_absolute_moment(self):
        r = risk(M1, AffineMean(1, 0), Power(1, 1), theta=1.1, method=Quadrature())
        assert r.value == pytest.approx(math.sqrt(2 / math.pi), rel=1e-10)

    def test_fourth_moment(self):
        r = risk(M1, AffineMean(1, 0), Power(4, 1), theta=-2.0, method=Quadrature())
        assert r.value == pytest.approx(3.0, rel=1e-10)

    @pytest.mark.parametrize("q", [1, 1.5, 2, 2.5, 3, 4])
    def test_moment_oracle(self, q):
        r = risk(M1, AffineMean(1, 0), Power(q, 1), theta=0.0, method=Quadrature())
        assert r.value == pytest.approx(abs_moment(q), rel=1e-8)

    @pytest.mark.parametrize(
        "gamma,beta,p,theta",
        [(0.8, 0.0, 2.5, 2.0), (1.1, -0.3, 1.3, -1.5), (0.6, 0.2, 3.7, 0.7)],
    )
    def test_against_adaptive_integration(self, gamma, beta, p, theta):
        r = risk(M1, AffineMean(gamma, beta), Power(p, 1), theta, Quadrature())
        mu = (gamma - 1) * theta + beta
        assert r.value == pytest.approx(quadpack_power_risk(mu, gamma, p), rel=1e-9)

    def test_node_doubling_convergence(self):
        # documented check behind the 200-node default
        for p in (1.2, 2.5, 4.9):
            loss = Power(p, 1)
            kinks, roots = loss_breakpoints(loss)
            gap = node_doubling_gap(
                lambda t: loss_of_error(loss, t), 0.3, 0.8, 200, kinks, roots
            )
            assert gap < 1e-10

    def test_empirical_law_unsupported(self):
        with pytest.raises(QuadratureUnsupportedError):
            risk(GaussianLocationModel(n=5), SampleMedian(0.0), Power(2, 1), 0.0, Quadrature())

    @pytest.mark.filterwarnings("ignore:overflow")
    def test_nonfinite_risk_raises(self):
        with pytest.raises(NonFiniteRiskError):
            risk(M1, AffineMean(1e200, 0), Power(4, 1), 1.0, Quadrature())


class TestMonteCarloAgreement:
    def test_unbiased_squared_error(self):
        _, _, z = crosscheck_risk(M1, AffineMean(1, 0), Power(2, 1), 0.0, 10**6, seed=3)
        assert z < 4

    def test_biased_fractional_power(self):
        _, _, z = crosscheck_risk(M1, AffineMean(0.8, 0), Power(2.5, 1), 2.0, 10**6, seed=3)
        assert z < 4

    def test_constant_estimator_at_truth(self):
        quad, mc, z = crosscheck_risk(M1, AffineMean(0, 0), Power(2, 1), 0.0, 10**4, seed=1)
        assert quad.value == 0.0
        assert mc.value == 0.0
        assert z == 0.0

    def test_randomized_instances(self):
        rng = np.random.default_rng(2024)
        for k in range(8):
            gamma = rng.uniform(0.5, 1.25)
            beta = rng.uniform(-0.5, 0.5)
            p = rng.uniform(1.0, 4.0)
            theta = rng.uniform(-2.0, 2.0)
            _, _, z = crosscheck_risk(
                M1, AffineMean(gamma, beta), Power(p, 1), theta, 200_000, seed=50 + k
            )
            assert z < 4, f"instance {k}: z={z}"


class TestWorstCase:
    def test_identity_weight_is_flagged_constant(self):
        w = worst_case_risk(M1, AffineMean(1, 0), Power(2, 1), THETA3)
        assert w.constant_in_theta
        assert w.sup_value == pytest.approx(1.0, rel=1e-12)

    def test_shrunk_mean_l2(self):
        w = worst_case_risk(M1, AffineMean(0.8, 0), Power(2, 1), THETA3)
        oracle_value, oracle_theta = affine_l2_worst(0.8, 0.0, 3.0)
        assert w.sup_value == pytest.approx(oracle_value, rel=1e-9)
        assert abs(w.argmax_theta) == pytest.approx(abs(oracle_theta), abs=1e-5)
        assert w.sup_value == pytest.approx(1.0, rel=1e-9)

    def test_shrunk_mean_l4(self):
        w = worst_case_risk(M1, AffineMean(0.9, 0), Power(4, 1), THETA3)
        assert w.sup_value == pytest.approx(fourth_moment(0.3, 0.9), rel=1e-9)
        assert w.sup_value == pytest.approx(2.4138, abs=2e-4)

    def test_sup_dominates_grid(self):
        thetas = np.linspace(-3, 3, 64)
        w = worst_case_risk(M1, AffineMean(0.7, 0.2), Power(2, 1), THETA3, grid=64)
        grid_risks = [
            risk(M1, AffineMean(0.7, 0.2), Power(2, 1), t, Quadrature()).value for t in thetas
        ]
        assert w.sup_value >= max(grid_risks) - 1e-12

    def test_scaling_equivariance(self):
        base = worst_case_risk(M1, AffineMean(0.85, 0.1), Power(2.5, 1), THETA3)
        scaled = worst_case_risk(M1, AffineMean(0.85, 0.1), scale_loss(Power(2.5, 1), 6.0), THETA3)
        assert scaled.sup_value == pytest.approx(6.0 * base.sup_value, rel=1e-8)
        assert scaled.argmax_theta == pytest.approx(base.argmax_theta, abs=1e-6)

    def test_risk_even_and_increasing_in_shifted_mean(self):
        # with beta = 0 the risk at theta depends on |(gamma-1) theta| only
        gamma = 0.8
        values = {}
        for theta in (-2.0, -1.0, 0.0, 1.0, 2.0):
            values[theta] = risk(M1, AffineMean(gamma, 0), Power(2.5, 1), theta, Quadrature()).value
        assert values[-2.0] == pytest.approx(values[2.0], rel=1e-12)
        assert values[-1.0] == pytest.approx(values[1.0], rel=1e-12)
        assert values[0.0] < values[1.0] < values[2.0]

    def test_endpoint_sup_for_symmetric_interval(self):
        w = worst_case_risk(M1, AffineMean(0.75, 0), Power(3, 1), THETA3)
        assert abs(w.argmax_theta) == pytest.approx(3.0, abs=1e-5)

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            worst_case_risk(M1, AffineMean(0.8, 0), Power(2, 1), THETA3, grid=8)

    def test_monte_carlo_worst_case_uses_common_draws(self):
        model = GaussianLocationModel(n=11)
        method = MonteCarlo(20_000, seed=4)
        w1 = worst_case_risk(model, SampleMedian(0.3), Power(2, 1), THETA3, grid=32, method=method)
        w2 = worst_case_risk(model, SampleMedian(0.3), Power(2, 1), THETA3, grid=32, method=method)
        assert w1 == w2

    def test_median_needs_explicit_method(self):
        with pytest.raises(QuadratureUnsupportedError):
            worst_case_risk(GaussianLocationModel(n=5), SampleMedian(0.0), Power(2, 1), THETA3)


class TestGoldenSection:
    def test_finds_interior_maximum(self):
        x, fx = golden_section_max(lambda x: -((x - 1.3) ** 2), 0.0, 3.0, tol=1e-8)
        assert x == pytest.approx(1.3, abs=1e-6)
        assert fx == pytest.approx(0.0, abs=1e-12)

    def test_monotone_converges_to_endpoint(self):
        x, _ = golden_section_max(lambda x: x, 0.0, 1.0, tol=1e-8)
        assert x == pytest.approx(1.0, abs=1e-6)
