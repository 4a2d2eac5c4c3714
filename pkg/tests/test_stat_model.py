import math

import numpy as np
import pytest
from scipy.optimize import brentq

from infobounds.mi_oracle import repeat_model
from infobounds.numerics import NumericError, ParameterGrid, integrate
from infobounds.stat_model import (
    ConditionalModel,
    FisherProfile,
    JointModel,
    PriorDensity,
    average_fisher,
    cos2_model,
    cosine_plateau,
    fisher_information,
    jeffreys_length,
    marginal_outcome,
    prior_entropy,
)


@pytest.fixture
def pi_grid():
    return ParameterGrid(0.0, math.pi, 2001)


def flat_model(grid, k=2):
    """phi-independent conditional model with k equiprobable outcomes."""
    probs = np.full((k, grid.points), 1.0 / k)
    return ConditionalModel(grid, probs, np.zeros_like(probs), "analytic")


class TestPriorDensity:
    def test_rectangle_mass_and_entropy(self, pi_grid):
        prior = PriorDensity.rectangle(pi_grid)
        assert integrate(prior.density, pi_grid) == pytest.approx(1.0, abs=1e-12)
        assert prior_entropy(prior) == pytest.approx(math.log(math.pi), abs=1e-12)
        assert prior.edge_jumps and not prior.smooth

    def test_rectangle_width_one_zero_entropy(self):
        grid = ParameterGrid(0.0, 1.0, 101)
        assert prior_entropy(PriorDensity.rectangle(grid)) == pytest.approx(0.0, abs=1e-14)

    def test_gaussian_entropy(self):
        sigma = 0.7
        grid = ParameterGrid(-8.0 * sigma, 8.0 * sigma, 4001)
        prior = PriorDensity.gaussian(grid, 0.0, sigma)
        expected = 0.5 * math.log(2.0 * math.pi * math.e * sigma ** 2)
        assert prior_entropy(prior) == pytest.approx(expected, abs=1e-6)

    def test_gaussian_rejects_bad_sigma(self, pi_grid):
        with pytest.raises(ValueError, match="sigma"):
            PriorDensity.gaussian(pi_grid, 1.0, -0.1)

    def test_gaussian_rejects_narrow_grid(self):
        grid = ParameterGrid(-1.0, 1.0, 101)
        with pytest.raises(ValueError, match="mass"):
            PriorDensity.gaussian(grid, 0.0, 1.0)

    def test_rejects_negative_density(self, pi_grid):
        dens = np.full(pi_grid.points, 1.0 / math.pi)
        dens[3] = -0.5
        with pytest.raises(ValueError, match="nonnegative"):
            PriorDensity.tabulated(pi_grid, dens)

    def test_cosine_window_mass_and_support(self):
        grid = ParameterGrid(0.0, 2.0, 2001)
        prior = PriorDensity.cosine_window(grid, 1.0, 1.2)
        assert integrate(prior.density, grid) == pytest.approx(1.0, abs=1e-12)
        assert np.all(prior.density[grid.values < 0.39] == 0.0)

    def test_cosine_window_must_fit(self):
        grid = ParameterGrid(0.0, 1.0, 101)
        with pytest.raises(ValueError, match="inside"):
            PriorDensity.cosine_window(grid, 0.9, 0.5)

    def test_tabulated_default_derivative(self):
        grid = ParameterGrid(0.0, 2.0, 2001)
        ref = PriorDensity.cosine_window(grid, 1.0, 1.5)
        tab = PriorDensity.tabulated(grid, ref.density)
        # stencils straddling the C^1 seams at the window edges are excluded
        away = (np.abs(grid.values - 0.25) > 3 * grid.spacing) \
            & (np.abs(grid.values - 1.75) > 3 * grid.spacing)
        np.testing.assert_allclose(tab.derivative[away], ref.derivative[away], atol=1e-3)


class TestCosinePlateau:
    def test_shape(self):
        grid = ParameterGrid(-0.5, 1.5, 2001)
        f, df = cosine_plateau(grid, 0.0, 1.0, 0.4)
        phi = grid.values
        assert np.all(f[(phi >= 0.0) & (phi <= 1.0)] == 1.0)
        assert np.all(f[phi < -0.4 + 1e-12] == 0.0)
        assert np.all((f >= 0.0) & (f <= 1.0))
        # derivative matches finite differences away from the C^1 seams
        from infobounds.numerics import central_difference
        fd = central_difference(f, grid)
        assert np.median(np.abs(fd - df)) < 1e-4


class TestConditionalModel:
    def test_rejects_bad_normalization(self, pi_grid):
        probs = np.full((2, pi_grid.points), 0.4)
        with pytest.raises(ValueError, match="sum to 1"):
            ConditionalModel(pi_grid, probs, np.zeros_like(probs), "analytic")

    def test_rejects_negative_probability(self, pi_grid):
        probs = np.vstack([np.full(pi_grid.points, 1.2), np.full(pi_grid.points, -0.2)])
        with pytest.raises(ValueError, match="nonnegative"):
            ConditionalModel(pi_grid, probs, np.zeros_like(probs), "analytic")

    def test_rejects_unbalanced_derivatives(self, pi_grid):
        probs = np.full((2, pi_grid.points), 0.5)
        dprobs = np.ones_like(probs)
        with pytest.raises(ValueError, match="derivatives"):
            ConditionalModel(pi_grid, probs, dprobs, "analytic")

    def test_from_probs_finite_difference_tag(self, pi_grid):
        model = ConditionalModel.from_probs(pi_grid, cos2_model(pi_grid).probs)
        assert model.derivative_source == "finite-difference"
        np.testing.assert_allclose(model.dprobs, cos2_model(pi_grid).dprobs, atol=1e-6)


class TestFisherInformation:
    def test_zero_for_flat_model(self, pi_grid):
        profile = fisher_information(flat_model(pi_grid, 3))
        assert np.all(profile.values == 0.0)
        assert not profile.divergent.any()

    def test_cos2_is_one_in_the_interior(self, pi_grid):
        profile = fisher_information(cos2_model(pi_grid))
        np.testing.assert_allclose(profile.values[1:-1], 1.0, atol=1e-9)

    def test_additivity_under_independent_copies(self):
        # brute force on K <= 4 outcomes, up to 3 copies
        grid = ParameterGrid(0.0, 1.0, 401)
        tau = grid.values
        w = np.vstack([1.2 + np.cos(tau), 1.0 + 0.4 * np.sin(2 * tau), np.full(grid.points, 0.7),
                       1.1 + 0.3 * np.sin(tau)])
        dw = np.vstack([-np.sin(tau), 0.8 * np.cos(2 * tau), np.zeros(grid.points),
                        0.3 * np.cos(tau)])
        total, dtotal = w.sum(axis=0), dw.sum(axis=0)
        model = ConditionalModel(grid, w / total, (dw * total - w * dtotal) / total ** 2)
        f1 = fisher_information(model).values
        prior = PriorDensity.rectangle(grid)
        for n in (2, 3):
            fn = fisher_information(repeat_model(JointModel(prior, model), n).conditional).values
            np.testing.assert_allclose(fn, n * f1, atol=1e-6 * max(1.0, f1.max()))

    def test_divergence_flag(self):
        grid = ParameterGrid(0.0, 1.0, 11)
        p1 = np.linspace(0.0, 1.0, 11)
        probs = np.vstack([1.0 - p1, p1])
        dprobs = np.vstack([-np.ones(11), np.ones(11)])
        profile = fisher_information(ConditionalModel(grid, probs, dprobs, "analytic"))
        assert profile.divergent[0] and profile.divergent[-1]
        assert np.isinf(profile.values[0])
        assert not profile.divergent[1:-1].any()


class TestJeffreysLength:
    def test_constant_one(self, pi_grid):
        profile = FisherProfile.constant(pi_grid, 1.0)
        assert jeffreys_length(profile) == pytest.approx(math.pi, abs=1e-12)

    def test_constant_n_squared_on_circle(self):
        grid = ParameterGrid(0.0, 2.0 * math.pi, 1001)
        for n in (1, 4, 9):
            profile = FisherProfile.constant(grid, n ** 2)
            assert jeffreys_length(profile) == pytest.approx(2.0 * math.pi * n, rel=1e-12)

    def test_sub_support(self, pi_grid):
        profile = FisherProfile.constant(pi_grid, 4.0)
        length = jeffreys_length(profile, (0.1 * math.pi, 0.9 * math.pi))
        assert length == pytest.approx(2.0 * 0.8 * math.pi, rel=1e-12)

    def test_divergent_support_raises(self):
        grid = ParameterGrid(0.0, 1.0, 11)
        values = np.ones(11)
        divergent = np.zeros(11, dtype=bool)
        divergent[5] = True
        values[5] = np.inf
        with pytest.raises(NumericError, match="diverges"):
            jeffreys_length(FisherProfile(grid, values, divergent))

    def test_reparametrization_invariance(self):
        # substitute phi = w(u) = u^3 + u on the interior window [0.1 pi, 0.9 pi]
        a, b = 0.1 * math.pi, 0.9 * math.pi
        grid_phi = ParameterGrid(0.0, math.pi, 2001)
        length_phi = jeffreys_length(fisher_information(cos2_model(grid_phi)), (a, b))

        w = lambda u: u ** 3 + u
        ua, ub = brentq(lambda u: w(u) - a, 0.0, 2.0), brentq(lambda u: w(u) - b, 0.0, 2.0)
        grid_u = ParameterGrid(ua, ub, 2001)
        u = grid_u.values
        p1 = np.cos(w(u) / 2.0) ** 2
        d1 = -0.5 * np.sin(w(u)) * (3.0 * u ** 2 + 1.0)
        model_u = ConditionalModel(grid_u, np.vstack([1.0 - p1, p1]), np.vstack([-d1, d1]))
        length_u = jeffreys_length(fisher_information(model_u))
        assert length_u == pytest.approx(length_phi, abs=1e-4)


class TestJointAndMarginal:
    def test_joint_normalization(self, pi_grid):
        joint = JointModel(PriorDensity.rectangle(pi_grid), cos2_model(pi_grid))
        total = sum(integrate(row, pi_grid) for row in joint.joint_probs())
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_grid_mismatch_rejected(self, pi_grid):
        other = ParameterGrid(0.0, math.pi, 1001)
        with pytest.raises(ValueError, match="share one grid"):
            JointModel(PriorDensity.rectangle(pi_grid), cos2_model(other))

    def test_marginal_of_flat_model(self, pi_grid):
        joint = JointModel(PriorDensity.rectangle(pi_grid), flat_model(pi_grid, 4))
        np.testing.assert_allclose(marginal_outcome(joint), 0.25, atol=1e-9)

    def test_marginal_of_cos2_uniform(self, pi_grid):
        joint = JointModel(PriorDensity.rectangle(pi_grid), cos2_model(pi_grid))
        np.testing.assert_allclose(marginal_outcome(joint), 0.5, atol=1e-6)

    def test_marginal_of_deterministic_model(self, pi_grid):
        probs = np.zeros((3, pi_grid.points))
        probs[1] = 1.0
        model = ConditionalModel(pi_grid, probs, np.zeros_like(probs), "analytic")
        joint = JointModel(PriorDensity.rectangle(pi_grid), model)
        np.testing.assert_allclose(marginal_outcome(joint), [0.0, 1.0, 0.0], atol=1e-9)

    def test_average_fisher_cos2(self, pi_grid):
        joint = JointModel(PriorDensity.rectangle(pi_grid), cos2_model(pi_grid))
        assert average_fisher(joint) == pytest.approx(1.0, abs=1e-3)
