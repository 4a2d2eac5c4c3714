"""Seeded random estimation models for dominance and proof-step sweeps.

Conditional models are built from squared trigonometric polynomials plus a
positive floor, normalized across outcomes.  That keeps every probability
bounded away from zero, the derivatives analytic, and the Fisher information
finite, so the brute-force oracles stay cheap and exact.
"""

from __future__ import annotations

import numpy as np

from .numerics import ParameterGrid
from .stat_model import ConditionalModel, JointModel, PriorDensity

__all__ = ["near_deterministic_model", "random_joint_model"]


def _trig_rows(rng: np.random.Generator, grid: ParameterGrid, n_outcomes: int,
               degree: int, floor: float):
    """Positive weight rows w_x(phi) = (trig poly)^2 + floor and their derivatives."""
    span = grid.upper - grid.lower
    tau = 2.0 * np.pi * (grid.values - grid.lower) / span
    dtau = 2.0 * np.pi / span
    w = np.empty((n_outcomes, grid.points))
    dw = np.empty_like(w)
    for x in range(n_outcomes):
        coef_a = rng.normal(size=degree + 1)
        coef_b = rng.normal(size=degree + 1)
        poly = np.full(grid.points, coef_a[0])
        dpoly = np.zeros(grid.points)
        for m in range(1, degree + 1):
            poly += coef_a[m] * np.cos(m * tau) + coef_b[m] * np.sin(m * tau)
            dpoly += m * dtau * (-coef_a[m] * np.sin(m * tau) + coef_b[m] * np.cos(m * tau))
        w[x] = poly ** 2 + floor
        dw[x] = 2.0 * poly * dpoly
    return w, dw


def random_joint_model(rng: np.random.Generator, grid: ParameterGrid | None = None,
                       max_outcomes: int = 8, degree: int = 3,
                       floor: float = 0.05) -> JointModel:
    """Random smooth joint model: trig-polynomial conditional, smooth prior.

    The prior alternates between a Gaussian and a cosine window, both with
    analytic derivatives and finite prior information, so every bound in the
    package is applicable.
    """
    if grid is None:
        grid = ParameterGrid(0.0, 1.0, 2001)
    n_outcomes = int(rng.integers(2, max_outcomes + 1))
    w, dw = _trig_rows(rng, grid, n_outcomes, degree, floor)
    total = w.sum(axis=0)
    dtotal = dw.sum(axis=0)
    probs = w / total
    dprobs = (dw * total - w * dtotal) / total ** 2
    conditional = ConditionalModel(grid, probs, dprobs, "analytic")

    span = grid.upper - grid.lower
    center = grid.lower + span * rng.uniform(0.4, 0.6)
    if rng.random() < 0.5:
        sigma = span * rng.uniform(0.03, 0.05)
        prior = PriorDensity.gaussian(grid, center, sigma)
    else:
        width = span * rng.uniform(0.3, 0.7)
        prior = PriorDensity.cosine_window(grid, center, width)
    return JointModel(prior, conditional)


def near_deterministic_model(grid: ParameterGrid, clip: float = 1e-9,
                             width: float = 1e-2) -> JointModel:
    """Adversarial binary model: a logistic step with probabilities clipped at ``clip``.

    The Fisher information spikes to order 1/clip around the step, which
    stresses the bound-versus-oracle comparisons without ever dividing by
    zero.
    """
    if not 0.0 < clip < 0.5:
        raise ValueError(f"clip must be in (0, 0.5), got {clip}")
    phi = grid.values
    center = 0.5 * (grid.lower + grid.upper)
    s = 1.0 / (1.0 + np.exp(-(phi - center) / width))
    ds = s * (1.0 - s) / width
    scale = 1.0 - 2.0 * clip
    p1 = clip + scale * s
    d1 = scale * ds
    conditional = ConditionalModel(grid, np.vstack([1.0 - p1, p1]),
                                   np.vstack([-d1, d1]), "analytic")
    sigma = (grid.upper - grid.lower) / 16.0
    prior = PriorDensity.gaussian(grid, center, sigma)
    return JointModel(prior, conditional)
