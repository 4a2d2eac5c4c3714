"""Estimation problems: priors, conditional outcome models, Fisher information.

A problem is a :class:`PriorDensity` p(phi) and a :class:`ConditionalModel`
p(x|phi) sampled on the same :class:`~infobounds.numerics.ParameterGrid`.
Derivatives are carried alongside the samples (analytic closures where the
builders know them, second-order finite differences otherwise) because the
Fisher information is derivative-dominated and drives every bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import NumericError, ParameterGrid, central_difference, integrate, simpson_weights

__all__ = [
    "ConditionalModel",
    "FisherProfile",
    "JointModel",
    "PriorDensity",
    "average_fisher",
    "cos2_model",
    "cosine_plateau",
    "fisher_information",
    "jeffreys_length",
    "marginal_outcome",
    "prior_entropy",
]

MASS_TOL = 1e-6        # prior and joint normalization
OUTCOME_TOL = 1e-9     # sum_x p(x|phi) = 1 at every grid point
DERIV_SUM_TOL = 1e-6   # sum_x dp(x|phi)/dphi = 0 at every grid point
ZERO_DERIV_TOL = 1e-6  # |pdot| below this counts as 0 when p = 0 (0/0 -> 0 rule)


def _readonly(array) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PriorDensity:
    """Prior p(phi) on a grid, with its derivative and sharp-edge bookkeeping.

    ``derivative`` holds the smooth part of dp/dphi.  Sharp edges (rectangle
    priors) are never represented as delta spikes on the grid; their jump
    heights are kept in ``edge_jumps`` as ``(grid index, jump)`` pairs and the
    bounds absorb them analytically.  ``smooth`` is False when the derivative
    array alone does not describe the prior.
    """

    grid: ParameterGrid
    density: np.ndarray
    kind: str
    derivative: np.ndarray
    edge_jumps: tuple = ()
    smooth: bool = True
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        dens = _readonly(self.density)
        deriv = _readonly(self.derivative)
        if dens.shape != (self.grid.points,) or deriv.shape != (self.grid.points,):
            raise ValueError("density and derivative must be grid-aligned 1-D arrays")
        if np.any(dens < -1e-12):
            raise ValueError("prior density must be nonnegative")
        dens = np.where(dens < 0.0, 0.0, dens)
        dens.setflags(write=False)
        mass = integrate(dens, self.grid)
        if abs(mass - 1.0) > MASS_TOL:
            raise ValueError(
                f"prior mass is {mass:.8f}, off by more than {MASS_TOL}; "
                "widen the grid or normalize the density")
        object.__setattr__(self, "density", dens)
        object.__setattr__(self, "derivative", deriv)

    @classmethod
    def rectangle(cls, grid: ParameterGrid) -> "PriorDensity":
        """Uniform prior over the whole grid interval (width = upper - lower)."""
        width = grid.upper - grid.lower
        dens = np.full(grid.points, 1.0 / width)
        jumps = ((0, 1.0 / width), (grid.points - 1, -1.0 / width))
        return cls(grid, dens, "rectangle", np.zeros(grid.points),
                   edge_jumps=jumps, smooth=False, params={"width": width})

    @classmethod
    def gaussian(cls, grid: ParameterGrid, mean: float, sigma: float) -> "PriorDensity":
        """Gaussian prior; the grid must be wide enough to hold its mass."""
        if sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        phi = grid.values
        dens = np.exp(-0.5 * ((phi - mean) / sigma) ** 2) / math.sqrt(2.0 * math.pi * sigma ** 2)
        deriv = -(phi - mean) / sigma ** 2 * dens
        return cls(grid, dens, "gaussian", deriv, params={"mean": mean, "sigma": sigma})

    @classmethod
    def tabulated(cls, grid: ParameterGrid, density, derivative=None,
                  smooth: bool = True) -> "PriorDensity":
        """Prior from tabulated values; derivative defaults to finite differences."""
        dens = np.asarray(density, dtype=float)
        if derivative is None:
            derivative = central_difference(dens, grid)
        return cls(grid, dens, "tabulated", derivative, smooth=smooth)

    @classmethod
    def cosine_window(cls, grid: ParameterGrid, center: float, width: float) -> "PriorDensity":
        """Smooth cos^2 bump of the given width: a sharp-edge-free 'uniform' stand-in.

        The window is C^1 with finite prior information 4*pi^2/width^2.  The
        samples are renormalized so the grid mass is exactly 1.
        """
        if width <= 0.0:
            raise ValueError(f"width must be positive, got {width}")
        if center - width / 2 < grid.lower - 1e-12 or center + width / 2 > grid.upper + 1e-12:
            raise ValueError("cosine window support must lie inside the grid")
        phi = grid.values
        u = phi - center
        inside = np.abs(u) <= width / 2
        dens = np.where(inside, (2.0 / width) * np.cos(np.pi * u / width) ** 2, 0.0)
        deriv = np.where(inside, -(2.0 * np.pi / width ** 2) * np.sin(2.0 * np.pi * u / width), 0.0)
        mass = integrate(dens, grid)
        return cls(grid, dens / mass, "tabulated", deriv / mass,
                   params={"window": "cosine", "center": center, "width": width})


def cosine_plateau(grid: ParameterGrid, flat_lower: float, flat_upper: float,
                   ramp: float) -> tuple[np.ndarray, np.ndarray]:
    """Smooth plateau: 1 on [flat_lower, flat_upper], cos^2 ramps to 0 outside.

    Returns (values, derivative) on the grid.  Useful both as a variational
    weight approaching an indicator and, normalized, as a smoothed uniform
    prior.
    """
    if ramp <= 0.0:
        raise ValueError(f"ramp must be positive, got {ramp}")
    if flat_upper <= flat_lower:
        raise ValueError("flat_upper must exceed flat_lower")
    phi = grid.values
    f = np.zeros(grid.points)
    df = np.zeros(grid.points)
    flat = (phi >= flat_lower) & (phi <= flat_upper)
    f[flat] = 1.0
    left = (phi >= flat_lower - ramp) & (phi < flat_lower)
    u = (phi[left] - (flat_lower - ramp)) / ramp  # 0 -> 1 across the ramp
    f[left] = np.sin(0.5 * np.pi * u) ** 2
    df[left] = (0.5 * np.pi / ramp) * np.sin(np.pi * u)
    right = (phi > flat_upper) & (phi <= flat_upper + ramp)
    u = ((flat_upper + ramp) - phi[right]) / ramp
    f[right] = np.sin(0.5 * np.pi * u) ** 2
    df[right] = -(0.5 * np.pi / ramp) * np.sin(np.pi * u)
    return f, df


@dataclass(frozen=True)
class ConditionalModel:
    """Outcome distribution p(x|phi) over a finite alphabet, with derivatives.

    ``probs`` and ``dprobs`` are (K, points) arrays over the grid.
    ``derivative_source`` records whether ``dprobs`` came from an analytic
    closure or from :func:`~infobounds.numerics.central_difference`.
    """

    grid: ParameterGrid
    probs: np.ndarray
    dprobs: np.ndarray
    derivative_source: str = "analytic"
    outcomes: tuple = ()

    def __post_init__(self):
        p = _readonly(self.probs)
        dp = _readonly(self.dprobs)
        if p.ndim != 2 or p.shape[1] != self.grid.points:
            raise ValueError(f"probs must be (K, {self.grid.points}), got {p.shape}")
        if dp.shape != p.shape:
            raise ValueError("dprobs must match probs in shape")
        if self.derivative_source not in ("analytic", "finite-difference"):
            raise ValueError(f"unknown derivative source {self.derivative_source!r}")
        if np.any(p < -1e-12):
            raise ValueError("outcome probabilities must be nonnegative")
        p = np.where(p < 0.0, 0.0, p)
        p.setflags(write=False)
        colsums = p.sum(axis=0)
        worst = np.max(np.abs(colsums - 1.0))
        if worst > OUTCOME_TOL:
            raise ValueError(f"outcome probabilities sum to 1 +/- {worst:.2e} > {OUTCOME_TOL}")
        dworst = np.max(np.abs(dp.sum(axis=0)))
        if dworst > DERIV_SUM_TOL:
            raise ValueError(f"outcome derivatives sum to {dworst:.2e} > {DERIV_SUM_TOL}")
        outcomes = self.outcomes or tuple(range(p.shape[0]))
        if len(outcomes) != p.shape[0]:
            raise ValueError("outcome labels must match the number of rows")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "dprobs", dp)
        object.__setattr__(self, "outcomes", tuple(outcomes))

    @property
    def n_outcomes(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def from_probs(cls, grid: ParameterGrid, probs, dprobs=None,
                   outcomes: tuple = ()) -> "ConditionalModel":
        """Model from a probability table.

        Without ``dprobs`` the derivatives fall back to second-order finite
        differences; derivative-driven tolerances then inflate by
        O(spacing^2).
        """
        p = np.asarray(probs, dtype=float)
        if dprobs is None:
            dp = np.vstack([central_difference(row, grid) for row in p])
            return cls(grid, p, dp, "finite-difference", outcomes)
        return cls(grid, p, np.asarray(dprobs, dtype=float), "analytic", outcomes)


def cos2_model(grid: ParameterGrid) -> ConditionalModel:
    """Binary model p(1|phi) = cos^2(phi/2) with analytic derivatives.

    Its Fisher information is identically 1 wherever both outcomes have
    positive probability.
    """
    phi = grid.values
    # sin^2 directly, not 1 - cos^2: the cancellation would cost ~8 digits of
    # relative accuracy near phi = 0 and leak into the Fisher information
    probs = np.vstack([np.sin(phi / 2.0) ** 2, np.cos(phi / 2.0) ** 2])
    d1 = -0.5 * np.sin(phi)
    return ConditionalModel(grid, probs, np.vstack([-d1, d1]), "analytic")


@dataclass(frozen=True)
class JointModel:
    """Joint p(x, phi) = p(x|phi) p(phi) of a prior and a conditional model."""

    prior: PriorDensity
    conditional: ConditionalModel

    def __post_init__(self):
        g1, g2 = self.prior.grid, self.conditional.grid
        if (g1.lower, g1.upper, g1.points) != (g2.lower, g2.upper, g2.points):
            raise ValueError("prior and conditional must share one grid")

    @property
    def grid(self) -> ParameterGrid:
        return self.prior.grid

    def joint_probs(self) -> np.ndarray:
        """(K, points) array of p(x, phi)."""
        return self.conditional.probs * self.prior.density[None, :]

    def joint_derivative(self) -> np.ndarray:
        """(K, points) array of the smooth part of d p(x, phi) / d phi."""
        return (self.conditional.dprobs * self.prior.density[None, :]
                + self.conditional.probs * self.prior.derivative[None, :])


@dataclass(frozen=True)
class FisherProfile:
    """Pointwise Fisher information F(phi) >= 0 with a divergence mask."""

    grid: ParameterGrid
    values: np.ndarray
    divergent: np.ndarray

    def __post_init__(self):
        vals = _readonly(self.values)
        div = np.array(self.divergent, dtype=bool, copy=True)
        div.setflags(write=False)
        if vals.shape != (self.grid.points,) or div.shape != (self.grid.points,):
            raise ValueError("values and divergent mask must be grid-aligned")
        if np.any(vals[~div] < 0.0):
            raise ValueError("Fisher information must be nonnegative")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "divergent", div)

    @classmethod
    def constant(cls, grid: ParameterGrid, value: float) -> "FisherProfile":
        return cls(grid, np.full(grid.points, float(value)), np.zeros(grid.points, dtype=bool))


def fisher_information(model: ConditionalModel) -> FisherProfile:
    """F(phi) = sum_x pdot(x|phi)^2 / p(x|phi), pointwise on the grid.

    A term with p = 0 and pdot = 0 contributes 0 (the limit along analytic
    families); p = 0 with pdot != 0 marks the grid point divergent.
    """
    p, dp = model.probs, model.dprobs
    pos = p > 0.0
    terms = np.zeros_like(p)
    np.divide(dp * dp, p, out=terms, where=pos)
    divergent = np.any(~pos & (np.abs(dp) > ZERO_DERIV_TOL), axis=0)
    values = terms.sum(axis=0)
    values[divergent] = np.inf
    return FisherProfile(model.grid, values, divergent)


def average_fisher(joint: JointModel) -> float:
    """Prior-averaged Fisher information, int F(phi) p(phi) dphi."""
    profile = fisher_information(joint.conditional)
    bad = profile.divergent & (joint.prior.density > 0.0)
    if np.any(bad):
        raise NumericError("Fisher information diverges where the prior has mass")
    integrand = np.where(profile.divergent, 0.0, profile.values) * joint.prior.density
    return integrate(integrand, joint.grid)


def jeffreys_length(profile: FisherProfile, support: tuple | None = None) -> float:
    """int sqrt(F(phi)) dphi over a sub-interval (default: the whole grid).

    The integral is the reparametrization-invariant size of the interval in
    the Fisher metric.  ``support`` endpoints must lie on grid points and
    span an even number of subintervals so Simpson quadrature applies.
    """
    grid = profile.grid
    if support is None:
        i0, i1 = 0, grid.points - 1
    else:
        i0 = grid.index_of(support[0])
        i1 = grid.index_of(support[1])
        if i1 <= i0:
            raise ValueError("support must be a nondegenerate interval")
        if (i1 - i0) % 2 != 0:
            raise ValueError("support must span an even number of grid subintervals")
    if np.any(profile.divergent[i0:i1 + 1]):
        raise NumericError("Fisher information diverges inside the requested support")
    sub = ParameterGrid(grid.values[i0], grid.values[i1], i1 - i0 + 1)
    return integrate(np.sqrt(profile.values[i0:i1 + 1]), sub)


def prior_entropy(prior: PriorDensity) -> float:
    """Differential entropy H(phi) = -int p ln p in nats, with 0 ln 0 = 0."""
    p = prior.density
    integrand = np.zeros_like(p)
    pos = p > 0.0
    integrand[pos] = -p[pos] * np.log(p[pos])
    return integrate(integrand, prior.grid)


def marginal_outcome(joint: JointModel) -> np.ndarray:
    """Marginal outcome distribution p_bar(x) = int p(x|phi) p(phi) dphi."""
    return joint.joint_probs() @ simpson_weights(joint.grid)
