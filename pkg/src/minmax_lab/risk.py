"""Pointwise risk and worst-case risk over a parameter interval.

Risk at theta is E[L(theta, delta(X))] under the model at theta.  For
affine-in-mean estimators the error law is exactly Gaussian, so the
expectation is a segmented Gauss-Legendre integral (machine precision at
the default 200 nodes; see quadrature.py).  Every other estimator is
handled by seeded Monte Carlo.

Worst-case risk scans an even theta grid and refines around the best grid
point by golden-section search.  Identity-weight affine rules (gamma = 1)
have theta-free risk; that case short-circuits and is flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .errors import NonFiniteRiskError, QuadratureUnsupportedError
from .losses import LossSpec, loss_breakpoints, loss_of_error
from .model import (
    AffineGaussian,
    AffineMean,
    EstimatorSpec,
    GaussianLocationModel,
    Interval,
    check_estimator,
    error_draws,
    error_law,
)
from .quadrature import DEFAULT_NODES, gaussian_expectation

DEFAULT_GRID = 256
DEFAULT_REFINE_TOL = 1e-6


@dataclass(frozen=True)
class Quadrature:
    """Deterministic integration against the exact Gaussian error law."""

    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError(f"nodes must be >= 2, got {self.nodes}")


@dataclass(frozen=True)
class MonteCarlo:
    """Seeded sample-mean estimate of the risk."""

    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        object.__setattr__(self, "seed", int(self.seed))


RiskMethod = Union[Quadrature, MonteCarlo]


@dataclass(frozen=True)
class RiskEstimate:
    value: float
    method: RiskMethod
    std_error: float = 0.0


@dataclass(frozen=True)
class WorstCaseResult:
    sup_value: float
    argmax_theta: float
    grid_points: int
    refinement_tol: float
    constant_in_theta: bool = False


def _checked(value: float, context: str) -> float:
    if not math.isfinite(value):
        raise NonFiniteRiskError(f"risk is not finite ({value!r}) for {context}")
    return float(value)


def risk(
    model: GaussianLocationModel,
    est: EstimatorSpec,
    loss: LossSpec,
    theta: float,
    method: RiskMethod,
) -> RiskEstimate:
    """E[L(theta, delta(X))] at a single theta."""
    check_estimator(est)
    theta = float(theta)
    if isinstance(method, Quadrature):
        if not isinstance(est, AffineMean):
            raise QuadratureUnsupportedError(
                f"{type(est).__name__} has no exact Gaussian error law; "
                "use a MonteCarlo method"
            )
        law = error_law(model, est, theta)
        assert isinstance(law, AffineGaussian)
        kinks, roots = loss_breakpoints(loss)
        # the loss argument is theta - delta = -(error); all losses here are
        # even in the error, but keep the sign for generality
        value = gaussian_expectation(
            lambda t: loss_of_error(loss, -t),
            law.mu,
            law.s,
            method.nodes,
            kinks=tuple(-k for k in kinks),
            roots=tuple(-r for r in roots),
        )
        return RiskEstimate(value=_checked(value, f"theta={theta}"), method=method)
    errs = error_draws(model, est, theta, method.samples, method.seed)
    losses = loss_of_error(loss, -errs)
    value = _checked(float(np.mean(losses)), f"theta={theta}")
    sd = float(np.std(losses, ddof=1)) if method.samples > 1 else 0.0
    return RiskEstimate(
        value=value,
        method=method,
        std_error=sd / math.sqrt(method.samples),
    )


def crosscheck_risk(
    model: GaussianLocationModel,
    est: EstimatorSpec,
    loss: LossSpec,
    theta: float,
    mc_samples: int,
    seed: int,
    nodes: int = DEFAULT_NODES,
) -> Tuple[RiskEstimate, RiskEstimate, float]:
    """Quadrature and Monte Carlo side by side, with the discrepancy z-score."""
    quad = risk(model, est, loss, theta, Quadrature(nodes))
    mc = risk(model, est, loss, theta, MonteCarlo(mc_samples, seed))
    diff = abs(quad.value - mc.value)
    if diff == 0.0:
        z = 0.0
    elif mc.std_error == 0.0:
        z = math.inf
    else:
        z = diff / mc.std_error
    return quad, mc, z


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> Tuple[float, float]:
    """Golden-section search for a maximum of f on [a, b].

    Narrows the bracket to width <= tol and returns the best probed point.
    For a monotone f the bracket collapses onto the better endpoint.
    """
    a, b = float(a), float(b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    n = int(math.ceil(math.log(tol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            yd = f(d)
    return (c, yc) if yc > yd else (d, yd)


def default_method(est: EstimatorSpec, mc: Optional[MonteCarlo] = None) -> RiskMethod:
    """Quadrature for affine-in-mean rules, otherwise the supplied MC method."""
    if isinstance(est, AffineMean):
        return Quadrature()
    if mc is None:
        raise QuadratureUnsupportedError(
            f"{type(est).__name__} needs a MonteCarlo method (samples + seed)"
        )
    return mc


def worst_case_risk(
    model: GaussianLocationModel,
    est: EstimatorSpec,
    loss: LossSpec,
    theta_interval: Interval,
    grid: int = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
    method: Optional[RiskMethod] = None,
) -> WorstCaseResult:
    """sup over theta_interval of the risk, by grid scan + golden refinement.

    With a MonteCarlo method the same seed is reused at every theta (common
    random numbers), so the scanned function is a fixed deterministic
    surface and the supremum is well defined.
    """
    check_estimator(est)
    if grid < 16:
        raise ValueError(f"grid must be >= 16, got {grid}")
    if refine_tol <= 0:
        raise ValueError(f"refine_tol must be > 0, got {refine_tol}")
    if method is None:
        method = default_method(est)

    if isinstance(est, AffineMean) and est.gamma == 1.0:
        r = risk(model, est, loss, theta_interval.midpoint, method)
        return WorstCaseResult(
            sup_value=r.value,
            argmax_theta=theta_interval.midpoint,
            grid_points=grid,
            refinement_tol=refine_tol,
            constant_in_theta=True,
        )

    def risk_at(theta: float) -> float:
        return risk(model, est, loss, theta, method).value

    thetas = np.linspace(theta_interval.lo, theta_interval.hi, grid)
    values = np.array([risk_at(t) for t in thetas])
    i = int(np.argmax(values))
    best_theta, best_value = float(thetas[i]), float(values[i])

    lo = float(thetas[max(i - 1, 0)])
    hi = float(thetas[min(i + 1, grid - 1)])
    x, fx = golden_section_max(risk_at, lo, hi, refine_tol)
    if fx > best_value:
        best_theta, best_value = x, fx
    return WorstCaseResult(
        sup_value=best_value,
        argmax_theta=best_theta,
        grid_points=grid,
        refinement_tol=refine_tol,
    )
