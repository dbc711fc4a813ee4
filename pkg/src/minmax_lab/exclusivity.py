"""Can one estimator be worst-case optimal for two different power classes?

The engine answers with numerical certificates.  For a pair of losses with
distinct local exponents p < q (both > 1), it solves the family minimax
problem for the p-loss, takes the finite-difference gradient of the q-loss
worst-case risk at that optimum, and walks downhill:

  * a strictly negative q-risk change at some step alpha, with the p-risk
    degrading only quadratically (fitted slope of |delta R_p| vs alpha near
    2), certifies that the p-optimum is not q-optimal -> Refuted;
  * a vanishing q-gradient means both objectives are stationary at the same
    point in this family -> StationaryBoth (no refutation available here);
  * otherwise the ladder failed to certify anything -> NoDescentInFamily.

Verdicts are family-relative by construction.  The sign-flip perturbation
(stepping the estimate toward a fixed target) leaves every parametric
family here, so it is evaluated by Monte Carlo and reported without a
verdict.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Tuple

import numpy as np

from ._parallel import map_ordered
from .errors import ExponentPreconditionError, InsufficientClassesError
from .losses import LossSpec, Power, classify_exponent, loss_of_error
from .model import (
    EstimatorSpec,
    GaussianLocationModel,
    Interval,
    SignPerturbed,
    check_estimator,
)
from .minimax import (
    FamilySpec,
    RealizabilityReport,
    SolveOptions,
    family_method,
    params_in_bounds,
    realizability_report,
    solve_minimax,
    worst_case_at,
)
from .quadrature import DEFAULT_NODES, gaussian_expectation
from .risk import MonteCarlo, WorstCaseResult, worst_case_risk


class Verdict(enum.Enum):
    REFUTED = "Refuted"
    NO_DESCENT_IN_FAMILY = "NoDescentInFamily"
    STATIONARY_BOTH = "StationaryBoth"


@dataclass(frozen=True)
class LadderPoint:
    """One trial step: both worst-case risk changes at step size alpha."""

    alpha: float
    delta_Rp: float
    delta_Rq: float


@dataclass(frozen=True)
class RefutationCertificate:
    p: float
    q: float
    delta_star_params: Tuple[float, ...]
    gradient_q: Tuple[float, ...]
    gradient_p_norm: float
    direction: Tuple[float, ...]
    alpha: Optional[float]
    delta_Rq: Optional[float]
    delta_Rp: Optional[float]
    taylor_slope_p: Optional[float]
    verdict: Verdict
    ladder: Tuple[LadderPoint, ...]


@dataclass(frozen=True)
class RefuteOptions:
    solve: SolveOptions = field(default_factory=SolveOptions)
    fd_step: float = 1e-4
    alpha0: float = 0.1
    halvings: int = 8
    taylor_points: int = 4
    stationarity_rtol: float = 1e-2
    min_exponent_gap: float = 0.05


def grad_worst_case(
    model: GaussianLocationModel,
    family: FamilySpec,
    params: Sequence[float],
    loss: LossSpec,
    theta_interval: Interval,
    h: float = 1e-4,
    opts: Optional[SolveOptions] = None,
) -> np.ndarray:
    """Central finite-difference gradient of sup_theta risk in parameter space."""
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    if opts is None:
        opts = SolveOptions()
    params = np.asarray(params, dtype=float)
    method = family_method(family, opts)

    grad = np.empty_like(params)
    for i in range(params.size):
        step = np.zeros_like(params)
        step[i] = h
        up, dn = params + step, params - step
        if not (params_in_bounds(family, up) and params_in_bounds(family, dn)):
            raise ValueError(
                f"params {tuple(params)} are not interior to the family box "
                f"at step {h} in coordinate {i}"
            )
        f_up = worst_case_at(model, family, up, loss, theta_interval, opts, method).sup_value
        f_dn = worst_case_at(model, family, dn, loss, theta_interval, opts, method).sup_value
        grad[i] = (f_up - f_dn) / (2.0 * h)
    return grad


def _stationarity_tol(rtol: float, value: float) -> float:
    return rtol * max(1.0, abs(value))


def refute_joint_minimaxity(
    model: GaussianLocationModel,
    family: FamilySpec,
    loss_p: LossSpec,
    loss_q: LossSpec,
    theta_interval: Interval,
    opts: Optional[RefuteOptions] = None,
) -> RefutationCertificate:
    """Certificate that the loss_p family optimum is (or is not) improvable
    for loss_q.

    Requires both local exponents > 1 and separated by more than the
    configured gap; equal-class pairs are rejected up front because positive
    scaling never leaves a class.
    """
    if opts is None:
        opts = RefuteOptions()

    cls_p = classify_exponent(loss_p)
    cls_q = classify_exponent(loss_q)
    if cls_p.p_hat <= 1.0 or cls_q.p_hat <= 1.0:
        raise ExponentPreconditionError(
            f"both local exponents must exceed 1, got {cls_p.p_hat:.4f} and {cls_q.p_hat:.4f}"
        )
    if abs(cls_p.p_hat - cls_q.p_hat) <= opts.min_exponent_gap:
        raise ExponentPreconditionError(
            f"local exponents {cls_p.p_hat:.4f} and {cls_q.p_hat:.4f} are in the "
            f"same class (gap <= {opts.min_exponent_gap})"
        )

    mm = solve_minimax(model, family, loss_p, theta_interval, opts.solve)
    params = np.asarray(mm.best_params)
    method = family_method(family, opts.solve)

    grad_p = grad_worst_case(
        model, family, params, loss_p, theta_interval, opts.fd_step, opts.solve
    )
    grad_p_norm = float(np.linalg.norm(grad_p))

    rp_base = mm.minimax_value
    rq_base = worst_case_at(
        model, family, params, loss_q, theta_interval, opts.solve, method
    ).sup_value

    g = grad_worst_case(
        model, family, params, loss_q, theta_interval, opts.fd_step, opts.solve
    )
    g_norm = float(np.linalg.norm(g))
    common = dict(
        p=cls_p.p_hat,
        q=cls_q.p_hat,
        delta_star_params=tuple(float(v) for v in params),
        gradient_q=tuple(float(v) for v in g),
        gradient_p_norm=grad_p_norm,
    )

    if g_norm <= _stationarity_tol(opts.stationarity_rtol, rq_base):
        return RefutationCertificate(
            **common,
            direction=tuple(0.0 for _ in params),
            alpha=None,
            delta_Rq=None,
            delta_Rp=None,
            taylor_slope_p=None,
            verdict=Verdict.STATIONARY_BOTH,
            ladder=(),
        )

    v = -g / g_norm
    ladder = []
    for k in range(opts.halvings):
        alpha = opts.alpha0 / 2.0**k
        trial = params + alpha * v
        if not params_in_bounds(family, trial):
            continue
        rq = worst_case_at(model, family, trial, loss_q, theta_interval, opts.solve, method)
        rp = worst_case_at(model, family, trial, loss_p, theta_interval, opts.solve, method)
        ladder.append(
            LadderPoint(alpha=alpha, delta_Rp=rp.sup_value - rp_base, delta_Rq=rq.sup_value - rq_base)
        )
    ladder = tuple(ladder)

    successes = [pt for pt in ladder if pt.delta_Rq < 0.0]
    slope = None
    if successes:
        fit_pts = [pt for pt in successes if pt.delta_Rp != 0.0]
        fit_pts = sorted(fit_pts, key=lambda pt: pt.alpha)[: opts.taylor_points]
        if len(fit_pts) >= 2:
            xs = np.log([pt.alpha for pt in fit_pts])
            ys = np.log([abs(pt.delta_Rp) for pt in fit_pts])
            slope = float(np.polyfit(xs, ys, 1)[0])

    if successes and slope is not None and 1.7 <= slope <= 2.3:
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.NO_DESCENT_IN_FAMILY

    head = max(successes, key=lambda pt: pt.alpha) if successes else None
    return RefutationCertificate(
        **common,
        direction=tuple(float(x) for x in v),
        alpha=head.alpha if head else None,
        delta_Rq=head.delta_Rq if head else None,
        delta_Rp=head.delta_Rp if head else None,
        taylor_slope_p=slope,
        verdict=verdict,
        ladder=ladder,
    )


def sign_perturbation_risk(
    model: GaussianLocationModel,
    base_est: EstimatorSpec,
    epsilon: float,
    theta_star: float,
    loss: LossSpec,
    theta_interval: Interval,
    mc_samples: int,
    seed: int,
    grid: int = 64,
    refine_tol: float = 1e-6,
) -> Tuple[WorstCaseResult, WorstCaseResult]:
    """Worst-case risks of a base rule and its sign-flip perturbation.

    The perturbed rule steps the base estimate by epsilon toward a fixed
    target theta_star.  Both rules are evaluated by Monte Carlo on shared
    draws; no conclusion is drawn, the pair of results is the output.
    epsilon = 0 degenerates to evaluating the base rule twice.
    """
    check_estimator(base_est)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    method = MonteCarlo(mc_samples, seed)
    perturbed_est = (
        base_est
        if epsilon == 0.0
        else SignPerturbed(base=base_est, epsilon=float(epsilon), theta_star=float(theta_star))
    )
    base = worst_case_risk(
        model, base_est, loss, theta_interval, grid=grid, refine_tol=refine_tol, method=method
    )
    perturbed = worst_case_risk(
        model, perturbed_est, loss, theta_interval, grid=grid, refine_tol=refine_tol, method=method
    )
    return base, perturbed


def mean_shift_risk(
    alpha: float, n: int = 1, q: float = 2.0, nodes: int = DEFAULT_NODES
) -> float:
    """E|Z/sqrt(n) - alpha|^q for standard normal Z, by split quadrature.

    This is the risk of the mean shifted by alpha under the power-q loss,
    as a scalar function of the shift.
    """
    if q <= 1:
        raise ValueError(f"q must be > 1, got {q}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    loss = Power(p=float(q))
    return gaussian_expectation(
        lambda t: loss_of_error(loss, t),
        mu=-float(alpha),
        s=1.0 / math.sqrt(n),
        nodes=nodes,
        roots=(0.0,),
    )


def mean_shift_risk_deriv(
    alpha: float,
    n: int = 1,
    q: float = 2.0,
    mode: Literal["analytic", "fd"] = "analytic",
    nodes: int = DEFAULT_NODES,
    fd_step: float = 1e-5,
) -> float:
    """d/d(alpha) of mean_shift_risk.

    analytic: -q * E[(Z/sqrt(n) - alpha) * |Z/sqrt(n) - alpha|^(q-2)];
    fd: central difference with the given step.  The two must agree closely
    for q >= 1.5; the sign of the result is reported as computed.
    """
    if q <= 1:
        raise ValueError(f"q must be > 1, got {q}")
    if mode == "fd":
        up = mean_shift_risk(alpha + fd_step, n, q, nodes)
        dn = mean_shift_risk(alpha - fd_step, n, q, nodes)
        return (up - dn) / (2.0 * fd_step)
    if mode != "analytic":
        raise ValueError(f"mode must be 'analytic' or 'fd', got {mode!r}")

    def signed_power(t: np.ndarray) -> np.ndarray:
        return np.sign(t) * np.abs(t) ** (q - 1.0)

    value = gaussian_expectation(
        signed_power,
        mu=-float(alpha),
        s=1.0 / math.sqrt(n),
        nodes=nodes,
        roots=(0.0,),
    )
    return -q * value + 0.0  # normalizes -0.0 at symmetric shifts


@dataclass(frozen=True)
class ClassSummary:
    exponent: float
    params: Tuple[float, ...]
    value: float


@dataclass(frozen=True)
class PartitionReport:
    """Joint outcome of per-class minimax solves and all pairwise refutations."""

    classes: Tuple[ClassSummary, ...]
    pairwise_disjoint: bool
    witnesses: Tuple[RefutationCertificate, ...]
    param_distances: Tuple[Tuple[float, ...], ...]


def check_exclusivity_partition(
    model: GaussianLocationModel,
    family: FamilySpec,
    exponents: Sequence[float],
    theta_interval: Interval,
    opts: Optional[RefuteOptions] = None,
) -> PartitionReport:
    """Solve each exponent class and try to refute every cross-class pair.

    pairwise_disjoint is True exactly when every pair came back Refuted;
    other verdicts are carried in the witnesses rather than raised.
    """
    exponents = [float(p) for p in exponents]
    if len(exponents) < 2:
        raise InsufficientClassesError(
            f"need at least two exponent classes, got {len(exponents)}"
        )
    if len(set(exponents)) != len(exponents):
        raise InsufficientClassesError(f"exponents must be distinct, got {exponents}")
    if any(p <= 1.0 for p in exponents):
        raise ExponentPreconditionError(
            f"all exponents must exceed 1, got {exponents}"
        )
    if opts is None:
        opts = RefuteOptions()

    exponents = sorted(exponents)
    losses = [Power(p=p) for p in exponents]
    report: RealizabilityReport = realizability_report(
        model, family, losses, theta_interval, opts.solve
    )
    classes = tuple(
        ClassSummary(exponent=p, params=r.best_params, value=r.minimax_value)
        for p, r in zip(exponents, report.results)
    )

    pairs = [(i, j) for i in range(len(losses)) for j in range(len(losses)) if i < j]
    witnesses = tuple(
        map_ordered(
            lambda ij: refute_joint_minimaxity(
                model, family, losses[ij[0]], losses[ij[1]], theta_interval, opts
            ),
            pairs,
        )
    )
    return PartitionReport(
        classes=classes,
        pairwise_disjoint=all(w.verdict is Verdict.REFUTED for w in witnesses),
        witnesses=witnesses,
        param_distances=report.param_distances,
    )
