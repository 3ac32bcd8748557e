"""Iteration drivers: steepest descent, Newton-Raphson, Fletcher-Reeves CG.

All three share one termination discipline:

* converge when the gradient norm falls to ``epsilon`` or below (checked
  before the first step, so starting at a stationary point converges in
  zero iterations);
* declare divergence when the iterate norm exceeds ``blowup_norm``, when
  the objective value or an iterate component goes non-finite, or (Newton
  only) when the Hessian is numerically singular;
* give up at ``max_iterations`` steps.

Runs are deterministic: identical inputs replay identical trajectories.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidInputError, LineSearchFailedError
from .linesearch import ExactQuadratic, Fixed, StepRule, restrict, rule_rng, select_step
from .objectives import Objective, QuadraticObjective, Vector, as_vector


class RunStatus(Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    MAX_ITERATIONS = "max_iterations"


class DivergenceReason(Enum):
    ITERATE_BLOWUP = "iterate-blowup"
    NON_FINITE_VALUE = "non-finite-value"
    SINGULAR_HESSIAN = "singular-hessian"


@dataclass(frozen=True)
class TerminationPolicy:
    """Stopping rule: gradient tolerance, iteration cap, and blow-up guard."""

    epsilon: float = 1e-3
    max_iterations: int = 10_000_000
    blowup_norm: float = 1e8

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise InvalidInputError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise InvalidInputError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.blowup_norm > self.epsilon:
            raise InvalidInputError(
                f"blowup_norm must exceed epsilon, got {self.blowup_norm} <= {self.epsilon}"
            )


@dataclass(frozen=True, eq=False)
class IterateRecord:
    """One trajectory entry.

    ``alpha_used`` is the step applied in the transition from iterate k-1
    to this one; it is 0.0 for the starting point and for every
    Newton-Raphson record (that method has no step-size concept).
    """

    k: int
    point: Vector
    value: float
    grad_norm: float
    alpha_used: float


@dataclass(eq=False)
class RunResult:
    """Outcome of one optimizer run with its recorded trajectory."""

    status: RunStatus
    iterations: int
    final_point: Vector
    final_value: float
    final_grad_norm: float
    trajectory: list[IterateRecord] = field(default_factory=list)
    divergence_reason: DivergenceReason | None = None

    @property
    def converged(self) -> bool:
        return self.status is RunStatus.CONVERGED


def _norm(v) -> float:
    # hypot scales internally, so huge components report a large finite
    # norm instead of overflowing to inf.
    return math.hypot(*v)


def check_convergence(grad, epsilon: float) -> bool:
    """True iff the Euclidean norm of `grad` is <= epsilon (inclusive)."""
    return _norm(grad) <= epsilon


def detect_divergence(x, value: float, policy: TerminationPolicy) -> DivergenceReason | None:
    """Blow-up and non-finiteness guard; None while the run looks healthy."""
    nx = _norm(x)
    if nx > policy.blowup_norm:
        return DivergenceReason.ITERATE_BLOWUP
    if not (math.isfinite(nx) and math.isfinite(value)):
        return DivergenceReason.NON_FINITE_VALUE
    return None


def fletcher_reeves_beta(g_next, g) -> float:
    """Direction-mixing coefficient: squared-norm ratio (g_next'g_next)/(g'g)."""
    return float(g_next @ g_next) / float(g @ g)


class _Recorder:
    """Collects trajectory records; when off, keeps only the endpoints."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.records: list[IterateRecord] = []

    def add(self, k: int, x: Vector, value: float, grad_norm: float, alpha: float):
        if self.enabled or k == 0:
            self.records.append(IterateRecord(k, x.copy(), value, grad_norm, alpha))

    def add_final(self, k: int, x: Vector, value: float, grad_norm: float, alpha: float):
        if not self.enabled and k > 0:
            self.records.append(IterateRecord(k, x.copy(), value, grad_norm, alpha))


def _descent_loop(
    objective: Objective,
    x0,
    rule: StepRule,
    policy: TerminationPolicy,
    record_trajectory: bool,
    next_direction,
) -> RunResult:
    """Shared skeleton for the two first-order drivers.

    `next_direction(g, k)` supplies the search direction for iteration k;
    steepest descent ignores history, Fletcher-Reeves mixes it in.
    """
    if isinstance(rule, ExactQuadratic) and not isinstance(objective, QuadraticObjective):
        raise InvalidInputError("the exact-quadratic rule requires a QuadraticObjective")
    x = as_vector(x0, getattr(objective, "dim", None))
    rng = rule_rng(rule)
    rec = _Recorder(record_trajectory)
    # Hot loop: bind lookups once; Fixed needs no restriction object at all.
    value_at = objective.value
    gradient_at = objective.gradient
    eps = policy.epsilon
    blowup = policy.blowup_norm
    cap = policy.max_iterations
    fixed_alpha = rule.alpha if isinstance(rule, Fixed) else None
    hypot = math.hypot
    isfinite = math.isfinite
    alpha_prev = 0.0
    k = 0
    while True:
        try:
            f = value_at(x)
            g = gradient_at(x)
            gn = hypot(*g)
        except (InvalidInputError, OverflowError):
            # The objective refused a non-finite iterate.
            rec.add(k, x, math.nan, math.nan, alpha_prev)
            rec.add_final(k, x, math.nan, math.nan, alpha_prev)
            return RunResult(RunStatus.DIVERGED, k, x, math.nan, math.nan, rec.records,
                             DivergenceReason.NON_FINITE_VALUE)
        rec.add(k, x, f, gn, alpha_prev)
        if gn <= eps:
            rec.add_final(k, x, f, gn, alpha_prev)
            return RunResult(RunStatus.CONVERGED, k, x, f, gn, rec.records)
        xn = hypot(*x)
        if xn > blowup:
            rec.add_final(k, x, f, gn, alpha_prev)
            return RunResult(RunStatus.DIVERGED, k, x, f, gn, rec.records,
                             DivergenceReason.ITERATE_BLOWUP)
        if not (isfinite(xn) and isfinite(f)):
            rec.add_final(k, x, f, gn, alpha_prev)
            return RunResult(RunStatus.DIVERGED, k, x, f, gn, rec.records,
                             DivergenceReason.NON_FINITE_VALUE)
        if k == cap:
            rec.add_final(k, x, f, gn, alpha_prev)
            return RunResult(RunStatus.MAX_ITERATIONS, k, x, f, gn, rec.records)
        d = next_direction(g, k)
        if fixed_alpha is not None:
            alpha = fixed_alpha
        else:
            try:
                alpha = select_step(restrict(objective, x, d), rule, rng)
            except LineSearchFailedError:
                rec.add_final(k, x, f, gn, alpha_prev)
                return RunResult(RunStatus.DIVERGED, k, x, f, gn, rec.records,
                                 DivergenceReason.NON_FINITE_VALUE)
        x = x + alpha * d
        alpha_prev = alpha
        k += 1


def steepest_descent(
    objective: Objective,
    x0,
    rule: StepRule,
    policy: TerminationPolicy = TerminationPolicy(),
    record_trajectory: bool = True,
) -> RunResult:
    """Minimize by stepping along the negative gradient.

    Iterates x(k+1) = x(k) - alpha(k) * grad f(x(k)), with alpha(k) chosen
    by `rule` on the restriction along -grad f(x(k)).
    """

    def direction(g, k):
        return -g

    return _descent_loop(objective, x0, rule, policy, record_trajectory, direction)


def fletcher_reeves_cg(
    objective: Objective,
    x0,
    rule: StepRule,
    policy: TerminationPolicy = TerminationPolicy(),
    restart_period: int | None = None,
    record_trajectory: bool = True,
) -> RunResult:
    """Nonlinear conjugate gradient with the squared-norm mixing ratio.

    d(0) = -g(0), then d(k+1) = -g(k+1) + beta(k) d(k) with
    beta(k) = (g(k+1)'g(k+1)) / (g(k)'g(k)).  With `restart_period` = m the
    direction is reset to the raw negative gradient every m iterations
    (m = 1 reproduces steepest descent exactly).  No descent check is made:
    with fixed steps an ascent direction is followed and may blow up, which
    is a legitimate experimental outcome.
    """
    if restart_period is not None and restart_period < 1:
        raise InvalidInputError(f"restart_period must be >= 1, got {restart_period}")

    state = {"g": None, "d": None}

    def direction(g, k):
        if state["d"] is None or (restart_period is not None and k % restart_period == 0):
            d = -g
        else:
            beta = fletcher_reeves_beta(g, state["g"])
            d = -g + beta * state["d"]
        state["g"] = g
        state["d"] = d
        return d

    return _descent_loop(objective, x0, rule, policy, record_trajectory, direction)


def newton_raphson(
    objective: Objective,
    x0,
    policy: TerminationPolicy = TerminationPolicy(),
    record_trajectory: bool = True,
) -> RunResult:
    """Second-order iteration solving F(x) s = grad f(x) and stepping x - s.

    The Hessian system is solved by direct factorization with partial
    pivoting; the explicit inverse is never formed.  A Hessian whose
    determinant is at or below 1e-12 * ||F||_fro^n stops the run as
    diverged (singular Hessian); no definiteness repair is attempted.
    """
    x = as_vector(x0, getattr(objective, "dim", None))
    rec = _Recorder(record_trajectory)
    k = 0
    while True:
        try:
            f = objective.value(x)
            g = objective.gradient(x)
            gn = _norm(g)
        except (InvalidInputError, OverflowError):
            rec.add(k, x, math.nan, math.nan, 0.0)
            rec.add_final(k, x, math.nan, math.nan, 0.0)
            return RunResult(RunStatus.DIVERGED, k, x, math.nan, math.nan, rec.records,
                             DivergenceReason.NON_FINITE_VALUE)
        rec.add(k, x, f, gn, 0.0)
        if gn <= policy.epsilon:
            rec.add_final(k, x, f, gn, 0.0)
            return RunResult(RunStatus.CONVERGED, k, x, f, gn, rec.records)
        reason = detect_divergence(x, f, policy)
        if reason is not None:
            rec.add_final(k, x, f, gn, 0.0)
            return RunResult(RunStatus.DIVERGED, k, x, f, gn, rec.records, reason)
        if k == policy.max_iterations:
            rec.add_final(k, x, f, gn, 0.0)
            return RunResult(RunStatus.MAX_ITERATIONS, k, x, f, gn, rec.records)
        H = objective.hessian(x)
        # |det H| <= 1e-12 * scale^n, tested on H/scale to avoid overflow.
        scale = float(np.linalg.norm(H, "fro"))
        if not (math.isfinite(scale) and scale > 0.0) or abs(float(np.linalg.det(H / scale))) <= 1e-12:
            rec.add_final(k, x, f, gn, 0.0)
            return RunResult(RunStatus.DIVERGED, k, x, f, gn, rec.records,
                             DivergenceReason.SINGULAR_HESSIAN)
        x = x - np.linalg.solve(H, g)
        k += 1


def timed_run(fn, *args, **kwargs) -> tuple[RunResult, float]:
    """Run a driver and return (result, wall-clock milliseconds)."""
    t0 = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, (time.perf_counter() - t0) * 1e3
