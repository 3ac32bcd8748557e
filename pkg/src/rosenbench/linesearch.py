"""Step-size selection along a one-dimensional restriction phi(a) = f(x + a*d).

Six rules are provided:

* ``Fixed`` -- one constant step for every iteration.
* ``VariableCandidates`` -- evaluate phi at a small candidate list and keep
  the argmin (ties go to the smallest candidate).
* ``QuadraticFit`` -- interpolate phi through three sample abscissae with a
  parabola a*x^2 + b*x + c and step to its vertex -b/(2a); if the fit is
  concave or the vertex is nonpositive, fall back to the best positive
  sample.
* ``RandomQuadraticFit`` -- same fit, but the three abscissae are redrawn
  uniformly from a range each iteration with a seeded generator.
* ``GoldenSection`` -- bracket shrinking on [lo, hi] by the golden ratio
  until the bracket is narrower than ``width_tol``; returns the midpoint.
* ``ExactQuadratic`` -- closed-form exact minimization, valid only for
  quadratic objectives; used to exercise conjugate-direction theory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDirectionError, InvalidInputError, LineSearchFailedError
from .objectives import Objective, QuadraticObjective, Vector, as_vector

# Golden ratio conjugate: bracket width shrinks by this factor per probe.
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0

DEFAULT_VARIABLE_ALPHAS = (0.000124, 0.0124, 0.124)
DEFAULT_QUADFIT_SAMPLES = (1e-5, 6.7e-5, 1.24e-4)
DEFAULT_GOLDEN_LO = 1.24e-6
DEFAULT_GOLDEN_HI = 1.5
DEFAULT_GOLDEN_WIDTH_TOL = 1e-8

# A fitted quadratic coefficient at or below this is treated as degenerate
# (flat or concave fit) and triggers the fallback step.
_MIN_FIT_CURVATURE = 1e-18


@dataclass(frozen=True)
class Fixed:
    """One constant step size used at every iteration."""

    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise InvalidInputError(f"fixed step must be positive, got {self.alpha}")


@dataclass(frozen=True)
class VariableCandidates:
    """A nonempty set of candidate steps; the one with smallest phi wins."""

    alphas: tuple[float, ...] = DEFAULT_VARIABLE_ALPHAS

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if len(self.alphas) == 0:
            raise InvalidInputError("candidate list must be nonempty")
        for a in self.alphas:
            if not (math.isfinite(a) and a > 0.0):
                raise InvalidInputError(f"candidate steps must be positive, got {a}")


@dataclass(frozen=True)
class QuadraticFit:
    """Three distinct sample abscissae for the parabola interpolation.

    Abscissae must be nonnegative and pairwise distinct; the returned step
    is always strictly positive (a zero abscissa can be probed but never
    chosen).
    """

    sample_alphas: tuple[float, float, float] = DEFAULT_QUADFIT_SAMPLES

    def __post_init__(self):
        samples = tuple(float(a) for a in self.sample_alphas)
        object.__setattr__(self, "sample_alphas", samples)
        if len(samples) != 3:
            raise InvalidInputError(f"exactly three sample abscissae required, got {len(samples)}")
        if len(set(samples)) != 3:
            raise InvalidInputError(f"sample abscissae must be pairwise distinct: {samples}")
        for a in samples:
            if not (math.isfinite(a) and a >= 0.0):
                raise InvalidInputError(f"sample abscissae must be finite and >= 0, got {a}")


@dataclass(frozen=True)
class RandomQuadraticFit:
    """Parabola fit with three abscissae redrawn from [lo, hi] per iteration."""

    lo: float = 1e-5
    hi: float = 1.24e-4
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and 0.0 < self.lo < self.hi):
            raise InvalidInputError(f"need 0 < lo < hi, got ({self.lo}, {self.hi})")

    def draw(self, rng: np.random.Generator) -> QuadraticFit:
        """Draw three distinct abscissae (redraw on the measure-zero collision)."""
        while True:
            s = rng.uniform(self.lo, self.hi, 3)
            if s[0] != s[1] and s[1] != s[2] and s[0] != s[2]:
                return QuadraticFit(tuple(s))


@dataclass(frozen=True)
class GoldenSection:
    """Bracketing interval [lo, hi] and the terminal bracket width."""

    lo: float = DEFAULT_GOLDEN_LO
    hi: float = DEFAULT_GOLDEN_HI
    width_tol: float = DEFAULT_GOLDEN_WIDTH_TOL

    def __post_init__(self):
        if not (math.isfinite(self.lo) and self.lo >= 0.0):
            raise InvalidInputError(f"interval start must be finite and >= 0, got {self.lo}")
        if not (math.isfinite(self.width_tol) and self.width_tol > 0.0):
            raise InvalidInputError(f"width tolerance must be positive, got {self.width_tol}")
        if not (math.isfinite(self.hi) and self.hi - self.lo > self.width_tol):
            raise InvalidInputError(
                f"need hi - lo > width_tol, got interval ({self.lo}, {self.hi}) "
                f"with tolerance {self.width_tol}"
            )


@dataclass(frozen=True)
class ExactQuadratic:
    """Closed-form exact line minimization; requires a quadratic objective."""


StepRule = Fixed | VariableCandidates | QuadraticFit | RandomQuadraticFit | GoldenSection | ExactQuadratic


class LineRestriction:
    """The slice phi(a) = f(x + a*d) of an objective along direction d.

    Overflow in the objective is mapped to +inf so selectors can treat
    wild probes as ordinary non-finite values.
    """

    def __init__(self, objective: Objective, x: Vector, d: Vector):
        self.objective = objective
        self.x = x
        self.d = d

    def point_at(self, alpha: float) -> Vector:
        return self.x + alpha * self.d

    def __call__(self, alpha: float) -> float:
        try:
            return self.objective.value(self.x + alpha * self.d)
        except OverflowError:
            return math.inf


def restrict(objective: Objective, x, d) -> LineRestriction:
    """Build the restriction phi(a) = f(x + a*d); phi(0) equals f(x).

    Raises InvalidDirectionError for a zero direction.
    """
    x = as_vector(x)
    d = np.asarray(d, dtype=np.float64)
    if d.shape != x.shape:
        raise InvalidInputError(f"direction shape {d.shape} does not match point shape {x.shape}")
    if not np.isfinite(d).all():
        raise InvalidDirectionError(f"direction has non-finite components: {d}")
    if not np.any(d != 0.0):
        raise InvalidDirectionError("direction must be nonzero")
    return LineRestriction(objective, x, d)


def select_fixed(rule: Fixed) -> float:
    """The constant step, independent of the restriction."""
    return rule.alpha


def select_variable(line: LineRestriction, rule: VariableCandidates) -> float:
    """Candidate with smallest phi; ties broken toward the smallest step."""
    best = None
    for a in rule.alphas:
        y = line(a)
        if math.isfinite(y) and (best is None or (y, a) < best):
            best = (y, a)
    if best is None:
        raise LineSearchFailedError(
            f"phi is non-finite at every candidate step {rule.alphas}"
        )
    return best[1]


def _fallback_sample(samples, values) -> float:
    # Best positive abscissa with finite phi; ties toward the smallest step.
    best = None
    for a, y in zip(samples, values):
        if a > 0.0 and math.isfinite(y) and (best is None or (y, a) < best):
            best = (y, a)
    if best is None:
        raise LineSearchFailedError(
            f"phi is non-finite at every positive sample abscissa {samples}"
        )
    return best[1]


def select_quadratic_fit(line: LineRestriction, rule: QuadraticFit) -> float:
    """Vertex of the parabola through (a_i, phi(a_i)), i = 1..3.

    Solves the 3x3 interpolation system for the coefficients (a, b, c) of
    a*x^2 + b*x + c.  Returns -b/(2a) when the fit is convex with a positive
    vertex; otherwise the best positive sampled abscissa.
    """
    s = rule.sample_alphas
    y = np.array([line(s[0]), line(s[1]), line(s[2])])
    coeffs = None
    if np.isfinite(y).all():
        vandermonde = np.array([[si * si, si, 1.0] for si in s])
        try:
            coeffs = np.linalg.solve(vandermonde, y)
        except np.linalg.LinAlgError:
            coeffs = None
    if coeffs is not None:
        a, b = coeffs[0], coeffs[1]
        if a > _MIN_FIT_CURVATURE:
            vertex = -b / (2.0 * a)
            if vertex > 0.0 and math.isfinite(vertex):
                return vertex
    return _fallback_sample(s, y)


def select_golden_section(line: LineRestriction, rule: GoldenSection) -> float:
    """Golden-ratio bracket shrinking; returns the final bracket midpoint.

    Each shrink step costs one new phi evaluation and multiplies the
    bracket width by exactly INV_PHI.  No unimodality check is made: on a
    multimodal phi the result is whatever the elimination keeps.
    """
    lo = rule.lo
    width = rule.hi - rule.lo
    c = lo + INV_PHI_SQ * width
    d = lo + INV_PHI * width
    yc = line(c)
    yd = line(d)
    if not (math.isfinite(yc) and math.isfinite(yd)):
        raise LineSearchFailedError("phi is non-finite inside the golden-section bracket")
    while width > rule.width_tol:
        width *= INV_PHI
        if yc < yd:
            # Minimum is trapped in [lo, d]: drop the right section.
            d = c
            yd = yc
            c = lo + INV_PHI_SQ * width
            yc = line(c)
            if not math.isfinite(yc):
                raise LineSearchFailedError("phi is non-finite inside the golden-section bracket")
        else:
            lo = c
            c = d
            yc = yd
            d = lo + INV_PHI * width
            yd = line(d)
            if not math.isfinite(yd):
                raise LineSearchFailedError("phi is non-finite inside the golden-section bracket")
    return lo + 0.5 * width


def select_exact_quadratic(line: LineRestriction) -> float:
    """Exact minimizer -(g'd)/(d'Qd) of phi for a quadratic objective."""
    objective = line.objective
    if not isinstance(objective, QuadraticObjective):
        raise InvalidInputError("exact line minimization requires a QuadraticObjective")
    d = line.d
    curvature = float(d @ objective.Q @ d)
    if curvature <= 0.0:
        raise InvalidDirectionError(f"direction has nonpositive curvature d'Qd = {curvature}")
    g = objective.gradient(line.x)
    return -float(g @ d) / curvature


def select_step(
    line: LineRestriction,
    rule: StepRule,
    rng: np.random.Generator | None = None,
) -> float:
    """Dispatch to the selector for `rule`.

    `rng` is consulted only by RandomQuadraticFit; pass the same generator
    across a run so every iteration draws fresh abscissae from one stream.
    """
    if isinstance(rule, Fixed):
        return select_fixed(rule)
    if isinstance(rule, VariableCandidates):
        return select_variable(line, rule)
    if isinstance(rule, QuadraticFit):
        return select_quadratic_fit(line, rule)
    if isinstance(rule, RandomQuadraticFit):
        if rng is None:
            rng = np.random.default_rng(rule.seed)
        return select_quadratic_fit(line, rule.draw(rng))
    if isinstance(rule, GoldenSection):
        return select_golden_section(line, rule)
    if isinstance(rule, ExactQuadratic):
        return select_exact_quadratic(line)
    raise InvalidInputError(f"unknown step rule: {rule!r}")


def rule_rng(rule: StepRule) -> np.random.Generator | None:
    """Per-run generator for stochastic rules; None for deterministic ones."""
    if isinstance(rule, RandomQuadraticFit):
        return np.random.default_rng(rule.seed)
    return None
