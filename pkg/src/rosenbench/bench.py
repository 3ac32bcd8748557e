"""Benchmark harness: the full experiment grid, contour data, CSV output.

The default :class:`ExperimentMatrix` sweeps every optimizer cell of the
convergence study -- steepest descent under the four step rules, the
Fletcher-Reeves method under the fixed steps, and Newton-Raphson -- over
kappa in {1, 100} and starting points (2,2) and (5,5), stopping at a
gradient norm of 1e-3.  Rows come back in a fixed order and rerunning the
matrix reproduces them bit-for-bit except for wall-clock timings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IncomparableVariantsError, InvalidInputError
from .linesearch import (
    DEFAULT_GOLDEN_HI,
    DEFAULT_GOLDEN_LO,
    DEFAULT_GOLDEN_WIDTH_TOL,
    DEFAULT_QUADFIT_SAMPLES,
    DEFAULT_VARIABLE_ALPHAS,
    Fixed,
    GoldenSection,
    QuadraticFit,
    RandomQuadraticFit,
    StepRule,
    VariableCandidates,
)
from .objectives import Matrix, RosenbrockObjective, rosenbrock_value
from .optimize import (
    DivergenceReason,
    RunResult,
    RunStatus,
    TerminationPolicy,
    fletcher_reeves_cg,
    newton_raphson,
    steepest_descent,
    timed_run,
)

DEFAULT_FIXED_ALPHAS = (0.124, 0.0124, 0.00124, 0.000124)

_STATUS_LABELS = {
    (RunStatus.CONVERGED, None): "converged",
    (RunStatus.DIVERGED, DivergenceReason.ITERATE_BLOWUP): "diverged_blowup",
    (RunStatus.DIVERGED, DivergenceReason.NON_FINITE_VALUE): "diverged_nonfinite",
    (RunStatus.DIVERGED, DivergenceReason.SINGULAR_HESSIAN): "diverged_singular_hessian",
    (RunStatus.MAX_ITERATIONS, None): "max_iter",
}


def fmt_real(v: float) -> str:
    """Render a real with 17 significant digits (exact float round-trip)."""
    return format(float(v), ".17g")


def status_label(result: RunResult) -> str:
    return _STATUS_LABELS[(result.status, result.divergence_reason)]


def rule_label(rule: StepRule | None) -> str:
    """Textual form of a step rule; also the CLI grammar for it."""
    if rule is None:
        return "none"
    if isinstance(rule, Fixed):
        return f"fixed:{fmt_real(rule.alpha)}"
    if isinstance(rule, VariableCandidates):
        return "variable:" + ",".join(fmt_real(a) for a in rule.alphas)
    if isinstance(rule, QuadraticFit):
        return "quadfit:" + ",".join(fmt_real(a) for a in rule.sample_alphas)
    if isinstance(rule, RandomQuadraticFit):
        return f"quadfit-random:{fmt_real(rule.lo)},{fmt_real(rule.hi)},seed={rule.seed}"
    if isinstance(rule, GoldenSection):
        return f"golden:{fmt_real(rule.lo)}:{fmt_real(rule.hi)}:{fmt_real(rule.width_tol)}"
    return "exact-quadratic"


@dataclass(frozen=True)
class ExperimentMatrix:
    """Cross product of methods, step rules, kappas, and starting points."""

    kappas: tuple[float, ...] = (1.0, 100.0)
    starts: tuple[tuple[float, float], ...] = ((2.0, 2.0), (5.0, 5.0))
    fixed_alphas: tuple[float, ...] = DEFAULT_FIXED_ALPHAS
    policy: TerminationPolicy = TerminationPolicy()

    def cells(self) -> list[tuple[str, StepRule | None]]:
        """Deterministic cell order: SD fixed sweep, SD adaptive rules, Newton, CG fixed sweep."""
        sd: list[tuple[str, StepRule | None]] = [("sd", Fixed(a)) for a in self.fixed_alphas]
        sd += [
            ("sd", VariableCandidates(DEFAULT_VARIABLE_ALPHAS)),
            ("sd", QuadraticFit(DEFAULT_QUADFIT_SAMPLES)),
            ("sd", GoldenSection(DEFAULT_GOLDEN_LO, DEFAULT_GOLDEN_HI, DEFAULT_GOLDEN_WIDTH_TOL)),
        ]
        return sd + [("newton", None)] + [("cg", Fixed(a)) for a in self.fixed_alphas]


@dataclass(frozen=True)
class ResultRow:
    """One benchmark cell outcome.

    `final_point` is kept for re-verification of the reported gradient
    norm; it is not a CSV column.
    """

    method: str
    step_rule: str
    kappa: float
    x0: tuple[float, float]
    status: str
    iterations: int
    final_f: float
    final_grad_norm: float
    wall_ms: float
    final_point: tuple[float, ...]


def run_cell(
    method: str,
    rule: StepRule | None,
    kappa: float,
    x0: tuple[float, float],
    policy: TerminationPolicy,
) -> ResultRow:
    """Execute one (method, rule, kappa, start) combination."""
    objective = RosenbrockObjective(kappa)
    if method == "sd":
        result, ms = timed_run(steepest_descent, objective, x0, rule, policy,
                               record_trajectory=False)
    elif method == "cg":
        result, ms = timed_run(fletcher_reeves_cg, objective, x0, rule, policy,
                               record_trajectory=False)
    elif method == "newton":
        result, ms = timed_run(newton_raphson, objective, x0, policy,
                               record_trajectory=False)
    else:
        raise InvalidInputError(f"unknown method: {method!r}")
    return ResultRow(
        method=method,
        step_rule=rule_label(rule),
        kappa=float(kappa),
        x0=(float(x0[0]), float(x0[1])),
        status=status_label(result),
        iterations=result.iterations,
        final_f=result.final_value,
        final_grad_norm=result.final_grad_norm,
        wall_ms=ms,
        final_point=tuple(float(c) for c in result.final_point),
    )


def run_matrix(matrix: ExperimentMatrix = ExperimentMatrix()) -> list[ResultRow]:
    """Run every combination; no cell is ever skipped (failures land in `status`)."""
    rows = []
    for method, rule in matrix.cells():
        for kappa in matrix.kappas:
            for start in matrix.starts:
                rows.append(run_cell(method, rule, kappa, start, matrix.policy))
    return rows


_VARIANT_PREFIXES = {
    "variable": "variable:",
    "quadratic-fit": "quadfit:",
    "golden-section": "golden:",
}


def compare_sd_variants(
    rows: list[ResultRow],
    kappa: float,
    start: tuple[float, float],
    fixed_alpha: float = 0.000124,
) -> list[str]:
    """Order the four steepest-descent step-rule variants by iteration count.

    Returns the labels {fixed, variable, quadratic-fit, golden-section}
    sorted ascending by iterations, ties broken alphabetically.  Raises
    IncomparableVariantsError naming the variant whose row is missing or
    did not converge.
    """
    start = (float(start[0]), float(start[1]))
    fixed_label = f"fixed:{fmt_real(fixed_alpha)}"
    counts: dict[str, int] = {}
    for variant in ("fixed", "variable", "quadratic-fit", "golden-section"):
        match = [
            r for r in rows
            if r.method == "sd" and r.kappa == float(kappa) and r.x0 == start
            and (r.step_rule == fixed_label if variant == "fixed"
                 else r.step_rule.startswith(_VARIANT_PREFIXES[variant]))
        ]
        if not match:
            raise IncomparableVariantsError(
                f"no steepest-descent row for variant {variant!r} at kappa={kappa}, start={start}"
            )
        row = match[0]
        if row.status != "converged":
            raise IncomparableVariantsError(
                f"variant {variant!r} did not converge at kappa={kappa}, start={start} "
                f"(status {row.status})"
            )
        counts[variant] = row.iterations
    return sorted(counts, key=lambda name: (counts[name], name))


@dataclass(frozen=True, eq=False)
class ContourGrid:
    """Objective values on a uniform inclusive grid, for level-curve plots.

    ``values[i, j]`` is the objective at (xs[i], ys[j]).
    """

    kappa: float
    xs: np.ndarray
    ys: np.ndarray
    values: Matrix


def contour_grid(
    kappa: float,
    x_range: tuple[float, float] = (-2.0, 6.0),
    y_range: tuple[float, float] = (-2.0, 6.0),
    resolution: int = 401,
) -> ContourGrid:
    """Sample the valley function on a resolution x resolution grid.

    Endpoints are included; grid values match scalar evaluation exactly.
    """
    if resolution < 2:
        raise InvalidInputError(f"resolution must be >= 2, got {resolution}")
    x_lo, x_hi = float(x_range[0]), float(x_range[1])
    y_lo, y_hi = float(y_range[0]), float(y_range[1])
    if not (x_hi > x_lo and y_hi > y_lo):
        raise InvalidInputError(f"degenerate grid ranges x={x_range}, y={y_range}")
    rosenbrock_value((x_lo, y_lo), kappa)  # validates kappa and finiteness
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    # Same operation order as rosenbrock_value, so entries agree bitwise.
    T = X * X - Y
    U = X - 1.0
    values = float(kappa) * T * T + U * U
    return ContourGrid(kappa=float(kappa), xs=xs, ys=ys, values=values)


RESULTS_HEADER = "method,step_rule,kappa,x0_1,x0_2,status,iterations,final_f,final_grad_norm,wall_ms"


def results_csv(rows: list[ResultRow]) -> str:
    """Benchmark table as CSV text (deterministic except the wall_ms column)."""
    lines = [RESULTS_HEADER]
    for r in rows:
        lines.append(
            f"{r.method},{r.step_rule},{fmt_real(r.kappa)},{fmt_real(r.x0[0])},"
            f"{fmt_real(r.x0[1])},{r.status},{r.iterations},{fmt_real(r.final_f)},"
            f"{fmt_real(r.final_grad_norm)},{fmt_real(r.wall_ms)}"
        )
    return "\n".join(lines) + "\n"


def trajectory_csv(result: RunResult) -> str:
    """Iterate history as CSV with one coordinate column per dimension."""
    dim = len(result.final_point)
    header = "k," + ",".join(f"x{i + 1}" for i in range(dim)) + ",f,grad_norm,alpha"
    lines = [header]
    for rec in result.trajectory:
        coords = ",".join(fmt_real(c) for c in rec.point)
        lines.append(
            f"{rec.k},{coords},{fmt_real(rec.value)},{fmt_real(rec.grad_norm)},"
            f"{fmt_real(rec.alpha_used)}"
        )
    return "\n".join(lines) + "\n"


def grid_csv(grid: ContourGrid) -> str:
    """Grid samples as x,y,f rows in row-major order."""
    lines = ["x,y,f"]
    for i, x in enumerate(grid.xs):
        row = grid.values[i]
        for j, y in enumerate(grid.ys):
            lines.append(f"{fmt_real(x)},{fmt_real(y)},{fmt_real(row[j])}")
    return "\n".join(lines) + "\n"
