"""Differentiable test objectives and finite-difference derivative oracles.

The central objective is the two-dimensional valley function

    f(x1, x2) = kappa * (x1^2 - x2)^2 + (x1 - 1)^2,    kappa > 0,

whose global minimum sits at (1, 1) regardless of kappa.  Large kappa
stretches the curved valley and makes first-order methods crawl.  A
strictly convex quadratic objective 0.5 x'Qx - x'b is provided for
exercising conjugate-direction theory, and central finite differences
serve as an independent check on any analytic derivative.
"""

from __future__ import annotations

import math
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidInputError

Vector = NDArray[np.float64]
Matrix = NDArray[np.float64]

#: Default finite-difference steps: the usual truncation/round-off balance
#: for central differences in double precision.
DEFAULT_GRADIENT_STEP = 1e-6
DEFAULT_HESSIAN_STEP = 1e-4


class Objective(Protocol):
    """A real function of an n-vector with first and second derivatives.

    ``hessian`` may raise for objectives that do not supply one.
    """

    def value(self, x: Vector) -> float: ...

    def gradient(self, x: Vector) -> Vector: ...

    def hessian(self, x: Vector) -> Matrix: ...


def as_vector(x, dim: int | None = None) -> Vector:
    """Validate and convert `x` to a finite float64 vector.

    Raises InvalidInputError on non-finite entries, empty input, or a
    dimension mismatch with `dim`.
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInputError(f"expected a nonempty 1-d vector, got shape {v.shape}")
    if dim is not None and v.size != dim:
        raise InvalidInputError(f"expected a vector of dimension {dim}, got {v.size}")
    if not np.isfinite(v).all():
        raise InvalidInputError(f"vector has non-finite components: {v}")
    return v


def _pair(p) -> tuple[float, float]:
    """Unpack a 2-vector into finite floats (hot path, no array copies)."""
    if len(p) != 2:
        raise InvalidInputError(f"expected a 2-vector, got length {len(p)}")
    x1 = float(p[0])
    x2 = float(p[1])
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise InvalidInputError(f"non-finite input point: ({x1}, {x2})")
    return x1, x2


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not (math.isfinite(kappa) and kappa > 0.0):
        raise InvalidInputError(f"kappa must be a positive finite real, got {kappa}")
    return kappa


def rosenbrock_value(p, kappa: float = 1.0) -> float:
    """kappa*(x1^2 - x2)^2 + (x1 - 1)^2; nonnegative, zero only at (1, 1)."""
    x1, x2 = _pair(p)
    t = x1 * x1 - x2
    u = x1 - 1.0
    return _check_kappa(kappa) * t * t + u * u


def rosenbrock_gradient(p, kappa: float = 1.0) -> Vector:
    """Analytic gradient: (4k*x1*(x1^2 - x2) + 2(x1 - 1), -2k*(x1^2 - x2))."""
    x1, x2 = _pair(p)
    k = _check_kappa(kappa)
    t = x1 * x1 - x2
    return np.array([4.0 * k * x1 * t + 2.0 * (x1 - 1.0), -2.0 * k * t])


def rosenbrock_hessian(p, kappa: float = 1.0) -> Matrix:
    """Analytic Hessian [[12k*x1^2 - 4k*x2 + 2, -4k*x1], [-4k*x1, 2k]]."""
    x1, x2 = _pair(p)
    k = _check_kappa(kappa)
    off = -4.0 * k * x1
    return np.array([[12.0 * k * x1 * x1 - 4.0 * k * x2 + 2.0, off], [off, 2.0 * k]])


class RosenbrockObjective:
    """The kappa-parameterized valley function, fixed at dimension 2."""

    dim = 2

    def __init__(self, kappa: float = 1.0):
        self.kappa = _check_kappa(kappa)

    def __repr__(self) -> str:
        return f"RosenbrockObjective(kappa={self.kappa!r})"

    def value(self, x) -> float:
        return rosenbrock_value(x, self.kappa)

    def gradient(self, x) -> Vector:
        return rosenbrock_gradient(x, self.kappa)

    def hessian(self, x) -> Matrix:
        return rosenbrock_hessian(x, self.kappa)


class QuadraticObjective:
    """Strictly convex quadratic 0.5 x'Qx - x'b with symmetric positive-definite Q.

    Symmetry is required exactly (construct Q symmetric); positive
    definiteness is checked by a Cholesky factorization at construction.
    """

    def __init__(self, Q, b):
        Q = np.asarray(Q, dtype=np.float64)
        b = as_vector(b)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise InvalidInputError(f"Q must be square, got shape {Q.shape}")
        if Q.shape[0] != b.size:
            raise InvalidInputError(
                f"dimension mismatch: Q is {Q.shape[0]}x{Q.shape[1]}, b has length {b.size}"
            )
        if not np.isfinite(Q).all():
            raise InvalidInputError("Q has non-finite entries")
        if not np.array_equal(Q, Q.T):
            raise InvalidInputError("Q must be exactly symmetric")
        try:
            np.linalg.cholesky(Q)
        except np.linalg.LinAlgError:
            raise InvalidInputError("Q must be positive definite") from None
        self.Q = Q
        self.b = b
        self.dim = b.size

    def __repr__(self) -> str:
        return f"QuadraticObjective(Q={self.Q.tolist()!r}, b={self.b.tolist()!r})"

    def value(self, x) -> float:
        v = as_vector(x, self.dim)
        return 0.5 * float(v @ self.Q @ v) - float(v @ self.b)

    def gradient(self, x) -> Vector:
        v = as_vector(x, self.dim)
        return self.Q @ v - self.b

    def hessian(self, x) -> Matrix:
        as_vector(x, self.dim)
        return self.Q.copy()

    def minimizer(self) -> Vector:
        """Solve Q x = b for the unique stationary point."""
        return np.linalg.solve(self.Q, self.b)


def quadratic_value(p, Q, b) -> float:
    return QuadraticObjective(Q, b).value(p)


def quadratic_gradient(p, Q, b) -> Vector:
    return QuadraticObjective(Q, b).gradient(p)


def quadratic_hessian(Q, b=None) -> Matrix:
    Q = np.asarray(Q, dtype=np.float64)
    b = np.zeros(Q.shape[0]) if b is None else b
    return QuadraticObjective(Q, b).hessian(np.zeros(Q.shape[0]))


def finite_diff_gradient(f: Objective, p, h: float = DEFAULT_GRADIENT_STEP) -> Vector:
    """Central-difference gradient oracle: (f(p + h e_i) - f(p - h e_i)) / (2h)."""
    if not h > 0.0:
        raise InvalidInputError(f"finite-difference step must be positive, got {h}")
    x = as_vector(p)
    g = np.empty(x.size)
    for i in range(x.size):
        step = np.zeros(x.size)
        step[i] = h
        g[i] = (f.value(x + step) - f.value(x - step)) / (2.0 * h)
    return g


def finite_diff_hessian(f: Objective, p, h: float = DEFAULT_HESSIAN_STEP) -> Matrix:
    """Central second-difference Hessian oracle, symmetrized with its transpose."""
    if not h > 0.0:
        raise InvalidInputError(f"finite-difference step must be positive, got {h}")
    x = as_vector(p)
    n = x.size
    H = np.empty((n, n))
    f0 = f.value(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (f.value(x + ei) - 2.0 * f0 + f.value(x - ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (
                f.value(x + ei + ej)
                - f.value(x + ei - ej)
                - f.value(x - ei + ej)
                + f.value(x - ei - ej)
            ) / (4.0 * h * h)
    return 0.5 * (H + H.T)
