"""Finite differences for -u'' on (0,1) with Robin boundary rows.

Grid nodes include both endpoints.  The operator applies the standard
3-point stencil at every node; at the two boundary nodes the ghost value is
eliminated through the centered Robin condition du/deta + c*u = 0 (outward
normal), which keeps the closure second order.  Weighting the two boundary
rows by 1/2 makes the system symmetric positive definite, so the principal
eigenpair is real and its eigenvector can be taken positive.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import (
    BracketError,
    ConvergenceError,
    HypothesisViolationError,
    InvalidCoefficientError,
    SingularSystemError,
)

__all__ = [
    "Grid1D",
    "ScalarField",
    "RobinOperator",
    "EigenResult",
    "assemble_robin_operator",
    "solve_poisson",
    "unit_source_solution",
    "principal_eigenpair",
    "coupled_eigenvalue",
    "existence_threshold",
    "spectral_shift",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [0,1] with ``n`` interior nodes and both endpoints."""

    n: int

    def __post_init__(self):
        if self.n < 8:
            raise ValueError(f"grid needs at least 8 interior nodes, got n={self.n}")

    @property
    def h(self):
        return 1.0 / (self.n + 1)

    @property
    def size(self):
        return self.n + 2

    @property
    def x(self):
        # i/(n+1) keeps the endpoints exact.
        return np.arange(self.n + 2) / (self.n + 1)


@dataclass
class ScalarField:
    """Values of a function sampled at every grid node."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.size,):
            raise ValueError(
                f"field of length {self.values.shape} on grid of size {self.grid.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    def sup_norm(self):
        """Sup norm with a parabolic correction at an interior peak.

        A smooth extremum generally falls between nodes; fitting the three
        nodes around the discrete argmax recovers the vertex value (exact
        for quadratics).  Monotone fields peak at a boundary node and are
        returned as the plain max.
        """
        v = np.abs(self.values)
        i = int(np.argmax(v))
        peak = float(v[i])
        if 0 < i < len(v) - 1:
            a, b, c = v[i - 1], v[i], v[i + 1]
            curv = a - 2.0 * b + c
            if curv < 0.0:
                peak = float(b - (c - a) ** 2 / (8.0 * curv))
        return peak

    def max_value(self):
        return float(self.values.max())

    def min_value(self):
        return float(self.values.min())

    def copy(self):
        return ScalarField(self.grid, self.values.copy())


@dataclass
class EigenResult:
    """Principal eigenvalue with its sup-normalized positive eigenfunction."""

    sigma: float
    phi: ScalarField
    iterations: int


class RobinOperator:
    """Discrete -d2/dx2 with Robin rows du/deta + c*u = 0 at both ends.

    ``apply`` evaluates the full (n+2)-row operator, boundary rows using the
    ghost-point closure (2*(1+h*c)*u0 - 2*u1)/h^2.  ``solve`` inverts the
    operator through its symmetric half-weighted form by banded Cholesky.
    """

    def __init__(self, grid, c):
        c = float(c)
        if c < 0.0:
            raise InvalidCoefficientError(f"Robin coefficient must be >= 0, got {c}")
        self.grid = grid
        self.c = c
        self._h = grid.h
        self._chol = None
        n_total = grid.size
        self._weights = np.ones(n_total)
        self._weights[0] = self._weights[-1] = 0.5

    def apply(self, values):
        u = np.asarray(values, dtype=float)
        h2 = self._h * self._h
        out = np.empty_like(u)
        out[1:-1] = (-u[:-2] + 2.0 * u[1:-1] - u[2:]) / h2
        edge = 2.0 * (1.0 + self._h * self.c)
        out[0] = (edge * u[0] - 2.0 * u[1]) / h2
        out[-1] = (edge * u[-1] - 2.0 * u[-2]) / h2
        return out

    def _factor(self):
        if self._chol is None:
            if self.c == 0.0:
                raise SingularSystemError(
                    "c = 0 gives a singular (pure Neumann) operator"
                )
            h2 = self._h * self._h
            n_total = self.grid.size
            ab = np.zeros((2, n_total))
            ab[0, 1:] = -1.0 / h2
            ab[1, :] = 2.0 / h2
            ab[1, 0] = ab[1, -1] = (1.0 + self._h * self.c) / h2
            self._chol = cholesky_banded(ab, lower=False)
        return self._chol

    def solve(self, rhs):
        rhs = np.asarray(rhs, dtype=float)
        if self.c == 0.0:
            mean = float(self._weights @ rhs)
            raise SingularSystemError(
                f"c = 0 operator is singular (weighted rhs mean {mean:.3g})"
            )
        return cho_solve_banded((self._factor(), False), self._weights * rhs)


def assemble_robin_operator(grid, c):
    """Tridiagonal Robin operator for -u'' on the grid (c >= 0)."""
    return RobinOperator(grid, c)


def solve_poisson(grid, c, rhs):
    """Solve -u'' = rhs with du/deta + c*u = 0, c > 0, by exact elimination."""
    vals = rhs.values if isinstance(rhs, ScalarField) else np.asarray(rhs, float)
    if vals.shape != (grid.size,):
        raise ValueError("rhs length does not match grid")
    op = RobinOperator(grid, c)
    return ScalarField(grid, op.solve(vals))


def unit_source_solution(grid, c):
    """Solution of -u'' = 1 with Robin coefficient c (closed form is a parabola)."""
    return solve_poisson(grid, c, np.ones(grid.size))


def principal_eigenpair(grid, c, tol=1e-12, max_iter=10_000):
    """Smallest Robin eigenvalue and positive eigenfunction, sup-normalized.

    Inverse power iteration with zero shift on the symmetrized operator;
    converged when successive Rayleigh quotients differ by less than ``tol``.
    c = 0 is the Neumann case with exact answer (0, constants).
    """
    c = float(c)
    if c < 0.0:
        raise InvalidCoefficientError(f"Robin coefficient must be >= 0, got {c}")
    if c == 0.0:
        return EigenResult(0.0, ScalarField(grid, np.ones(grid.size)), 0)

    h = grid.h
    h2 = h * h
    n_total = grid.size
    # T = W^{-1/2} S W^{-1/2}: boundary weights 1/2 scale the edge entries.
    ab = np.zeros((2, n_total))
    ab[0, 1:] = -1.0 / h2
    ab[0, 1] = ab[0, -1] = -np.sqrt(2.0) / h2
    ab[1, :] = 2.0 / h2
    ab[1, 0] = ab[1, -1] = 2.0 * (1.0 + h * c) / h2
    chol = cholesky_banded(ab, lower=False)

    y = np.ones(n_total)
    y /= np.linalg.norm(y)
    sigma_prev = np.inf
    sigma = np.inf
    z = y
    for it in range(1, max_iter + 1):
        z = cho_solve_banded((chol, False), y)
        sigma = float(z @ y) / float(z @ z)
        z = z / np.linalg.norm(z)
        if abs(sigma - sigma_prev) < tol:
            break
        sigma_prev = sigma
        y = z
    else:
        raise ConvergenceError(
            f"inverse power iteration did not settle in {max_iter} iterations",
            last=ScalarField(grid, z / np.sqrt(_half_weights(n_total))),
        )

    phi = z / np.sqrt(_half_weights(n_total))
    if phi[int(np.argmax(np.abs(phi)))] < 0.0:
        phi = -phi
    if np.any(phi <= 0.0):
        raise ConvergenceError(
            "principal eigenvector not positive at all nodes",
            last=ScalarField(grid, phi),
        )
    phi = phi / phi.max()
    return EigenResult(sigma, ScalarField(grid, phi), it)


def _half_weights(n_total):
    w = np.ones(n_total)
    w[0] = w[-1] = 0.5
    return w


_K1_CACHE: dict = {}


def coupled_eigenvalue(grid, tau, tol=1e-10, cap=2.0**40):
    """Principal eigenvalue K of the problem whose Robin coefficient is tau*sqrt(K).

    Solved as the root of F(K) = sigma1(tau*sqrt(K)) - K by bracketed
    bisection; F is positive near 0 and eventually negative because
    sigma1 grows sublinearly in K.  In 1D the exact value is (2*atan(tau))^2.
    """
    tau = float(tau)
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    key = (grid.n, tau)
    if key in _K1_CACHE:
        return _K1_CACHE[key]

    def f_of(k):
        return principal_eigenpair(grid, tau * np.sqrt(k)).sigma - k

    lo, hi = 1e-8, 1.0
    # for tiny tau the root sits below the default bracket; walk lo down
    # geometrically until F(lo) > 0 (F is positive as K -> 0+)
    while f_of(lo) <= 0.0:
        lo *= 0.25
        if lo < 1e-40:
            raise BracketError("F(0+) > 0 could not be verified")
    f_hi = f_of(hi)
    while f_hi > 0.0:
        hi *= 2.0
        if hi > cap:
            raise BracketError(f"no sign change below K = {cap:g} (F = {f_hi:.3g})")
        f_hi = f_of(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_of(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    result = 0.5 * (lo + hi)
    _K1_CACHE[key] = result
    return result


def existence_threshold(grid, gprime0):
    """Parameter threshold for lambda+mu: coupled eigenvalue at tau = 1/sqrt(g'(0)),
    divided by g'(0)."""
    gprime0 = float(gprime0)
    if gprime0 <= 0.0:
        raise HypothesisViolationError(f"g'(0) must be positive, got {gprime0}")
    return coupled_eigenvalue(grid, 1.0 / np.sqrt(gprime0)) / gprime0


def spectral_shift(grid, t, gprime0=1.0):
    """sigma1(sqrt(t)) - t*g'(0); positive below the existence threshold,
    zero at it, negative above."""
    t = float(t)
    if t <= 0.0:
        raise ValueError(f"total parameter t must be positive, got {t}")
    return principal_eigenpair(grid, np.sqrt(t)).sigma - t * float(gprime0)
