"""Monotone iteration between ordered brackets."""

import numpy as np
import pytest

from rdrobin.errors import NonConvergenceError
from rdrobin.grid import (
    Grid1D,
    RobinOperator,
    ScalarField,
    coupled_eigenvalue,
    existence_threshold,
    unit_source_solution,
)
from rdrobin.monotone import iterate_down, iterate_up, residual
from rdrobin.pairs import (
    OrderInterval,
    PairField,
    eigen_subsolution,
    eigenshape_supersolution,
)
from rdrobin.reactions import example_family, linear_quad


@pytest.fixture(scope="module")
def grid():
    return Grid1D(256)


@pytest.fixture(scope="module")
def quad():
    return example_family(1.0, 10.0)


@pytest.fixture(scope="module")
def threshold(grid, quad):
    return existence_threshold(grid, quad.g.deriv0)


@pytest.fixture(scope="module")
def bracket(grid, quad, threshold):
    lam = mu = 0.5 * threshold * 1.05
    sub = eigen_subsolution(grid, lam, mu, quad)
    sup = eigenshape_supersolution(grid, lam, mu, quad)
    return lam, mu, OrderInterval(sub, sup)


def zero_pair(grid):
    return PairField.from_arrays(grid, np.zeros(grid.size), np.zeros(grid.size))


def test_zero_interval_fixed_point(grid, quad):
    ones = PairField.from_arrays(grid, np.ones(grid.size), np.ones(grid.size))
    interval = OrderInterval(zero_pair(grid), ones)
    rec = iterate_up(grid, 1.0, 1.0, quad, interval)
    assert rec.converged and rec.iterations == 1
    assert rec.pair.sup_norm() == 0.0
    assert rec.residual_interior == 0.0 and rec.residual_boundary == 0.0


def test_minimal_solution_properties(grid, quad, bracket):
    lam, mu, interval = bracket
    rec = iterate_up(grid, lam, mu, quad, interval)
    assert rec.converged
    assert rec.origin == "from-sub"
    assert rec.residual_interior < 1e-6 and rec.residual_boundary < 1e-6
    assert rec.pair.min_value() > 0.0
    # iterates climbed and stayed inside the bracket
    assert interval.lower.le(rec.pair) and rec.pair.le(interval.upper)


def test_maximal_solution_and_order(grid, quad, bracket):
    lam, mu, interval = bracket
    lo = iterate_up(grid, lam, mu, quad, interval)
    hi = iterate_down(grid, lam, mu, quad, interval)
    assert hi.converged and hi.origin == "from-super"
    assert lo.pair.le(hi.pair, slack=1e-8)


def test_restart_from_converged_is_immediate(grid, quad, bracket):
    lam, mu, interval = bracket
    rec = iterate_up(grid, lam, mu, quad, interval)
    again = iterate_down(
        grid, lam, mu, quad, OrderInterval(interval.lower, rec.pair)
    )
    assert again.iterations <= 2
    assert abs(again.pair.sup_norm() - rec.pair.sup_norm()) < 1e-8


def test_fixed_point_consistency(grid, quad, bracket):
    lam, mu, interval = bracket
    rec = iterate_up(grid, lam, mu, quad, interval)
    op = RobinOperator(grid, np.sqrt(lam + mu))
    from rdrobin.pairs import reaction_rows

    r1, r2 = reaction_rows(lam, mu, quad, rec.pair)
    moved_u = np.max(np.abs(op.solve(r1) - rec.pair.u.values))
    moved_v = np.max(np.abs(op.solve(r2) - rec.pair.v.values))
    assert max(moved_u, moved_v) < 2e-10


def test_trace_changes_shrink(grid, quad, bracket):
    lam, mu, interval = bracket
    rec = iterate_up(grid, lam, mu, quad, interval)
    ch = rec.trace.changes
    assert ch[-1] < 1e-10
    assert ch[0] > ch[-1]


def test_divergence_above_live_band(grid, quad, threshold):
    # far above the threshold no supersolution exists; feeding the iteration
    # a fence that is not one lets the iterates run off, which must surface
    # as a breach/non-convergence rather than a bogus record
    lam = mu = 2.0
    sub = eigen_subsolution(grid, lam, mu, quad)
    fake_upper = PairField.from_arrays(
        grid, np.full(grid.size, 1e9), np.full(grid.size, 1e9)
    )
    from rdrobin.errors import MonotonicityBreachError, NonConvergenceError

    with pytest.raises((NonConvergenceError, MonotonicityBreachError)):
        iterate_up(grid, lam, mu, quad, OrderInterval(sub, fake_upper),
                   max_iter=400)


def test_residual_of_equilibrium_and_profile(grid, quad):
    assert residual(grid, 1.0, 1.0, quad, zero_pair(grid)) == (0.0, 0.0)
    # manufactured: u = v = loaded profile, reactions replaced by the unit
    # source they actually solve -> interior defect is reaction mismatch only
    t = 1.0
    zeta = unit_source_solution(grid, 1.0)
    pair = PairField(zeta, zeta.copy())
    lin = linear_quad(1.0, 1.0, 0.0, 0.0)

    class UnitQuad:
        f = staticmethod(lambda s: np.ones_like(np.asarray(s, float)))
        g = staticmethod(lambda s: np.ones_like(np.asarray(s, float)))
        h = staticmethod(lambda s: np.zeros_like(np.asarray(s, float)))
        q = staticmethod(lambda s: np.zeros_like(np.asarray(s, float)))

    r_int, r_bnd = residual(grid, 1.0, 0.0, UnitQuad(), pair)
    assert r_int < 1e-10 and r_bnd < 1e-12


def test_linear_spectral_flip(grid):
    """The plain iteration u <- L^{-1}(t*v), v <- L^{-1}(t*u) at coefficient
    sqrt(t) contracts below the coupled eigenvalue and expands above it."""
    k1 = coupled_eigenvalue(grid, 1.0)

    def growth(t, iters=60):
        op = RobinOperator(grid, np.sqrt(t))
        u = v = 1e-3 * np.ones(grid.size)
        rates = []
        for _ in range(iters):
            u, v = op.solve(t * v), op.solve(t * u)
            nrm = max(np.max(np.abs(u)), np.max(np.abs(v)))
            rates.append(nrm)
            u, v = u / nrm * 1e-3, v / nrm * 1e-3  # renormalize, track rate
        return np.mean(np.log(np.array(rates[-20:]) / 1e-3))

    eps = 5e-4
    assert growth(k1 * (1 - eps)) < 0.0 < growth(k1 * (1 + eps))
