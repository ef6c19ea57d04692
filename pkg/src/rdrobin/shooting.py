"""Brute-force enumeration of solutions by two-parameter shooting.

The boundary value problem is recast as root finding over the two initial
trace values at x = 0 (the Robin row there fixes the initial slopes).  A
residual scan over a box seeds damped Newton refinements; refined roots are
deduplicated and re-integrated densely onto the grid.  This path shares no
machinery with the finite-difference solver, which is what makes it an
independent oracle for existence and multiplicity counts.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import RdRobinError
from .grid import ScalarField
from .pairs import PairField

__all__ = [
    "RootCandidate",
    "Enumeration",
    "integrate",
    "enumerate_solutions",
    "count_positive_solutions",
    "reintegrate",
    "find_dirichlet_solution",
]

OVERFLOW_GUARD = 1e12
REFINE_TOL = 1e-9
DEDUP_TOL = 1e-4
FD_STEP = 1e-6


@dataclass
class RootCandidate:
    """Initial trace values whose trajectory meets the far boundary rows."""

    u0: float
    v0: float
    boundary_residual: tuple
    refined: bool

    def as_dict(self):
        return {
            "u0": self.u0,
            "v0": self.v0,
            "boundary_residual": list(self.boundary_residual),
            "refined": self.refined,
        }


@dataclass
class Enumeration:
    """Scan outcome: the always-present trivial root plus refined roots."""

    trivial: RootCandidate
    candidates: list
    records: list  # SolutionRecord per candidate, same order
    box_max: float
    scan_density: int

    def positive_records(self):
        out = []
        for rec in self.records:
            if rec.pair.u.min_value() > 0.0 and rec.pair.v.min_value() > 0.0:
                out.append(rec)
        return out


def _rk4(deriv, y0, steps, record_every=0):
    """Classical RK4 march of y' = deriv(y) over [0, 1] for batched states.

    y0 has shape (4, B).  States breaching the overflow guard are frozen to
    NaN.  With record_every = m, returns the (4, B, steps//m + 1) trajectory
    at every m-th step instead of the final state.
    """
    y = np.array(y0, dtype=float)
    hx = 1.0 / steps
    snapshots = [y.copy()] if record_every else None
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            k1 = deriv(y)
            k2 = deriv(y + 0.5 * hx * k1)
            k3 = deriv(y + 0.5 * hx * k2)
            k4 = deriv(y + hx * k3)
            y = y + (hx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            bad = ~np.all(np.isfinite(y), axis=0) | (
                np.max(np.abs(y), axis=0) > OVERFLOW_GUARD
            )
            if bad.any():
                y[:, bad] = np.nan
            if record_every and k % record_every == 0:
                snapshots.append(y.copy())
    if record_every:
        return np.stack(snapshots, axis=-1)
    return y


def _robin_deriv(lam, mu, quad):
    def deriv(y):
        u, up, v, vp = y
        return np.stack(
            [up, -(lam * quad.f(v) + mu * quad.h(u)), vp,
             -(lam * quad.g(u) + mu * quad.q(v))]
        )

    return deriv


def _robin_residual_batch(lam, mu, quad, u0, v0, steps):
    c = np.sqrt(lam + mu)
    u0 = np.asarray(u0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    y0 = np.stack([u0, c * u0, v0, c * v0])
    y = _rk4(_robin_deriv(lam, mu, quad), y0, steps)
    u, up, v, vp = y
    return up + c * u, vp + c * v


def integrate(lam, mu, quad, u0, v0, steps=2048):
    """March the coupled system from (u0, v0) at x = 0 (slopes fixed by the
    Robin row there) and return the two far-boundary Robin residuals.

    Diverged trajectories come back as NaN, read as "no root here".
    """
    if u0 < 0.0 or v0 < 0.0:
        raise ValueError("initial trace values must be nonnegative")
    if steps < 1000:
        raise ValueError(f"need at least 1000 steps, got {steps}")
    r1, r2 = _robin_residual_batch(lam, mu, quad, [u0], [v0], steps)
    return float(r1[0]), float(r2[0])


def _newton2_batch(residual_fn, seeds, max_iter=40, tol=REFINE_TOL,
                   damp_rounds=8):
    """Damped Newton on a 2->2 residual map, all seeds marched as one batch.

    ``residual_fn`` maps an (N, 2) array of points to an (N, 2) array of
    residuals.  Returns the (M, 2) array of converged roots.
    """
    z = np.array(seeds, dtype=float).reshape(-1, 2)
    if z.size == 0:
        return np.empty((0, 2))
    r = residual_fn(z)
    alive = np.all(np.isfinite(r), axis=1)
    for _ in range(max_iter):
        nrm = np.max(np.abs(r), axis=1)
        active = alive & (nrm >= tol)
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        za, ra = z[idx], r[idx]
        pert = np.vstack([za, za])
        pert[: len(idx), 0] += FD_STEP
        pert[len(idx):, 1] += FD_STEP
        rp = residual_fn(pert)
        j00 = (rp[: len(idx), 0] - ra[:, 0]) / FD_STEP
        j10 = (rp[: len(idx), 1] - ra[:, 1]) / FD_STEP
        j01 = (rp[len(idx):, 0] - ra[:, 0]) / FD_STEP
        j11 = (rp[len(idx):, 1] - ra[:, 1]) / FD_STEP
        det = j00 * j11 - j01 * j10
        solvable = np.isfinite(det) & (np.abs(det) > 1e-300)
        alive[idx[~solvable]] = False
        with np.errstate(invalid="ignore", divide="ignore"):
            step = np.empty_like(za)
            step[:, 0] = (-ra[:, 0] * j11 + ra[:, 1] * j01) / det
            step[:, 1] = (-ra[:, 1] * j00 + ra[:, 0] * j10) / det

        damp = np.where(solvable, 1.0, 0.0)
        improved = np.zeros(len(idx), dtype=bool)
        base_nrm = np.max(np.abs(ra), axis=1)
        for _ in range(damp_rounds):
            todo = solvable & ~improved
            if not todo.any():
                break
            cand = np.maximum(za[todo] + damp[todo, None] * step[todo], 0.0)
            rc = residual_fn(cand)
            good = np.all(np.isfinite(rc), axis=1) & (
                np.max(np.abs(rc), axis=1) < base_nrm[todo]
            )
            sub = np.nonzero(todo)[0]
            ok_rows = sub[good]
            z[idx[ok_rows]] = cand[good]
            r[idx[ok_rows]] = rc[good]
            improved[ok_rows] = True
            damp[sub[~good]] *= 0.5
        alive[idx[~improved]] = False
    nrm = np.max(np.abs(r), axis=1)
    keep = alive & (nrm < tol) & np.all(np.isfinite(z), axis=1)
    return z[keep]


def _scan_seeds(r1, r2, axis_vals):
    """Seed points from sign-change cells and local minima of the scan."""
    norm = np.hypot(r1, r2)
    d = len(axis_vals)
    seeds = []

    def sign_change(block):
        finite = np.isfinite(block)
        return finite.sum() >= 3 and block[finite].min() < 0 < block[finite].max()

    for i in range(d - 1):
        for j in range(d - 1):
            b1 = np.array([r1[i, j], r1[i + 1, j], r1[i, j + 1], r1[i + 1, j + 1]])
            b2 = np.array([r2[i, j], r2[i + 1, j], r2[i, j + 1], r2[i + 1, j + 1]])
            if sign_change(b1) and sign_change(b2):
                seeds.append(
                    (
                        0.5 * (axis_vals[i] + axis_vals[i + 1]),
                        0.5 * (axis_vals[j] + axis_vals[j + 1]),
                    )
                )
    interior = norm[1:-1, 1:-1]
    if interior.size:
        local_min = np.ones_like(interior, dtype=bool)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                shifted = norm[1 + di : d - 1 + di, 1 + dj : d - 1 + dj]
                with np.errstate(invalid="ignore"):
                    local_min &= ~(shifted < interior)
        local_min &= np.isfinite(interior)
        for i, j in zip(*np.nonzero(local_min)):
            seeds.append((axis_vals[i + 1], axis_vals[j + 1]))
    return seeds


def _dedup(points, tol=DEDUP_TOL):
    points = sorted(points, key=lambda p: (p[0], p[1]))
    kept = []
    for p in points:
        if all(np.hypot(p[0] - k[0], p[1] - k[1]) > tol for k in kept):
            kept.append(p)
    return kept


def reintegrate(grid, lam, mu, quad, u0, v0, steps_per_cell=4):
    """Dense re-integration of one trajectory sampled at every grid node."""
    c = np.sqrt(lam + mu)
    y0 = np.array([[u0], [c * u0], [v0], [c * v0]])
    steps = steps_per_cell * (grid.n + 1)
    traj = _rk4(_robin_deriv(lam, mu, quad), y0, steps, record_every=steps_per_cell)
    u = traj[0, 0, :]
    v = traj[2, 0, :]
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise RdRobinError("trajectory diverged during dense re-integration")
    return PairField(ScalarField(grid, u), ScalarField(grid, v))


def _origin_seeds(box_max):
    ladder = box_max * np.geomspace(1e-4, 0.5, 12)
    seeds = [(s, s) for s in ladder]
    seeds += [(s, 0.5 * s) for s in ladder[::3]]
    seeds += [(0.5 * s, s) for s in ladder[::3]]
    return seeds


def enumerate_solutions(grid, lam, mu, quad, box_max, scan_density=96,
                        steps=1024, _allow_grow=True):
    """All roots of the two-component boundary residual over [0, box_max]^2.

    Scans the residual map, refines seeds by damped Newton, deduplicates,
    and re-integrates every root densely onto the grid.  The trivial root is
    always reported, separately from the others.  A refined root near the
    box edge triggers one automatic box doubling.
    """
    from .monotone import SolutionRecord, residual as fd_residual

    if box_max <= 0.0:
        raise ValueError("box_max must be positive")
    if scan_density < 64:
        raise ValueError("scan_density must be at least 64")

    axis = np.linspace(0.0, box_max, scan_density)
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    scan_steps = max(256, steps // 2)
    r1, r2 = _robin_residual_batch(lam, mu, quad, uu.ravel(), vv.ravel(),
                                   scan_steps)
    r1 = r1.reshape(uu.shape)
    r2 = r2.reshape(uu.shape)

    seeds = _scan_seeds(r1, r2, axis) + _origin_seeds(box_max)
    refine_steps = max(2048, steps)

    def residual_at(points, n_steps):
        pr1, pr2 = _robin_residual_batch(
            lam, mu, quad, points[:, 0], points[:, 1], n_steps
        )
        return np.column_stack([pr1, pr2])

    # coarse pass narrows the seeds cheaply, the fine pass polishes
    rough = _newton2_batch(
        lambda p: residual_at(p, steps), np.array(seeds), tol=1e-5
    )
    polished = _newton2_batch(
        lambda p: residual_at(p, refine_steps), rough, max_iter=12
    )
    roots = [p for p in _dedup(map(tuple, polished)) if max(p) > DEDUP_TOL]

    if _allow_grow and any(max(p) > box_max * (1.0 - 2.0 / scan_density) for p in roots):
        return enumerate_solutions(
            grid, lam, mu, quad, 2.0 * box_max, scan_density, steps,
            _allow_grow=False,
        )

    candidates = []
    records = []
    for u0, v0 in roots:
        res1, res2 = _robin_residual_batch(lam, mu, quad, [u0], [v0],
                                           refine_steps)
        cand = RootCandidate(u0, v0, (float(res1[0]), float(res2[0])), True)
        pair = reintegrate(grid, lam, mu, quad, u0, v0)
        r_int, r_bnd = fd_residual(grid, lam, mu, quad, pair)
        records.append(
            SolutionRecord(
                pair=pair,
                lam=lam,
                mu=mu,
                residual_interior=r_int,
                residual_boundary=r_bnd,
                iterations=0,
                origin="oracle",
                converged=True,
            )
        )
        candidates.append(cand)

    trivial = RootCandidate(0.0, 0.0, (0.0, 0.0), True)
    return Enumeration(
        trivial=trivial,
        candidates=candidates,
        records=records,
        box_max=box_max,
        scan_density=scan_density,
    )


def count_positive_solutions(grid, lam, mu, quad, box_max, scan_density=96,
                             steps=1024):
    """Number of enumerated roots strictly positive at every node."""
    enum = enumerate_solutions(grid, lam, mu, quad, box_max, scan_density, steps)
    return len(enum.positive_records())


def _dirichlet_deriv(lam, quad):
    def deriv(y):
        u, up, v, vp = y
        return np.stack(
            [up, -lam * quad.f(v), vp, -lam * quad.g(u)]
        )

    return deriv


def _dirichlet_residual_batch(lam, quad, p0, q0, steps):
    p0 = np.asarray(p0, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    y0 = np.stack([np.zeros_like(p0), p0, np.zeros_like(q0), q0])
    y = _rk4(_dirichlet_deriv(lam, quad), y0, steps)
    return y[0], y[2]


def find_dirichlet_solution(grid, lam, quad, scan_density=48, steps=2048,
                            box=None):
    """Positive solution of -u'' = lam*f(v), -v'' = lam*g(u), u = v = 0 at
    both ends, by shooting over the initial slopes.  Returns the
    largest-amplitude root as a PairField, or None.

    The slope box is grown geometrically until a root appears or the budget
    runs out.
    """
    if box is None:
        box = 4.0 * lam * max(float(quad.f(1.0)), float(quad.g(1.0)), 1.0)
    for _ in range(8):
        axis = np.linspace(0.0, box, scan_density)[1:]
        pp, qq = np.meshgrid(axis, axis, indexing="ij")
        r1, r2 = _dirichlet_residual_batch(lam, quad, pp.ravel(), qq.ravel(),
                                           max(256, steps // 4))
        r1 = r1.reshape(pp.shape)
        r2 = r2.reshape(pp.shape)
        seeds = _scan_seeds(r1, r2, axis)

        def residual_at(points):
            pr1, pr2 = _dirichlet_residual_batch(
                lam, quad, points[:, 0], points[:, 1], steps
            )
            return np.column_stack([pr1, pr2])

        refined = _newton2_batch(residual_at, np.array(seeds).reshape(-1, 2))
        roots = [tuple(z) for z in refined if min(z) > 1e-10]
        best = None
        for p0, q0 in _dedup(roots):
            y0 = np.array([[0.0], [p0], [0.0], [q0]])
            spc = max(2, steps // (grid.n + 1))
            traj = _rk4(_dirichlet_deriv(lam, quad), y0,
                        spc * (grid.n + 1), record_every=spc)
            u = traj[0, 0, :]
            v = traj[2, 0, :]
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                continue
            if np.any(u[1:-1] <= 0.0) or np.any(v[1:-1] <= 0.0):
                continue
            u = u.copy()
            v = v.copy()
            u[[0, -1]] = 0.0
            v[[0, -1]] = 0.0
            pair = PairField(ScalarField(grid, u), ScalarField(grid, v))
            if best is None or pair.sup_norm() > best.sup_norm():
                best = pair
        if best is not None:
            return best
        box *= 4.0
    return None
