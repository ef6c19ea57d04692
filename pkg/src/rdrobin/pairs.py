"""Sub/supersolution pairs: constructors and the discrete inequality verifier.

A pair (u, v) is a discrete subsolution when every row of the Robin operator
with coefficient sqrt(lambda+mu) sits at or below the reaction evaluated on
the pair, and a supersolution with the inequalities reversed.  The verifier
uses exactly the operator the monotone solver inverts, so a verified pair is
a genuine gate for the discrete fixed-point iteration: interior rows are the
raw stencil defect, boundary rows the ghost-closure defect rescaled by h/2,
which makes them read as (one-sided normal derivative) + c*(trace) -
(h/2)*(reaction) in physical units.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstructionFailureError,
    GridMismatchError,
    HypothesisViolationError,
    ParameterRegimeError,
    RegionExceededError,
)
from .grid import (
    RobinOperator,
    ScalarField,
    existence_threshold,
    principal_eigenpair,
    spectral_shift,
    unit_source_solution,
)
from .reactions import tail_is_flat, uniform_concavity_bound

__all__ = [
    "PairField",
    "OrderInterval",
    "VerificationReport",
    "verify_pair",
    "reaction_rows",
    "eigen_subsolution",
    "bounded_supersolution",
    "sublinear_pair_supersolution",
    "unbounded_pair_supersolution",
    "eigenshape_supersolution",
    "small_amplitude_supersolution",
    "scaled_profile_supersolution",
    "dirichlet_large_subsolution",
    "strict_subsolution_lift",
]

log = logging.getLogger(__name__)

STRICT_MARGIN = 1e-10
LADDER_FLOOR = 1e-12
DOUBLING_CAP = 2.0**60


@dataclass
class PairField:
    """A (u, v) pair of fields on one grid."""

    u: ScalarField
    v: ScalarField

    def __post_init__(self):
        if self.u.grid is not self.v.grid and self.u.grid != self.v.grid:
            raise GridMismatchError("pair components live on different grids")

    @property
    def grid(self):
        return self.u.grid

    def sup_norm(self):
        return max(self.u.sup_norm(), self.v.sup_norm())

    def min_value(self):
        return min(self.u.min_value(), self.v.min_value())

    def le(self, other, slack=1e-12):
        return bool(
            np.all(self.u.values <= other.u.values + slack)
            and np.all(self.v.values <= other.v.values + slack)
        )

    def copy(self):
        return PairField(self.u.copy(), self.v.copy())

    @classmethod
    def from_arrays(cls, grid, u_vals, v_vals):
        return cls(ScalarField(grid, u_vals), ScalarField(grid, v_vals))

    @classmethod
    def constant_shape(cls, shape: ScalarField, amp_u, amp_v):
        return cls(
            ScalarField(shape.grid, amp_u * shape.values),
            ScalarField(shape.grid, amp_v * shape.values),
        )


@dataclass
class OrderInterval:
    """Nodewise-ordered bracket [lower, upper] in which solutions are sought."""

    lower: PairField
    upper: PairField

    def __post_init__(self):
        if self.lower.grid != self.upper.grid:
            raise GridMismatchError("interval ends live on different grids")
        if not self.lower.le(self.upper):
            raise ValueError("interval ends are not ordered nodewise")


@dataclass
class VerificationReport:
    """Signed worst-case defects of one pair against (in)equality rows.

    Sign convention: defect = operator row - reaction row, so a subsolution
    needs every entry <= 0 and a supersolution >= 0; ``strict`` demands a
    margin beyond 1e-10.
    """

    kind: str
    strict: bool
    worst_interior: tuple  # per equation, the extremal signed defect
    worst_boundary: tuple
    witness_x: tuple  # grid location of the binding interior defect per eq
    passed: bool

    def as_dict(self):
        return {
            "kind": self.kind,
            "strict": self.strict,
            "worst_interior": list(self.worst_interior),
            "worst_boundary": list(self.worst_boundary),
            "witness_x": list(self.witness_x),
            "passed": self.passed,
        }


def reaction_rows(lam, mu, quad, pair):
    """Right-hand sides lam*f(v)+mu*h(u) and lam*g(u)+mu*q(v) at every node."""
    u, v = pair.u.values, pair.v.values
    r1 = lam * quad.f(v) + mu * quad.h(u)
    r2 = lam * quad.g(u) + mu * quad.q(v)
    return r1, r2


def _defects(grid, lam, mu, quad, pair):
    op = RobinOperator(grid, np.sqrt(lam + mu))
    r1, r2 = reaction_rows(lam, mu, quad, pair)
    d1 = op.apply(pair.u.values) - r1
    d2 = op.apply(pair.v.values) - r2
    return d1, d2


def verify_pair(grid, lam, mu, quad, pair, kind, strict=False):
    """Check the discrete sub/supersolution inequalities for one pair.

    kind is "sub" or "super".  Interior rows are stencil-minus-reaction on
    nodes 1..n; the two boundary rows are the same ghost-closure defect
    scaled by h/2 so they carry normal-derivative units.
    """
    if kind not in ("sub", "super"):
        raise ValueError(f"kind must be 'sub' or 'super', got {kind!r}")
    if pair.grid != grid:
        raise GridMismatchError("pair grid does not match the requested grid")
    if lam < 0 or mu < 0 or lam + mu <= 0:
        raise ValueError("need lam, mu >= 0 with lam + mu > 0")

    d1, d2 = _defects(grid, lam, mu, quad, pair)
    half_h = 0.5 * grid.h
    sign = 1.0 if kind == "sub" else -1.0
    # for "sub" the defect must be <= 0; flip once so "worst" is always a max
    worst_int = []
    worst_bnd = []
    witness_x = []
    for d in (d1, d2):
        flipped = sign * d
        i = 1 + int(np.argmax(flipped[1:-1]))
        worst_int.append(float(d[i]))
        witness_x.append(float(grid.x[i]))
        b = half_h * np.array([d[0], d[-1]])
        worst_bnd.append(float(b[int(np.argmax(sign * b))]))

    margin = -STRICT_MARGIN if strict else 0.0
    entries = [sign * w for w in worst_int] + [sign * w for w in worst_bnd]
    passed = all(e <= margin for e in entries)
    return VerificationReport(
        kind=kind,
        strict=strict,
        worst_interior=tuple(worst_int),
        worst_boundary=tuple(worst_bnd),
        witness_x=tuple(witness_x),
        passed=passed,
    )


def _require_supercritical(grid, lam, mu, quad):
    t = lam + mu
    rho = spectral_shift(grid, t, quad.g.deriv0)
    if rho >= 0.0:
        threshold = existence_threshold(grid, quad.g.deriv0)
        raise ParameterRegimeError(
            f"lambda+mu = {t:g} is at or below the existence threshold "
            f"{threshold:.6g} (spectral shift {rho:.3g} >= 0)"
        )
    return t, rho


def eigen_subsolution(grid, lam, mu, quad):
    """Subsolution (m*phi, m*phi) built on the principal eigenfunction.

    Requires lambda+mu above the existence threshold (negative spectral
    shift).  The amplitude m is the largest value on the halving ladder
    {2^-j} for which the verifier passes.
    """
    t, _ = _require_supercritical(grid, lam, mu, quad)
    phi = principal_eigenpair(grid, np.sqrt(t)).phi
    m = 1.0
    while m >= LADDER_FLOOR:
        pair = PairField.constant_shape(phi, m, m)
        if verify_pair(grid, lam, mu, quad, pair, "sub").passed:
            log.info("eigen_subsolution: m = %g", m)
            return pair
        m *= 0.5
    raise ConstructionFailureError(
        f"no admissible eigenfunction amplitude above {LADDER_FLOOR:g}"
    )


def _doubling_search(grid, lam, mu, quad, build, what):
    m_scale = 1.0
    while m_scale <= DOUBLING_CAP:
        pair = build(m_scale)
        if verify_pair(grid, lam, mu, quad, pair, "super").passed:
            log.info("%s: amplitude scale M = %g", what, m_scale)
            return pair
        m_scale *= 2.0
    raise ConstructionFailureError(
        f"{what}: no verified supersolution below the doubling cap "
        f"{DOUBLING_CAP:g}; the reaction tails likely outgrow this shape"
    )


def bounded_supersolution(grid, lam, mu, quad):
    """Supersolution (t*M*zeta/||zeta||, same) for bounded reaction tails,
    with M found by doubling under the verifier."""
    t = lam + mu
    zeta = unit_source_solution(grid, np.sqrt(t))
    scale = t / zeta.sup_norm()

    def build(m_val):
        return PairField.constant_shape(zeta, m_val * scale, m_val * scale)

    return _doubling_search(grid, lam, mu, quad, build, "bounded_supersolution")


def sublinear_pair_supersolution(grid, lam, mu, quad, case="F2"):
    """Asymmetric supersolution (M*zeta, lam*g(M*(||zeta||+1))*zeta) for the
    power-bounded case, or its mirror with (f,h) and (g,q) exchanged."""
    if case not in ("F2", "F3"):
        raise ValueError(f"case must be 'F2' or 'F3', got {case!r}")
    t = lam + mu
    zeta = unit_source_solution(grid, np.sqrt(t))
    sup = zeta.sup_norm()
    grow = quad.g if case == "F2" else quad.f

    def build(m_val):
        amp = lam * float(grow(m_val * (sup + 1.0)))
        first, second = (m_val, amp) if case == "F2" else (amp, m_val)
        return PairField.constant_shape(zeta, first, second)

    return _doubling_search(
        grid, lam, mu, quad, build, f"sublinear_pair_supersolution[{case}]"
    )


def unbounded_pair_supersolution(grid, lam, mu, quad):
    """Supersolution (lam*f(M||zeta||)*zeta, lam*g(M||zeta||)*zeta) for
    unbounded f, g with bounded h, q; the case guard refuses other shapes."""
    f_flat, _ = tail_is_flat(quad.f)
    g_flat, _ = tail_is_flat(quad.g)
    h_flat, _ = tail_is_flat(quad.h)
    q_flat, _ = tail_is_flat(quad.q)
    if f_flat or g_flat or not (h_flat and q_flat):
        raise HypothesisViolationError(
            "this shape needs unbounded f, g and bounded h, q "
            f"(flat tails: f={f_flat}, g={g_flat}, h={h_flat}, q={q_flat})"
        )
    t = lam + mu
    zeta = unit_source_solution(grid, np.sqrt(t))
    sup = zeta.sup_norm()

    def build(m_val):
        return PairField.constant_shape(
            zeta, lam * float(quad.f(m_val * sup)), lam * float(quad.g(m_val * sup))
        )

    return _doubling_search(
        grid, lam, mu, quad, build, "unbounded_pair_supersolution"
    )


def eigenshape_supersolution(grid, lam, mu, quad, start=4.0):
    """Supersolution (kappa*phi, kappa*phi) found by halving kappa under the
    verifier.

    A fallback for reactions outside every tail case: just above the
    existence threshold, concavity near the origin opens an amplitude band
    where the eigenfunction shape dominates the reaction.
    """
    t, _ = _require_supercritical(grid, lam, mu, quad)
    phi = principal_eigenpair(grid, np.sqrt(t)).phi
    kappa = float(start)
    while kappa >= LADDER_FLOOR:
        pair = PairField.constant_shape(phi, kappa, kappa)
        if verify_pair(grid, lam, mu, quad, pair, "super").passed:
            log.info("eigenshape_supersolution: kappa = %g", kappa)
            return pair
        kappa *= 0.5
    raise ConstructionFailureError(
        "no eigenfunction-shaped supersolution at any amplitude; "
        "lambda+mu is likely too far above the existence threshold"
    )


def small_amplitude_supersolution(grid, lam, mu, quad, r):
    """Supersolution (theta*phi, theta*phi) with the Taylor-pinned amplitude
    theta = -2*rho / ((lam+mu) * M * min(phi)).

    Valid just above the existence threshold; M is the uniform concavity
    bound on (0, 0.9r).  The amplitude must stay inside the concavity radius
    r, else the expansion has no force and the call fails with a hint.
    """
    t = lam + mu
    rho = spectral_shift(grid, t, quad.g.deriv0)
    if rho >= 0.0:
        raise ParameterRegimeError(
            f"spectral shift {rho:.3g} >= 0: lambda+mu must exceed the "
            "existence threshold"
        )
    m_bound = uniform_concavity_bound(quad, r)
    phi = principal_eigenpair(grid, np.sqrt(t)).phi
    theta = -2.0 * rho / (t * m_bound * phi.min_value())
    pair = PairField.constant_shape(phi, theta, theta)
    amp = pair.sup_norm()
    if amp > r:
        raise RegionExceededError(
            f"amplitude {amp:.4g} exceeds the concavity radius {r:g}; "
            "move lambda+mu closer to the existence threshold"
        )
    report = verify_pair(grid, lam, mu, quad, pair, "super")
    if not report.passed:
        raise ConstructionFailureError(
            "Taylor-pinned supersolution failed verification", report=report
        )
    return pair


def scaled_profile_supersolution(grid, quad, a, lam, mu):
    """Strict supersolution (a*xi/||xi||, a*xi/||xi||) from the unit-load
    profile with Robin coefficient 1.

    Gates: lambda + mu > 1 makes the boundary rows strictly positive (the
    profile satisfies the coefficient-1 row exactly, so raising the
    coefficient leaves a positive margin), and each parameter below
    min_ratio(a)/(2*||xi||) keeps the interior rows positive.
    """
    from .reactions import min_ratio

    a = float(a)
    if a <= 0.0:
        raise ValueError(f"amplitude a must be positive, got {a}")
    xi = unit_source_solution(grid, 1.0)
    sup = xi.sup_norm()
    upper = min_ratio(quad, a) / (2.0 * sup)
    if lam + mu <= 1.0:
        raise ParameterRegimeError(
            f"lambda + mu = {lam + mu:g} must exceed 1 for a strict boundary row"
        )
    for name, val in (("lambda", lam), ("mu", mu)):
        if not (0.0 < val < upper):
            raise ParameterRegimeError(
                f"{name} = {val:g} at or above the gate {upper:.6g}"
            )
    pair = PairField.constant_shape(xi, a / sup, a / sup)
    report = verify_pair(grid, lam, mu, quad, pair, "super", strict=True)
    if not report.passed:
        raise ConstructionFailureError(
            "scaled profile failed strict verification", report=report
        )
    return pair


def _dirichlet_sub_defects(grid, lam, quad, pair):
    """Defects of the scaled pair against the decoupled Dirichlet system."""
    h2 = grid.h * grid.h
    u, v = pair.u.values, pair.v.values
    stencil = lambda w: (-w[:-2] + 2.0 * w[1:-1] - w[2:]) / h2
    d1 = stencil(u) - lam * quad.f(v[1:-1])
    d2 = stencil(v) - lam * quad.g(u[1:-1])
    return d1, d2


def dirichlet_large_subsolution(grid, lam, quad, b, c1=None, scan_density=48,
                                steps=2048):
    """Strict subsolution of the zero-boundary companion system with
    sup-norms at least b: a shooting-found positive Dirichlet solution of
    -u'' = lam*f(v), -v'' = lam*g(u), scaled by 0.99 and verified strictly.

    The 0.99 scaling is a strict subsolution only where the reactions are
    superadditive (concave); for convex tails the verification fails and the
    construction reports that honestly.
    """
    from .reactions import inscribed_ball_constant, min_ratio
    from .shooting import find_dirichlet_solution

    b = float(b)
    if c1 is None:
        c1 = inscribed_ball_constant(1, 0.5)
    need = c1 * max(b / float(quad.f(b)), b / float(quad.g(b)))
    if lam < need:
        raise ParameterRegimeError(
            f"lambda = {lam:g} below the admissible level {need:.6g} "
            f"for b = {b:g}"
        )

    sol = find_dirichlet_solution(grid, lam, quad, scan_density=scan_density,
                                  steps=steps)
    if sol is None:
        raise ConstructionFailureError(
            "no positive solution of the zero-boundary system in the scan box"
        )
    scaled = PairField.from_arrays(grid, 0.99 * sol.u.values, 0.99 * sol.v.values)
    scaled.u.values[[0, -1]] = 0.0
    scaled.v.values[[0, -1]] = 0.0

    d1, d2 = _dirichlet_sub_defects(grid, lam, quad, scaled)
    worst = max(float(d1.max()), float(d2.max()))
    if worst > -STRICT_MARGIN:
        raise ConstructionFailureError(
            f"scaled copy is not a strict subsolution (worst defect "
            f"{worst:.3g}); the reaction tails are not superadditive here"
        )
    if scaled.u.sup_norm() < b or scaled.v.sup_norm() < b:
        raise ConstructionFailureError(
            f"solution found but sup-norms ({scaled.u.sup_norm():.4g}, "
            f"{scaled.v.sup_norm():.4g}) fall short of b = {b:g}"
        )
    return scaled


def strict_subsolution_lift(grid, lam, mu, quad, dirichlet_pair):
    """One Robin half-step applied to a nonnegative zero-boundary pair:
    solve the two Poisson problems with the pair frozen in the reactions.

    The lift dominates its input nodewise (checked) and must verify as a
    strict subsolution of the coupled system.
    """
    if dirichlet_pair.min_value() < 0.0:
        raise ValueError("input pair must be nonnegative")
    t = lam + mu
    op = RobinOperator(grid, np.sqrt(t))
    r1, r2 = reaction_rows(lam, mu, quad, dirichlet_pair)
    lifted = PairField.from_arrays(grid, op.solve(r1), op.solve(r2))

    if np.all(np.abs(r1) < 1e-300) and np.all(np.abs(r2) < 1e-300):
        return lifted  # zero pair lifts to the equilibrium; nothing to verify

    slack = 1e-10 * max(1.0, lifted.sup_norm())
    if not dirichlet_pair.le(lifted, slack=slack):
        raise ConstructionFailureError(
            "lift does not dominate its input nodewise"
        )
    report = verify_pair(grid, lam, mu, quad, lifted, "sub", strict=True)
    if not report.passed:
        raise ConstructionFailureError(
            "lifted pair failed strict verification", report=report
        )
    return lifted
