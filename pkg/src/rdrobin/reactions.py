"""Reaction quadruples (f, g, h, q), validators, and threshold quantities.

All reaction terms are scalar maps on [0, inf) vanishing at the origin,
vectorized over numpy arrays.  Validators certify sampled evidence for the
structural hypotheses (monotone growth, combined sublinearity, tail
boundedness / power bounds); they report witnesses rather than raising.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    ConcavityViolationError,
    DegenerateArgumentError,
    HypothesisViolationError,
    ParameterOrderError,
)

__all__ = [
    "Nonlinearity",
    "ReactionQuad",
    "CheckResult",
    "HypothesisReport",
    "WindowReport",
    "derivative_at",
    "example_family",
    "linear_quad",
    "capped_quad",
    "power_tail_quad",
    "validate_h",
    "validate_f",
    "min_ratio",
    "max_ratio",
    "inscribed_ball_constant",
    "multiplicity_window",
    "uniform_concavity_bound",
    "tail_is_flat",
]


def derivative_at(fn, s, step=1e-6):
    """Centered-difference derivative; at the origin the stencil is shifted
    to [0, 2*step] so functions defined only on [0, inf) stay in range."""
    s0 = max(float(s), step)
    return float((fn(s0 + step) - fn(s0 - step)) / (2.0 * step))


class Nonlinearity:
    """One reaction term: point evaluation plus its derivative at 0."""

    def __init__(self, fn, deriv0=None, label=""):
        self._fn = fn
        self.label = label
        self._deriv0 = deriv0

    def __call__(self, s):
        return self._fn(np.asarray(s, dtype=float))

    @property
    def deriv0(self):
        if self._deriv0 is None:
            self._deriv0 = derivative_at(self._fn, 0.0)
        return self._deriv0

    def __repr__(self):
        return f"Nonlinearity({self.label or '<anon>'})"


@dataclass
class ReactionQuad:
    """The four coupled reaction terms.

    The normalization f'(0) >= g'(0) is enforced here because the
    eigenfunction subsolution argument depends on it.
    """

    f: Nonlinearity
    g: Nonlinearity
    h: Nonlinearity
    q: Nonlinearity
    label: str = ""

    def __post_init__(self):
        if self.f.deriv0 < self.g.deriv0 - 1e-9:
            raise HypothesisViolationError(
                f"normalization f'(0) >= g'(0) violated: "
                f"{self.f.deriv0:.6g} < {self.g.deriv0:.6g}"
            )

    def terms(self):
        return (self.f, self.g, self.h, self.q)


def _piecewise(first, tail, split):
    """Glue ``first`` on [0, split] to ``tail`` beyond it, shifting the tail
    additively so the splice is continuous.

    Exponential tails overflow to inf for extreme arguments; that is left to
    float semantics (callers see inf, never a bogus finite value).
    """
    split = float(split)
    with np.errstate(over="ignore"):
        shift = float(first(np.asarray(split)) - tail(np.asarray(split)))

    def fn(s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        out = np.empty_like(s)
        lo = s <= split
        with np.errstate(over="ignore"):
            out[lo] = first(s[lo])
            out[~lo] = tail(s[~lo]) + shift
        return float(out[0]) if scalar else out

    return fn


def example_family(k, alpha):
    """The built-in quadruple: saturating-exponential pieces up to the splice
    at s = k, with exponential-plateau tails for f and h and power tails for
    g and q, every branch glued continuously.

    All four terms vanish at 0 with unit derivative; f and h are bounded
    (plateau exp(alpha)) while g and q grow like s^2/2 and s^3/3.
    """
    k = float(k)
    alpha = float(alpha)
    if not (alpha > k > 0.0):
        raise ParameterOrderError(f"need alpha > k > 0, got k={k}, alpha={alpha}")

    exp_tail = lambda s: np.exp(alpha * s / (alpha + s))
    f = Nonlinearity(
        _piecewise(lambda s: np.expm1(s / (s + 1.0)), exp_tail, k), 1.0, "f"
    )
    h = Nonlinearity(
        _piecewise(lambda s: np.exp(2.0 * s / (s + 1.0)) - s - 1.0, exp_tail, k),
        1.0,
        "h",
    )
    g = Nonlinearity(
        _piecewise(
            lambda s: 2.0 * (np.sqrt(1.0 + s) - 1.0),
            lambda s: 0.5 * (1.0 + s) ** 2,
            k,
        ),
        1.0,
        "g",
    )
    q = Nonlinearity(
        _piecewise(
            lambda s: 3.0 * (np.cbrt(1.0 + s) - 1.0),
            lambda s: (1.0 + s) ** 3 / 3.0,
            k,
        ),
        1.0,
        "q",
    )
    return ReactionQuad(f, g, h, q, label=f"builtin(k={k:g}, alpha={alpha:g})")


def linear_quad(slope_f=1.0, slope_g=1.0, slope_h=0.0, slope_q=0.0):
    """Purely linear coupling, handy as a spectral test case."""
    mk = lambda a, name: Nonlinearity(lambda s, a=a: a * np.asarray(s, float), a, name)
    return ReactionQuad(
        mk(slope_f, "f"), mk(slope_g, "g"), mk(slope_h, "h"), mk(slope_q, "q"),
        label="linear",
    )


def capped_quad(scale=1.0, knee=1.0):
    """Four identical bounded strictly concave terms scale*s/(knee+s)."""

    def mk(name):
        return Nonlinearity(
            lambda s: scale * np.asarray(s, float) / (knee + np.asarray(s, float)),
            scale / knee,
            name,
        )

    return ReactionQuad(mk("f"), mk("g"), mk("h"), mk("q"), label="capped")


def power_tail_quad(p_f=0.5, p_g=0.5, p_h=0.5, p_q=1.0 / 3.0):
    """Identity up to s = 1, then exactly s**p: concave kinked power tails."""

    def mk(p, name):
        def fn(s, p=p):
            s = np.asarray(s, dtype=float)
            return np.where(s <= 1.0, s, s**p)

        return Nonlinearity(fn, 1.0, name)

    return ReactionQuad(mk(p_f, "f"), mk(p_g, "g"), mk(p_h, "h"), mk(p_q, "q"),
                        label="power-tail")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: tuple | None = None  # (sample, value) at the worst violation

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass
class HypothesisReport:
    checks: list
    meta: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "meta": self.meta,
        }


def default_samples(s_max=1e4, count=200):
    return np.concatenate([[0.0], np.geomspace(1e-3, s_max, count)])


def validate_h(quad, s_samples=None, h2_decay=0.1):
    """Sampled evidence for the growth hypotheses.

    * zeros/monotone: every term vanishes at 0 and is nondecreasing on the
      sample ladder;
    * combined sublinearity: for M in {1, 10, 100} the ratio f(M*g(s))/s over
      s in {1e2, 1e3, 1e4} is strictly decreasing and has decayed by the
      factor ``h2_decay`` at the largest sample (sampled trend, not a proof);
    * positive slopes: finite-difference derivatives at 0 are positive.
    """
    if s_samples is None:
        s_samples = default_samples()
    s_samples = np.asarray(s_samples, dtype=float)
    if s_samples[0] != 0.0 or np.any(np.diff(s_samples) <= 0):
        raise ValueError("s_samples must start at 0 and increase strictly")
    if s_samples[-1] < 1e3:
        raise ValueError("s_samples must reach at least 1e3")

    checks = []
    for term in quad.terms():
        z = float(term(0.0))
        vals = term(s_samples)
        diffs = np.diff(vals)
        tol = -1e-9 * np.maximum(1.0, np.abs(vals[1:]))
        bad = np.nonzero(diffs < tol)[0]
        ok = abs(z) <= 1e-12 and bad.size == 0
        witness = None
        detail = ""
        if abs(z) > 1e-12:
            witness = (0.0, z)
            detail = f"{term.label}(0) = {z:.3g} != 0"
        elif bad.size:
            i = int(bad[np.argmin(diffs[bad])])
            witness = (float(s_samples[i + 1]), float(diffs[i]))
            detail = f"{term.label} decreases by {diffs[i]:.3g} at s={s_samples[i+1]:.4g}"
        checks.append(CheckResult(f"H1:{term.label}", ok, detail, witness))

    h2_pts = np.array([1e2, 1e3, 1e4])
    h2_ok = True
    h2_detail = []
    h2_witness = None
    for m_factor in (1.0, 10.0, 100.0):
        with np.errstate(over="ignore"):
            ratios = quad.f(m_factor * quad.g(h2_pts)) / h2_pts
        decreasing = bool(np.all(np.diff(ratios) < 0))
        decayed = bool(ratios[-1] <= h2_decay * ratios[0])
        if not (decreasing and decayed and np.all(np.isfinite(ratios))):
            h2_ok = False
            h2_witness = (float(h2_pts[-1]), float(ratios[-1]))
        h2_detail.append(
            f"M={m_factor:g}: ratios {ratios[0]:.4g} -> {ratios[-1]:.4g}"
        )
    checks.append(
        CheckResult(
            "H2",
            h2_ok,
            "; ".join(h2_detail) + f" (decay target {h2_decay:g})",
            h2_witness,
        )
    )

    for term in quad.terms():
        d0 = derivative_at(term, 0.0)
        checks.append(
            CheckResult(
                f"H3:{term.label}",
                d0 > 1e-10,
                f"{term.label}'(0) ~ {d0:.6g}",
                None if d0 > 1e-10 else (0.0, d0),
            )
        )

    return HypothesisReport(
        checks,
        meta={
            "s_max": float(s_samples[-1]),
            "samples": int(s_samples.size),
            "h2_decay": h2_decay,
        },
    )


def tail_is_flat(fn, s_top=1e8, rel_tol=1e-3):
    """Boundedness evidence: relative growth over the last decade below tol."""
    with np.errstate(over="ignore"):
        v_top = float(fn(s_top))
        v_prev = float(fn(s_top / 10.0))
    if not (math.isfinite(v_top) and math.isfinite(v_prev)):
        return False, math.inf
    growth = abs(v_top - v_prev) / max(abs(v_top), 1e-300)
    return growth < rel_tol, growth


def _decay_trend(fn_of_s, pts, decay=1e-2):
    vals = np.array([fn_of_s(p) for p in pts], dtype=float)
    ok = bool(np.all(np.diff(vals) < 0) and vals[-1] <= decay * max(vals[0], 1e-300))
    return ok, vals


def validate_f(quad, case, gamma=None, beta=None, s_range=None):
    """Sampled evidence for one of the tail cases.

    * "F1": all four terms bounded (flat tails);
    * "F2": h sublinear, g below s**gamma and q below s**beta on the tail
      with gamma*beta < 1, and g' bounded away from 0 at the top samples;
    * "F3": the mirror of F2 with (f, h) and (g, q) exchanged.
    Failures are report entries with witnesses, never exceptions.
    """
    if s_range is None:
        s_range = np.geomspace(1.0, 1e8, 81)
    s_range = np.asarray(s_range, dtype=float)
    if s_range.size == 0:
        raise ValueError("s_range must not be empty")
    s_top = float(s_range[-1])
    checks = []

    if case == "F1":
        for term in quad.terms():
            flat, growth = tail_is_flat(term, s_top)
            with np.errstate(over="ignore"):
                sup = float(np.max(term(s_range)))
            checks.append(
                CheckResult(
                    f"F1:{term.label}",
                    flat,
                    f"sup ~ {sup:.4g}, last-decade growth {growth:.3g}",
                    None if flat else (s_top, growth),
                )
            )
        return HypothesisReport(checks, meta={"case": case, "s_top": s_top})

    if case not in ("F2", "F3"):
        raise ValueError(f"unknown case {case!r}")
    if gamma is None or beta is None:
        raise ValueError("F2/F3 need explicit gamma and beta")
    if gamma * beta >= 1.0:
        checks.append(
            CheckResult(
                "exponent-product",
                False,
                f"gamma*beta = {gamma * beta:.4g} >= 1",
                (gamma, beta),
            )
        )
        return HypothesisReport(checks, meta={"case": case})
    checks.append(
        CheckResult("exponent-product", True, f"gamma*beta = {gamma * beta:.4g} < 1")
    )

    if case == "F2":
        sub, low_pow, high_pow, slope = quad.h, quad.g, quad.q, quad.g
    else:
        sub, low_pow, high_pow, slope = quad.q, quad.f, quad.h, quad.f

    decade_pts = np.geomspace(max(10.0, s_top * 1e-6), s_top, 7)
    ok, vals = _decay_trend(lambda p: float(sub(p)) / p, decade_pts)
    checks.append(
        CheckResult(
            f"sublinear:{sub.label}",
            ok,
            f"{sub.label}(s)/s: {vals[0]:.4g} -> {vals[-1]:.4g}",
            None if ok else (float(decade_pts[-1]), float(vals[-1])),
        )
    )

    tail_pts = s_range[s_range >= 10.0]
    for term, expo in ((low_pow, gamma), (high_pow, beta)):
        with np.errstate(over="ignore"):
            vals = term(tail_pts)
            bound = tail_pts**expo
        viol = vals > bound * (1.0 + 1e-12)
        ok = not bool(np.any(viol))
        witness = None
        if not ok:
            i = int(np.argmax(vals / bound))
            witness = (float(tail_pts[i]), float(vals[i]))
        checks.append(
            CheckResult(
                f"power-bound:{term.label}<=s^{expo:g}",
                ok,
                "",
                witness,
            )
        )

    d_top = min(derivative_at(slope, p) for p in decade_pts[-3:])
    ok = d_top > 1e-8
    checks.append(
        CheckResult(
            f"slope-floor:{slope.label}'",
            ok,
            f"min {slope.label}' over top samples ~ {d_top:.4g}",
            None if ok else (s_top, d_top),
        )
    )
    return HypothesisReport(
        checks, meta={"case": case, "gamma": gamma, "beta": beta, "s_top": s_top}
    )


def _four_values(quad, a):
    a = float(a)
    if a <= 0.0:
        raise DegenerateArgumentError(f"argument must be positive, got {a}")
    vals = [float(term(a)) for term in quad.terms()]
    for term, v in zip(quad.terms(), vals):
        if v <= 0.0:
            raise DegenerateArgumentError(
                f"{term.label}({a:g}) = {v:.6g} is not positive; ratio undefined"
            )
    return vals


def min_ratio(quad, a):
    """min over the four terms of a / term(a)."""
    return min(a / v for v in _four_values(quad, a))


def max_ratio(quad, b):
    """max over the four terms of b / term(b)."""
    return max(b / v for v in _four_values(quad, b))


def inscribed_ball_constant(n_dim=1, radius=0.5, rel_tol=1e-8):
    """Geometry constant inf over eps in (0, R) of N*R^(N-1) / (eps^N * (R-eps)).

    The printed source expression is typographically ambiguous; this is the
    adopted reading, and callers can override the value in configuration.
    Golden-section search on (0, R).
    """
    n_dim = int(n_dim)
    radius = float(radius)
    if n_dim < 1 or radius <= 0.0:
        raise ValueError("need n_dim >= 1 and radius > 0")

    def objective(eps):
        return n_dim * radius ** (n_dim - 1) / (eps**n_dim * (radius - eps))

    res = minimize_scalar(
        objective,
        bracket=(radius * 1e-6, radius * 0.5, radius * (1 - 1e-6)),
        method="golden",
        options={"xtol": rel_tol},
    )
    return float(res.fun)


@dataclass
class WindowReport:
    """Parameter window for three ordered-bracket solutions, plus its gates."""

    q1: float
    q2: float
    c1: float
    xi_sup: float
    threshold: float  # the lambda+mu existence threshold
    left: float
    right: float
    gate_ratio_lhs: float  # q1/q2            must exceed 2*c1*xi_sup
    gate_ratio_rhs: float
    gate_level_lhs: float  # q1               must exceed 2*max(threshold,1)*xi_sup
    gate_level_rhs: float

    @property
    def window(self):
        return (self.left, self.right) if self.left < self.right else None

    @property
    def gates_hold(self):
        return (
            self.gate_ratio_lhs > self.gate_ratio_rhs
            and self.gate_level_lhs > self.gate_level_rhs
        )

    def as_dict(self):
        d = {
            "q1": self.q1,
            "q2": self.q2,
            "c1": self.c1,
            "xi_sup": self.xi_sup,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "window": list(self.window) if self.window else None,
            "gates_hold": self.gates_hold,
            "gate_ratio": {"lhs": self.gate_ratio_lhs, "rhs": self.gate_ratio_rhs},
            "gate_level": {"lhs": self.gate_level_lhs, "rhs": self.gate_level_rhs},
        }
        return d


def multiplicity_window(quad, a, b, threshold, xi_sup, c1):
    """Window (max(threshold, c1*q2(b), 1), q1(a)/(2*xi_sup)) and both gate
    inequalities; empty windows are a reported outcome, not an error."""
    a, b = float(a), float(b)
    if a >= b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    q1 = min_ratio(quad, a)
    q2 = max_ratio(quad, b)
    left = max(threshold, c1 * q2, 1.0)
    right = q1 / (2.0 * xi_sup)
    return WindowReport(
        q1=q1,
        q2=q2,
        c1=c1,
        xi_sup=xi_sup,
        threshold=threshold,
        left=left,
        right=right,
        gate_ratio_lhs=q1 / q2,
        gate_ratio_rhs=2.0 * c1 * xi_sup,
        gate_level_lhs=q1,
        gate_level_rhs=2.0 * max(threshold, 1.0) * xi_sup,
    )


def uniform_concavity_bound(quad, r, samples=256, step=1e-4, floor=1e-8):
    """Largest M with all four second differences <= -M on (0, 0.9*r).

    Second differences are sampled on a uniform ladder; any nonnegative
    sample raises with a witness.  The result is floored away from zero so
    downstream quotients stay finite.
    """
    r = float(r)
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    pts = np.linspace(0.0, 0.9 * r, samples + 1)[1:]
    worst = -np.inf
    for term in quad.terms():
        d2 = (term(pts - step) - 2.0 * term(pts) + term(pts + step)) / step**2
        i = int(np.argmax(d2))
        if d2[i] >= 0.0:
            raise ConcavityViolationError(
                f"{term.label}'' ~ {d2[i]:.4g} >= 0 at s = {pts[i]:.6g}",
                witness=(term.label, float(pts[i]), float(d2[i])),
            )
        worst = max(worst, float(d2[i]))
    return max(-worst, floor)
