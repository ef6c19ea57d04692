"""Command-line explorer: eigenstructure, solves, sweeps, verification,
multiplicity search, root enumeration, and the built-in example bundle.

Every report path writes delimited data plus JSON, and renders matplotlib
figures alongside unless --no-figures is set.  Exit codes: 0 all checks of
the invoked command passed, 1 a check or construction failed, 2 bad
usage/configuration, 3 multiplicity search ended without a certified
witness.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, build_quad, load_config
from .errors import (
    ConfigError,
    ConstructionFailureError,
    HypothesisViolationError,
    MonotonicityBreachError,
    NonConvergenceError,
    ParameterRegimeError,
    RdRobinError,
    RegionExceededError,
)
from .grid import (
    Grid1D,
    coupled_eigenvalue,
    existence_threshold,
    principal_eigenpair,
    spectral_shift,
    unit_source_solution,
)
from .monotone import iterate_down, iterate_up
from .pairs import (
    OrderInterval,
    bounded_supersolution,
    dirichlet_large_subsolution,
    eigen_subsolution,
    eigenshape_supersolution,
    scaled_profile_supersolution,
    small_amplitude_supersolution,
    strict_subsolution_lift,
    sublinear_pair_supersolution,
    unbounded_pair_supersolution,
    verify_pair,
)
from .reactions import (
    example_family,
    inscribed_ball_constant,
    max_ratio,
    min_ratio,
    multiplicity_window,
    tail_is_flat,
    validate_h,
)
from .reporting import (
    read_pair_csv,
    write_json,
    write_pair_csv,
    write_solution,
    write_sweep_csv,
)
from .shooting import enumerate_solutions, reintegrate

log = logging.getLogger("rdrobin")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_WITNESS = 3


# --------------------------------------------------------------- helpers


def _tail_exponent(fn, lo=1e5, hi=1e8):
    with np.errstate(over="ignore"):
        a, b = float(fn(lo)), float(fn(hi))
    if not (np.isfinite(a) and np.isfinite(b)) or a <= 0.0 or b <= 0.0:
        return float("inf")
    return float(np.log(b / a) / np.log(hi / lo))


def case_evidence(quad):
    """Tail profile of the four terms used to pick a supersolution shape."""
    flat = {t.label: tail_is_flat(t)[0] for t in quad.terms()}
    expo = {t.label: _tail_exponent(t) for t in quad.terms()}
    return {"flat": flat, "exponent": expo}


def choose_supersolution(grid, lam, mu, quad, cfg):
    """Supersolution by configured case or by evidence, verifier-gated.

    Falls through an evidence-ordered candidate list; the eigenfunction-
    amplitude shape is the last resort (it only works near the existence
    threshold, but it needs no tail structure at all).
    """
    ev = case_evidence(quad)
    flat, expo = ev["flat"], ev["exponent"]

    def gamma_beta(lo_label, hi_label):
        gamma = cfg.gamma if cfg.gamma is not None else expo[lo_label] * 1.05
        beta = cfg.beta if cfg.beta is not None else expo[hi_label] * 1.05
        return gamma, beta

    builders = {
        "F1": lambda: bounded_supersolution(grid, lam, mu, quad),
        "F2": lambda: sublinear_pair_supersolution(grid, lam, mu, quad, "F2"),
        "F3": lambda: sublinear_pair_supersolution(grid, lam, mu, quad, "F3"),
        "unbounded": lambda: unbounded_pair_supersolution(grid, lam, mu, quad),
        "eigenshape": lambda: eigenshape_supersolution(grid, lam, mu, quad),
    }
    if cfg.supersolution_case != "auto":
        order = [cfg.supersolution_case]
    else:
        order = []
        if all(flat.values()):
            order.append("F1")
        if not flat["f"] and not flat["g"] and flat["h"] and flat["q"]:
            order.append("unbounded")
        g_exp, q_exp = gamma_beta("g", "q")
        if (flat["h"] or expo["h"] < 0.95) and g_exp * q_exp < 1.0:
            order.append("F2")
        f_exp, h_exp = gamma_beta("f", "h")
        if (flat["q"] or expo["q"] < 0.95) and f_exp * h_exp < 1.0:
            order.append("F3")
        order.append("eigenshape")

    failures = []
    for name in order:
        try:
            return builders[name](), name
        except (ConstructionFailureError, HypothesisViolationError,
                ParameterRegimeError) as exc:
            failures.append(f"{name}: {exc}")
    raise ConstructionFailureError(
        "no supersolution shape verified; tried "
        + "; ".join(failures)
        + ". Hint: move lambda+mu closer to the existence threshold or "
        "supply a quad with bounded or power-bounded tails."
    )


def build_bracket(grid, lam, mu, quad, cfg):
    sub = eigen_subsolution(grid, lam, mu, quad)
    sup, case = choose_supersolution(grid, lam, mu, quad, cfg)
    if not sub.le(sup):
        raise ConstructionFailureError(
            f"bracket ends are not ordered (case {case}); this parameter "
            "point has no usable bracket"
        )
    return OrderInterval(sub, sup), case


def default_box(lam, mu, sup_pair):
    t = lam + mu
    if sup_pair is None:
        return 4.0 * t
    return 4.0 * t * max(sup_pair.sup_norm(), 0.25)


def _oracle_match(grid, lam, mu, quad, records, enum):
    """Best sup-distance from each record to the enumerated roots."""
    out = []
    for rec in records:
        best = None
        for oracle_rec in enum.positive_records():
            gap = max(
                float(np.max(np.abs(oracle_rec.pair.u.values - rec.pair.u.values))),
                float(np.max(np.abs(oracle_rec.pair.v.values - rec.pair.v.values))),
            )
            best = gap if best is None else min(best, gap)
        out.append(best)
    return out


def _figures_enabled(cfg):
    return cfg.figures


# ------------------------------------------------------------ subcommands


def cmd_eigs(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    gp0 = quad.g.deriv0
    tau = 1.0 / np.sqrt(gp0)
    k1 = coupled_eigenvalue(grid, tau, tol=cfg.tolerances.bisection)
    threshold = k1 / gp0
    xi = unit_source_solution(grid, 1.0)

    if args.t:
        ts = sorted(args.t)
    else:
        ts = [threshold * s for s in (0.5, 0.8, 0.95, 1.0, 1.05, 1.25, 1.6, 2.0)]
    table = []
    for t in ts:
        rho = spectral_shift(grid, t, gp0)
        side = "below" if t < threshold - 1e-12 else (
            "at" if abs(t - threshold) <= 1e-9 * max(1.0, threshold) else "above"
        )
        table.append({"t": t, "rho": rho, "side": side})

    checks = []
    for row in table:
        gap = row["t"] - threshold
        if abs(gap) > 1e-3:
            checks.append(np.sign(row["rho"]) == np.sign(-gap))
    rho_at = spectral_shift(grid, threshold, gp0)
    checks.append(abs(rho_at) < 1e-6)
    ok = all(checks)

    report = {
        "coupled_eigenvalue": k1,
        "tau": tau,
        "threshold": threshold,
        "xi_sup": xi.sup_norm(),
        "rho_at_threshold": rho_at,
        "table": table,
        "sign_pattern_ok": ok,
    }
    out = Path(cfg.out_dir)
    write_json(out / "eigs_report.json", report)
    import csv as _csv

    out.mkdir(parents=True, exist_ok=True)
    with (out / "shift_table.csv").open("w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["t", "rho", "side"])
        from .reporting import fmt

        for row in table:
            writer.writerow([fmt(row["t"]), fmt(row["rho"]), row["side"]])
    if _figures_enabled(cfg):
        from .figures import save_shift_curve

        save_shift_curve(out / "eigs.png", [r["t"] for r in table],
                         [r["rho"] for r in table], threshold)

    print(f"coupled eigenvalue K(tau={tau:.6g}) = {k1:.8g}")
    print(f"existence threshold = {threshold:.8g}")
    print(f"unit-load profile sup = {xi.sup_norm():.10g}")
    print(f"shift at threshold = {rho_at:.3e}; sign pattern "
          f"{'ok' if ok else 'VIOLATED'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_solve(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    lam, mu = args.lam, args.mu
    if lam <= 0 or mu <= 0:
        print("lambda and mu must be positive", file=sys.stderr)
        return EXIT_USAGE
    threshold = existence_threshold(grid, quad.g.deriv0)
    t = lam + mu
    if t <= threshold:
        print(
            f"refused: lambda+mu = {t:g} is not above the existence "
            f"threshold {threshold:.6g}; raise the parameters",
            file=sys.stderr,
        )
        return EXIT_USAGE

    try:
        interval, case = build_bracket(grid, lam, mu, quad, cfg)
    except (ConstructionFailureError, ParameterRegimeError) as exc:
        print(f"bracket construction failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    sub_rep = verify_pair(grid, lam, mu, quad, interval.lower, "sub")
    sup_rep = verify_pair(grid, lam, mu, quad, interval.upper, "super")
    try:
        lo = iterate_up(grid, lam, mu, quad, interval,
                        change_tol=cfg.tolerances.iter_change,
                        residual_tol=cfg.tolerances.residual)
        hi = iterate_down(grid, lam, mu, quad, interval,
                          change_tol=cfg.tolerances.iter_change,
                          residual_tol=cfg.tolerances.residual)
    except (NonConvergenceError, MonotonicityBreachError) as exc:
        print(f"monotone iteration failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    out = Path(cfg.out_dir)
    paths = [write_solution(out, rec) for rec in (lo, hi)]
    report = {
        "lambda": lam,
        "mu": mu,
        "threshold": threshold,
        "supersolution_case": case,
        "bracket_verified": {"sub": sub_rep.as_dict(), "super": sup_rep.as_dict()},
        "minimal": lo.meta_dict(),
        "maximal": hi.meta_dict(),
        "files": [str(p) for pair in paths for p in pair],
    }

    code = EXIT_OK
    if cfg.oracle:
        enum = enumerate_solutions(grid, lam, mu, quad,
                                   default_box(lam, mu, interval.upper))
        gaps = _oracle_match(grid, lam, mu, quad, [lo, hi], enum)
        report["oracle"] = {
            "positive_roots": len(enum.positive_records()),
            "match_distance": gaps,
        }
        if any(g is None or g > 1e-3 for g in gaps):
            report["oracle"]["consistent"] = False
            code = EXIT_CHECK_FAILED
        else:
            report["oracle"]["consistent"] = True
    write_json(out / "report.json", report)
    if _figures_enabled(cfg):
        from .figures import save_profiles

        save_profiles(out / f"solution_{lam:g}_{mu:g}.png",
                      [lo.pair, hi.pair], ["minimal", "maximal"],
                      title=f"lambda={lam:g}, mu={mu:g} ({case})")
    print(
        f"solved: minimal sup {lo.pair.u.sup_norm():.6g}/{lo.pair.v.sup_norm():.6g} "
        f"({lo.iterations} it), maximal sup {hi.pair.u.sup_norm():.6g}/"
        f"{hi.pair.v.sup_norm():.6g} ({hi.iterations} it), case {case}"
    )
    return code


def _sweep_ts(cfg, args, threshold):
    if args.t:
        return sorted(args.t)
    if cfg.params and "ray" in cfg.params:
        return list(cfg.params["ray"]["t_values"])
    near = [threshold * (1.0 + 2.0**-j) for j in range(10, 2, -1)]
    growth = [3.0, 4.0, 6.0, 10.0, 20.0, 40.0]
    return sorted(near + [t for t in growth if t > threshold])


def cmd_sweep(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    gp0 = quad.g.deriv0
    threshold = existence_threshold(grid, gp0)
    ts = _sweep_ts(cfg, args, threshold)
    if ts[0] <= threshold:
        print(
            f"refused: sweep ladder must sit above the threshold "
            f"{threshold:.6g} (got t = {ts[0]:g})",
            file=sys.stderr,
        )
        return EXIT_USAGE

    rows = []
    for t in ts:
        lam = mu = 0.5 * t
        row = {
            "lambda": lam, "mu": mu, "t": t,
            "rho": spectral_shift(grid, t, gp0),
            "count": None, "converged": False,
            "u_min_sup": None, "v_min_sup": None,
            "u_max_sup": None, "v_max_sup": None,
        }
        sup_pair = None
        try:
            interval, _ = build_bracket(grid, lam, mu, quad, cfg)
            sup_pair = interval.upper
            lo = iterate_up(grid, lam, mu, quad, interval,
                            change_tol=cfg.tolerances.iter_change,
                            residual_tol=cfg.tolerances.residual)
            hi = iterate_down(grid, lam, mu, quad, interval,
                              change_tol=cfg.tolerances.iter_change,
                              residual_tol=cfg.tolerances.residual)
            row.update(
                u_min_sup=lo.pair.u.sup_norm(), v_min_sup=lo.pair.v.sup_norm(),
                u_max_sup=hi.pair.u.sup_norm(), v_max_sup=hi.pair.v.sup_norm(),
                converged=True,
            )
        except RdRobinError as exc:
            log.info("t = %g: %s", t, exc)
        if cfg.oracle:
            enum = enumerate_solutions(grid, lam, mu, quad,
                                       default_box(lam, mu, sup_pair))
            row["count"] = len(enum.positive_records())
        rows.append(row)

    out = Path(cfg.out_dir)
    write_sweep_csv(out / "sweep.csv", rows)

    # trend diagnostics on the converged rows
    conv = [r for r in rows if r["converged"]]
    t_max = max(ts)
    top = [r for r in conv if r["t"] >= t_max / 10.0]
    slope = None
    if len(top) >= 2:
        xs = np.log([r["t"] for r in top])
        ys = np.log([r["u_max_sup"] for r in top])
        slope = float(np.polyfit(xs, ys, 1)[0])
    near = sorted(
        (r for r in conv if r["t"] <= threshold + 0.2), key=lambda r: r["t"]
    )
    near_ok = None
    if len(near) >= 2:
        vals = [r["u_min_sup"] for r in near]
        near_ok = all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))

    checks = {
        "rho_negative_throughout": all(r["rho"] < 0 for r in rows),
        "growth_slope_positive": (slope is not None and slope > 0.0),
        "near_threshold_decreasing_toward_threshold": bool(near_ok),
        "all_rows_converged": all(r["converged"] for r in rows),
    }
    report = {
        "threshold": threshold,
        "t_values": ts,
        "converged_rows": len(conv),
        "growth_slope_top_decade": slope,
        "checks": checks,
    }
    write_json(out / "report.json", report)
    if _figures_enabled(cfg):
        from .figures import save_sweep

        save_sweep(out / "sweep.png", rows, threshold)
    print(
        f"sweep: {len(conv)}/{len(rows)} points converged; "
        f"top-decade slope {slope if slope is not None else 'n/a'}"
    )
    return EXIT_OK if all(checks.values()) else EXIT_CHECK_FAILED


def cmd_verify(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    try:
        pair = read_pair_csv(args.pair, grid)
    except (OSError, ValueError, RdRobinError) as exc:
        print(f"cannot read pair: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = verify_pair(grid, args.lam, args.mu, quad, pair, args.kind,
                      strict=args.strict)
    write_json(Path(cfg.out_dir) / "verification.json", rep.as_dict())
    if rep.passed:
        print(f"PASS ({args.kind}{', strict' if args.strict else ''})")
        return EXIT_OK
    print(
        f"FAIL ({args.kind}): worst interior defects {rep.worst_interior} "
        f"at x = {rep.witness_x}, boundary {rep.worst_boundary}"
    )
    return EXIT_CHECK_FAILED


def _certify_point(grid, lam, mu, quad, cfg, a, b, c1):
    """Try the four-pair certificate at one parameter point.

    Returns (status, detail).  status "certified" means: plain sub, strict
    super, strict sub, plain super all verified, with the two chains ordered
    and the strict pair NOT below the strict super.
    """
    try:
        sub = eigen_subsolution(grid, lam, mu, quad)
        sup, case = choose_supersolution(grid, lam, mu, quad, cfg)
        strict_sup = scaled_profile_supersolution(grid, quad, a, lam, mu)
        dirichlet = dirichlet_large_subsolution(grid, lam, quad, b, c1=c1)
        strict_sub = strict_subsolution_lift(grid, lam, mu, quad, dirichlet)
    except RdRobinError as exc:
        return "construction-failed", str(exc)
    orderings = (
        sub.le(strict_sup)
        and strict_sup.le(sup)
        and sub.le(strict_sub)
        and strict_sub.le(sup)
        and not strict_sub.le(strict_sup)
    )
    if not orderings:
        return "orderings-failed", "chains not ordered as required"
    return "certified", case


def cmd_multiplicity(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    if args.a is not None and args.b is not None:
        a, b = args.a, args.b
    elif "builtin" in cfg.quad_spec:
        a = float(cfg.quad_spec.get("k", 1.0))
        b = float(cfg.quad_spec.get("alpha", 10.0))
    else:
        print("custom quads need explicit --a and --b", file=sys.stderr)
        return EXIT_USAGE

    threshold = existence_threshold(grid, quad.g.deriv0)
    xi_sup = unit_source_solution(grid, 1.0).sup_norm()
    c1 = cfg.c1_value if cfg.c1_value is not None else inscribed_ball_constant(
        *cfg.c1_geometry
    )
    window = multiplicity_window(quad, a, b, threshold, xi_sup, c1)

    report = {
        "a": a,
        "b": b,
        "window": window.as_dict(),
        "c1_overridden": cfg.c1_value is not None,
        "points": [],
        "status": None,
    }
    out = Path(cfg.out_dir)

    print(
        f"gates: q1/q2 = {window.gate_ratio_lhs:.6g} vs "
        f"2*c1*xi_sup = {window.gate_ratio_rhs:.6g}; "
        f"q1 = {window.gate_level_lhs:.6g} vs "
        f"2*max(threshold,1)*xi_sup = {window.gate_level_rhs:.6g}"
    )
    certified = []
    counts_ok = True
    if window.window is None:
        print(
            f"window empty: left end {window.left:.6g} >= right end "
            f"{window.right:.6g}"
        )
    else:
        left, right = window.window
        levels = [left + (right - left) * f for f in (0.25, 0.5, 0.75)]
        for lam in levels:
            for mu in levels:
                status, detail = _certify_point(grid, lam, mu, quad, cfg, a, b, c1)
                entry = {"lambda": lam, "mu": mu, "status": status,
                         "detail": detail}
                if status == "certified":
                    sup_pair, _ = choose_supersolution(grid, lam, mu, quad, cfg)
                    enum = enumerate_solutions(
                        grid, lam, mu, quad, default_box(lam, mu, sup_pair)
                    )
                    entry["positive_count"] = len(enum.positive_records())
                    certified.append(entry)
                    if entry["positive_count"] < 3:
                        counts_ok = False
                report["points"].append(entry)

    if certified and counts_ok:
        report["status"] = "certified-consistent"
        code = EXIT_OK
    elif certified:
        report["status"] = "certified-inconsistent"
        code = EXIT_CHECK_FAILED
    else:
        report["status"] = "no-certified-witness"
        code = EXIT_NO_WITNESS
        print("no certified witness: no sampled point carried all four "
              "verified certificates")
    write_json(out / "multiplicity.json", report)
    if _figures_enabled(cfg):
        from .figures import save_window

        save_window(out / "multiplicity.png", window)
    print(f"status: {report['status']}")
    return code


def cmd_enumerate(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    lam, mu = args.lam, args.mu
    box = args.box
    if box is None:
        try:
            sup_pair, _ = choose_supersolution(grid, lam, mu, quad, cfg)
        except RdRobinError:
            sup_pair = None
        box = default_box(lam, mu, sup_pair)
    enum = enumerate_solutions(grid, lam, mu, quad, box,
                               scan_density=args.density)
    out = Path(cfg.out_dir)
    roots = []
    for cand, rec in zip(enum.candidates, enum.records):
        roots.append(
            {
                **cand.as_dict(),
                "u_sup": rec.pair.u.sup_norm(),
                "v_sup": rec.pair.v.sup_norm(),
                "positive": rec.pair.u.min_value() > 0
                and rec.pair.v.min_value() > 0,
                "fd_residual_interior": rec.residual_interior,
            }
        )
    report = {
        "lambda": lam,
        "mu": mu,
        "box_max": enum.box_max,
        "scan_density": enum.scan_density,
        "trivial": enum.trivial.as_dict(),
        "roots": roots,
        "positive_count": len(enum.positive_records()),
    }
    write_json(out / "enumeration.json", report)
    if args.write_roots:
        for i, rec in enumerate(enum.records):
            write_pair_csv(out / f"root_{i:02d}.csv", rec.pair)
    if _figures_enabled(cfg):
        from .figures import save_roots

        save_roots(out / "roots.png", enum)
    print(f"{len(enum.candidates)} nontrivial roots "
          f"({report['positive_count']} positive) in box {enum.box_max:g}")
    return EXIT_OK


def cmd_example(cfg, args):
    grid = Grid1D(cfg.n)
    quad = build_quad(cfg.quad_spec)
    out = Path(cfg.out_dir)
    checks = {}
    data = {}

    hyp = validate_h(quad)
    checks["validators_pass"] = hyp.passed
    data["validators"] = hyp.as_dict()

    # splice-parameter ladder for the min ratio (claimed to grow without
    # bound); the h-term goes negative past its hump, so large splices are
    # expected to degenerate and the failure is recorded with its witness
    q1_ladder = []
    for k in (1.0, 10.0, 100.0, 1000.0):
        entry = {"k": k}
        try:
            fam = example_family(k, 10.0 * k)
            entry["q1"] = min_ratio(fam, k)
        except RdRobinError as exc:
            entry["error"] = str(exc)
        q1_ladder.append(entry)
    vals = [e.get("q1") for e in q1_ladder]
    checks["q1_ladder_increasing"] = (
        all(v is not None for v in vals)
        and all(x < y for x, y in zip(vals, vals[1:]))
    )
    data["q1_ladder"] = q1_ladder

    q2_ladder = []
    for alpha in (10.0, 100.0, 1000.0):
        fam = example_family(1.0, alpha)
        q2_ladder.append({"alpha": alpha, "q2": max_ratio(fam, alpha)})
    q2vals = [e["q2"] for e in q2_ladder]
    checks["q2_ladder_decreasing"] = all(
        x > y for x, y in zip(q2vals, q2vals[1:])
    )
    data["q2_ladder"] = q2_ladder

    q1_ref = 1.0 / (2.0 * np.sqrt(2.0) - 2.0)
    q1_val = min_ratio(example_family(1.0, 10.0), 1.0)
    checks["q1_value"] = abs(q1_val - q1_ref) < 1e-6
    data["q1_at_1"] = {"value": q1_val, "reference": q1_ref}

    threshold = existence_threshold(grid, quad.g.deriv0)
    near = []
    sups = []
    for j in range(3, 11):
        t = threshold * (1.0 + 2.0**-j)
        entry = {"j": j, "t": t}
        try:
            pair = small_amplitude_supersolution(grid, t / 2, t / 2, quad, r=1.0)
            entry["sup"] = pair.sup_norm()
            sups.append(pair.sup_norm())
        except RdRobinError as exc:
            entry["error"] = str(exc)
        near.append(entry)
    checks["near_threshold_decreasing_where_defined"] = all(
        x > y for x, y in zip(sups, sups[1:])
    )
    data["near_threshold"] = near

    # multiplicity gates for the default choice a = k, b = alpha
    a = float(cfg.quad_spec.get("k", 1.0))
    b = float(cfg.quad_spec.get("alpha", 10.0))
    xi_sup = unit_source_solution(grid, 1.0).sup_norm()
    c1 = cfg.c1_value if cfg.c1_value is not None else inscribed_ball_constant(
        *cfg.c1_geometry
    )
    window = multiplicity_window(quad, a, b, threshold, xi_sup, c1)
    data["window"] = window.as_dict()

    report = {"checks": checks, "data": data, "threshold": threshold}
    write_json(out / "example_report.json", report)
    if _figures_enabled(cfg):
        from .figures import save_window

        save_window(out / "example_window.png", window)

    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'}: {name}")
    return EXIT_OK if all(checks.values()) else EXIT_CHECK_FAILED


# ------------------------------------------------------------------ main


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rdrobin",
        description="explore coupled steady-state reaction-diffusion systems "
        "on (0,1) with parameter-dependent Robin boundary rows",
    )
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--grid", type=int, help="interior node count override")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--oracle", action="store_true",
                        help="cross-check with the shooting oracle")
    parser.add_argument("--c1", type=float,
                        help="override the geometry constant")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering")
    parser.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigs", help="eigenstructure and threshold report")
    p.add_argument("--t", type=float, nargs="*", help="shift ladder values")
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("solve", help="bracket and solve at one point")
    p.add_argument("lam", type=float)
    p.add_argument("mu", type=float)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="sweep along the diagonal ray")
    p.add_argument("--t", type=float, nargs="*", help="ladder of t = lambda+mu")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="verify a pair file as sub/super")
    p.add_argument("pair", type=Path, help="CSV with columns x,u,v")
    p.add_argument("--kind", choices=("sub", "super"), required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("multiplicity", help="window search with certificates")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.set_defaults(func=cmd_multiplicity)

    p = sub.add_parser("enumerate", help="enumerate roots by shooting")
    p.add_argument("lam", type=float)
    p.add_argument("mu", type=float)
    p.add_argument("--box", type=float)
    p.add_argument("--density", type=int, default=96)
    p.add_argument("--write-roots", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("example", help="built-in family reproduction bundle")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.grid is not None:
            cfg.n = args.grid
        if args.out is not None:
            cfg.out_dir = args.out
        if args.oracle:
            cfg.oracle = True
        if args.c1 is not None:
            cfg.c1_value = args.c1
        if args.no_figures:
            cfg.figures = False
        cfg.validate()
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
