"""Matplotlib figure rendering for the report paths.

Every report command drops PNG figures next to its delimited output.  All
rendering is headless (Agg) and file-based.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_profiles",
    "save_sweep",
    "save_shift_curve",
    "save_window",
    "save_roots",
]

_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


def _new_axes(width=6.4):
    fig, ax = plt.subplots(figsize=(width, width * _GOLDEN))
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_profiles(path, pairs, labels, title=""):
    """Overlayed u and v profiles for one or more pairs."""
    fig, ax = _new_axes()
    for pair, label in zip(pairs, labels):
        x = pair.grid.x
        (line,) = ax.plot(x, pair.u.values, label=f"u {label}")
        ax.plot(x, pair.v.values, "--", color=line.get_color(), label=f"v {label}")
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_sweep(path, rows, threshold=None):
    """Sup norms of the bracket solutions against the total parameter."""
    fig, ax = _new_axes()
    ts = [r["t"] for r in rows]
    for key, style in (("u_min_sup", "o-"), ("u_max_sup", "s--")):
        vals = [r.get(key) for r in rows]
        pts = [(t, v) for t, v in zip(ts, vals) if v is not None and np.isfinite(v)]
        if pts:
            ax.plot(*zip(*pts), style, label=key, markersize=3)
    if threshold is not None:
        ax.axvline(threshold, color="k", lw=0.8, ls=":", label="threshold")
    ax.set_xlabel("t = lambda + mu")
    ax.set_ylabel("sup norm")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_shift_curve(path, ts, shifts, threshold):
    fig, ax = _new_axes()
    ax.plot(ts, shifts, "o-", markersize=3)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.axvline(threshold, color="k", lw=0.8, ls=":")
    ax.set_xlabel("t = lambda + mu")
    ax.set_ylabel("spectral shift")
    return _finish(fig, path)


def save_window(path, report):
    """Gate quantities and the (possibly empty) parameter window."""
    fig, ax = _new_axes()
    names = ["threshold", "c1*q2", "1", "right end"]
    vals = [report.threshold, report.c1 * report.q2, 1.0, report.right]
    colors = ["C0", "C0", "C0", "C3"]
    ax.bar(names, vals, color=colors)
    ax.axhline(report.left, color="C2", lw=1.0, ls="--",
               label=f"left end {report.left:.3g}")
    ax.set_ylabel("parameter level")
    title = "window empty" if report.window is None else (
        f"window ({report.left:.3g}, {report.right:.3g})"
    )
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_roots(path, enum):
    fig, ax = _new_axes(5.4)
    ax.plot([enum.trivial.u0], [enum.trivial.v0], "kx", label="trivial")
    if enum.candidates:
        us = [c.u0 for c in enum.candidates]
        vs = [c.v0 for c in enum.candidates]
        ax.plot(us, vs, "o", label="roots")
    ax.set_xlabel("u(0)")
    ax.set_ylabel("v(0)")
    ax.set_xlim(-0.02 * enum.box_max, enum.box_max * 1.02)
    ax.set_ylim(-0.02 * enum.box_max, enum.box_max * 1.02)
    ax.legend(fontsize=8)
    return _finish(fig, path)
