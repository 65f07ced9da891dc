"""Figure rendering for reports.

Each function writes one PNG next to the report output and returns the
path.  matplotlib is imported lazily with the Agg backend so the CLI
stays headless and figure generation costs nothing unless requested.
"""

from __future__ import annotations

import math
from pathlib import Path


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def save_tau_figure(report, path: str | Path) -> str:
    """Coefficient decay of the basis blocks plus recognition residuals."""
    plt = _plt()
    run = report.run
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
    if run is not None:
        for m, h in enumerate(run.basis.sigma_series):
            xs, ys = [], []
            for n, c in enumerate(h.coeffs):
                if c and n:
                    xs.append(n)
                    ys.append((math.log(abs(c.numerator))
                               - math.log(c.denominator)) / math.log(10))
            if xs:
                ax1.plot(xs, ys, lw=1, label=f"h_{m}")
        ax1.set_xlabel("n")
        ax1.set_ylabel("log10 |coefficient|")
        ax1.set_title("basis block coefficients")
        ax1.legend(fontsize=8)
    labels = [f"tau_{e.j}" for e in report.entries]
    residuals = []
    for e in report.entries:
        try:
            residuals.append(math.log10(max(float(e.residual_str), 1e-300)))
        except ValueError:
            residuals.append(0.0)
    ax2.bar(labels, residuals, color="#3b6ea5")
    ax2.axhline(-report.job.precision / 2, color="red", lw=1, ls="--",
                label="detection threshold")
    ax2.set_ylabel("log10 residual")
    ax2.set_title("recognition residuals")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    path = str(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def save_path_figure(report, singular_points, path: str | Path) -> str:
    """Singularities, transport targets and basepoint in the local chart."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.5, 4))
    for p in singular_points:
        ax.plot(float(p.value.real), float(p.value.imag), "x", color="red",
                markersize=9)
    run = report.run
    if run is not None:
        xs = [float(t) for t in run.targets]
        ax.plot(xs, [0.0] * len(xs), "o", color="#3b6ea5", label="targets")
        ax.plot([float(run.basepoint)], [0.0], "s", color="green",
                label="basepoint")
        lo = min([0.0] + xs) - 0.4
        hi = max(xs) + 0.4
        ax.plot([float(run.basepoint), max(xs)], [0, 0], lw=0.8,
                color="#3b6ea5", alpha=0.5)
        ax.set_xlim(lo, hi)
    ax.axhline(0, color="gray", lw=0.4)
    ax.set_title("transport path and singularities (local chart)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = str(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def save_identity_figure(reports, path: str | Path) -> str:
    """Horizontal bars of log10 |lhs - rhs| against the tolerance."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 0.5 * max(4, len(reports))))
    names = [r.ident for r in reports]
    vals = [math.log10(max(float(r.difference), 1e-300)) for r in reports]
    colors = ["#2e8b57" if r.passed else "#b22222" for r in reports]
    ax.barh(names, vals, color=colors)
    if reports:
        ax.axvline(math.log10(reports[0].tolerance), color="red", lw=1, ls="--",
                   label="tolerance")
    ax.set_xlabel("log10 |lhs - rhs|")
    ax.set_title("identity checks")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = str(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path


def save_growth_figure(growth, path: str | Path) -> str:
    """Coefficient and denominator growth exponents."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4))
    if growth.abs_points:
        ax.plot(*zip(*growth.abs_points), label="|a_n|^(1/n)", lw=1.2)
    ax.plot(*zip(*growth.den_points), label="lcm(denominators)^(1/n)", lw=1.2)
    ax.set_xlabel("n")
    ax.set_yscale("log")
    ax.set_title("coefficient growth")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = str(path)
    fig.savefig(path, dpi=140)
    plt.close(fig)
    return path
