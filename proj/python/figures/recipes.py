"""Figure recipes. Each one reads gct-sim tables from a data directory and
writes a single PNG; no physics is recomputed here."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .schema import load  # noqa: E402

plt.rcParams.update({"font.size": 9, "savefig.dpi": 100, "path.simplify": False})


def _optima(frame, metric, keys):
    """Minimum of `metric` over time for every parameter group."""
    finite = frame[np.isfinite(frame[metric])]
    return finite.groupby(keys, as_index=False)[metric].min()


def _save(fig, out_dir, name):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.png"
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def fig2a(data, out):
    frame = load(data, "dtwa.csv")
    crit = load(data, "chi_c.csv", optional=True)
    if crit is None:
        print("note: chi_c.csv not found, critical-rate overlay skipped")
    frame = frame.assign(chi_inv=np.where(np.isinf(frame["chi"]), 0.0, 1.0 / frame["chi"]))
    dims = sorted(frame["dim"].unique())
    fig, axes = plt.subplots(len(dims), 2, figsize=(7, 2.6 * len(dims)), squeeze=False)
    for row, d in enumerate(dims):
        sub = frame[frame["dim"] == d]
        chi_inv = np.sort(sub["chi_inv"].unique())
        alphas = np.sort(sub["alpha"].unique())
        for col, (metric, title) in enumerate([("xi2", "squeezing"), ("qfi_sens", "QFI")]):
            opt = _optima(sub, metric, ["alpha", "chi_inv", "realization"]).groupby(["alpha", "chi_inv"])[metric].mean()
            grid = np.full((len(alphas), len(chi_inv)), np.nan)
            for (a, c), v in opt.items():
                grid[np.searchsorted(alphas, a), np.searchsorted(chi_inv, c)] = v
            ax = axes[row, col]
            mesh = ax.pcolormesh(np.arange(len(chi_inv) + 1) - 0.5, np.arange(len(alphas) + 1) - 0.5,
                                 np.log10(grid), shading="flat", cmap="viridis")
            fig.colorbar(mesh, ax=ax, label="log10 N(dphi)^2")
            ax.set_xticks(range(len(chi_inv)), [f"{c:g}" for c in chi_inv], rotation=90)
            ax.set_yticks(range(len(alphas)), [f"{a:g}" for a in alphas])
            ax.set_xlabel("1/chi")
            ax.set_ylabel("alpha")
            ax.set_title(f"d = {d}, {title}")
            if crit is not None and len(chi_inv) > 1:
                c = crit[crit["dim"] == d].sort_values("alpha")
                if not c.empty:
                    x = np.interp(1.0 / c["chi_c"], chi_inv, np.arange(len(chi_inv)))
                    y = np.interp(c["alpha"], alphas, np.arange(len(alphas)))
                    ax.plot(x, y, color="black")
    fig.tight_layout()
    return _save(fig, out, "fig2a")


def fig3b(data, out):
    frame = load(data, "spinwave_correlators.csv")
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for chi in sorted(frame["chi"].unique()):
        sub = frame[frame["chi"] == chi]
        t = sub["t"].unique()
        t_star = t[np.argmin(np.abs(t * chi - 1))]
        cut = sub[(sub["t"] == t_star) & (sub["r_y"] == 0)].sort_values("r_x")
        ax.plot(cut["r_x"], cut["C_max"], marker="o", ms=2, label=f"chi = {chi:g}")
    ax.set_xlabel("r_x")
    ax.set_ylabel("C_max(r_x)")
    ax.set_yscale("symlog", linthresh=1e-3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out, "fig3b")


def fig5c(data, out):
    frame = load(data, "dtwa.csv")
    opt = _optima(frame, "xi2", ["chi", "epsilon", "realization"])
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for chi, sub in opt.groupby("chi"):
        stats = sub.groupby("epsilon")["xi2"].agg(["mean", "std", "count"]).reset_index()
        err = stats["std"].fillna(0) / np.sqrt(stats["count"])
        ax.errorbar(stats["epsilon"], stats["mean"], yerr=err, marker="o", capsize=2, label=f"chi = {chi:g}")
    ax.set_xlabel("filling fluctuation epsilon")
    ax.set_ylabel("optimal N(dphi_sq)^2")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    return _save(fig, out, "fig5c")


def figS7(data, out):
    frame = load(data, "floquet.csv")
    opt = _optima(frame, "xi2", ["delta", "chi", "dt_step"])
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for (delta, chi), sub in opt.groupby(["delta", "chi"]):
        sub = sub.sort_values("dt_step")
        ax.plot(sub["dt_step"], sub["xi2"], marker="o", ms=3, label=f"Delta = {delta:g}, chi = {chi:g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("dt_step")
    ax.set_ylabel("optimal N(dphi_sq)^2")
    ax.legend(fontsize=6)
    fig.tight_layout()
    return _save(fig, out, "figS7")


@dataclass
class Recipe:
    summary: str
    inputs: list
    build: Callable
    optional: list = field(default_factory=list)

    def render(self, data, out):
        return self.build(data, out)


RECIPES = {
    "fig2a": Recipe("optimal sensitivity heatmaps over (1/chi, alpha) per dimension", ["dtwa.csv"], fig2a,
                    ["chi_c.csv"]),
    "fig3b": Recipe("spin-wave correlator cuts at chi t = 1", ["spinwave_correlators.csv"], fig3b),
    "fig5c": Recipe("optimal squeezing against filling fluctuation", ["dtwa.csv"], fig5c),
    "figS7": Recipe("Trotterized squeezing against step size", ["floquet.csv"], figS7),
}
