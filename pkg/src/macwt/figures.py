"""Figure rendering for the CLI report paths.

The library itself never plots; these helpers turn already-computed sweep
and decay results into PNG files next to the delimited outputs.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_hulls(sweep, separation, path: Path) -> None:
    """Both strategy hulls, the selected point, and the separating line."""
    fig, ax = plt.subplots(figsize=(6, 5))
    for hull, color, label in (
        (sweep.hull_old, "tab:red", "all-users strategy"),
        (sweep.hull_new1, "tab:blue", "user-1-only strategy"),
    ):
        pts = list(hull) + [hull[0]]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color=color, label=label)
    if separation is not None:
        v0 = separation.v0
        ax.plot([v0[0]], [v0[1]], "k*", markersize=12, label="separated point")
        w, t = separation.w, separation.t
        xs = np.linspace(0, max(p[0] for p in sweep.hull_new1) * 1.1, 50)
        if abs(w[1]) > 1e-12:
            ys = (t - w[0] * xs) / w[1]
            mask = (ys >= 0) & (ys <= max(p[1] for p in sweep.hull_new1) * 1.1)
            ax.plot(xs[mask], ys[mask], "k--", linewidth=1, label="separating line")
    ax.set_xlabel("secret rate of user 1 (bits)")
    ax.set_ylabel("open rate of user 2 (bits)")
    ax.set_title(f"achievable hulls, q1={sweep.q1}, q2={sweep.q2}")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bound_surfaces(sweep, outdir: Path) -> list[Path]:
    """One heatmap per rate bound over the (alpha, beta) grid."""
    steps = int(round(1.0 / sweep.delta)) + 1
    grids = {name: np.zeros((steps, steps)) for name in ("a1", "b", "c1", "a2", "c2")}
    for idx, cell in enumerate(sweep.cells):
        i, j = divmod(idx, steps)
        for name in grids:
            grids[name][i, j] = getattr(cell.bounds, name)
    paths = []
    extent = (0.0, 1.0, 0.0, 1.0)
    for name, grid in grids.items():
        fig, ax = plt.subplots(figsize=(5, 4))
        im = ax.imshow(
            grid.T, origin="lower", extent=extent, aspect="auto", cmap="viridis"
        )
        fig.colorbar(im, ax=ax, label=f"{name} (bits)")
        ax.set_xlabel("alpha")
        ax.set_ylabel("beta")
        ax.set_title(f"{name} over the input grid, q1={sweep.q1}, q2={sweep.q2}")
        fig.tight_layout()
        out = outdir / f"surface_{name}.png"
        fig.savefig(out, dpi=150)
        plt.close(fig)
        paths.append(out)
    return paths


def render_tv_decay(result, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogy(result.blocklengths, result.means, "o-")
    ax.set_xlabel("blocklength n")
    ax.set_ylabel("mean total-variation distance")
    holds = all(r.condition_holds for r in result.rows)
    ax.set_title(f"output-statistics convergence (condition holds: {holds})")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
