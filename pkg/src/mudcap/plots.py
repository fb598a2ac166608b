"""Figure rendering for sweep results and coverage layouts.

Figures are written straight to files (Agg backend); there is no
interactive display path.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import BeamGrid, UserSet
from .harness import SweepResult

_MC_STYLE = {
    "full_mud": ("full reuse MUD", "tab:blue", "o"),
    "clustered_s1": ("clustered MUD, scenario 1", "tab:green", "s"),
    "clustered_s2": ("clustered MUD, scenario 2", "tab:red", "^"),
    "conventional": ("conventional 4-color", "tab:orange", "v"),
}
_ANALYTIC_STYLE = {
    "lb_full": ("lower bound, full reuse", "tab:blue", "--"),
    "lb_clustered": ("lower bound, clustered", "tab:green", "--"),
    "asymptote": ("high-SNR asymptote", "0.4", ":"),
}


def plot_sweep(result: SweepResult, path) -> None:
    """Throughput-vs-SNR curves: Monte Carlo systems solid, analytics dashed."""
    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    scale = result.user_bandwidth_hz / 1e6
    for tag in result.systems:
        y = result.mean[tag] * scale
        if tag in _MC_STYLE:
            label, color, marker = _MC_STYLE[tag]
            ax.errorbar(
                result.gamma_db, y, yerr=result.ci95_half[tag] * scale,
                label=label, color=color, marker=marker, markersize=4, capsize=2,
            )
        else:
            label, color, style = _ANALYTIC_STYLE[tag]
            ax.plot(result.gamma_db, y, style, color=color, label=label)
    ax.set_xlabel("Transmit SNR (dB)")
    ax.set_ylabel("Throughput (Mbps)")
    ax.set_ylim(bottom=0.0)
    ax.grid(alpha=0.3, linestyle=":")
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_layout(grid: BeamGrid, users: UserSet, path, plan=None) -> None:
    """Coverage map: 3 dB beam contours, user positions, optional colors."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    palette = ["tab:blue", "tab:orange", "tab:green", "tab:red"]
    for i, (cx, cy) in enumerate(grid.beam_centers):
        color = palette[plan.color_of[i] % len(palette)] if plan is not None else "0.6"
        ax.add_patch(
            plt.Circle((cx, cy), grid.theta_3db, fill=False, color=color, lw=1.0)
        )
    ax.scatter(users.positions[:, 0], users.positions[:, 1], s=8, c="k", zorder=3,
               label="users")
    ax.set_xlabel("azimuth offset (deg)")
    ax.set_ylabel("elevation offset (deg)")
    ax.set_aspect("equal")
    margin = 2 * grid.theta_3db
    ax.set_xlim(grid.beam_centers[:, 0].min() - margin, grid.beam_centers[:, 0].max() + margin)
    ax.set_ylim(grid.beam_centers[:, 1].min() - margin, grid.beam_centers[:, 1].max() + margin)
    ax.legend(loc="upper right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
