"""Composite Rician/lognormal fading and channel matrix assembly.

Every user has a single fading instance toward all satellite feeds (the
feeds are collocated), so the channel factorizes as the gain matrix times
a per-user diagonal: z_ij = b_ij * h_j * sqrt(xi_j). Shadowing xi is a
POWER gain; its square root enters the amplitude-domain matrix.

Sampling functions take an explicit numpy Generator; there is no hidden
global state. One generator must not be shared across threads without
external ordering.
"""

from dataclasses import dataclass

import numpy as np

from .coloring import ColorPlan
from .geometry import BeamGrid, UserSet, beam_gain_matrix


@dataclass(frozen=True)
class FadingParams:
    """Rician factor (dB) plus lognormal shadowing parameters of ln(xi)."""

    k_factor_db: float = 13.0
    mu_m: float = -2.62    # mean of ln(xi), nepers (power domain)
    sigma_m: float = 1.6   # standard deviation of ln(xi)

    def __post_init__(self):
        if not np.isfinite(self.k_factor_db):
            raise ValueError(f"k_factor_db must be finite, got {self.k_factor_db}")
        if not np.isfinite(self.mu_m):
            raise ValueError(f"mu_m must be finite, got {self.mu_m}")
        if not (np.isfinite(self.sigma_m) and self.sigma_m >= 0.0):
            raise ValueError(f"sigma_m must be >= 0, got {self.sigma_m}")

    @property
    def k_factor_lin(self) -> float:
        return 10.0 ** (self.k_factor_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte Carlo draw of the composite channel and its factors."""

    z: np.ndarray    # (feeds, users) complex channel matrix
    b: np.ndarray    # gain-matrix slice used
    h: np.ndarray    # per-user complex Rician coefficients
    xi: np.ndarray   # per-user shadowing power gains


def sample_rician(params: FadingParams, rng: np.random.Generator, size=None):
    """Unit-power Rician coefficient(s): fixed LOS part plus scattered CN(0,1).

    h = sqrt(K/(K+1)) + sqrt(1/(K+1)) * w with w circularly symmetric of
    unit variance, so E[|h|^2] = 1. The LOS phase is fixed at zero; the
    capacity functionals are invariant to per-user phase rotation.
    """
    k = params.k_factor_lin
    los = 1.0 / np.sqrt(1.0 + 1.0 / k)
    scatter = np.sqrt(1.0 / (k + 1.0))
    w = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)
    return los + scatter * w


def sample_shadowing(params: FadingParams, rng: np.random.Generator, size=None):
    """Lognormal shadowing power gain(s): xi = exp(mu_m + sigma_m * g)."""
    return np.exp(params.mu_m + params.sigma_m * rng.standard_normal(size))


def assemble_channel(b, h, xi) -> ChannelRealization:
    """Deterministic assembly z = B * diag(h) * diag(sqrt(xi))."""
    b = np.asarray(getattr(b, "entries", b), dtype=float)
    h = np.atleast_1d(np.asarray(h, dtype=complex))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if b.ndim != 2:
        raise ValueError(f"gain slice must be 2-D, got shape {b.shape}")
    if h.shape != (b.shape[1],) or xi.shape != (b.shape[1],):
        raise ValueError(
            f"fading vectors must have length {b.shape[1]}; got h {h.shape}, xi {xi.shape}"
        )
    if np.any(xi <= 0.0):
        raise ValueError("shadowing gains must be positive")
    z = b * (h * np.sqrt(xi))[None, :]
    z.setflags(write=False)
    return ChannelRealization(z=z, b=b, h=h, xi=xi)


def cluster_channel(
    grid: BeamGrid,
    users: UserSet,
    plan: ColorPlan,
    color: int,
    params: FadingParams,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Sample the n x n channel of one co-channel cluster.

    Restricts the gain matrix to the cluster's feeds and users and draws
    fresh per-user fading. For variance-reduced system comparisons the
    harness instead slices one shared fading draw (see harness module).
    """
    if not 0 <= color < plan.n_colors:
        raise ValueError(f"color index {color} out of range [0, {plan.n_colors})")
    b = beam_gain_matrix(grid, users).entries
    idx = plan.clusters[color]
    h = sample_rician(params, rng, size=idx.size)
    xi = sample_shadowing(params, rng, size=idx.size)
    return assemble_channel(b[np.ix_(idx, idx)], h, xi)


def dump_realization_csv(realization: ChannelRealization, path) -> None:
    """Debug dump of z as CSV with real/imag interleaved columns."""
    z = realization.z
    header = ",".join(f"re_{j},im_{j}" for j in range(z.shape[1]))
    lines = [header]
    for row in z:
        lines.append(",".join(f"{v.real:.9g},{v.imag:.9g}" for v in row))
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing realization CSV to {path}: {exc}") from exc
