"""Multibeam coverage geometry: hexagonal beam lattice, user drop, gain matrix.

Coordinates are planar angular offsets in degrees as seen from the
satellite (small-angle approximation for a GEO payload). All produced
values are immutable arrays and safe to share across threads.
"""

from dataclasses import dataclass

import numpy as np

from .special import bessel_j

# Off-axis scaling of the tapered-aperture pattern: u = 2.07123 at the
# half-power angle puts the pattern exactly 3 dB below peak.
U_3DB = 2.07123


@dataclass(frozen=True)
class BeamGrid:
    """Beam boresight layout of a rows x cols hexagonal lattice."""

    beam_centers: np.ndarray  # (N, 2) boresight directions, degrees
    theta_3db: float          # half-power half-angle, degrees
    rows: int
    cols: int
    g_max_db: float           # peak antenna power gain, dBi

    @property
    def n_beams(self) -> int:
        return self.rows * self.cols

    @property
    def g_max_lin(self) -> float:
        return 10.0 ** (self.g_max_db / 10.0)

    @property
    def spacing(self) -> float:
        """Nearest-neighbour angular spacing, degrees."""
        return np.sqrt(3.0) * self.theta_3db


@dataclass(frozen=True)
class UserSet:
    """One active user per beam."""

    positions: np.ndarray   # (N, 2) angular positions, degrees
    home_beam: np.ndarray   # (N,) user index -> beam index


@dataclass(frozen=True)
class GainMatrix:
    """Amplitude-domain feed-to-user gains b_ij = sqrt(power gain)."""

    entries: np.ndarray  # (N, N) nonnegative amplitudes


def build_beam_grid(rows: int, cols: int, theta_3db: float, g_max_db: float) -> BeamGrid:
    """Hexagonal lattice of rows x cols beams, centered on the origin.

    Same-row neighbours are sqrt(3)*theta_3db apart and odd rows are offset
    by half a spacing, so every nearest neighbour sits at the same distance
    and adjacent beams cross at the 3 dB contour.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {rows}x{cols}")
    if not theta_3db > 0.0:
        raise ValueError(f"theta_3db must be positive, got {theta_3db}")
    if not np.isfinite(g_max_db):
        raise ValueError(f"g_max_db must be finite, got {g_max_db}")

    d = np.sqrt(3.0) * theta_3db
    r = np.repeat(np.arange(rows), cols)
    c = np.tile(np.arange(cols), rows)
    x = c * d + (r % 2) * (d / 2.0)
    y = r * (d * np.sqrt(3.0) / 2.0)
    centers = np.column_stack([x, y])
    centers -= centers.mean(axis=0)
    centers.setflags(write=False)
    return BeamGrid(centers, float(theta_3db), int(rows), int(cols), float(g_max_db))


def drop_users(grid: BeamGrid, rng: np.random.Generator) -> UserSet:
    """Drop one user uniformly over the theta_3db disk of each beam.

    Draw order (radius array, then angle array) is fixed, so a given
    stream state always yields the same drop.
    """
    n = grid.n_beams
    radius = grid.theta_3db * np.sqrt(rng.random(n))
    angle = 2.0 * np.pi * rng.random(n)
    offsets = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    positions = grid.beam_centers + offsets
    positions.setflags(write=False)
    home = np.arange(n)
    home.setflags(write=False)
    return UserSet(positions, home)


def pattern_amplitude(u):
    """Normalized tapered-aperture amplitude f(u) = J1(u)/(2u) + 36*J3(u)/u^3.

    f(0) = 1 (analytic limit 1/4 + 36/48); f(U_3DB)^2 = 1/2. The sign
    oscillates in the sidelobes, so callers wanting an amplitude gain take
    the absolute value.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.ones_like(u)
    nz = u != 0.0
    un = u[nz]
    out[nz] = bessel_j(1, un) / (2.0 * un) + 36.0 * bessel_j(3, un) / un**3
    return float(out[0]) if scalar else out


def beam_gain_matrix(grid: BeamGrid, users: UserSet, min_gain_db=None) -> GainMatrix:
    """Amplitude gains from every beam boresight toward every user.

    Power gain toward off-axis angle theta is
    G(theta) = g_max_lin * f(u)^2 with u = U_3DB * sin(theta)/sin(theta_3db).
    `min_gain_db` optionally floors the power pattern relative to the peak
    (real payloads specify a sidelobe floor); default keeps the natural
    sidelobes.
    """
    if users.positions.shape != grid.beam_centers.shape:
        raise ValueError("user set inconsistent with grid")
    delta = grid.beam_centers[:, None, :] - users.positions[None, :, :]
    theta = np.hypot(delta[:, :, 0], delta[:, :, 1])  # off-axis angle, degrees
    u = U_3DB * np.sin(np.radians(theta)) / np.sin(np.radians(grid.theta_3db))
    power = grid.g_max_lin * pattern_amplitude(u) ** 2
    if min_gain_db is not None:
        power = np.maximum(power, grid.g_max_lin * 10.0 ** (min_gain_db / 10.0))
    entries = np.sqrt(power)
    entries.setflags(write=False)
    return GainMatrix(entries)


def export_layout_csv(grid: BeamGrid, users: UserSet, path, plan=None) -> None:
    """Write the beam/user layout as CSV; appends color_id when a plan is given."""
    header = "beam_id,center_x_deg,center_y_deg,user_x_deg,user_y_deg"
    if plan is not None:
        header += ",color_id"
    lines = [header]
    for i in range(grid.n_beams):
        cx, cy = grid.beam_centers[i]
        ux, uy = users.positions[i]
        row = f"{i},{cx:.9g},{cy:.9g},{ux:.9g},{uy:.9g}"
        if plan is not None:
            row += f",{plan.color_of[i]}"
        lines.append(row)
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing layout CSV to {path}: {exc}") from exc
