"""Frequency/polarization color plans over the beam lattice.

Four orthogonal colors (2 spectrum segments x 2 polarizations) are assigned
either in the conventional interleaved way (scenario 1) or as contiguous
quadrant blocks (scenario 2). Co-channel beams of one color form the
cluster a single gateway decodes jointly.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import BeamGrid

N_COLORS_DEFAULT = 4


@dataclass(frozen=True)
class ColorPlan:
    color_of: np.ndarray        # (N,) beam -> color index
    clusters: tuple             # per color, ordered array of member beams
    n_colors: int
    cluster_size: int

    @classmethod
    def from_colors(cls, color_of, n_colors: int) -> "ColorPlan":
        """Build a plan from a beam->color map; color classes must be equal-sized."""
        color_of = np.asarray(color_of, dtype=int)
        if color_of.ndim != 1 or color_of.size == 0:
            raise ValueError("color_of must be a nonempty 1-D index array")
        if n_colors < 1 or color_of.min() < 0 or color_of.max() >= n_colors:
            raise ValueError("color indices out of range")
        if color_of.size % n_colors != 0:
            raise ValueError(
                f"{color_of.size} beams cannot be split into {n_colors} equal color classes"
            )
        clusters = tuple(np.flatnonzero(color_of == c) for c in range(n_colors))
        size = color_of.size // n_colors
        if any(len(cl) != size for cl in clusters):
            raise ValueError("color classes are not equal-sized")
        color_of.setflags(write=False)
        for cl in clusters:
            cl.setflags(write=False)
        return cls(color_of, clusters, int(n_colors), int(size))


def _require_even(grid: BeamGrid, scenario: int) -> None:
    if grid.rows % 2 or grid.cols % 2:
        raise ValueError(
            f"scenario-{scenario} coloring needs even grid dimensions so the four "
            f"color classes are equal-sized; got {grid.rows}x{grid.cols}"
        )


def color_scenario1(grid: BeamGrid) -> ColorPlan:
    """Conventional interleaved 4-color plan: color = 2*(row%2) + (col%2).

    Co-channel beams are separated by two lattice steps along each axis, so
    no two adjacent beams share a color.
    """
    _require_even(grid, 1)
    r = np.repeat(np.arange(grid.rows), grid.cols)
    c = np.tile(np.arange(grid.cols), grid.rows)
    return ColorPlan.from_colors(2 * (r % 2) + (c % 2), N_COLORS_DEFAULT)


def color_scenario2(grid: BeamGrid) -> ColorPlan:
    """Adjacent co-channel plan: one contiguous quadrant block per color."""
    _require_even(grid, 2)
    r = np.repeat(np.arange(grid.rows), grid.cols)
    c = np.tile(np.arange(grid.cols), grid.rows)
    return ColorPlan.from_colors(
        2 * (r >= grid.rows // 2).astype(int) + (c >= grid.cols // 2).astype(int),
        N_COLORS_DEFAULT,
    )


def cochannel_set(plan: ColorPlan, beam: int) -> np.ndarray:
    """Beams sharing `beam`'s color, excluding `beam` itself (ordered)."""
    n = plan.color_of.size
    if not 0 <= beam < n:
        raise ValueError(f"beam index {beam} out of range [0, {n})")
    cluster = plan.clusters[plan.color_of[beam]]
    return cluster[cluster != beam]
