"""Monte Carlo sweep driver: seeded iterations, aggregation, CSV output.

Each iteration draws a user set, builds the gain matrix, samples one fading
vector, and evaluates every requested system at every SNR point from that
same draw (common random numbers, so system comparisons are variance
reduced). Per-iteration random streams come from a counter-based Philox
generator keyed by (seed, iteration), and per-iteration results land in a
preallocated array, so the outcome is identical for any worker count.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import capacity
from .capacity import SYSTEM_TAGS
from .channel import FadingParams, sample_rician, sample_shadowing
from .coloring import color_scenario1, color_scenario2
from .geometry import BeamGrid, beam_gain_matrix, build_beam_grid, drop_users
from .linkbudget import LinkBudget

_ANALYTIC_TAGS = ("lb_full", "lb_clustered", "asymptote")
# reserved counter block for the frozen user drop; iteration i uses block i << 128
_FIXED_USERS_BLOCK = 1 << 191


@dataclass
class RunConfig:
    """Full description of one sweep run; defaults follow the S-band MSS budget.

    `g_max_db` defaults to 0 (unit-peak beam pattern): a uniform gain scale
    shifts every capacity curve along the SNR axis by the same amount, so
    the swept gamma axis only matches the -5..45 dB operating range when
    the peak gain is kept out of B. Absolute link budgets recover the
    52 dBi peak through transmit_snr(include_sat_gain=True).
    """

    rows: int = 10
    cols: int = 10
    theta_3db_deg: float = 0.4
    g_max_db: float = 0.0
    min_gain_db: float = None
    k_factor_db: float = 13.0
    mu_m: float = -2.62
    sigma_m: float = 1.6
    budget: LinkBudget = field(default_factory=LinkBudget)
    gamma_min_db: float = -5.0
    gamma_max_db: float = 45.0
    gamma_step_db: float = 2.5
    iterations: int = 1000
    seed: int = 42
    scenarios: tuple = (1, 2)
    systems: tuple = SYSTEM_TAGS
    fixed_users: bool = False
    threads: int = 1
    out: str = "sweep.csv"

    def __post_init__(self):
        self.scenarios = tuple(sorted(set(int(s) for s in self.scenarios)))
        self.systems = tuple(self.systems)
        self.validate()

    def validate(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid dimensions must be >= 1, got {self.rows}x{self.cols}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not self.gamma_step_db > 0.0:
            raise ValueError(f"gamma_step_db must be positive, got {self.gamma_step_db}")
        if self.gamma_max_db < self.gamma_min_db:
            raise ValueError("gamma_max_db must be >= gamma_min_db")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if not set(self.scenarios) <= {1, 2}:
            raise ValueError(f"scenarios must be a subset of {{1, 2}}, got {self.scenarios}")
        unknown = set(self.systems) - set(SYSTEM_TAGS)
        if unknown:
            raise ValueError(f"unknown system tags: {sorted(unknown)}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")

    def gamma_grid(self) -> np.ndarray:
        """Inclusive dB grid from gamma_min to gamma_max in gamma_step steps."""
        return np.arange(
            self.gamma_min_db, self.gamma_max_db + self.gamma_step_db / 2, self.gamma_step_db
        )

    def fading(self) -> FadingParams:
        return FadingParams(self.k_factor_db, self.mu_m, self.sigma_m)

    def grid(self) -> BeamGrid:
        return build_beam_grid(self.rows, self.cols, self.theta_3db_deg, self.g_max_db)

    def active_systems(self) -> tuple:
        """Requested systems, with clustered variants gated by `scenarios`."""
        active = []
        for tag in SYSTEM_TAGS:  # canonical order
            if tag not in self.systems:
                continue
            if tag == "clustered_s1" and 1 not in self.scenarios:
                continue
            if tag == "clustered_s2" and 2 not in self.scenarios:
                continue
            active.append(tag)
        return tuple(active)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "budget" in data and isinstance(data["budget"], dict):
            budget_names = {f.name for f in fields(LinkBudget)}
            bad = set(data["budget"]) - budget_names
            if bad:
                raise ValueError(f"unknown budget keys: {sorted(bad)}")
            data["budget"] = LinkBudget(**data["budget"])
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class SweepResult:
    """Per (gamma, system) aggregates of one Monte Carlo sweep."""

    gamma_db: np.ndarray
    systems: tuple
    mean: dict        # tag -> (n_gamma,) mean spectral efficiency, bits/s/Hz
    std: dict         # tag -> sample standard deviation
    ci95_half: dict   # tag -> 1.96 * std / sqrt(iterations)
    iterations: int
    user_bandwidth_hz: float


def iteration_stream(seed: int, iteration: int) -> np.random.Generator:
    """Counter-based stream for one iteration: disjoint 2^128 counter blocks."""
    return np.random.Generator(np.random.Philox(key=seed, counter=iteration << 128))


def draw_iteration(grid: BeamGrid, params: FadingParams, rng, users=None, min_gain_db=None):
    """One iteration's draws in fixed order: users, gain matrix, h, xi."""
    if users is None:
        users = drop_users(grid, rng)
    b = beam_gain_matrix(grid, users, min_gain_db=min_gain_db)
    h = sample_rician(params, rng, size=grid.n_beams)
    xi = sample_shadowing(params, rng, size=grid.n_beams)
    return users, b, h, xi


def _iteration_values(config, grid, params, plans, systems, gammas_lin, frozen_users, it):
    """(n_systems, n_gamma) spectral efficiencies of iteration `it`."""
    rng = iteration_stream(config.seed, it)
    users, b, h, xi = draw_iteration(
        grid, params, rng, users=frozen_users, min_gain_db=config.min_gain_db
    )
    z = b.entries * (h * np.sqrt(xi))[None, :]

    # gamma-independent precomputation, one per requested system family
    grams = {}
    if "full_mud" in systems:
        grams["full_mud"] = [capacity.gram_matrix(z)]
    for tag, scenario in (("clustered_s1", 1), ("clustered_s2", 2)):
        if tag in systems:
            grams[tag] = [
                capacity.gram_matrix(z[np.ix_(cl, cl)]) for cl in plans[scenario].clusters
            ]
    conv = (
        capacity.conventional_groups(plans[1], z) if "conventional" in systems else None
    )
    lndet_full = None
    if "lb_full" in systems or "asymptote" in systems:
        ok, lndet_full = capacity.bb_logdet(b.entries)
        if not ok:
            lndet_full = None  # degenerate: bound collapses, asymptote undefined
    lndet_clusters = None
    if "lb_clustered" in systems:
        lndet_clusters = [
            capacity.bb_logdet(b.entries[np.ix_(cl, cl)]) for cl in plans[1].clusters
        ]

    n = grid.n_beams
    values = np.empty((len(systems), gammas_lin.size))
    for ig, gl in enumerate(gammas_lin):
        for isys, tag in enumerate(systems):
            if tag in grams:
                values[isys, ig] = sum(
                    capacity.logdet_from_gram(w, gl) for w in grams[tag]
                )
            elif tag == "conventional":
                values[isys, ig] = capacity.conventional_from_groups(conv, plans[1].n_colors, gl)
            elif tag == "lb_full":
                values[isys, ig] = (
                    0.0 if lndet_full is None
                    else capacity.lb_from_lndet(lndet_full, n, params, gl)
                )
            elif tag == "lb_clustered":
                values[isys, ig] = sum(
                    capacity.lb_from_lndet(ld, cl.size, params, gl) if ok else 0.0
                    for (ok, ld), cl in zip(lndet_clusters, plans[1].clusters)
                )
            elif tag == "asymptote":
                if lndet_full is None:
                    raise ValueError("singular B B^dag: high-SNR asymptote undefined")
                values[isys, ig] = capacity.asymptote_from_lndet(lndet_full, n, params, gl)
    return values


def run_sweep(config: RunConfig) -> SweepResult:
    """Run the configured Monte Carlo sweep over all systems and SNR points.

    Any numerical failure aborts with the iteration index and seed so the
    draw can be replayed. Results do not depend on `threads`.
    """
    config.validate()
    gamma_db = config.gamma_grid()
    if gamma_db.size == 0:
        raise ValueError("gamma grid is empty")
    systems = config.active_systems()
    grid = config.grid()
    params = config.fading()
    plans = {1: color_scenario1(grid), 2: color_scenario2(grid)} if grid.rows % 2 == 0 and grid.cols % 2 == 0 else {}
    needs_plan = {"clustered_s1", "clustered_s2", "conventional", "lb_clustered"}
    if needs_plan & set(systems) and not plans:
        raise ValueError(
            "clustered/conventional systems need even grid dimensions for the 4-color plans"
        )
    frozen_users = None
    if config.fixed_users:
        frozen_rng = np.random.Generator(
            np.random.Philox(key=config.seed, counter=_FIXED_USERS_BLOCK)
        )
        frozen_users = drop_users(grid, frozen_rng)

    # derive linear values through SnrPoint so sweep evaluations reproduce
    # direct evaluator calls bit for bit
    gammas_lin = np.array([capacity.SnrPoint(g).gamma_lin for g in gamma_db])
    values = np.empty((config.iterations, len(systems), gamma_db.size))

    def compute(it):
        try:
            values[it] = _iteration_values(
                config, grid, params, plans, systems, gammas_lin, frozen_users, it
            )
        except Exception as exc:
            raise RuntimeError(
                f"iteration {it} failed (seed {config.seed}; replay with "
                f"iteration_stream({config.seed}, {it})): {exc}"
            ) from exc

    if config.threads == 1:
        for it in range(config.iterations):
            compute(it)
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            for _ in pool.map(compute, range(config.iterations)):
                pass

    mean = values.mean(axis=0)
    if config.iterations > 1:
        std = values.std(axis=0, ddof=1)
    else:
        std = np.zeros_like(mean)
    ci = 1.96 * std / np.sqrt(config.iterations)
    return SweepResult(
        gamma_db=gamma_db,
        systems=systems,
        mean={tag: mean[i] for i, tag in enumerate(systems)},
        std={tag: std[i] for i, tag in enumerate(systems)},
        ci95_half={tag: ci[i] for i, tag in enumerate(systems)},
        iterations=config.iterations,
        user_bandwidth_hz=config.budget.user_bandwidth_hz,
    )


def bounds_config(config: RunConfig) -> RunConfig:
    """Analytic-only variant of a config: bound/asymptote systems, one draw."""
    systems = tuple(t for t in config.systems if t in _ANALYTIC_TAGS) or _ANALYTIC_TAGS
    return replace(config, systems=systems, iterations=1)


def summarize(result: SweepResult) -> dict:
    """Cross-system report: per-gamma ratios, MUD/conventional crossover, slopes.

    Requires the conventional system plus at least one MUD system; missing
    tags are reported in the raised error.
    """
    have = set(result.systems)
    mud_tags = [t for t in ("full_mud", "clustered_s1", "clustered_s2") if t in have]
    missing = []
    if "conventional" not in have:
        missing.append("conventional")
    if not mud_tags:
        missing.append("one of full_mud/clustered_s1/clustered_s2")
    if missing:
        raise ValueError(f"summary needs missing systems: {missing}")

    conv = result.mean["conventional"]
    report = {"gamma_db": result.gamma_db, "ratios": {}, "crossover_gamma_db": None, "slopes": {}}
    if "full_mud" in have:
        report["ratios"]["full_over_conventional"] = result.mean["full_mud"] / conv
    clustered_tag = next((t for t in ("clustered_s1", "clustered_s2") if t in have), None)
    if clustered_tag:
        ratio = result.mean[clustered_tag] / conv
        report["ratios"]["clustered_over_conventional"] = ratio
        above = np.flatnonzero(ratio >= 1.25)
        if above.size:
            report["crossover_gamma_db"] = float(result.gamma_db[above[0]])
    if {"clustered_s1", "clustered_s2"} <= have:
        report["ratios"]["s2_over_s1"] = result.mean["clustered_s2"] / result.mean["clustered_s1"]
    if result.gamma_db.size >= 2:
        dg = result.gamma_db[-1] - result.gamma_db[-2]
        for tag in result.systems:
            report["slopes"][tag] = float(
                (result.mean[tag][-1] - result.mean[tag][-2]) / dg
            )
    return report


def format_summary(report: dict) -> str:
    lines = ["gamma_db  " + "  ".join(f"{name:>28s}" for name in report["ratios"])]
    for i, g in enumerate(report["gamma_db"]):
        vals = "  ".join(f"{report['ratios'][name][i]:28.3f}" for name in report["ratios"])
        lines.append(f"{g:8.1f}  {vals}")
    cross = report["crossover_gamma_db"]
    lines.append(
        "clustered first exceeds conventional by 25% at gamma = "
        + (f"{cross:.1f} dB" if cross is not None else "never in sweep")
    )
    if report["slopes"]:
        lines.append("high-SNR slopes (bits/s/Hz per dB, top two gamma points):")
        for tag, slope in report["slopes"].items():
            lines.append(f"  {tag:>14s}: {slope:10.3f}")
    return "\n".join(lines)


def emit_csv(result: SweepResult, path) -> None:
    """Write the sweep as CSV, sorted by (system, gamma), 9 significant digits."""
    lines = ["gamma_db,system,mean_se_bps_hz,std_se,ci95_half,throughput_mbps"]
    for tag in sorted(result.systems):
        for i, g in enumerate(result.gamma_db):
            mean = result.mean[tag][i]
            tput = mean * result.user_bandwidth_hz / 1e6
            lines.append(
                f"{g:.9g},{tag},{mean:.9g},{result.std[tag][i]:.9g},"
                f"{result.ci95_half[tag][i]:.9g},{tput:.9g}"
            )
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing sweep CSV to {path}: {exc}") from exc


def load_csv(path) -> dict:
    """Parse an emit_csv file back into {system: {column: array}}."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: i for i, name in enumerate(header)}
    out = {}
    for row in rows:
        tag = row[cols["system"]]
        rec = out.setdefault(tag, {name: [] for name in header if name != "system"})
        for name in rec:
            rec[name].append(float(row[cols[name]]))
    return {
        tag: {name: np.asarray(vals) for name, vals in rec.items()}
        for tag, rec in out.items()
    }
