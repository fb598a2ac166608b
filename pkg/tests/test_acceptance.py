"""Acceptance suite: every system-level requirement at its stated tolerance.

All sweep-based checks run against one shared default run: 10x10 beams,
4 colors, K = 13 dB, (mu, sigma) = (-2.62, 1.6), theta_3dB = 0.4 deg,
gamma from -5 to 45 dB in 2.5 dB steps, 1000 iterations, seed 42.
Each check prints one PASS/FAIL line (run with `pytest -v -s`).

Two checks are expected to fail on this geometry; the failures are real
properties of the model, not regressions — see the 'Known results' section
of the README for the quantitative analysis.
"""

import math

import numpy as np
import pytest

from mudcap.capacity import SnrPoint, conventional_se, logdet_capacity
from mudcap.channel import FadingParams, sample_rician, sample_shadowing
from mudcap.cli import main as cli_main
from mudcap.coloring import ColorPlan
from mudcap.harness import RunConfig, run_sweep

from oracles import det3_cofactor

TARGET_SLOPE = 100.0 * math.log2(10.0) / 10.0  # 33.219 bits/s/Hz per dB


@pytest.fixture(scope="module")
def default_result():
    return run_sweep(RunConfig())


def at(result, tag, gamma_db):
    i = int(np.flatnonzero(np.isclose(result.gamma_db, gamma_db))[0])
    return result.mean[tag][i], result.ci95_half[tag][i]


def report(n, name, ok, detail):
    print(f"ACCEPTANCE {n} ({name}): {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_1_bound_validity(default_result):
    res = default_result
    margin_full = res.mean["lb_full"] - (res.mean["full_mud"] + res.ci95_half["full_mud"])
    margin_clus = res.mean["lb_clustered"] - (
        res.mean["clustered_s1"] + res.ci95_half["clustered_s1"]
    )
    ok = bool(np.all(margin_full <= 0.0) and np.all(margin_clus <= 0.0))
    assert report(
        1,
        "bound validity",
        ok,
        f"max excess over MC+CI: full {margin_full.max():.3g}, "
        f"clustered {margin_clus.max():.3g} (<= 0 required)",
    )


def test_criterion_2_bound_tightness_high_snr(default_result):
    mc, _ = at(default_result, "full_mud", 45.0)
    lb, _ = at(default_result, "lb_full", 45.0)
    gap = (mc - lb) / mc
    assert report(2, "bound tightness at 45 dB", gap < 0.05, f"relative gap {gap:.4f} (< 0.05)")


@pytest.mark.parametrize("tag", ["full_mud", "clustered_s1", "clustered_s2"])
def test_criterion_3_high_snr_slope(default_result, tag):
    hi, _ = at(default_result, tag, 45.0)
    lo, _ = at(default_result, tag, 42.5)
    slope = (hi - lo) / 2.5
    ok = abs(slope - TARGET_SLOPE) <= 0.05 * TARGET_SLOPE
    assert report(
        3,
        f"high-SNR slope, {tag}",
        ok,
        f"slope {slope:.3f} vs {TARGET_SLOPE:.3f} +/- 5%",
    ), (
        f"{tag} slope between 42.5 and 45 dB is {slope:.3f} bits/s/Hz/dB, outside "
        f"{TARGET_SLOPE:.2f} +/- 5%. The beam-overlap Gram matrix B*B^T of the "
        "sqrt(3)*theta_3dB hexagonal layout has near-null eigenmodes (lndet ~ -129), "
        "so the slope converges to N*log2(10)/10 only above ~55 dB."
    )


def test_criterion_4_mud_gain_over_conventional(default_result):
    r20 = at(default_result, "full_mud", 20.0)[0] / at(default_result, "conventional", 20.0)[0]
    r40 = at(default_result, "full_mud", 40.0)[0] / at(default_result, "conventional", 40.0)[0]
    ok = r20 >= 2.0 and r40 >= 3.0
    assert report(
        4,
        "MUD/conventional gain",
        ok,
        f"ratio {r20:.2f} at 20 dB (>= 2.0), {r40:.2f} at 40 dB (>= 3.0)",
    )


def test_criterion_5_conventional_saturation(default_result):
    conv = at(default_result, "conventional", 45.0)[0] - at(default_result, "conventional", 35.0)[0]
    clus = at(default_result, "clustered_s1", 45.0)[0] - at(default_result, "clustered_s1", 35.0)[0]
    ok = conv < 0.1 * clus
    assert report(
        5,
        "conventional saturation",
        ok,
        f"conventional growth {conv:.2f} vs 10% of clustered growth {0.1 * clus:.2f}",
    )


def test_criterion_6_scenario_ordering(default_result):
    res = default_result
    low = res.gamma_db <= 25.0
    s1, s2 = res.mean["clustered_s1"], res.mean["clustered_s2"]
    low_ok = bool(np.all(s2[low] >= s1[low] - res.ci95_half["clustered_s1"][low]))
    high = res.gamma_db >= 35.0
    rel = np.abs(s2[high] - s1[high]) / s1[high]
    high_ok = bool(np.all(rel < 0.05))
    worst_low = float(np.min(s2[low] - s1[low] + res.ci95_half["clustered_s1"][low]))
    detail = (
        f"low-SNR clause {'ok' if low_ok else f'violated (worst margin {worst_low:.2f})'}; "
        f"high-SNR max relative gap {rel.max():.4f} (< 0.05)"
    )
    assert report(6, "scenario ordering", low_ok and high_ok, detail), (
        "adjacent co-channel clustering (scenario 2) tracks interleaved clustering "
        "(scenario 1) only up to ~15 dB on this geometry: the -9.8 dB adjacent-beam "
        "overlap costs scenario-2 clusters ~79 nats of sum log-det, so scenario 1 "
        f"leads by ~10% at 35-45 dB (measured max gap {rel.max():.3f}) and the "
        "crossover sits near 16 dB rather than 25 dB."
    )


def test_criterion_7_oracle_equivalence():
    rng = np.random.default_rng(4242)
    gamma = SnrPoint(12.0)
    worst = 0.0
    for _ in range(100):
        z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        a = np.eye(3) + gamma.gamma_lin * (z.conj().T @ z)
        expect = math.log2(det3_cofactor(a).real)
        got = logdet_capacity(z, gamma).value
        worst = max(worst, abs(got - expect) / abs(expect))
    plan = ColorPlan.from_colors(np.zeros(2, dtype=int), 1)
    z2 = np.array([[1.0, 0.5], [0.5, 1.0]], dtype=complex)
    hand = conventional_se(plan, z2, SnrPoint(10.0 * math.log10(4.0))).value
    hand_err = abs(hand - 2.0 * math.log2(3.0))
    ok = worst < 1e-9 and hand_err < 1e-12
    assert report(
        7,
        "oracle equivalence",
        ok,
        f"max log-det rel err {worst:.2e} (< 1e-9), hand-case err {hand_err:.2e} (< 1e-12)",
    )


def test_criterion_8_sampler_statistics():
    params = FadingParams(k_factor_db=13.0, mu_m=-2.62, sigma_m=1.6)
    rng = np.random.default_rng(88)
    n = 1_000_000
    h = sample_rician(params, rng, size=n)
    xi = sample_shadowing(params, rng, size=n)
    power = float(np.mean(np.abs(h) ** 2))
    mean_h = float(np.mean(h.real))
    k = 10.0**1.3
    target_mean = math.sqrt(k / (k + 1.0))
    ln = np.log(xi)
    checks = {
        "rician power": abs(power - 1.0) <= 0.005,
        "rician mean": abs(mean_h - target_mean) <= 0.005,
        "lognormal mu": abs(float(np.mean(ln)) + 2.62) <= 0.01,
        "lognormal sigma": abs(float(np.std(ln)) - 1.6) <= 0.01,
        "lognormal median": abs(float(np.median(xi)) - math.exp(-2.62))
        <= 0.02 * math.exp(-2.62),
    }
    ok = all(checks.values())
    assert report(
        8,
        "sampler statistics",
        ok,
        f"E|h|^2={power:.4f}, E[h]={mean_h:.4f} (target {target_mean:.4f}), "
        f"ln-xi mean={np.mean(ln):.4f}, std={np.std(ln):.4f}; "
        + ("all within tolerance" if ok else f"failures: {[k for k, v in checks.items() if not v]}"),
    )


def test_criterion_9_thread_determinism(tmp_path):
    outs = []
    for threads, name in [(1, "t1.csv"), (4, "t4.csv")]:
        out = tmp_path / name
        code = cli_main(
            [
                "simulate", "--seed", "42", "--iterations", "50",
                "--threads", str(threads), "--out", str(out), "--no-plot",
            ]
        )
        assert code == 0
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1]
    assert report(
        9,
        "thread-count determinism",
        ok,
        f"CSV bytes identical across --threads 1 vs 4: {ok}",
    )
