"""Acceptance gate: one test per criterion, at the stated tolerances.

Each test prints a single ``[criterion N] PASS`` line (visible with
``pytest -s`` or in captured output) including the measured quantities and
elapsed time, and asserts the stated runtime budget where one is given.
Monte Carlo sizes are the stated ones; seeds are fixed so the suite is
reproducible.
"""

import dataclasses
import time

import numpy as np
import pytest
from scipy import stats
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from satrelay.analytic import (
    ContactLawConfig,
    SigmaSingularityError,
    cap_fraction,
    contact_ccdf_overlap,
    contact_ccdf_simple,
    contact_pdf_overlap,
    coverage_link_integral,
    eq4_discrepancy_report,
    overlap_support,
    render_discrepancy_markdown,
    simple_contact_pdf,
)
from satrelay.channel import (
    ChannelParams,
    GridInverseCdf,
    fading_threshold_coefficient,
    fit_inverse_cdf,
    sr_cdf,
)
from satrelay.constants import EARTH_RADIUS_KM
from satrelay.geometry import SphericalCap, SurfacePoint
from satrelay.output import emit_csv
from satrelay.point_process import (
    RngStream,
    nearest_in_region,
    sample_bpp,
    sample_directions_in_cap,
    sample_ppp,
    sample_uniform_directions,
)
from satrelay.simulator import (
    ScenarioConfig,
    estimate_conditioned_links,
    estimate_coverage,
    greedy_route,
)
from satrelay.sweep import SweepSpec, preset_sweeps, run_sweep

RE = EARTH_RADIUS_KM
THETA_M = 65.0 * np.pi / 180.0
TABLE_II = ChannelParams()


def _report(num: int, detail: str, t0: float, budget_s: float | None = None) -> None:
    elapsed = time.monotonic() - t0
    print(f"[criterion {num:2d}] PASS {detail} ({elapsed:.1f}s)")
    if budget_s is not None:
        assert elapsed < budget_s, f"criterion {num} exceeded {budget_s}s budget"


def test_c01_point_process_correctness():
    t0 = time.monotonic()
    gen = RngStream(1001).generator()
    n = 1_000_000
    dirs = sample_uniform_directions(gen, n)

    mean_tol = 3.0 / np.sqrt(3.0 * n)
    worst_mean = np.abs(dirs.mean(axis=0)).max()
    assert worst_mean < mean_tol

    octant = (dirs[:, 0] > 0) * 4 + (dirs[:, 1] > 0) * 2 + (dirs[:, 2] > 0)
    counts = np.bincount(octant, minlength=8)
    chi2 = ((counts - n / 8.0) ** 2 / (n / 8.0)).sum()
    chi2_crit = stats.chi2.ppf(1 - 0.001, 7)
    assert chi2 < chi2_crit

    lam = 1.96e-7
    ppp_counts = np.array([sample_ppp(gen, lam).count for _ in range(10_000)])
    dispersion = ppp_counts.var(ddof=1) / ppp_counts.mean()
    assert 0.95 < dispersion < 1.05

    _report(
        1,
        f"sphere means {worst_mean:.2e} < {mean_tol:.2e}, octant chi2 "
        f"{chi2:.1f} < {chi2_crit:.1f}, PPP dispersion {dispersion:.4f}",
        t0,
        budget_s=30.0,
    )


def test_c02_sr_fading_fidelity():
    t0 = time.monotonic()
    sr = TABLE_II.sr
    fit = fit_inverse_cdf(sr, degree=10, z_max=50)
    gen = RngStream(1002).generator()
    n = 1_000_000
    draws = fit.sample(gen, n)

    xs = np.sort(draws)
    ks = np.abs(sr_cdf(xs, sr, z_max=50) - np.arange(1, n + 1) / n).max()
    assert ks < 0.01

    grid_x = np.linspace(0.0, 60.0, 200_001)
    oracle_mean = np.trapezoid(1.0 - sr_cdf(grid_x, sr, z_max=50), grid_x)
    assert abs(draws.mean() / oracle_mean - 1.0) < 0.02

    _report(
        2,
        f"KS {ks:.4f} < 0.01, sample mean {draws.mean():.4f} vs oracle "
        f"{oracle_mean:.4f} (2b0+omega = {2 * sr.b0 + sr.omega:.4f})",
        t0,
        budget_s=60.0,
    )


def test_c03_contact_law_cross_validation():
    t0 = time.monotonic()
    Ns, ds, reps = 1000, 550.0, 100_000
    R = RE + ds
    gen = RngStream(1003).generator()
    nearest = np.empty(reps)
    for i in range(reps):
        c = sample_bpp(gen, Ns, ds)
        cos_best = c.directions[:, 2].max()  # observer fixed at the north pole
        nearest[i] = np.sqrt(R * R + RE * RE - 2.0 * R * RE * cos_best)
    xs = np.sort(nearest)
    cdf_emp = np.arange(1, reps + 1) / reps
    cdf_ana = 1.0 - np.array([contact_ccdf_simple(x, Ns, ds) for x in xs])
    ks = np.abs(cdf_emp - cdf_ana).max()
    assert ks < 0.01
    _report(3, f"nearest-satellite KS {ks:.4f} < 0.01 over {reps} realizations", t0, 60.0)


def test_c04_overlap_pdf_arbiter(tmp_path):
    t0 = time.monotonic()
    cfg = ContactLawConfig(
        Ns=100, ds=550.0, theta_m1=THETA_M, theta_m2=THETA_M, ground_separation_d=1800.0
    )
    R = RE + cfg.ds
    delta = cfg.gateway_angle
    t_dir = np.array([0.0, 0.0, 1.0])
    r_dir = np.array([np.sin(delta), 0.0, np.cos(delta)])
    cap1 = SphericalCap(t_dir, cfg.psi1)
    p_cap = cap_fraction(cfg.psi1)
    cos_psi2 = np.cos(cfg.psi2)

    # one million Monte Carlo draws of the nearest-in-overlap distance
    gen = RngStream(1004).generator()
    n_draws, chunk = 1_000_000, 25_000
    collected = []
    total = 0
    while total < n_draws:
        counts = gen.binomial(cfg.Ns, p_cap, size=chunk)
        dirs = sample_directions_in_cap(gen, int(counts.sum()), cap1)
        score = np.where(dirs @ r_dir >= cos_psi2, dirs @ t_dir, -np.inf)
        starts = np.concatenate(([0], np.cumsum(counts)))[:-1]
        seg = counts > 0
        best = np.full(chunk, -np.inf)
        best[seg] = np.maximum.reduceat(score, starts[seg])
        ok = np.isfinite(best)
        d = np.sqrt(R * R + RE * RE - 2.0 * R * RE * best[ok])
        collected.append(d)
        total += len(d)
    d_all = np.concatenate(collected)[:n_draws]

    lo, hi = overlap_support(cfg)
    edges = np.linspace(lo, hi, 51)
    ccdf = np.array([contact_ccdf_overlap(e, cfg) for e in edges])
    mass = 1.0 - ccdf[-1]
    probs = (ccdf[:-1] - ccdf[1:]) / mass
    hist, _ = np.histogram(d_all, bins=edges)
    expected = probs * n_draws
    chi2_lens = ((hist - expected) ** 2 / expected).sum()
    chi2_crit = stats.chi2.ppf(0.99, 49)
    assert chi2_lens < chi2_crit, "validated lens variant must match the histogram"

    # literal transcription under the sigma-17-as-cosine decision: either it
    # matches the histogram too, or the discrepancy report (naming the
    # failing sigma terms) satisfies the criterion
    literal_ok = True
    literal_note = ""
    try:
        mids = 0.5 * (edges[:-1] + edges[1:])
        pdf_vals = np.array([contact_pdf_overlap(m, cfg, method="paper") for m in mids])
        lit_probs = pdf_vals * np.diff(edges)
        lit_probs /= lit_probs.sum()
        chi2_lit = ((hist - lit_probs * n_draws) ** 2 / (lit_probs * n_draws)).sum()
        literal_ok = chi2_lit < chi2_crit
        literal_note = f"literal chi2 {chi2_lit:.1f}"
    except SigmaSingularityError as exc:
        literal_ok = False
        literal_note = f"literal evaluation fails ({exc})"

    if not literal_ok:
        report = eq4_discrepancy_report(cfg)
        assert report["implicated_sigma_terms"], "report must name failing sigma terms"
        out = tmp_path / "eq4_discrepancy.md"
        out.write_text(render_discrepancy_markdown(report))
        text = out.read_text()
        for name in report["implicated_sigma_terms"]:
            assert name in text
        literal_note += (
            f"; discrepancy report written naming {report['implicated_sigma_terms']}"
        )

    _report(
        4,
        f"lens chi2 {chi2_lens:.1f} < {chi2_crit:.1f} on 50 bins; {literal_note}",
        t0,
        budget_s=300.0,
    )


def test_c05_end_to_end_decomposition():
    t0 = time.monotonic()
    base = ScenarioConfig(Ns=10_000, n_trials=60_000)
    r1 = estimate_conditioned_links(dataclasses.replace(base, seed=2001))
    r2 = estimate_conditioned_links(dataclasses.replace(base, seed=2002))
    r3 = estimate_conditioned_links(dataclasses.replace(base, seed=2003))
    p1, n1 = r1["p_uplink"], r1["n_valid"]
    p2, n2 = r2["p_downlink"], r2["n_valid"]
    joint, n3 = r3["p_joint"], r3["n_valid"]
    product = p1 * p2
    var_prod = p2 * p2 * p1 * (1 - p1) / n1 + p1 * p1 * p2 * (1 - p2) / n2
    se = np.sqrt(var_prod + joint * (1 - joint) / n3)
    assert abs(joint - product) < 3.0 * se
    _report(
        5,
        f"joint {joint:.5f} vs product {product:.5f} "
        f"(diff {joint - product:+.5f}, 3se {3 * se:.5f})",
        t0,
        budget_s=120.0,
    )


def test_c06_coverage_integral_vs_simulation():
    t0 = time.monotonic()
    Ns, ds = 10_000, 550.0
    psi = THETA_M / 2.0
    R = RE + ds
    gamma_db = 12.0
    c = fading_threshold_coefficient(TABLE_II, TABLE_II.surface_noise_db, gamma_db, True)

    # Monte Carlo side: closed-form inverse of the cap-restricted contact
    # law plus near-exact fading inversion, independent of the quadrature
    gen = RngStream(1006).generator()
    n = 1_000_000
    s_edge = ((1.0 + np.cos(psi)) / 2.0) ** Ns
    s = s_edge + (1.0 - s_edge) * gen.random(n)
    cos_phi = 2.0 * s ** (1.0 / Ns) - 1.0
    D = np.sqrt(R * R + RE * RE - 2.0 * R * RE * cos_phi)
    h = GridInverseCdf.build(TABLE_II.sr).sample(gen, n)
    mc = float((h >= c * D * D).mean())

    from satrelay.geometry import slant_range

    d_edge = slant_range(psi, R, RE)
    analytic = coverage_link_integral(
        lambda x: simple_contact_pdf(x, Ns, ds), TABLE_II.sr, c, support=(ds, d_edge)
    )
    se = np.sqrt(mc * (1.0 - mc) / n)
    assert abs(mc - analytic) < 2.0 * se
    _report(
        6,
        f"integral {analytic:.6f} vs MC {mc:.6f} (diff {mc - analytic:+.2e}, "
        f"2se {2 * se:.2e})",
        t0,
        budget_s=180.0,
    )


def test_c07_fig7_saturation_trend():
    t0 = time.monotonic()
    base = ScenarioConfig(n_trials=100_000, seed=3007)
    (spec,) = preset_sweeps("fig7", base)
    rows = run_sweep(spec, workers=2)
    assert all(row["error"] == "" for row in rows)
    p = [row["p_hat"] for row in rows]
    lo = [row["ci_low"] for row in rows]
    hi = [row["ci_high"] for row in rows]
    # nondecreasing beyond CI overlap: a real decrease must separate the CIs
    for i in range(len(p) - 1):
        assert p[i + 1] >= p[i] or hi[i + 1] >= lo[i], (
            f"decrease beyond CI overlap between Ns={rows[i]['value']} "
            f"and Ns={rows[i + 1]['value']}"
        )
    # top-two saturation: each point estimate inside the other's CI
    assert lo[3] <= p[2] <= hi[3]
    assert lo[2] <= p[3] <= hi[2]
    _report(
        7,
        "coverage " + " -> ".join(f"{v:.4f}" for v in p) + " over Ns "
        + str([row["value"] for row in rows]),
        t0,
        budget_s=600.0,
    )


def test_c08_fig8_altitude_ordering():
    t0 = time.monotonic()
    low = estimate_coverage(
        ScenarioConfig(Ns=10_000, ds=550.0, n_trials=100_000, seed=3008), workers=2
    )
    high = estimate_coverage(
        ScenarioConfig(Ns=10_000, ds=1500.0, n_trials=100_000, seed=3008), workers=2
    )
    assert low.ci_low > high.ci_high, "altitude ordering must hold beyond CI overlap"
    _report(
        8,
        f"coverage(550 km) {low.p_hat:.4f} [{low.ci_low:.4f},{low.ci_high:.4f}] > "
        f"coverage(1500 km) {high.p_hat:.4f} [{high.ci_low:.4f},{high.ci_high:.4f}]",
        t0,
    )


def test_c09_combined_dominance():
    t0 = time.monotonic()
    n = 100_000
    seed = 3009
    est_tsr, mask_tsr = estimate_coverage(
        ScenarioConfig(Ns=1000, mode="tsr_any_pair", n_trials=n, seed=seed),
        return_mask=True,
    )
    est_comb, mask_comb = estimate_coverage(
        ScenarioConfig(Ns=1000, mode="combined", n_trials=n, seed=seed),
        return_mask=True,
    )
    violations = int((mask_tsr & ~mask_comb).sum())
    assert violations == 0
    assert est_comb.p_hat > est_tsr.p_hat
    _report(
        9,
        f"0 dominance violations in {n} paired trials; combined {est_comb.p_hat:.4f} "
        f"> T-S-R {est_tsr.p_hat:.4f}",
        t0,
    )


def test_c10_greedy_vs_dijkstra():
    t0 = time.monotonic()
    Ns, ds, d_max = 10_000, 550.0, 2000.0
    psi = THETA_M / 2.0
    gen = RngStream(1010).generator()
    n_instances = 100
    greedy_ok = dijkstra_ok = 0
    for _ in range(n_instances):
        const = sample_bpp(gen, Ns, ds)
        gws = sample_uniform_directions(gen, 2)
        cap_t = SphericalCap(gws[0], psi)
        cap_r = SphericalCap(gws[1], psi)
        first = nearest_in_region(
            SurfacePoint(gws[0], RE), const, (cap_t, cap_t)
        )
        if first is None:
            continue
        path = greedy_route(first, cap_r, const, d_max)

        pos = const.positions
        tree = cKDTree(pos)
        pairs = tree.query_pairs(d_max, output_type="ndarray")
        w = np.linalg.norm(pos[pairs[:, 0]] - pos[pairs[:, 1]], axis=1)
        graph = csr_matrix(
            (
                np.concatenate([w, w]),
                (
                    np.concatenate([pairs[:, 0], pairs[:, 1]]),
                    np.concatenate([pairs[:, 1], pairs[:, 0]]),
                ),
            ),
            shape=(Ns, Ns),
        )
        start_idx = int(np.argmax(const.directions @ first.direction))
        dist = dijkstra(graph, indices=start_idx)
        targets = const.directions @ gws[1] >= np.cos(psi)
        d_ok = bool(targets.any() and np.isfinite(dist[targets]).any())
        g_ok = path is not None

        assert not (g_ok and not d_ok), "greedy success outside graph reachability"
        if g_ok:
            length = sum(
                np.linalg.norm(path[i + 1].cartesian - path[i].cartesian)
                for i in range(len(path) - 1)
            )
            assert length >= dist[targets].min() - 1e-6
        greedy_ok += g_ok
        dijkstra_ok += d_ok

    assert dijkstra_ok > 0
    assert greedy_ok >= 0.95 * dijkstra_ok
    _report(
        10,
        f"greedy {greedy_ok}/{dijkstra_ok} Dijkstra-reachable instances "
        f"({n_instances} sampled), success subset and length bound verified",
        t0,
        budget_s=300.0,
    )


def test_c11_determinism_byte_identical_csv(tmp_path):
    t0 = time.monotonic()
    base = ScenarioConfig(n_trials=20_000, seed=3011)
    (spec,) = preset_sweeps("fig8", base)
    files = []
    for tag, workers in (("w1", 1), ("w1b", 1), ("w2", 2)):
        rows = run_sweep(spec, workers=workers)
        files.append(emit_csv(rows, tmp_path / f"{tag}.csv").read_bytes())
    assert files[0] == files[1] == files[2]
    _report(
        11,
        f"byte-identical CSV across repeated runs and worker counts "
        f"({len(files[0])} bytes)",
        t0,
    )
