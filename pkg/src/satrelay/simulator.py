"""Monte Carlo engine: relay trials, greedy routing, coverage estimation.

Modes
-----
``tsr_conditioned``
    Transmitter and receiver pinned at a configured ground separation whose
    visibility caps are guaranteed to overlap; trials are conditioned on a
    valid link (a relay existing in the overlap) by redrawing the
    constellation, so the estimate is coverage given valid link occurrence.
``tsr_any_pair``
    Transmitter and receiver drawn as two independent uniform points (the
    distribution of a gateway pair picked from the PPP given it has at
    least two points); no conditioning, geometric failures count as outage.
``tssr_any_pair``
    Same gateway sampling, but the signal travels transmitter -> nearest
    visible satellite -> greedy satellite-to-satellite route -> receiver.
``combined``
    Union success of the two relay strategies on shared randomness; the
    T-S-R evaluation consumes draws in exactly the same order as
    ``tsr_any_pair`` so paired runs dominate trial-by-trial.

Every trial gets its own RNG substream keyed by (seed, trial index), so
estimates are reproducible regardless of worker count.  The conditioned
mode runs on a vectorized batch path with substreams keyed by fixed-size
chunk index instead (same reproducibility guarantee, documented in
:func:`estimate_coverage`).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelParams,
    GridInverseCdf,
    InverseCdfFit,
    fading_threshold_coefficient,
    fit_inverse_cdf,
    link_snr,
)
from .constants import EARTH_RADIUS_KM
from .geometry import SphericalCap, SurfacePoint, cap_contains
from .point_process import (
    Constellation,
    RngStream,
    as_generator,
    nearest_in_region,
    sample_bpp,
    sample_directions_in_cap,
    sample_uniform_directions,
)

__all__ = [
    "MODES",
    "FAILURE_REASONS",
    "ScenarioConfig",
    "TrialOutcome",
    "CoverageEstimate",
    "CompiledScenario",
    "compile_scenario",
    "run_tsr_trial",
    "run_tssr_trial",
    "run_combined_trial",
    "greedy_route",
    "estimate_coverage",
    "estimate_conditioned_links",
    "wilson_interval",
]

MODES = ("tsr_conditioned", "tsr_any_pair", "tssr_any_pair", "combined")
FAILURE_REASONS = ("ok", "no_overlap_satellite", "no_route", "snr_below_threshold")

MAX_GEOMETRY_REDRAWS = 1000
DEFAULT_HOP_BUDGET = 200
_BATCH_CHUNK = 1024


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one Monte Carlo experiment."""

    Ns: int = 100_000
    ds: float = 550.0
    lambda_gw: float = 1.96e-7
    theta_m: float = 65.0 * np.pi / 180.0
    gamma_db: float = 12.0
    channel: ChannelParams = field(default_factory=ChannelParams)
    mode: str = "tsr_conditioned"
    d_max: float = 2000.0
    gw_separation_km: float = 1800.0
    n_trials: int = 100_000
    seed: int = 12345
    fading_sampler: str = "grid"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if math.isnan(self.gamma_db):
            raise ValueError("gamma_db must not be NaN")
        if self.Ns < 0:
            raise ValueError(f"Ns must be nonnegative, got {self.Ns}")
        if not self.ds > 0.0:
            raise ValueError(f"ds must be positive, got {self.ds}")
        if self.lambda_gw < 0.0:
            raise ValueError(f"lambda_gw must be nonnegative, got {self.lambda_gw}")
        if not 0.0 < self.theta_m < np.pi:
            raise ValueError(f"theta_m must lie in (0, pi), got {self.theta_m}")
        if self.mode in ("tssr_any_pair", "combined") and not self.d_max > 0.0:
            raise ValueError("d_max must be positive for routed modes")
        if not 0.0 <= self.gw_separation_km < 2.0 * EARTH_RADIUS_KM:
            raise ValueError(
                f"gw_separation_km must lie in [0, 2Re), got {self.gw_separation_km}"
            )
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.fading_sampler not in ("grid", "polynomial"):
            raise ValueError(f"fading_sampler must be 'grid' or 'polynomial'")

    @property
    def cap_half_angle(self) -> float:
        """Half-angle of each gateway's visibility cap on the orbital shell."""
        return 0.5 * self.theta_m

    @property
    def orbit_radius(self) -> float:
        return EARTH_RADIUS_KM + self.ds


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one relay trial."""

    geometric_ok: bool
    snr_ok: bool
    per_link_snr_db: tuple[float, ...]
    hop_count: int
    failure_reason: str

    def __post_init__(self):
        if self.snr_ok and not self.geometric_ok:
            raise ValueError("snr_ok requires geometric_ok")
        if self.failure_reason not in FAILURE_REASONS:
            raise ValueError(f"unknown failure reason {self.failure_reason!r}")


@dataclass(frozen=True)
class CoverageEstimate:
    """Point estimate with 95% Wilson interval and outage breakdown."""

    p_hat: float
    ci_low: float
    ci_high: float
    n_trials: int
    outage_breakdown: dict[str, int]


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# Compiled per-configuration state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompiledScenario:
    """Read-only per-configuration state shared by all trials.

    The fading inverse transform is fitted once here; ground-link and
    space-link pass thresholds are folded into coefficients c such that a
    link passes iff fading >= c * D_km**alpha (equivalent to the dB budget
    in :func:`satrelay.channel.link_snr`).
    """

    cfg: ScenarioConfig
    inverse: GridInverseCdf | InverseCdfFit
    c_ground: float
    c_space: float
    t_dir: np.ndarray
    r_dir: np.ndarray

    @property
    def alpha(self) -> float:
        return self.cfg.channel.path_loss_exponent


def compile_scenario(cfg: ScenarioConfig) -> CompiledScenario:
    if cfg.fading_sampler == "polynomial":
        inverse = fit_inverse_cdf(cfg.channel.sr)
    else:
        inverse = GridInverseCdf.build(cfg.channel.sr)
    delta = 2.0 * math.asin(cfg.gw_separation_km / (2.0 * EARTH_RADIUS_KM))
    return CompiledScenario(
        cfg=cfg,
        inverse=inverse,
        c_ground=fading_threshold_coefficient(
            cfg.channel, cfg.channel.surface_noise_db, cfg.gamma_db, rain_active=True
        ),
        c_space=fading_threshold_coefficient(
            cfg.channel, cfg.channel.space_noise_db, cfg.gamma_db, rain_active=False
        ),
        t_dir=np.array([0.0, 0.0, 1.0]),
        r_dir=np.array([math.sin(delta), 0.0, math.cos(delta)]),
    )


def _chord(a: np.ndarray, ra: float, b: np.ndarray, rb: float) -> float:
    """Euclidean distance between points given as (unit direction, radius)."""
    return float(np.linalg.norm(ra * a - rb * b))


def _ground_link_ok(comp: CompiledScenario, D: float, h: float) -> bool:
    return h >= comp.c_ground * D**comp.alpha


def _space_link_ok(comp: CompiledScenario, D: float, h: float) -> bool:
    return h >= comp.c_space * D**comp.alpha


def _ground_snr_db(comp: CompiledScenario, D: float, h: float) -> float:
    return link_snr(comp.cfg.channel, D, h, True, comp.cfg.channel.surface_noise_db).snr_db


def _space_snr_db(comp: CompiledScenario, D: float, h: float) -> float:
    return link_snr(comp.cfg.channel, D, h, False, comp.cfg.channel.space_noise_db).snr_db


# ---------------------------------------------------------------------------
# Single-trial reference paths
# ---------------------------------------------------------------------------


def _geometric_failure(reason: str) -> TrialOutcome:
    return TrialOutcome(False, False, (), 0, reason)


def _sample_pair(gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    # transmitter first, receiver second: draw order is part of the pairing
    # contract between tsr_any_pair and combined runs
    dirs = sample_uniform_directions(gen, 2)
    return dirs[0], dirs[1]


def _tsr_outcome(
    comp: CompiledScenario,
    gen: np.random.Generator,
    relay_dir: np.ndarray,
    t_dir: np.ndarray,
    r_dir: np.ndarray,
) -> TrialOutcome:
    cfg = comp.cfg
    R, Re = cfg.orbit_radius, EARTH_RADIUS_KM
    D1 = _chord(relay_dir, R, t_dir, Re)
    D2 = _chord(relay_dir, R, r_dir, Re)
    h1, h2 = comp.inverse.sample(gen, 2)
    snr1 = _ground_snr_db(comp, D1, h1)
    snr2 = _ground_snr_db(comp, D2, h2)
    ok = _ground_link_ok(comp, D1, h1) and _ground_link_ok(comp, D2, h2)
    return TrialOutcome(
        True, ok, (snr1, snr2), 1, "ok" if ok else "snr_below_threshold"
    )


def run_tsr_trial(
    cfg: ScenarioConfig, rng, compiled: CompiledScenario | None = None
) -> TrialOutcome:
    """One T-S-R trial: sample geometry, pick the relay, test both links.

    In conditioned mode the gateway pair is fixed by the configuration and
    the constellation is redrawn until the overlap holds a relay (bounded
    redraw budget); in any-pair mode the gateways are sampled uniformly and
    an empty overlap is a geometric outage.
    """
    if cfg.mode not in ("tsr_conditioned", "tsr_any_pair"):
        raise ValueError(f"run_tsr_trial needs a TSR mode, got {cfg.mode!r}")
    comp = compiled if compiled is not None else compile_scenario(cfg)
    gen = as_generator(rng)
    psi = cfg.cap_half_angle

    if cfg.mode == "tsr_conditioned":
        if cfg.Ns == 0:
            return _geometric_failure("no_overlap_satellite")
        t_dir, r_dir = comp.t_dir, comp.r_dir
        cap1 = SphericalCap(t_dir, psi)
        cap2 = SphericalCap(r_dir, psi)
        origin = SurfacePoint(t_dir, EARTH_RADIUS_KM)
        for _ in range(MAX_GEOMETRY_REDRAWS):
            constellation = sample_bpp(gen, cfg.Ns, cfg.ds)
            relay = nearest_in_region(origin, constellation, (cap1, cap2))
            if relay is not None:
                return _tsr_outcome(comp, gen, relay.direction, t_dir, r_dir)
        return _geometric_failure("no_overlap_satellite")

    t_dir, r_dir = _sample_pair(gen)
    constellation = sample_bpp(gen, cfg.Ns, cfg.ds)
    cap1 = SphericalCap(t_dir, psi)
    cap2 = SphericalCap(r_dir, psi)
    relay = nearest_in_region(
        SurfacePoint(t_dir, EARTH_RADIUS_KM), constellation, (cap1, cap2)
    )
    if relay is None:
        return _geometric_failure("no_overlap_satellite")
    return _tsr_outcome(comp, gen, relay.direction, t_dir, r_dir)


def greedy_route(
    start: SurfacePoint,
    target_cap: SphericalCap,
    constellation: Constellation,
    d_max: float,
    hop_budget: int = DEFAULT_HOP_BUDGET,
) -> list[SurfacePoint] | None:
    """Local greedy satellite route from ``start`` into ``target_cap``.

    From the current satellite, the next hop is the unvisited satellite
    within chord distance ``d_max`` whose direction-of-travel makes the
    smallest angle with the vector toward the sub-target point on the
    orbital shell.  Succeeds as soon as the current satellite lies inside
    the target cap; fails on an empty candidate set or when the hop budget
    runs out.  Returns the satellite path including ``start``, or None.
    """
    if not d_max > 0.0:
        raise ValueError(f"d_max must be positive, got {d_max}")
    dirs = constellation.directions
    dots = dirs @ start.direction
    idx = int(np.argmax(dots))
    if dots[idx] < 1.0 - 1e-12:
        raise ValueError("start must be a member of the constellation")
    R = constellation.radius
    positions = R * dirs
    target_point = R * target_cap.center
    cos_target = np.cos(target_cap.half_angle)

    current = idx
    visited = np.zeros(len(dirs), dtype=bool)
    visited[current] = True
    path = [current]
    for _ in range(hop_budget):
        if dirs[current] @ target_cap.center >= cos_target:
            return [SurfacePoint(dirs[i], R) for i in path]
        steps = positions - positions[current]
        dist = np.linalg.norm(steps, axis=1)
        cand = (dist <= d_max) & (dist > 0.0) & ~visited
        if not cand.any():
            return None
        to_target = target_point - positions[current]
        norm_t = np.linalg.norm(to_target)
        if norm_t == 0.0:
            return None
        # smallest angle == largest normalized dot product with the target vector
        scores = np.where(cand, (steps @ to_target) / (dist * norm_t + 1e-300), -np.inf)
        current = int(np.argmax(scores))
        visited[current] = True
        path.append(current)
    return None


def _tssr_outcome(
    comp: CompiledScenario,
    gen: np.random.Generator,
    t_dir: np.ndarray,
    r_dir: np.ndarray,
    constellation: Constellation,
) -> TrialOutcome:
    cfg = comp.cfg
    psi = cfg.cap_half_angle
    cap_t = SphericalCap(t_dir, psi)
    cap_r = SphericalCap(r_dir, psi)
    origin = SurfacePoint(t_dir, EARTH_RADIUS_KM)
    first = nearest_in_region(origin, constellation, (cap_t, cap_t))
    if first is None:
        return _geometric_failure("no_overlap_satellite")
    path = greedy_route(first, cap_r, constellation, cfg.d_max)
    if path is None:
        return _geometric_failure("no_route")

    R, Re = cfg.orbit_radius, EARTH_RADIUS_KM
    n_links = len(path) + 1
    h = comp.inverse.sample(gen, n_links)
    snrs: list[float] = []
    ok = True
    # transmitter uplink: ground link with rain and surface noise
    D = _chord(path[0].direction, R, t_dir, Re)
    snrs.append(_ground_snr_db(comp, D, h[0]))
    ok &= _ground_link_ok(comp, D, h[0])
    # satellite-to-satellite hops: space noise, no rain
    for i in range(len(path) - 1):
        D = _chord(path[i].direction, R, path[i + 1].direction, R)
        snrs.append(_space_snr_db(comp, D, h[i + 1]))
        ok &= _space_link_ok(comp, D, h[i + 1])
    # downlink to the receiver: ground link again
    D = _chord(path[-1].direction, R, r_dir, Re)
    snrs.append(_ground_snr_db(comp, D, h[-1]))
    ok &= _ground_link_ok(comp, D, h[-1])
    return TrialOutcome(
        True, bool(ok), tuple(snrs), len(path), "ok" if ok else "snr_below_threshold"
    )


def run_tssr_trial(
    cfg: ScenarioConfig, rng, compiled: CompiledScenario | None = None
) -> TrialOutcome:
    """One T-S-S-R trial: uplink to the nearest visible satellite, greedy
    route to the receiver's cap, downlink; every hop must clear gamma."""
    if cfg.mode not in ("tssr_any_pair", "combined"):
        raise ValueError(f"run_tssr_trial needs a routed mode, got {cfg.mode!r}")
    comp = compiled if compiled is not None else compile_scenario(cfg)
    gen = as_generator(rng)
    t_dir, r_dir = _sample_pair(gen)
    constellation = sample_bpp(gen, cfg.Ns, cfg.ds)
    return _tssr_outcome(comp, gen, t_dir, r_dir, constellation)


def run_combined_trial(
    cfg: ScenarioConfig, rng, compiled: CompiledScenario | None = None
) -> TrialOutcome:
    """Union of T-S-R and T-S-S-R on shared geometry.

    The T-S-R evaluation consumes random draws in exactly the order of
    :func:`run_tsr_trial` in any-pair mode, so a combined run paired with a
    T-S-R run on the same seed succeeds on every trial the latter does.
    """
    comp = compiled if compiled is not None else compile_scenario(cfg)
    gen = as_generator(rng)
    cfg_tsr = comp.cfg
    psi = cfg_tsr.cap_half_angle
    t_dir, r_dir = _sample_pair(gen)
    constellation = sample_bpp(gen, cfg_tsr.Ns, cfg_tsr.ds)
    cap1 = SphericalCap(t_dir, psi)
    cap2 = SphericalCap(r_dir, psi)
    relay = nearest_in_region(
        SurfacePoint(t_dir, EARTH_RADIUS_KM), constellation, (cap1, cap2)
    )
    if relay is not None:
        tsr = _tsr_outcome(comp, gen, relay.direction, t_dir, r_dir)
        if tsr.snr_ok:
            return tsr
    return _tssr_outcome(comp, gen, t_dir, r_dir, constellation)


# ---------------------------------------------------------------------------
# Vectorized conditioned-mode batch path
# ---------------------------------------------------------------------------


def _conditioned_chunk(
    comp: CompiledScenario, chunk_index: int, size: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run ``size`` conditioned trials on the chunk's own substream.

    Samples only the satellites inside the transmitter's visibility cap
    (binomial count + uniform-in-cap positions), which is the exact
    restriction of the full BPP and all the relay search ever looks at.
    Returns (pass_uplink, pass_downlink, geometric_ok) boolean arrays;
    trial success is the conjunction of all three.
    """
    cfg = comp.cfg
    gen = RngStream(cfg.seed, chunk_index).generator()
    psi = cfg.cap_half_angle
    R, Re = cfg.orbit_radius, EARTH_RADIUS_KM
    cap1 = SphericalCap(comp.t_dir, psi)
    p_cap = (1.0 - math.cos(psi)) / 2.0
    cos_psi = math.cos(psi)

    cos1 = np.full(size, np.nan)  # cos of relay angle to transmitter
    cos2 = np.full(size, np.nan)  # cos of relay angle to receiver
    pending = np.arange(size)
    if cfg.Ns == 0:
        pending = np.arange(0)
    for _ in range(MAX_GEOMETRY_REDRAWS):
        if pending.size == 0:
            break
        counts = gen.binomial(cfg.Ns, p_cap, size=pending.size)
        total = int(counts.sum())
        dirs = sample_directions_in_cap(gen, total, cap1)
        dot_t = dirs @ comp.t_dir
        dot_r = dirs @ comp.r_dir
        score = np.where(dot_r >= cos_psi, dot_t, -np.inf)
        starts = np.concatenate(([0], np.cumsum(counts)))[:-1]
        nonempty = counts > 0
        segmax = np.full(pending.size, -np.inf)
        if total:
            segmax[nonempty] = np.maximum.reduceat(score, starts[nonempty])
        found = np.isfinite(segmax)
        if found.any():
            # argmax per segment: first flat index attaining the segment max
            seg_of_point = np.repeat(np.arange(pending.size), counts)
            hit = score == segmax[seg_of_point]
            flat_idx = np.flatnonzero(hit)
            seg_hit = seg_of_point[hit]
            first_hit = np.full(pending.size, -1)
            # reversed scatter keeps the smallest index per segment
            first_hit[seg_hit[::-1]] = flat_idx[::-1]
            slots = pending[found]
            cos1[slots] = segmax[found]
            cos2[slots] = dot_r[first_hit[found]]
        pending = pending[~found]

    geometric_ok = np.isfinite(cos1)
    D1 = np.sqrt(np.maximum(R * R + Re * Re - 2.0 * R * Re * cos1, 0.0))
    D2 = np.sqrt(np.maximum(R * R + Re * Re - 2.0 * R * Re * cos2, 0.0))
    h1 = comp.inverse.sample(gen, size)
    h2 = comp.inverse.sample(gen, size)
    alpha = comp.alpha
    with np.errstate(invalid="ignore"):
        pass1 = geometric_ok & (h1 >= comp.c_ground * D1**alpha)
        pass2 = geometric_ok & (h2 >= comp.c_ground * D2**alpha)
    return pass1, pass2, geometric_ok


# ---------------------------------------------------------------------------
# Estimator
# ---------------------------------------------------------------------------

_WORKER_COMPILED: CompiledScenario | None = None


def _worker_init(cfg: ScenarioConfig) -> None:
    global _WORKER_COMPILED
    _WORKER_COMPILED = compile_scenario(cfg)


def _run_conditioned_chunk_task(args) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    chunk_index, size = args
    return chunk_index, *_conditioned_chunk(_WORKER_COMPILED, chunk_index, size)


def _run_trial_range_task(args) -> tuple[int, np.ndarray, np.ndarray, list[str]]:
    lo, hi = args
    return _run_trial_range(_WORKER_COMPILED, lo, hi)


def _run_trial_range(
    comp: CompiledScenario, lo: int, hi: int
) -> tuple[int, np.ndarray, np.ndarray, list[str]]:
    cfg = comp.cfg
    runner = {
        "tsr_conditioned": run_tsr_trial,
        "tsr_any_pair": run_tsr_trial,
        "tssr_any_pair": run_tssr_trial,
        "combined": run_combined_trial,
    }[cfg.mode]
    success = np.zeros(hi - lo, dtype=bool)
    geom = np.zeros(hi - lo, dtype=bool)
    reasons: list[str] = []
    for i in range(lo, hi):
        outcome = runner(cfg, RngStream(cfg.seed, i), compiled=comp)
        success[i - lo] = outcome.snr_ok
        geom[i - lo] = outcome.geometric_ok
        reasons.append(outcome.failure_reason)
    return lo, success, geom, reasons


def _conditioned_results(cfg: ScenarioConfig, workers: int):
    n = cfg.n_trials
    chunks = [
        (k, min(_BATCH_CHUNK, n - k * _BATCH_CHUNK))
        for k in range((n + _BATCH_CHUNK - 1) // _BATCH_CHUNK)
    ]
    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_worker_init, initargs=(cfg,)
        ) as pool:
            return list(pool.map(_run_conditioned_chunk_task, chunks))
    comp = compile_scenario(cfg)
    return [(k, *_conditioned_chunk(comp, k, size)) for k, size in chunks]


def estimate_conditioned_links(
    cfg: ScenarioConfig, workers: int = 1
) -> dict[str, float]:
    """Per-link and joint pass rates among valid-link conditioned trials.

    Returns conditional (on a relay existing) coverage of the uplink, the
    downlink and their conjunction; used to check the end-to-end product
    decomposition against independently estimated per-link coverages.
    """
    if cfg.mode != "tsr_conditioned":
        raise ValueError("per-link decomposition applies to tsr_conditioned mode")
    n_geom = n1 = n2 = n_both = 0
    for _, pass1, pass2, geom in _conditioned_results(cfg, workers):
        n_geom += int(geom.sum())
        n1 += int(pass1.sum())
        n2 += int(pass2.sum())
        n_both += int((pass1 & pass2).sum())
    if n_geom == 0:
        raise RuntimeError("no trial produced a valid link")
    return {
        "p_uplink": n1 / n_geom,
        "p_downlink": n2 / n_geom,
        "p_joint": n_both / n_geom,
        "n_valid": n_geom,
    }


def estimate_coverage(
    cfg: ScenarioConfig,
    workers: int = 1,
    return_mask: bool = False,
) -> CoverageEstimate | tuple[CoverageEstimate, np.ndarray]:
    """Coverage probability over ``cfg.n_trials`` independent trials.

    Trials run on disjoint RNG substreams (per trial index for the
    per-trial modes; per fixed-size chunk index for the vectorized
    conditioned mode), so the estimate is bit-for-bit reproducible for a
    fixed seed regardless of ``workers``.  With ``return_mask`` the
    per-trial success booleans come back too (trial order).
    """
    n = cfg.n_trials
    breakdown = {reason: 0 for reason in FAILURE_REASONS}
    mask = np.zeros(n, dtype=bool)

    if cfg.mode == "tsr_conditioned":
        for k, pass1, pass2, geom in _conditioned_results(cfg, workers):
            success = pass1 & pass2
            lo = k * _BATCH_CHUNK
            mask[lo : lo + len(success)] = success
            breakdown["ok"] += int(success.sum())
            breakdown["no_overlap_satellite"] += int((~geom).sum())
            breakdown["snr_below_threshold"] += int((geom & ~success).sum())
    else:
        bounds = np.linspace(0, n, max(workers, 1) * 4 + 1, dtype=int)
        ranges = [
            (int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a
        ]
        if workers > 1:
            with ProcessPoolExecutor(
                max_workers=workers, initializer=_worker_init, initargs=(cfg,)
            ) as pool:
                results = list(pool.map(_run_trial_range_task, ranges))
        else:
            comp = compile_scenario(cfg)
            results = [_run_trial_range(comp, lo, hi) for lo, hi in ranges]
        for lo, success, geom, reasons in results:
            mask[lo : lo + len(success)] = success
            for r in reasons:
                breakdown[r] += 1

    successes = int(mask.sum())
    ci_low, ci_high = wilson_interval(successes, n)
    estimate = CoverageEstimate(
        p_hat=successes / n,
        ci_low=ci_low,
        ci_high=ci_high,
        n_trials=n,
        outage_breakdown=breakdown,
    )
    return (estimate, mask) if return_mask else estimate
