"""Parameter sweeps reproducing the figure-style studies.

A sweep varies exactly one axis of a base scenario, re-running the Monte
Carlo estimator at every value with the same seed (common random numbers,
which is what makes monotonicity comparisons across points low-variance).
Where the closed-form route applies (conditioned single-relay mode at
path-loss exponent 2) an analytic end-to-end coverage column is attached:
the product of the two per-link coverage integrals over the lens contact
laws, with the receiver side approximated by the same-form law from the
receiver's perspective.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .analytic import (
    ContactLawConfig,
    contact_ccdf_overlap,
    contact_pdf_overlap,
    coverage_end_to_end,
    coverage_link_integral,
    overlap_support,
)
from .channel import fading_threshold_coefficient
from .simulator import FAILURE_REASONS, ScenarioConfig, estimate_coverage

__all__ = ["SWEEP_AXES", "SweepSpec", "run_sweep", "analytic_e2e_coverage", "PRESETS", "preset_sweeps"]

SWEEP_AXES = ("Ns", "ds", "gamma_db", "lambda_gw", "theta_m", "carrier_freq", "rain_db")

COLUMNS = (
    "label",
    "mode",
    "axis",
    "value",
    "n_trials",
    "p_hat",
    "ci_low",
    "ci_high",
    "ok",
    "no_overlap_satellite",
    "no_route",
    "snr_below_threshold",
    "analytic_p",
    "error",
)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base scenario, the axis to vary, and its values.

    ``paired_rain_db`` optionally re-pins the rain attenuation per sweep
    point (same length as ``values``); this is how frequency sweeps model
    rain scaling, which has no closed form and is supplied by the user.
    """

    base: ScenarioConfig
    axis: str
    values: tuple
    label: str = ""
    paired_rain_db: tuple | None = None
    include_analytic: bool = True

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        vals = tuple(self.values)
        if not vals:
            raise ValueError("values must be nonempty")
        diffs = np.diff(np.asarray(vals, dtype=float))
        if not ((diffs > 0).all() or (diffs < 0).all()) and len(vals) > 1:
            raise ValueError("values must be strictly monotone")
        object.__setattr__(self, "values", vals)
        if self.paired_rain_db is not None:
            paired = tuple(self.paired_rain_db)
            if len(paired) != len(vals):
                raise ValueError("paired_rain_db must align with values")
            object.__setattr__(self, "paired_rain_db", paired)


def _scenario_at(spec: SweepSpec, index: int) -> ScenarioConfig:
    value = spec.values[index]
    base = spec.base
    if spec.axis == "Ns":
        cfg = dataclasses.replace(base, Ns=int(value))
    elif spec.axis == "ds":
        cfg = dataclasses.replace(base, ds=float(value))
    elif spec.axis == "gamma_db":
        cfg = dataclasses.replace(base, gamma_db=float(value))
    elif spec.axis == "lambda_gw":
        cfg = dataclasses.replace(base, lambda_gw=float(value))
    elif spec.axis == "theta_m":
        channel = dataclasses.replace(base.channel, lobe_half_angle=float(value))
        cfg = dataclasses.replace(base, theta_m=float(value), channel=channel)
    elif spec.axis == "carrier_freq":
        channel = dataclasses.replace(base.channel, carrier_freq_hz=float(value))
        cfg = dataclasses.replace(base, channel=channel)
    else:  # rain_db
        channel = dataclasses.replace(base.channel, rain_attenuation_db=float(value))
        cfg = dataclasses.replace(base, channel=channel)
    if spec.paired_rain_db is not None:
        channel = dataclasses.replace(
            cfg.channel, rain_attenuation_db=float(spec.paired_rain_db[index])
        )
        cfg = dataclasses.replace(cfg, channel=channel)
    return cfg


def analytic_e2e_coverage(cfg: ScenarioConfig) -> float:
    """Closed-form end-to-end coverage for the conditioned geometry.

    Both per-link coverages integrate the shadowed-Rician outage against
    the lens contact law (conditioned on a relay existing), the uplink
    from the transmitter's side and the downlink from the receiver's side
    (same-form law by the model's symmetry).  Requires path-loss exponent 2.
    """
    if cfg.mode != "tsr_conditioned":
        raise ValueError("analytic route applies to the conditioned single-relay mode")
    if cfg.channel.path_loss_exponent != 2.0:
        raise ValueError("analytic route requires path-loss exponent 2")
    law = ContactLawConfig(
        Ns=cfg.Ns,
        ds=cfg.ds,
        theta_m1=cfg.theta_m,
        theta_m2=cfg.theta_m,
        ground_separation_d=cfg.gw_separation_km,
    )
    lo, hi = overlap_support(law)
    mass = 1.0 - contact_ccdf_overlap(hi, law)
    c = fading_threshold_coefficient(
        cfg.channel, cfg.channel.surface_noise_db, cfg.gamma_db, rain_active=True
    )

    def pdf(x: float) -> float:
        return contact_pdf_overlap(x, law, method="lens")

    p_link = coverage_link_integral(pdf, cfg.channel.sr, c, support=(lo, hi)) / mass
    # uplink and downlink see the same channel and the same-form contact law
    return coverage_end_to_end(p_link, p_link)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """One row per axis value; per-point failures become flagged rows."""
    rows: list[dict] = []
    for i, value in enumerate(spec.values):
        row = {col: "" for col in COLUMNS}
        row.update(label=spec.label, axis=spec.axis, value=value)
        try:
            cfg = _scenario_at(spec, i)
            row["mode"] = cfg.mode
            estimate = estimate_coverage(cfg, workers=workers)
            row.update(
                n_trials=estimate.n_trials,
                p_hat=estimate.p_hat,
                ci_low=estimate.ci_low,
                ci_high=estimate.ci_high,
            )
            for reason in FAILURE_REASONS:
                row[reason] = estimate.outage_breakdown[reason]
            if (
                spec.include_analytic
                and cfg.mode == "tsr_conditioned"
                and cfg.channel.path_loss_exponent == 2.0
            ):
                row["analytic_p"] = analytic_e2e_coverage(cfg)
        except Exception as exc:  # noqa: BLE001 - sweep must not abort
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def preset_sweeps(name: str, base: ScenarioConfig) -> list[SweepSpec]:
    """Named figure-style studies, desk scale.

    fig7     coverage vs satellite count (conditioned single relay)
    fig8     coverage vs orbital altitude
    fig9-11  any-pair coverage vs satellite count for the T-S-R, T-S-S-R
             and combined strategies
    fig12    coverage vs SNR threshold
    fig13    coverage vs carrier frequency with rain attenuation scaled
             per point
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    make = PRESETS[name]
    return make(base)


def _fig7(base: ScenarioConfig) -> list[SweepSpec]:
    cfg = dataclasses.replace(base, mode="tsr_conditioned", ds=550.0, gamma_db=12.0)
    return [SweepSpec(cfg, "Ns", (100, 1000, 10_000, 100_000), label="fig7")]


def _fig8(base: ScenarioConfig) -> list[SweepSpec]:
    cfg = dataclasses.replace(base, mode="tsr_conditioned", Ns=10_000, gamma_db=12.0)
    return [SweepSpec(cfg, "ds", (550.0, 1000.0, 1500.0), label="fig8")]


def _fig9_11(base: ScenarioConfig) -> list[SweepSpec]:
    out = []
    for mode in ("tsr_any_pair", "tssr_any_pair", "combined"):
        cfg = dataclasses.replace(base, mode=mode, ds=550.0, gamma_db=12.0)
        out.append(SweepSpec(cfg, "Ns", (100, 1000, 10_000), label=f"fig9-11:{mode}"))
    return out


def _fig12(base: ScenarioConfig) -> list[SweepSpec]:
    cfg = dataclasses.replace(base, mode="tsr_conditioned", Ns=10_000, ds=550.0)
    return [SweepSpec(cfg, "gamma_db", tuple(float(g) for g in range(0, 28, 3)), label="fig12")]


def _fig13(base: ScenarioConfig) -> list[SweepSpec]:
    cfg = dataclasses.replace(base, mode="tsr_conditioned", Ns=100, ds=550.0, gamma_db=12.0)
    freqs = (300e6, 600e6, 1200e6, 2400e6)
    # rain deepens with the user-chosen multiplier at each frequency point
    rains = tuple(-2.0 * (f / 300e6) for f in freqs)
    return [SweepSpec(cfg, "carrier_freq", freqs, label="fig13", paired_rain_db=rains)]


PRESETS = {
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9-11": _fig9_11,
    "fig12": _fig12,
    "fig13": _fig13,
}
