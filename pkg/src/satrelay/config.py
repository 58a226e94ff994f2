"""JSON configuration loading with canonical defaults.

The schema is a flat document plus an optional ``channel`` section; every
field is optional and absent fields take the canonical system defaults
(surface noise -80 dB, space noise -100 dB, rain -2 dB, dome angle 65 deg,
gateway gain 80 dB, satellite gain 60 dB, SR(1.29, 0.158, 19.4), carrier
300 MHz).  Angles are degrees in the file and radians everywhere else;
``theta_m_deg`` sets both the scenario dome angle and the channel's lobe
field so the two can never drift apart.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path

from .channel import ChannelParams, SrParams
from .simulator import ScenarioConfig

__all__ = ["load_config", "config_to_dict", "save_config", "ConfigError"]


class ConfigError(ValueError):
    """A configuration document failed to parse or validate."""


_SCENARIO_KEYS = {
    "Ns",
    "ds",
    "lambda_gw",
    "theta_m_deg",
    "gamma_db",
    "mode",
    "d_max",
    "gw_separation_km",
    "n_trials",
    "seed",
    "fading_sampler",
    "channel",
}
_CHANNEL_KEYS = {
    "sr",
    "rain_attenuation_db",
    "gw_antenna_gain_db",
    "sat_antenna_gain_db",
    "surface_noise_db",
    "space_noise_db",
    "carrier_freq_hz",
    "path_loss_exponent",
    "tx_power_db",
}
_SR_KEYS = {"omega", "b0", "m"}


def _check_keys(section: dict, allowed: set, where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} fields: {sorted(unknown)}")


def load_config(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario configuration document.

    An empty file yields the pure defaults.  Raises :class:`ConfigError`
    with the parse location or the violated invariant.
    """
    text = Path(path).read_text()
    if not text.strip():
        doc: dict = {}
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top-level document must be an object")
    return config_from_dict(doc, source=str(path))


def config_from_dict(doc: dict, source: str = "<dict>") -> ScenarioConfig:
    _check_keys(doc, _SCENARIO_KEYS, "scenario")
    channel_doc = doc.get("channel", {})
    if not isinstance(channel_doc, dict):
        raise ConfigError(f"{source}: 'channel' must be an object")
    _check_keys(channel_doc, _CHANNEL_KEYS, "channel")
    sr_doc = channel_doc.get("sr", {})
    if not isinstance(sr_doc, dict):
        raise ConfigError(f"{source}: 'channel.sr' must be an object")
    _check_keys(sr_doc, _SR_KEYS, "channel.sr")

    try:
        sr = SrParams(**{k: float(v) for k, v in sr_doc.items()})
        channel_kwargs = {k: float(v) for k, v in channel_doc.items() if k != "sr"}
        theta_m = math.radians(float(doc["theta_m_deg"])) if "theta_m_deg" in doc else None
        if theta_m is not None:
            channel_kwargs["lobe_half_angle"] = theta_m
        channel = ChannelParams(sr=sr, **channel_kwargs)

        scenario_kwargs: dict = {"channel": channel}
        if theta_m is not None:
            scenario_kwargs["theta_m"] = theta_m
        for key in ("Ns", "n_trials", "seed"):
            if key in doc:
                scenario_kwargs[key] = int(doc[key])
        for key in ("ds", "lambda_gw", "gamma_db", "d_max", "gw_separation_km"):
            if key in doc:
                scenario_kwargs[key] = float(doc[key])
        for key in ("mode", "fading_sampler"):
            if key in doc:
                scenario_kwargs[key] = str(doc[key])
        return ScenarioConfig(**scenario_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Serialize a scenario to the JSON document schema (degrees at boundary)."""
    ch = cfg.channel
    return {
        "Ns": cfg.Ns,
        "ds": cfg.ds,
        "lambda_gw": cfg.lambda_gw,
        "theta_m_deg": math.degrees(cfg.theta_m),
        "gamma_db": cfg.gamma_db,
        "mode": cfg.mode,
        "d_max": cfg.d_max,
        "gw_separation_km": cfg.gw_separation_km,
        "n_trials": cfg.n_trials,
        "seed": cfg.seed,
        "fading_sampler": cfg.fading_sampler,
        "channel": {
            "sr": {"omega": ch.sr.omega, "b0": ch.sr.b0, "m": ch.sr.m},
            "rain_attenuation_db": ch.rain_attenuation_db,
            "gw_antenna_gain_db": ch.gw_antenna_gain_db,
            "sat_antenna_gain_db": ch.sat_antenna_gain_db,
            "surface_noise_db": ch.surface_noise_db,
            "space_noise_db": ch.space_noise_db,
            "carrier_freq_hz": ch.carrier_freq_hz,
            "path_loss_exponent": ch.path_loss_exponent,
            "tx_power_db": ch.tx_power_db,
        },
    }


def save_config(cfg: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")
