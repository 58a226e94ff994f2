"""Experiment driver.

Two ways to run:

* ``satrelay --preset fig7 --out results/`` reproduces a named figure-style
  sweep end to end (CSV + SVG per sweep).
* ``satrelay --config scenario.json [--mode tsr] [--out results/]`` runs a
  single scenario (Monte Carlo, or the closed-form product with
  ``--mode analytic``) and prints the estimate.

Exits 0 on success and nonzero on validation or I/O failure.  With a fixed
``--seed`` the emitted CSV is byte-identical across repeated runs and
worker counts.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .simulator import ScenarioConfig, estimate_coverage
from .sweep import PRESETS, analytic_e2e_coverage, preset_sweeps, run_sweep

_MODE_ALIASES = {
    "tsr": "tsr_conditioned",
    "tssr": "tssr_any_pair",
    "combined": "combined",
    "tsr_conditioned": "tsr_conditioned",
    "tsr_any_pair": "tsr_any_pair",
    "tssr_any_pair": "tssr_any_pair",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satrelay",
        description="LEO satellite-relay coverage: Monte Carlo sweeps and closed forms",
    )
    parser.add_argument("--config", type=Path, help="JSON scenario document")
    parser.add_argument(
        "--preset", choices=sorted(PRESETS), help="named figure-style sweep"
    )
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--workers", type=int, default=1, help="parallel workers")
    parser.add_argument("--out", type=Path, help="output directory for CSV/SVG")
    parser.add_argument(
        "--mode",
        choices=sorted(set(_MODE_ALIASES)) + ["analytic"],
        help="relay mode override, or 'analytic' for the closed-form product",
    )
    return parser


def _apply_overrides(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    if args.trials is not None:
        cfg = dataclasses.replace(cfg, n_trials=args.trials)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.mode is not None and args.mode != "analytic":
        cfg = dataclasses.replace(cfg, mode=_MODE_ALIASES[args.mode])
    return cfg


def _run_preset(args: argparse.Namespace, base: ScenarioConfig) -> int:
    from .output import emit_csv, emit_plot

    out_dir = args.out or Path("results")
    for spec in preset_sweeps(args.preset, base):
        rows = run_sweep(spec, workers=args.workers)
        stem = spec.label.replace(":", "_").replace("/", "_")
        csv_path = emit_csv(rows, out_dir / f"{stem}.csv")
        svg_path = emit_plot(rows, out_dir / f"{stem}.svg", title=spec.label)
        print(f"{spec.label}: wrote {csv_path} and {svg_path}")
        for row in rows:
            if row["error"]:
                print(f"  point {row['value']}: FAILED ({row['error']})", file=sys.stderr)
    return 0


def _run_single(args: argparse.Namespace, cfg: ScenarioConfig) -> int:
    if args.mode == "analytic":
        p = analytic_e2e_coverage(cfg)
        print(f"analytic end-to-end coverage: {p:.6f}")
        return 0
    estimate = estimate_coverage(cfg, workers=args.workers)
    print(
        f"mode={cfg.mode} Ns={cfg.Ns} ds={cfg.ds} gamma={cfg.gamma_db} dB "
        f"trials={estimate.n_trials}"
    )
    print(
        f"coverage = {estimate.p_hat:.6f} "
        f"(95% CI {estimate.ci_low:.6f} .. {estimate.ci_high:.6f})"
    )
    print("outage breakdown:", estimate.outage_breakdown)
    if args.out:
        from .output import emit_csv

        row = {
            "label": "single",
            "mode": cfg.mode,
            "axis": "n_trials",
            "value": estimate.n_trials,
            "n_trials": estimate.n_trials,
            "p_hat": estimate.p_hat,
            "ci_low": estimate.ci_low,
            "ci_high": estimate.ci_high,
            **estimate.outage_breakdown,
            "analytic_p": "",
            "error": "",
        }
        print(f"wrote {emit_csv([row], Path(args.out) / 'single_run.csv')}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            cfg = load_config(args.config)
        else:
            cfg = ScenarioConfig()
        cfg = _apply_overrides(cfg, args)
        if args.preset:
            return _run_preset(args, cfg)
        return _run_single(args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
