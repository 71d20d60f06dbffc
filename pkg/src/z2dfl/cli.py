"""Command-line entry point: simulate / sweep-alpha / verify."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .lindblad import InvariantViolation, PropagationError
from .runner import ConfigError, ScenarioConfig, alpha_sweep_table, preset, \
    run_alpha_sweep, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _load_config(args) -> ScenarioConfig:
    cfg = preset(args.preset) if args.preset else ScenarioConfig()
    if args.config:
        cfg = ScenarioConfig.from_flat(Path(args.config).read_text(), base=cfg)
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key] = value
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.threads is not None:
        overrides["threads"] = str(args.threads)
    if getattr(args, "out", None):
        overrides["out_dir"] = args.out
    return cfg.with_overrides(overrides)


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo_s, hi_s, n_s = spec.split(":")
        lo = float(np.pi) if lo_s.strip() == "pi" else float(lo_s)
        hi = float(np.pi) if hi_s.strip() == "pi" else float(hi_s)
        return np.linspace(lo, hi, int(n_s))
    except (ValueError, AttributeError) as exc:
        raise ConfigError(f"cannot parse grid {spec!r}; expected LO:HI:N") from exc


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    manifest = run_scenario(cfg)
    print(f"wrote {len(manifest.files)} data files to {cfg.out_dir} "
          f"({manifest.sector_count} sectors, {manifest.wall_time_s:.1f}s)")
    return EXIT_OK


def cmd_sweep_alpha(args) -> int:
    cfg = _load_config(args)
    rows = run_alpha_sweep(cfg, _parse_grid(args.grid))
    table = alpha_sweep_table(rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "alpha_sweep.dat").write_text(table)
        print(f"wrote {out / 'alpha_sweep.dat'}")
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_verify(_args) -> int:
    """Fast oracle and invariant checks; independent of the test suite."""
    from .verify import run_checks

    ok = run_checks(print)
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="z2dfl",
        description="Z2 lattice gauge model: unitary and dissipative "
        "exact-diagonalization scenarios",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--preset", help="named scenario (fig1..fig5, ci_small)")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int,
                       help="worker count (default: $Z2DFL_THREADS or 1)")

    p = sub.add_parser("simulate", help="run a scenario and write its outputs")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-alpha", help="steady-state fidelity vs phase")
    common(p)
    p.add_argument("--grid", default="0:pi:17", help="LO:HI:N (default 0:pi:17)")
    p.add_argument("--out", help="output directory (default: stdout)")
    p.set_defaults(func=cmd_sweep_alpha)

    p = sub.add_parser("verify", help="run the built-in oracle/invariant suite")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvariantViolation, PropagationError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
