"""Scenario orchestration: presets, batch runs, and persisted outputs.

All energies are in units of J (J=1), times in 1/J.  A scenario writes
plain-text delimited tables plus one JSON manifest; identical (config, seed)
pairs produce byte-identical data files regardless of worker count.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .fock import OccupationState, enumerate_basis
from .gauge_model import ModelParams
from .lindblad import DissipationSpec, PropagatorParams
from .observables import diagonal_profile, pure_reference_fidelity, state_vector
from .sectors import SectorMode, ensemble_evolve


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    L: int = 10
    Nf: int = 5
    h_over_J: float = 0.5
    gamma_over_J: float = 0.0
    alpha: float = 0.0
    l: int = 2
    bc: str = "periodic"
    initial_pattern: str = "1010101010"
    sector_mode: str = "all"  # 'all' | 'parity' | 'sample:COUNT:SEED' | 'single:PATTERN'
    t_start: float = 0.0
    t_stop: float = 150.0
    t_stride: float = 1.0
    method: str = "auto"
    dt: float = 0.02
    krylov_dim: int = 30
    jw_strings: bool = False
    seed: int = 0
    threads: int = 0  # 0: resolve from Z2DFL_THREADS, else 1
    out_dir: str = "out"
    # multi-run axes (empty = use the scalar field)
    h_variants: tuple[float, ...] = ()
    gamma_variants: tuple[float, ...] = ()

    def validate(self) -> None:
        pat = self.initial_pattern
        if len(pat) != self.L or set(pat) - {"0", "1"}:
            raise ConfigError(
                f"initial_pattern {pat!r} is not a length-{self.L} bitstring"
            )
        if pat.count("1") != self.Nf:
            raise ConfigError(
                f"initial_pattern has {pat.count('1')} ones, expected Nf={self.Nf}"
            )
        if self.t_stride <= 0:
            raise ConfigError("t_stride must be positive")
        if self.t_stop < self.t_start:
            raise ConfigError("t_stop must be >= t_start")
        if self.gamma_over_J < 0 or self.h_over_J < 0:
            raise ConfigError("rates and couplings must be >= 0")
        try:
            self.resolve_mode()
            self.model_params()
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def model_params(self) -> ModelParams:
        return ModelParams(J=1.0, h=self.h_over_J, bc=self.bc)

    def dissipation(self, gamma=None, alpha=None) -> DissipationSpec | None:
        g = self.gamma_over_J if gamma is None else gamma
        if g <= 0:
            return None
        return DissipationSpec(
            l=self.l,
            alpha=self.alpha if alpha is None else alpha,
            gamma=g,
            bc=self.bc,
            jw_strings=self.jw_strings,
        )

    def propagator(self) -> PropagatorParams:
        return PropagatorParams(
            method=self.method, dt=self.dt, krylov_dim=self.krylov_dim
        )

    def initial_state(self) -> OccupationState:
        return OccupationState.from_string(self.initial_pattern)

    def t_grid(self) -> np.ndarray:
        n = int(round((self.t_stop - self.t_start) / self.t_stride))
        return self.t_start + self.t_stride * np.arange(n + 1)

    def resolve_mode(self) -> SectorMode:
        spec = self.sector_mode
        if spec == "all":
            return SectorMode.all_sectors()
        if spec == "parity":
            return SectorMode.parity_constrained()
        if spec.startswith("sample:"):
            parts = spec.split(":")
            if len(parts) == 2:
                return SectorMode.sample(int(parts[1]), self.seed)
            if len(parts) == 3:
                return SectorMode.sample(int(parts[1]), int(parts[2]))
        if spec.startswith("single:"):
            pat = spec.split(":", 1)[1]
            q = tuple(1 if c in "+1" else -1 for c in pat)
            return SectorMode.single(q)
        raise ConfigError(f"cannot parse sector_mode {spec!r}")

    def resolve_threads(self) -> int:
        if self.threads > 0:
            return self.threads
        env = os.environ.get("Z2DFL_THREADS", "")
        return int(env) if env.isdigit() and int(env) > 0 else 1

    def to_flat(self) -> str:
        """Flat key=value text, one key per line."""
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_flat(cls, text: str, base: "ScenarioConfig | None" = None):
        cfg = base or cls()
        overrides = {}
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {ln}: expected key=value, got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            overrides[key] = value
        return cfg.with_overrides(overrides)

    def with_overrides(self, overrides: dict) -> "ScenarioConfig":
        fields = {f.name: f for f in dataclasses.fields(self)}
        parsed = {}
        for key, value in overrides.items():
            if key not in fields:
                raise ConfigError(f"unknown config key {key!r}")
            parsed[key] = _parse_field(fields[key], value)
        return replace(self, **parsed)


def _parse_field(f, value: str):
    if isinstance(value, str):
        if f.type in ("int", int):
            return int(value)
        if f.type in ("float", float):
            return float(value)
        if f.type in ("bool", bool):
            return value.lower() in ("1", "true", "yes")
        if "tuple" in str(f.type):
            value = value.strip()
            return tuple(float(x) for x in value.split(",")) if value else ()
    return value


PRESETS = {
    # unitary localization strengths; h values are representative picks
    "fig1": ScenarioConfig(
        L=10, Nf=5, gamma_over_J=0.0, initial_pattern="1010101010",
        sector_mode="all", t_stop=150.0, h_variants=(0.25, 0.5, 1.0),
    ),
    "fig2": ScenarioConfig(
        L=10, Nf=5, h_over_J=0.5, gamma_over_J=1.0, l=2, alpha=0.0,
        initial_pattern="1010101010", sector_mode="sample:128:7", t_stop=150.0,
    ),
    "fig3": ScenarioConfig(
        L=10, Nf=5, h_over_J=0.5, gamma_over_J=1.0, l=2,
        initial_pattern="1010101010", sector_mode="sample:64:7",
        gamma_variants=(1.0, 0.5),
    ),
    "fig4": ScenarioConfig(
        L=12, Nf=4, h_over_J=0.5, gamma_over_J=1.0, l=3,
        initial_pattern="100100100100", sector_mode="sample:32:7", t_stop=150.0,
    ),
    "fig5": ScenarioConfig(
        L=12, Nf=3, h_over_J=0.5, gamma_over_J=1.0, l=4,
        initial_pattern="100010001000", sector_mode="sample:32:7", t_stop=150.0,
    ),
    "ci_small": ScenarioConfig(
        L=8, Nf=4, h_over_J=0.5, gamma_over_J=1.0, l=2, alpha=0.0,
        initial_pattern="10101010", sector_mode="sample:32:7", t_stop=150.0,
    ),
}


def preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        )
    return PRESETS[name]


@dataclass
class RunManifest:
    config: dict
    version: str
    wall_time_s: float
    sector_count: int
    sector_mode: str
    steady_converged: list
    steady_residual_max: float | None
    files: dict  # name -> sha256

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _trace_table(result, label: str) -> str:
    rows = ["# t,trace,min_eig,hermiticity_residual,fidelity"]
    for i, t in enumerate(result.times):
        vals = (
            t, result.trace[i], result.min_eigenvalue[i],
            result.hermiticity_residual[i], result.fidelity[i],
        )
        if not np.all(np.isfinite(vals)):
            raise RuntimeError(f"non-finite row in {label} at t={t}")
        rows.append(",".join(f"{v:.12e}" for v in vals))
    return "\n".join(rows) + "\n"


def _profile_table(profile) -> str:
    return "# index,bitstring,value\n" + profile.dump() + "\n"


def run_scenario(cfg: ScenarioConfig, out_dir: str | None = None) -> RunManifest:
    """Execute the configured ensemble run(s) and persist all outputs."""
    cfg.validate()
    t0 = time.monotonic()
    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    psi0 = cfg.initial_state()
    basis = enumerate_basis(cfg.L, cfg.Nf)
    mode = cfg.resolve_mode()
    workers = cfg.resolve_threads()
    grid = cfg.t_grid()
    files: dict[str, str] = {}
    steady_flags: list[bool] = []
    steady_resid: list[float] = []
    sector_count = 0

    h_values = cfg.h_variants or (cfg.h_over_J,)
    for h in h_values:
        tag = f"_h{h:g}" if len(h_values) > 1 else ""
        params = ModelParams(J=1.0, h=h, bc=cfg.bc)
        unit = ensemble_evolve(
            psi0, cfg.Nf, params, mode, grid, prop=cfg.propagator(),
            workers=workers,
        )
        sector_count = unit.n_sectors
        name = f"fidelity_unitary{tag}.dat"
        (out / name).write_text(_trace_table(unit, name))
        files[name] = _sha256(out / name)

        diss = cfg.dissipation()
        if diss is not None:
            dis = ensemble_evolve(
                psi0, cfg.Nf, params, mode, grid, dissipation=diss,
                prop=cfg.propagator(), want_steady=True, workers=workers,
            )
            name = f"fidelity_dissipative{tag}.dat"
            (out / name).write_text(_trace_table(dis, name))
            files[name] = _sha256(out / name)
            name = f"steady_diagonal{tag}.dat"
            (out / name).write_text(
                _profile_table(diagonal_profile(dis.steady, basis))
            )
            files[name] = _sha256(out / name)
            steady_flags.extend(dis.steady_converged)
            steady_resid.extend(dis.steady_residuals)

    manifest = RunManifest(
        config=dataclasses.asdict(cfg),
        version=__version__,
        wall_time_s=time.monotonic() - t0,
        sector_count=sector_count,
        sector_mode=mode.describe(),
        steady_converged=steady_flags,
        steady_residual_max=max(steady_resid) if steady_resid else None,
        files=files,
    )
    (out / "manifest.json").write_text(manifest.to_json())
    return manifest


def run_alpha_sweep(cfg: ScenarioConfig, alphas) -> list[tuple[float, float, bool]]:
    """Steady-state fidelity versus dissipation phase.

    Returns rows (alpha, F_ss, all_sectors_converged); one steady-state solve
    per (sector, alpha), averaged in enumeration order.
    """
    cfg.validate()
    alphas = list(alphas)
    if any(a < 0 or a > np.pi + 1e-12 for a in alphas):
        raise ConfigError("alpha grid must lie in [0, pi]")
    if cfg.gamma_over_J <= 0:
        raise ConfigError("alpha sweep needs gamma_over_J > 0")
    psi0 = cfg.initial_state()
    basis = enumerate_basis(cfg.L, cfg.Nf)
    ref = state_vector(basis, psi0)
    mode = cfg.resolve_mode()
    rows = []
    for a in alphas:
        res = ensemble_evolve(
            psi0, cfg.Nf, cfg.model_params(), mode, [0.0],
            dissipation=cfg.dissipation(alpha=a), prop=cfg.propagator(),
            want_steady=True, steady_method="evolve",
            workers=cfg.resolve_threads(),
        )
        f_ss = pure_reference_fidelity(res.steady, ref)
        rows.append((float(a), float(f_ss), all(res.steady_converged)))
    return rows


def alpha_sweep_table(rows) -> str:
    out = ["# alpha,F_ss,converged"]
    for a, f, ok in rows:
        out.append(f"{a:.12e},{f:.12e},{int(ok)}")
    return "\n".join(out) + "\n"
