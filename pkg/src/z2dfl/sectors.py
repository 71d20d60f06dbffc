"""Charge-sector ensembles: the emergent-disorder average.

A scenario is evolved once per charge pattern q and the resulting density
matrices are averaged with uniform weights, in enumeration order, so that a
run is reproducible bit-for-bit regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fock import OccupationState, enumerate_basis
from .gauge_model import ChargeConfig, ModelParams, build_sector_hamiltonian
from .lindblad import (
    DensityMatrix,
    DissipationSpec,
    PropagatorParams,
    build_jump_operators,
    propagate,
    steady_state_evolve,
    steady_state_nullspace,
)

ENUMERATION_MAX_SITES = 14


@dataclass(frozen=True)
class SectorMode:
    variant: str  # 'all' | 'parity_constrained' | 'sample' | 'single'
    count: int = 0
    seed: int = 0
    q: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.variant not in ("all", "parity_constrained", "sample", "single"):
            raise ValueError(f"unknown sector mode {self.variant!r}")
        if self.variant == "sample" and self.count < 1:
            raise ValueError("sample mode needs count >= 1")
        if self.variant == "single" and self.q is None:
            raise ValueError("single mode needs a charge pattern")

    @classmethod
    def all_sectors(cls) -> "SectorMode":
        return cls("all")

    @classmethod
    def parity_constrained(cls) -> "SectorMode":
        return cls("parity_constrained")

    @classmethod
    def sample(cls, count: int, seed: int) -> "SectorMode":
        return cls("sample", count=count, seed=seed)

    @classmethod
    def single(cls, q) -> "SectorMode":
        return cls("single", q=tuple(int(v) for v in q))

    def describe(self) -> str:
        if self.variant == "sample":
            return f"sample(count={self.count}, seed={self.seed})"
        if self.variant == "single":
            return f"single(q={self.q})"
        return self.variant


def _lexicographic_configs(L: int):
    # +1 sorts before -1, matching bit 0 / bit 1 of the counter
    for m in range(1 << L):
        yield ChargeConfig(
            tuple(1 - 2 * ((m >> (L - 1 - j)) & 1) for j in range(L))
        )


def enumerate_sectors(L: int, mode: SectorMode, Nf: int | None = None):
    """Ordered charge patterns for the requested ensemble."""
    if mode.variant in ("all", "parity_constrained") and L > ENUMERATION_MAX_SITES:
        raise ValueError(
            f"exhaustive sector enumeration capped at L={ENUMERATION_MAX_SITES}; "
            "use sample mode"
        )
    if mode.variant == "all":
        return list(_lexicographic_configs(L))
    if mode.variant == "parity_constrained":
        if Nf is None:
            raise ValueError("parity-constrained mode needs Nf")
        want = (-1) ** Nf
        return [q for q in _lexicographic_configs(L) if q.parity() == want]
    if mode.variant == "sample":
        rng = np.random.default_rng(mode.seed)
        draws = rng.integers(0, 2, size=(mode.count, L))
        return [ChargeConfig(tuple(1 - 2 * int(b) for b in row)) for row in draws]
    q = mode.q
    if len(q) != L:
        raise ValueError(f"single-mode pattern has length {len(q)}, expected {L}")
    return [ChargeConfig(q)]


@dataclass
class EnsembleResult:
    """Sector-averaged trajectory summaries and (optional) steady state."""

    times: np.ndarray
    fidelity: np.ndarray  # F(rho_bar(t), |psi0><psi0|)
    per_sector_overlap: np.ndarray  # <psi0|rho_q(t)|psi0>, shape (n_sectors, n_t)
    rho_final: DensityMatrix
    weights: np.ndarray
    sectors: list[ChargeConfig]
    mode: SectorMode
    trace: np.ndarray = field(default=None)
    hermiticity_residual: np.ndarray = field(default=None)
    min_eigenvalue: np.ndarray = field(default=None)
    steady: DensityMatrix | None = None
    steady_residuals: list[float] = field(default_factory=list)
    steady_converged: list[bool] = field(default_factory=list)

    @property
    def n_sectors(self) -> int:
        return len(self.sectors)


def _sector_job(args):
    (L, Nf, psi0_value, params, q, dissipation, t_grid, prop,
     want_steady, steady_method) = args
    basis = enumerate_basis(L, Nf)
    psi0 = np.zeros(basis.dim)
    psi0[basis._index[psi0_value] - 1] = 1.0
    H = build_sector_hamiltonian(basis, q, params)
    t_grid = np.asarray(t_grid, dtype=float)
    n_t = t_grid.size

    dissipative = dissipation is not None and dissipation.gamma > 0
    if not dissipative:
        E, V = np.linalg.eigh(H.toarray())
        c0 = V.conj().T @ psi0
        overlap = np.empty(n_t)
        for i, t in enumerate(t_grid):
            amps = V @ (np.exp(-1j * E * t) * c0)
            overlap[i] = np.abs(np.vdot(psi0, amps)) ** 2
        amps_T = V @ (np.exp(-1j * E * t_grid[-1]) * c0)
        rho_T = np.outer(amps_T, amps_T.conj())
        inv = np.zeros((3, n_t))
        inv[0] = 1.0
        return overlap, rho_T, inv, None, np.nan, True

    jumps = build_jump_operators(basis, dissipation)
    gammas = dissipation.gamma
    rho0 = DensityMatrix.from_pure(psi0)
    overlap = np.empty(n_t)
    inv = np.zeros((3, n_t))
    k = {"i": 0}

    def observe(t, dm):
        i = k["i"]
        overlap[i] = np.vdot(psi0, dm.mat @ psi0).real
        inv[0, i] = dm.mat.trace().real
        inv[1, i] = dm.hermiticity_residual()
        inv[2, i] = dm.min_eigenvalue() if prop.check_positivity else 0.0
        k["i"] += 1

    final = propagate(rho0, H, jumps, gammas, t_grid, prop,
                      callback=observe, keep="last")[0]

    steady = residual = None
    converged = True
    if want_steady:
        # the superoperator factorization gets expensive well before the
        # nullspace cap; continuing the trajectory is cheaper per sector
        method = steady_method
        if method == "auto":
            method = "nullspace" if basis.dim <= 32 else "evolve"
        if method == "nullspace":
            res = steady_state_nullspace(H, jumps, gammas)
        else:
            res = steady_state_evolve(final, H, jumps, gammas, prop)
        steady, residual, converged = res.rho.mat, res.residual, res.converged
    return overlap, final.mat, inv, steady, residual, converged


def ensemble_evolve(
    psi0: OccupationState,
    Nf: int,
    params: ModelParams,
    mode: SectorMode,
    t_grid,
    dissipation: DissipationSpec | None = None,
    prop: PropagatorParams | None = None,
    want_steady: bool = False,
    steady_method: str = "auto",
    workers: int = 1,
) -> EnsembleResult:
    """Evolve |psi0><psi0| in every sector of the ensemble and average."""
    if psi0.n_particles != Nf:
        raise ValueError(f"psi0 has {psi0.n_particles} particles, expected {Nf}")
    prop = prop or PropagatorParams()
    L = psi0.L
    sectors = enumerate_sectors(L, mode, Nf)
    t_grid = np.asarray(t_grid, dtype=float)
    n = len(sectors)
    weights = np.full(n, 1.0 / n)

    jobs = [
        (L, Nf, psi0.value, params, q, dissipation, t_grid, prop,
         want_steady, steady_method)
        for q in sectors
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sector_job, jobs, chunksize=1))
    else:
        results = [_sector_job(j) for j in jobs]

    # deterministic reduction in enumeration order
    dim = results[0][1].shape[0]
    overlaps = np.stack([r[0] for r in results])
    fid_sq = weights @ overlaps
    rho_final = np.zeros((dim, dim), dtype=complex)
    inv_tr = np.zeros(t_grid.size)  # weighted mean trace
    inv_he = np.zeros(t_grid.size)
    inv_lo = np.full(t_grid.size, np.inf)
    steady_sum = np.zeros((dim, dim), dtype=complex)
    steady_res, steady_ok = [], []
    any_steady = False
    for w, (ov, rho_T, inv, ss, res, ok) in zip(weights, results):
        rho_final += w * rho_T
        inv_tr += w * inv[0]
        inv_he = np.maximum(inv_he, inv[1])
        inv_lo = np.minimum(inv_lo, inv[2])
        if ss is not None:
            any_steady = True
            steady_sum += w * ss
            steady_res.append(float(res))
            steady_ok.append(bool(ok))
    return EnsembleResult(
        times=t_grid,
        fidelity=np.sqrt(np.clip(fid_sq, 0.0, None)),
        per_sector_overlap=overlaps,
        rho_final=DensityMatrix(rho_final),
        weights=weights,
        sectors=sectors,
        mode=mode,
        trace=inv_tr,
        hermiticity_residual=inv_he,
        min_eigenvalue=inv_lo,
        steady=DensityMatrix(steady_sum) if any_steady else None,
        steady_residuals=steady_res,
        steady_converged=steady_ok,
    )
