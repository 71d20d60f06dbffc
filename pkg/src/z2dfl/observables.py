"""Fidelity and density-matrix diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import OccupationState, SectorBasis
from .lindblad import DensityMatrix


@dataclass(frozen=True)
class FidelityTrace:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")

    def window_mean(self, t_lo: float, t_hi: float) -> float:
        mask = (self.times >= t_lo) & (self.times <= t_hi)
        if not mask.any():
            raise ValueError(f"no samples in window [{t_lo}, {t_hi}]")
        return float(self.values[mask].mean())


@dataclass(frozen=True)
class DiagonalProfile:
    """Real diagonal of rho in 1-based basis order."""

    indices: np.ndarray  # 1-based
    values: np.ndarray
    basis: SectorBasis

    def top(self, k: int) -> list[tuple[int, str, float]]:
        order = np.argsort(self.values)[::-1][:k]
        return [
            (int(self.indices[i]), self.basis.states[i].bitstring(),
             float(self.values[i]))
            for i in order
        ]

    def dump(self) -> str:
        """Rows 'index,bitstring,value'."""
        return "\n".join(
            f"{int(i)},{self.basis.states[i - 1].bitstring()},{v:.12e}"
            for i, v in zip(self.indices, self.values)
        )


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root; small negative eigenvalues clamp to 0."""
    w, V = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def uhlmann_fidelity(rho: DensityMatrix, rho0: DensityMatrix) -> float:
    """tr sqrt(sqrt(rho) rho0 sqrt(rho))."""
    if rho.dim != rho0.dim:
        raise ValueError(f"dimension mismatch {rho.dim} vs {rho0.dim}")
    rho.validate()
    rho0.validate()
    s = _sqrtm_psd(rho.mat)
    inner = s @ rho0.mat @ s
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    # eigenvalues at the numerical-noise floor would contribute sqrt(eps)
    # each; zero them so rank-deficient inner matrices stay exact
    if w.size and w[-1] > 0:
        w[w < w[-1] * w.size * np.finfo(float).eps] = 0.0
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())


def pure_reference_fidelity(rho: DensityMatrix, psi0: np.ndarray) -> float:
    """sqrt(<psi0| rho |psi0>) for a normalized reference vector."""
    v = np.asarray(psi0, dtype=complex)
    v = v / np.linalg.norm(v)
    val = np.vdot(v, rho.mat @ v).real
    return float(np.sqrt(max(val, 0.0)))


def state_vector(basis: SectorBasis, s: OccupationState) -> np.ndarray:
    """Unit vector of the basis state s."""
    v = np.zeros(basis.dim)
    v[basis.index_of(s) - 1] = 1.0
    return v


def diagonal_profile(rho: DensityMatrix, basis: SectorBasis) -> DiagonalProfile:
    if rho.dim != basis.dim:
        raise ValueError(f"rho dim {rho.dim} != basis dim {basis.dim}")
    return DiagonalProfile(
        indices=np.arange(1, basis.dim + 1),
        values=rho.diagonal(),
        basis=basis,
    )


def occupation_profile(rho: DensityMatrix, basis: SectorBasis) -> np.ndarray:
    """<n_j> for each site, from the diagonal of rho."""
    diag = rho.diagonal()
    occ = np.zeros(basis.L)
    for p, s in zip(diag, basis.states):
        for j in range(1, basis.L + 1):
            if s.bit(j):
                occ[j - 1] += p
    return occ
