"""Hamiltonians of the Z2 gauge model.

Two representations are provided:

* ``build_sector_hamiltonian`` - the composite-fermion chain within one
  charge sector: free hopping plus a binary on-site potential set by the
  sector's +-1 charge pattern.  This is what all dynamics run on.
* ``build_full_hamiltonian`` - the fermion (x) link-spin model at small
  sizes, used only as an oracle: it carries the local conserved charges
  explicitly, so gauge invariance and the sector-wise equivalence of the two
  representations can be verified numerically.

Link spins live in the sigma^z eigenbasis; link j is the bond (j, j+1), with
link L wrapping to (L, 1) for periodic chains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import SectorBasis, build_quadratic_operator, enumerate_basis

# Full fermion-plus-gauge-field space grows as C(L,Nf) * 2^L; it exists only
# to cross-check the per-sector representation at small sizes.
FULL_SPACE_MAX_SITES = 8


class EmptySectorError(ValueError):
    """Charge pattern violates the ring constraint prod q_j = (-1)^Nf."""


@dataclass(frozen=True)
class ModelParams:
    J: float = 1.0
    h: float = 0.5
    bc: str = "periodic"

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if self.h < 0:
            raise ValueError(f"h must be non-negative, got {self.h}")
        if self.bc not in ("periodic", "open"):
            raise ValueError(f"bc must be 'periodic' or 'open', got {self.bc!r}")


@dataclass(frozen=True)
class ChargeConfig:
    """One +-1 pattern labeling a gauge sector."""

    q: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.q):
            raise ValueError(f"charges must be +-1, got {self.q}")

    @property
    def L(self) -> int:
        return len(self.q)

    @classmethod
    def uniform(cls, L: int, value: int = 1) -> "ChargeConfig":
        return cls(q=(value,) * L)

    def parity(self) -> int:
        p = 1
        for v in self.q:
            p *= v
        return p


def _bonds(L: int, bc: str) -> list[tuple[int, int]]:
    bonds = [(j, j + 1) for j in range(1, L)]
    if bc == "periodic":
        bonds.append((L, 1))
    return bonds


def build_sector_hamiltonian(
    basis: SectorBasis, q: ChargeConfig, p: ModelParams
) -> sp.csr_matrix:
    """H(q) = -J sum_<jk> (c^dag_j c_k + h.c.) + 2h sum_j q_j (n_j - 1/2)."""
    if q.L != basis.L:
        raise ValueError(f"charge pattern has L={q.L}, basis has L={basis.L}")
    if p.bc == "periodic" and basis.L == 2:
        # the two bonds of a periodic 2-site ring coincide
        raise ValueError("periodic bc is ill-defined at L=2; use open bc")
    terms = []
    for j, k in _bonds(basis.L, p.bc):
        terms.append((-p.J, j, k))
        terms.append((-p.J, k, j))
    for j in range(1, basis.L + 1):
        terms.append((2.0 * p.h * q.q[j - 1], j, j))
    H = build_quadratic_operator(basis, terms)
    # the -1/2 in the charge term is a scalar at fixed filling
    shift = -p.h * sum(q.q)
    return (H + shift * sp.identity(basis.dim, dtype=complex, format="csr")).tocsr()


# --- full fermion (x) gauge-field representation -------------------------


def _check_full_space(L: int):
    if L > FULL_SPACE_MAX_SITES:
        raise ValueError(
            f"full-space representation capped at L={FULL_SPACE_MAX_SITES}, got {L}"
        )


def _n_links(L: int, bc: str) -> int:
    return L if bc == "periodic" else L - 1


def _sigma_z(L_links: int, link: int) -> sp.dia_matrix:
    """sigma^z on one link; link 1 is the most significant bit."""
    dim = 1 << L_links
    shift = L_links - link
    diag = np.array([1.0 - 2.0 * ((m >> shift) & 1) for m in range(dim)])
    return sp.diags(diag.astype(complex))

def _sigma_x(L_links: int, links: tuple[int, ...]) -> sp.csr_matrix:
    """Product of sigma^x over the given links (a bit-flip permutation)."""
    dim = 1 << L_links
    mask = 0
    for link in links:
        mask |= 1 << (L_links - link)
    rows = np.arange(dim) ^ mask
    return sp.csr_matrix(
        (np.ones(dim, dtype=complex), (rows, np.arange(dim))), shape=(dim, dim)
    )


def build_full_hamiltonian(L: int, Nf: int, p: ModelParams) -> sp.csr_matrix:
    """Fermion hopping dressed by link sigma^z, plus the -h sigma^x sigma^x term.

    Acts on (fermion sector basis) (x) (link spins); gauge-field dynamics at
    small L only.
    """
    _check_full_space(L)
    basis = enumerate_basis(L, Nf)
    nl = _n_links(L, p.bc)
    link_dim = 1 << nl
    link_eye = sp.identity(link_dim, dtype=complex, format="csr")
    H = sp.csr_matrix((basis.dim * link_dim, basis.dim * link_dim), dtype=complex)
    for link, (j, k) in enumerate(_bonds(L, p.bc), start=1):
        hop = build_quadratic_operator(basis, [(-p.J, j, k), (-p.J, k, j)])
        H = H + sp.kron(hop, _sigma_z(nl, link), format="csr")
    ferm_eye = sp.identity(basis.dim, dtype=complex, format="csr")
    if p.bc == "periodic":
        pairs = [(L if j == 1 else j - 1, j) for j in range(1, L + 1)]
    else:
        pairs = [(j - 1, j) for j in range(2, L)]
    for left, right in pairs:
        xx = _sigma_x(nl, (left, right))
        H = H - p.h * sp.kron(ferm_eye, xx, format="csr")
    return H.tocsr()


def charge_operator(L: int, Nf: int, j: int) -> sp.csr_matrix:
    """q_j = (-1)^(n_j) sigma^x_{j-1,j} sigma^x_{j,j+1} (periodic chain)."""
    _check_full_space(L)
    if not 1 <= j <= L:
        raise ValueError(f"site {j} out of range 1..{L}")
    basis = enumerate_basis(L, Nf)
    parity = sp.diags(
        np.array([1.0 - 2.0 * s.bit(j) for s in basis.states], dtype=complex)
    )
    left = L if j == 1 else j - 1
    return sp.kron(parity, _sigma_x(L, (left, j)), format="csr")


def gauge_transform_check(
    L: int, Nf: int, theta, p: ModelParams | None = None
) -> float:
    """Max-norm residual of U H U^dag - H for the gauge rotation set by theta.

    U is the product of charge operators over the sites with theta_j = -1.
    """
    p = p or ModelParams()
    if p.bc != "periodic":
        raise ValueError("gauge check requires periodic bc")
    theta = tuple(int(t) for t in theta)
    if len(theta) != L or any(t not in (1, -1) for t in theta):
        raise ValueError(f"theta must be a length-{L} +-1 sequence, got {theta}")
    H = build_full_hamiltonian(L, Nf, p)
    dim = H.shape[0]
    U = sp.identity(dim, dtype=complex, format="csr")
    for j, t in enumerate(theta, start=1):
        if t == -1:
            U = (U @ charge_operator(L, Nf, j)).tocsr()
    resid = U @ H @ U.conj().T - H
    return 0.0 if resid.nnz == 0 else float(np.abs(resid.data).max())


def sector_projected_basis(L: int, Nf: int, q: ChargeConfig) -> np.ndarray:
    """Orthonormal columns spanning the {q_hat_j = q_j} subspace of the full
    model, restricted to the +1 eigenspace of the global link-flip parity.

    For each fermion state the charge pattern fixes the dual site-spin values
    tau^z_j = q_j (-1)^(n_j), which determine the link sigma^x configuration
    up to a global flip; symmetrizing over that flip leaves exactly one
    column per fermion state.
    """
    if q.parity() != (-1) ** Nf:
        raise EmptySectorError(
            f"sector {q.q} is empty: prod q_j = {q.parity()} != (-1)^Nf"
        )
    basis = enumerate_basis(L, Nf)
    link_dim = 1 << L
    pops = np.array([m.bit_count() for m in range(link_dim)])
    B = np.zeros((basis.dim * link_dim, basis.dim), dtype=float)
    for col, s in enumerate(basis.states):
        tau = [q.q[j - 1] * (1 - 2 * s.bit(j)) for j in range(1, L + 1)]
        # x[j] = sigma^x value on link j, from tau^z_j = x_{j-1} x_j with
        # seed x[L] = +1; the ring closes because prod tau^z = +1 here
        x = [1] * (L + 1)
        x[1] = tau[0] * x[L]
        for j in range(2, L):
            x[j] = tau[j - 1] * x[j - 1]
        assert tau[L - 1] * x[L - 1] == x[L]
        comp = np.ones(link_dim)
        for j in range(1, L + 1):
            bit = (np.arange(link_dim) >> (L - j)) & 1
            comp *= np.where(bit == 1, float(x[j]), 1.0)
        comp /= np.sqrt(link_dim)
        # G=+1 combination of |x> and its global flip
        vec = comp * (1.0 + (-1.0) ** pops) / np.sqrt(2.0)
        B[col * link_dim : (col + 1) * link_dim, col] = vec
    return B


def duality_spectrum_check(
    L: int, Nf: int, q: ChargeConfig, p: ModelParams
) -> float:
    """Max |sorted spectrum mismatch| between the projected full model and the
    per-sector composite-fermion Hamiltonian."""
    if p.bc != "periodic":
        raise ValueError("duality check requires periodic bc")
    B = sector_projected_basis(L, Nf, q)
    H_full = build_full_hamiltonian(L, Nf, p)
    H_proj = B.T @ (H_full @ B)
    basis = enumerate_basis(L, Nf)
    H_sector = build_sector_hamiltonian(basis, q, p).toarray()
    ev_full = np.linalg.eigvalsh(H_proj)
    ev_sector = np.linalg.eigvalsh(H_sector)
    return float(np.abs(ev_full - ev_sector).max())


def export_coordinates(op: sp.spmatrix) -> str:
    """Coordinate-list dump 'row,col,re,im' (0-based rows/cols)."""
    coo = op.tocoo()
    lines = [
        f"{r},{c},{v.real:.17g},{v.imag:.17g}"
        for r, c, v in zip(coo.row, coo.col, coo.data)
    ]
    return "\n".join(lines)
