"""Built-in quick verification suite (the CLI `verify` subcommand).

A pared-down, dependency-free version of the oracle checks that the full
pytest suite covers in depth; each check prints one pass/fail line.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.sparse as sp

from .fock import OccupationState, enumerate_basis
from .gauge_model import (
    ChargeConfig, ModelParams, build_full_hamiltonian, charge_operator,
    duality_spectrum_check, gauge_transform_check,
)
from .lindblad import (
    DensityMatrix, DissipationSpec, PropagatorParams, build_jump_operators,
    lindblad_rhs, steady_state_evolve,
)
from .observables import uhlmann_fidelity


def _check_indexing():
    b = enumerate_basis(10, 5)
    expected = {
        "1010101010": 176, "0101010101": 77,
        "0000011111": 1, "1111100000": 252,
    }
    ok = b.dim == 252 and all(
        b.index_of(OccupationState.from_string(s)) == k
        for s, k in expected.items()
    )
    return ok, f"dim={b.dim}"


def _check_duality():
    worst = 0.0
    p = ModelParams(J=1.0, h=0.7, bc="periodic")
    for qs in itertools.product((1, -1), repeat=4):
        q = ChargeConfig(qs)
        if q.parity() != 1:
            continue
        worst = max(worst, duality_spectrum_check(4, 2, q, p))
    return worst < 1e-10, f"max mismatch {worst:.2e}"


def _check_gauge():
    rng = np.random.default_rng(0)
    worst = 0.0
    H = build_full_hamiltonian(4, 2, ModelParams())
    for j in range(1, 5):
        qj = charge_operator(4, 2, j)
        comm = H @ qj - qj @ H
        if comm.nnz:
            worst = max(worst, float(np.abs(comm.data).max()))
    for _ in range(5):
        theta = rng.choice([1, -1], size=4)
        worst = max(worst, gauge_transform_check(4, 2, theta))
    return worst < 1e-12, f"max residual {worst:.2e}"


def _check_dark_state():
    b = enumerate_basis(2, 1)
    jumps = build_jump_operators(b, DissipationSpec(l=1, alpha=0.0, bc="open"))
    rho0 = DensityMatrix.from_pure(np.array([0.0, 1.0]))
    H = sp.csr_matrix((2, 2), dtype=complex)
    res = steady_state_evolve(rho0, H, jumps, 1.0,
                              PropagatorParams(ss_residual=1e-10))
    s = np.array([1.0, 1.0]) / np.sqrt(2)
    dist = 0.5 * np.abs(
        np.linalg.eigvalsh(res.rho.mat - np.outer(s, s))
    ).sum()
    return res.converged and dist < 1e-6, f"trace distance {dist:.2e}"


def _check_generator_trace():
    b = enumerate_basis(6, 3)
    jumps = build_jump_operators(b, DissipationSpec(l=2))
    from .gauge_model import build_sector_hamiltonian
    H = build_sector_hamiltonian(b, ChargeConfig((1, -1) * 3), ModelParams())
    rng = np.random.default_rng(1)
    A = rng.normal(size=(b.dim, b.dim)) + 1j * rng.normal(size=(b.dim, b.dim))
    rho = A @ A.conj().T
    rho /= rho.trace()
    drho = lindblad_rhs(rho, H, jumps, 1.0)
    tr = abs(drho.trace())
    herm = float(np.abs(drho - drho.conj().T).max())
    return tr < 1e-12 and herm < 1e-12, f"|tr|={tr:.2e} herm={herm:.2e}"


def _check_fidelity():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    rho = DensityMatrix((A @ A.conj().T) / np.trace(A @ A.conj().T))
    f = uhlmann_fidelity(rho, rho)
    return abs(f - 1.0) < 1e-10, f"F(rho,rho)={f:.12f}"


CHECKS = [
    ("basis indexing", _check_indexing),
    ("duality spectra (L=4)", _check_duality),
    ("gauge invariance (L=4)", _check_gauge),
    ("two-site dark state", _check_dark_state),
    ("generator trace/hermiticity", _check_generator_trace),
    ("fidelity self-consistency", _check_fidelity),
]


def run_checks(emit=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a check crashing is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        emit(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
