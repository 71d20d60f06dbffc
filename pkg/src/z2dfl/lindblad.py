"""Lindblad dynamics: jump operators, propagation, steady states.

The generator is always applied matrix-free during propagation (sparse
operator times dense density matrix); the vectorized superoperator is
materialized only inside :func:`steady_state_nullspace`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import expm

from .fock import SectorBasis, build_quadratic_operator

# dim**2 x dim**2 sparse assembly; beyond this use steady_state_evolve
NULLSPACE_MAX_DIM = 300

# vectorized density matrices below this dimension integrate faster with
# plain rk4; above it the Arnoldi exponential wins
KRYLOV_DIM_THRESHOLD = 16


class InvariantViolation(RuntimeError):
    """A density matrix left the physical set beyond tolerance."""


class PropagationError(RuntimeError):
    """Step control bottomed out without restoring the invariants."""


@dataclass(frozen=True)
class DissipationSpec:
    """Pairwise jump dissipation: range l, phase alpha, rates Gamma_j.

    ``jw_strings`` selects how the two-site jump operators treat the sites
    between the pair.  The default (False) moves occupation between sites j
    and j+l directly, so a pair of equally occupied sites is always dark;
    this occupation-basis convention is the one that produces the
    density-wave steady-state peaks the dissipative scenarios target.  With
    True the operators are the literal second-quantized quadratic forms,
    including the fermionic exchange string across the l-1 intermediate
    sites, which reverses the effect for even strings.
    """

    l: int = 2
    alpha: float = 0.0
    gamma: float = 1.0
    bc: str = "periodic"
    jw_strings: bool = False

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"jump range must be >= 1, got {self.l}")
        if self.gamma < 0:
            raise ValueError(f"rate must be >= 0, got {self.gamma}")
        if self.bc not in ("periodic", "open"):
            raise ValueError(f"bc must be 'periodic' or 'open', got {self.bc!r}")

    def n_operators(self, L: int) -> int:
        return L if self.bc == "periodic" else L - self.l


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state on a sector basis."""

    mat: np.ndarray

    HERM_TOL = 1e-10
    TRACE_TOL = 1e-8
    EIG_TOL = 1e-8

    @classmethod
    def from_pure(cls, vec: np.ndarray) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace_error(self) -> float:
        return abs(self.mat.trace() - 1.0)

    def hermiticity_residual(self) -> float:
        return float(np.abs(self.mat - self.mat.conj().T).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])

    def validate(self, check_positivity: bool = True) -> None:
        herm = self.hermiticity_residual()
        if herm > self.HERM_TOL:
            raise InvariantViolation(f"hermiticity residual {herm:.3e}")
        tr = self.trace_error()
        if tr > self.TRACE_TOL:
            raise InvariantViolation(f"trace error {tr:.3e}")
        if check_positivity:
            lo = self.min_eigenvalue()
            if lo < -self.EIG_TOL:
                raise InvariantViolation(f"negative eigenvalue {lo:.3e}")

    def diagonal(self) -> np.ndarray:
        return self.mat.diagonal().real.copy()


@dataclass(frozen=True)
class PropagatorParams:
    method: str = "auto"  # 'rk4' | 'krylov-exp' | 'auto'
    dt: float = 0.02
    krylov_dim: int = 30
    krylov_tol: float = 1e-9
    t_max: float = 1000.0
    ss_residual: float = 1e-8
    check_positivity: bool = True
    max_halvings: int = 10

    def __post_init__(self):
        if self.method not in ("rk4", "krylov-exp", "auto"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.dt <= 0 or self.krylov_tol <= 0 or self.ss_residual <= 0:
            raise ValueError("steps and thresholds must be positive")

    def resolve_method(self, dim: int) -> str:
        if self.method != "auto":
            return self.method
        return "krylov-exp" if dim >= KRYLOV_DIM_THRESHOLD else "rk4"


def build_jump_operators(basis: SectorBasis, d: DissipationSpec) -> list[sp.csr_matrix]:
    """O_j = (c^dag_j + e^{i a} c^dag_{j+l})(c_j - e^{i a} c_{j+l}), one per
    allowed j (all L sites when periodic, the first L-l when open)."""
    L = basis.L
    if d.l >= L:
        raise ValueError(f"jump range l={d.l} must be < L={L}")
    phase = np.exp(1j * d.alpha)
    ops = []
    starts = range(1, L + 1) if d.bc == "periodic" else range(1, L - d.l + 1)
    for j in starts:
        k = (j + d.l - 1) % L + 1
        terms = [
            (1.0, j, j),
            (-phase, j, k),
            (np.conj(phase), k, j),
            (-1.0, k, k),
        ]
        ops.append(
            build_quadratic_operator(basis, terms, exchange_signs=d.jw_strings)
        )
    return ops


def _as_rates(gammas, n: int) -> np.ndarray:
    g = np.atleast_1d(np.asarray(gammas, dtype=float))
    if g.size == 1:
        g = np.full(n, g[0])
    if g.size != n:
        raise ValueError(f"need {n} rates, got {g.size}")
    if np.any(g < 0):
        raise ValueError("rates must be >= 0")
    return g


class LindbladGenerator:
    """Matrix-free action of the Lindblad generator for fixed (H, jumps)."""

    def __init__(self, H: sp.spmatrix, jumps, gammas):
        self.H = H.tocsr()
        self.jumps = [O.tocsr() for O in jumps]
        self.gammas = _as_rates(gammas, len(self.jumps))
        self.dim = H.shape[0]
        # K = sum_j Gamma_j O_j^dag O_j enters only through the anticommutator
        K = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for g, O in zip(self.gammas, self.jumps):
            if g:
                K = K + g * (O.conj().T @ O)
        self.K = K.tocsr()

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self.H @ rho - rho @ self.H)
        out -= 0.5 * (self.K @ rho + rho @ self.K)
        for g, O in zip(self.gammas, self.jumps):
            if g:
                out += g * (O @ rho @ O.conj().T)
        return out

    def apply_vec(self, v: np.ndarray) -> np.ndarray:
        rho = v.reshape(self.dim, self.dim)
        return self.rhs(rho).reshape(-1)

    def residual(self, rho: np.ndarray) -> float:
        return float(np.linalg.norm(self.rhs(rho)))


def lindblad_rhs(rho: DensityMatrix | np.ndarray, H, jumps, gammas) -> np.ndarray:
    """-i[H, rho] + sum_j Gamma_j (O rho O^dag - 1/2 {O^dag O, rho})."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return LindbladGenerator(H, jumps, gammas).rhs(mat)


def _expmv_arnoldi(apply, v: np.ndarray, t: float, m: int, tol: float) -> np.ndarray:
    """exp(t*A) v via restarted Arnoldi with adaptive substeps."""
    n = v.size
    m = min(m, n)
    t_done = 0.0
    tau = t
    while t_done < t - 1e-14 * max(t, 1.0):
        tau = min(tau, t - t_done)
        beta = np.linalg.norm(v)
        if beta == 0.0:
            return v
        V = np.empty((n, m + 1), dtype=complex)
        Hm = np.zeros((m + 1, m), dtype=complex)
        V[:, 0] = v / beta
        kdim, breakdown = m, False
        for j in range(m):
            w = apply(V[:, j])
            for i in range(j + 1):
                c = np.vdot(V[:, i], w)
                Hm[i, j] = c
                w -= c * V[:, i]
            for i in range(j + 1):  # re-orthogonalization pass
                c = np.vdot(V[:, i], w)
                Hm[i, j] += c
                w -= c * V[:, i]
            hnorm = np.linalg.norm(w)
            Hm[j + 1, j] = hnorm
            if hnorm < 1e-12 * beta:
                kdim, breakdown = j + 1, True
                break
            V[:, j + 1] = w / hnorm
        while True:
            F = expm(tau * Hm[:kdim, :kdim])
            err = 0.0
            if not breakdown:
                err = float(beta * abs(Hm[kdim, kdim - 1]) * abs(F[kdim - 1, 0]))
            if err <= tol * max(1.0, beta) or tau < 1e-12:
                break
            tau *= 0.5
        v = beta * (V[:, :kdim] @ F[:, 0])
        t_done += tau
        tau *= 1.5
    return v


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if t[0] < 0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must ascend from t >= 0")
    return t


def propagate(
    rho0: DensityMatrix,
    H,
    jumps,
    gammas,
    t_grid,
    p: PropagatorParams | None = None,
    callback=None,
    keep: str = "all",
):
    """Evolve rho0 along t_grid (which must start at 0).

    Invariants are enforced at every output time; a violating interval is
    re-integrated with halved steps. ``callback(t, rho)`` runs per output
    time; with ``keep='last'`` only the final state is returned (for long
    trajectories whose full history would not fit in memory).
    """
    p = p or PropagatorParams()
    if keep not in ("all", "last"):
        raise ValueError(f"keep must be 'all' or 'last', got {keep!r}")
    t = _check_grid(t_grid)
    if t[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    gen = LindbladGenerator(H, jumps, gammas)
    method = p.resolve_method(gen.dim)
    rho0.validate(check_positivity=p.check_positivity)

    out: list[DensityMatrix] = []

    def emit(tv, dm):
        if callback is not None:
            callback(tv, dm)
        if keep == "all":
            out.append(dm)

    emit(t[0], rho0)
    rho = rho0.mat.copy()
    for t_lo, t_hi in zip(t[:-1], t[1:]):
        span = t_hi - t_lo
        n_sub = max(1, int(np.ceil(span / p.dt))) if method == "rk4" else 1
        for attempt in range(p.max_halvings + 1):
            trial = _advance(gen, rho, span, method, n_sub, p)
            dm = DensityMatrix(trial)
            try:
                dm.validate(check_positivity=p.check_positivity)
            except InvariantViolation as exc:
                if attempt == p.max_halvings:
                    raise PropagationError(
                        f"invariants unrecoverable at t={t_hi:g} "
                        f"(substeps={n_sub}): {exc}"
                    ) from exc
                n_sub *= 2
                continue
            break
        rho = trial
        emit(t_hi, dm)
    return out if keep == "all" else [DensityMatrix(rho)]


def _advance(gen, rho, span, method, n_sub, p: PropagatorParams):
    if method == "rk4":
        h = span / n_sub
        r = rho
        for _ in range(n_sub):
            k1 = gen.rhs(r)
            k2 = gen.rhs(r + 0.5 * h * k1)
            k3 = gen.rhs(r + 0.5 * h * k2)
            k4 = gen.rhs(r + h * k3)
            r = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return r
    v = rho.reshape(-1).copy()
    tol = p.krylov_tol / n_sub
    for _ in range(n_sub):
        v = _expmv_arnoldi(gen.apply_vec, v, span / n_sub, p.krylov_dim, tol)
    return v.reshape(rho.shape)


@dataclass
class SteadyStateResult:
    rho: DensityMatrix
    residual: float
    converged: bool
    t_reached: float = np.nan
    multiplicity: int = 1


def steady_state_evolve(
    rho0: DensityMatrix, H, jumps, gammas, p: PropagatorParams | None = None,
    chunk: float = 2.0,
) -> SteadyStateResult:
    """Propagate until ||L[rho]||_F drops below the residual threshold."""
    p = p or PropagatorParams()
    gen = LindbladGenerator(H, jumps, gammas)
    if not np.any(gen.gammas) or not gen.jumps:
        raise ValueError("steady state undefined without dissipation")
    rho = rho0
    t = 0.0
    resid = gen.residual(rho.mat)
    while resid >= p.ss_residual and t < p.t_max:
        step = min(chunk, p.t_max - t)
        rho = propagate(rho, H, jumps, gammas, [0.0, step], p, keep="last")[0]
        t += step
        resid = gen.residual(rho.mat)
    return SteadyStateResult(
        rho=rho, residual=resid, converged=resid < p.ss_residual, t_reached=t
    )


def build_superoperator(H, jumps, gammas) -> sp.csr_matrix:
    """Vectorized (row-major) Lindblad generator as a sparse matrix."""
    H = H.tocsr()
    dim = H.shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    Lsup = -1j * (sp.kron(H, eye) - sp.kron(eye, H.T))
    g = _as_rates(gammas, len(jumps))
    for gam, O in zip(g, jumps):
        if not gam:
            continue
        O = O.tocsr()
        OdO = (O.conj().T @ O).tocsr()
        Lsup = Lsup + gam * (
            sp.kron(O, O.conj())
            - 0.5 * sp.kron(OdO, eye)
            - 0.5 * sp.kron(eye, OdO.T)
        )
    return Lsup.tocsr()


def steady_state_nullspace(
    H, jumps, gammas, degeneracy_tol: float = 1e-9
) -> SteadyStateResult:
    """Steady state from the near-zero eigenvector(s) of the superoperator."""
    dim = H.shape[0]
    if dim > NULLSPACE_MAX_DIM:
        raise ValueError(
            f"nullspace solver capped at dim {NULLSPACE_MAX_DIM}, got {dim}; "
            "use steady_state_evolve"
        )
    Lsup = build_superoperator(H, jumps, gammas)
    k = min(4, Lsup.shape[0] - 2)
    # small real shift keeps the shift-inverted factorization non-singular
    vals, vecs = spla.eigs(Lsup.tocsc(), k=k, sigma=1e-6, which="LM")
    order = np.argsort(np.abs(vals))
    vals, vecs = vals[order], vecs[:, order]
    near_zero = np.abs(vals) < degeneracy_tol
    if not near_zero[0]:
        near_zero[0] = True  # closest candidate regardless
    candidates = []
    for i in np.flatnonzero(near_zero):
        rho = vecs[:, i].reshape(dim, dim)
        rho = 0.5 * (rho + rho.conj().T)
        tr = rho.trace()
        if abs(tr) < 1e-10:
            continue
        candidates.append(rho / tr)
    if not candidates:
        raise RuntimeError("no trace-carrying null vector found")
    rho = sum(candidates) / len(candidates)
    resid = float(np.linalg.norm(Lsup @ rho.reshape(-1)))
    return SteadyStateResult(
        rho=DensityMatrix(rho),
        residual=resid,
        converged=True,
        multiplicity=len(candidates),
    )
