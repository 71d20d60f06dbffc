"""Fixed-filling fermionic occupation bases and second-quantized operators.

Conventions used throughout the package:

* site 1 is the leftmost character of a bitstring and the most significant
  bit of the integer encoding, so ``|0000011111>`` is the smallest state of
  the half-filled L=10 sector;
* user-facing basis indices are 1-based, ordered by ascending binary value;
* the Jordan-Wigner sign of ``c_j`` / ``c_j^dag`` counts occupied sites
  strictly to the left of site ``j`` (i.e. with smaller site index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from scipy.sparse import csr_matrix

# Basis enumeration is kept dense (one Python int per state); beyond this the
# combinatorics get out of hand for exact density-matrix work anyway.
MAX_SITES = 16


@dataclass(frozen=True)
class OccupationState:
    """A single occupation pattern of L sites encoded as an integer.

    ``value`` holds the binary number read off the bitstring with site 1 as
    the most significant bit.
    """

    L: int
    value: int

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"need at least one site, got L={self.L}")
        if not 0 <= self.value < (1 << self.L):
            raise ValueError(f"value {self.value} out of range for L={self.L}")

    @classmethod
    def from_bits(cls, bits) -> "OccupationState":
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0/1, got {bits}")
        value = 0
        for b in bits:
            value = (value << 1) | b
        return cls(L=len(bits), value=value)

    @classmethod
    def from_string(cls, s: str) -> "OccupationState":
        return cls.from_bits(s)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.L - j)) & 1 for j in range(1, self.L + 1))

    def bit(self, j: int) -> int:
        """Occupation of site j (1-based)."""
        self._check_site(j)
        return (self.value >> (self.L - j)) & 1

    @property
    def n_particles(self) -> int:
        return self.value.bit_count()

    def bitstring(self) -> str:
        return format(self.value, f"0{self.L}b")

    def _check_site(self, j: int):
        if not 1 <= j <= self.L:
            raise ValueError(f"site {j} out of range 1..{self.L}")

    def __str__(self):
        return self.bitstring()


def _jw_sign(state: OccupationState, j: int) -> int:
    """(-1)^(number of occupied sites with index strictly below j)."""
    left = state.value >> (state.L - j + 1)
    return -1 if left.bit_count() & 1 else 1


def apply_annihilation(state: OccupationState, j: int):
    """Apply c_j; returns (sign, new_state) or None if site j is empty."""
    state._check_site(j)
    mask = 1 << (state.L - j)
    if not state.value & mask:
        return None
    return _jw_sign(state, j), OccupationState(state.L, state.value & ~mask)


def apply_creation(state: OccupationState, j: int):
    """Apply c_j^dag; returns (sign, new_state) or None if site j is occupied."""
    state._check_site(j)
    mask = 1 << (state.L - j)
    if state.value & mask:
        return None
    return _jw_sign(state, j), OccupationState(state.L, state.value | mask)


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Ordered basis of all L-site states with exactly Nf particles."""

    L: int
    Nf: int
    states: tuple[OccupationState, ...]
    _index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def state(self, index: int) -> OccupationState:
        """State at 1-based index."""
        if not 1 <= index <= self.dim:
            raise ValueError(f"index {index} out of range 1..{self.dim}")
        return self.states[index - 1]

    def index_of(self, s: OccupationState) -> int:
        """1-based index of state s; raises on wrong length or filling."""
        if s.L != self.L:
            raise ValueError(f"state has L={s.L}, basis has L={self.L}")
        if s.n_particles != self.Nf:
            raise ValueError(
                f"state has {s.n_particles} particles, basis has Nf={self.Nf}"
            )
        return self._index[s.value]

    def dump(self) -> str:
        """One line per state: 'index,bitstring'."""
        return "\n".join(
            f"{k},{s.bitstring()}" for k, s in enumerate(self.states, start=1)
        )


def enumerate_basis(L: int, Nf: int) -> SectorBasis:
    """All C(L, Nf) occupation states, ascending by binary value."""
    if not 1 <= L <= MAX_SITES:
        raise ValueError(f"L must be in 1..{MAX_SITES}, got {L}")
    if not 0 <= Nf <= L:
        raise ValueError(f"Nf must be in 0..{L}, got {Nf}")
    values = sorted(
        sum(1 << p for p in positions)
        for positions in combinations(range(L), Nf)
    )
    assert len(values) == comb(L, Nf)
    states = tuple(OccupationState(L, v) for v in values)
    index = {v: k for k, v in enumerate(values, start=1)}
    return SectorBasis(L=L, Nf=Nf, states=states, _index=index)


def build_quadratic_operator(
    basis: SectorBasis, terms, exchange_signs: bool = True
) -> csr_matrix:
    """Sparse matrix of sum_t coeff_t c^dag_{a_t} c_{b_t} on the given basis.

    ``terms`` is an iterable of (coeff, creation_site, annihilation_site);
    sites are 1-based. Number conserving by construction.

    With ``exchange_signs=False`` the Jordan-Wigner string factors are
    dropped and the operator moves occupation between the named sites with
    amplitude +-coeff only; see lindblad.DissipationSpec for where that
    convention is needed.
    """
    terms = [(complex(c), int(a), int(b)) for c, a, b in terms]
    for _, a, b in terms:
        if not (1 <= a <= basis.L and 1 <= b <= basis.L):
            raise ValueError(f"sites ({a},{b}) out of range 1..{basis.L}")
    rows, cols, data = [], [], []
    for col, s in enumerate(basis.states):
        for coeff, a, b in terms:
            ann = apply_annihilation(s, b)
            if ann is None:
                continue
            sgn1, mid = ann
            cre = apply_creation(mid, a)
            if cre is None:
                continue
            sgn2, out = cre
            rows.append(basis._index[out.value] - 1)
            cols.append(col)
            data.append(coeff * sgn1 * sgn2 if exchange_signs else coeff)
    mat = csr_matrix(
        (data, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex
    )
    mat.sum_duplicates()
    return mat


def number_operator(basis: SectorBasis, j: int) -> csr_matrix:
    """n_j = c^dag_j c_j as a sparse diagonal."""
    return build_quadratic_operator(basis, [(1.0, j, j)])
