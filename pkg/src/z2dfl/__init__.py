"""Exact-diagonalization simulator for closed and dissipative dynamics of
the Z2 lattice gauge model in its composite-fermion representation."""

__version__ = "0.1.0"

from .fock import (  # noqa: F401
    OccupationState,
    SectorBasis,
    enumerate_basis,
    apply_annihilation,
    apply_creation,
    build_quadratic_operator,
)
from .gauge_model import (  # noqa: F401
    ChargeConfig,
    ModelParams,
    build_sector_hamiltonian,
    build_full_hamiltonian,
    charge_operator,
    duality_spectrum_check,
    gauge_transform_check,
)
from .lindblad import (  # noqa: F401
    DensityMatrix,
    DissipationSpec,
    PropagatorParams,
    build_jump_operators,
    lindblad_rhs,
    propagate,
    steady_state_evolve,
    steady_state_nullspace,
)
from .observables import (  # noqa: F401
    diagonal_profile,
    occupation_profile,
    pure_reference_fidelity,
    uhlmann_fidelity,
)
from .sectors import (  # noqa: F401
    EnsembleResult,
    SectorMode,
    ensemble_evolve,
    enumerate_sectors,
)
from .runner import (  # noqa: F401
    ScenarioConfig,
    preset,
    run_alpha_sweep,
    run_scenario,
)
