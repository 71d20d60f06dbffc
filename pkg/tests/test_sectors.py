"""Sector enumeration, sampling, and the emergent-disorder ensemble average."""

import numpy as np
import pytest
from scipy.linalg import expm

from z2dfl.fock import OccupationState, enumerate_basis
from z2dfl.gauge_model import ChargeConfig, ModelParams, build_sector_hamiltonian
from z2dfl.lindblad import DissipationSpec, PropagatorParams
from z2dfl.sectors import (
    ENUMERATION_MAX_SITES,
    SectorMode,
    ensemble_evolve,
    enumerate_sectors,
)


class TestSectorMode:
    def test_constructors(self):
        assert SectorMode.all_sectors().variant == "all"
        assert SectorMode.sample(8, 3).describe() == "sample(count=8, seed=3)"
        assert SectorMode.single((1, -1)).q == (1, -1)

    def test_validation(self):
        with pytest.raises(ValueError):
            SectorMode("bogus")
        with pytest.raises(ValueError):
            SectorMode.sample(0, 1)
        with pytest.raises(ValueError):
            SectorMode("single")


class TestEnumerateSectors:
    def test_all_mode_lexicographic(self):
        got = enumerate_sectors(2, SectorMode.all_sectors())
        assert [q.q for q in got] == [
            (1, 1), (1, -1), (-1, 1), (-1, -1)
        ]

    def test_parity_constrained(self):
        got = enumerate_sectors(4, SectorMode.parity_constrained(), Nf=2)
        assert len(got) == 8
        assert all(q.parity() == 1 for q in got)
        got_odd = enumerate_sectors(4, SectorMode.parity_constrained(), Nf=1)
        assert len(got_odd) == 8
        assert all(q.parity() == -1 for q in got_odd)

    def test_sample_deterministic(self):
        a = enumerate_sectors(10, SectorMode.sample(64, 7))
        b = enumerate_sectors(10, SectorMode.sample(64, 7))
        assert a == b
        assert len(a) == 64
        c = enumerate_sectors(10, SectorMode.sample(64, 8))
        assert a != c

    def test_capacity_cap_suggests_sampling(self):
        with pytest.raises(ValueError, match="sample"):
            enumerate_sectors(ENUMERATION_MAX_SITES + 1, SectorMode.all_sectors())

    def test_single_length_checked(self):
        with pytest.raises(ValueError):
            enumerate_sectors(4, SectorMode.single((1, -1)))

    def test_parity_needs_filling(self):
        with pytest.raises(ValueError):
            enumerate_sectors(4, SectorMode.parity_constrained())


class TestUnitaryEnsemble:
    def test_single_sector_matches_direct_evolution(self):
        psi0 = OccupationState.from_string("101010")
        q = (1, -1, 1, 1, -1, -1)
        t_grid = np.linspace(0.0, 8.0, 9)
        res = ensemble_evolve(
            psi0, 3, ModelParams(h=0.5), SectorMode.single(q), t_grid
        )
        basis = enumerate_basis(6, 3)
        H = build_sector_hamiltonian(basis, ChargeConfig(q), ModelParams(h=0.5))
        v0 = np.zeros(basis.dim)
        v0[basis.index_of(psi0) - 1] = 1.0
        for i, t in enumerate(t_grid):
            amp = np.vdot(v0, expm(-1j * H.toarray() * t) @ v0)
            assert abs(res.fidelity[i] - abs(amp)) < 1e-8
        assert abs(res.fidelity[0] - 1.0) < 1e-12

    def test_h_zero_all_sectors_identical(self):
        psi0 = OccupationState.from_string("1100")
        t_grid = np.linspace(0.0, 5.0, 6)
        allm = ensemble_evolve(
            psi0, 2, ModelParams(h=0.0), SectorMode.all_sectors(), t_grid
        )
        single = ensemble_evolve(
            psi0, 2, ModelParams(h=0.0), SectorMode.single((1,) * 4), t_grid
        )
        assert np.abs(allm.fidelity - single.fidelity).max() < 1e-12
        assert np.abs(allm.per_sector_overlap
                      - allm.per_sector_overlap[0]).max() < 1e-12

    def test_weights_and_averaged_state(self):
        psi0 = OccupationState.from_string("1010")
        res = ensemble_evolve(
            psi0, 2, ModelParams(h=0.7), SectorMode.all_sectors(), [0.0, 3.0]
        )
        assert res.n_sectors == 16
        assert abs(res.weights.sum() - 1.0) < 1e-14
        res.rho_final.validate()

    def test_translation_consistency(self):
        # shifting psi0 by one site permutes the sector list; the all-mode
        # average is invariant
        t_grid = np.linspace(0.0, 6.0, 7)
        a = ensemble_evolve(
            OccupationState.from_string("110100"), 3, ModelParams(h=0.8),
            SectorMode.all_sectors(), t_grid,
        )
        b = ensemble_evolve(
            OccupationState.from_string("011010"), 3, ModelParams(h=0.8),
            SectorMode.all_sectors(), t_grid,
        )
        assert np.abs(a.fidelity - b.fidelity).max() < 1e-10

    def test_filling_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ensemble_evolve(
                OccupationState.from_string("1100"), 3, ModelParams(),
                SectorMode.all_sectors(), [0.0, 1.0],
            )

    def test_sample_mode_converges_with_count(self):
        # two independent sample sizes agree within 3 standard errors
        psi0 = OccupationState.from_string("10101010")
        t_grid = [0.0, 120.0]
        runs = {}
        for count in (256, 512):
            runs[count] = ensemble_evolve(
                psi0, 4, ModelParams(h=0.5), SectorMode.sample(count, 11),
                t_grid,
            )
        m = {c: r.per_sector_overlap[:, -1].mean() for c, r in runs.items()}
        v = {c: r.per_sector_overlap[:, -1].var(ddof=1) for c, r in runs.items()}
        se = np.sqrt(v[256] / 256 + v[512] / 512)
        assert abs(m[256] - m[512]) < 3 * se


class TestDissipativeEnsemble:
    def test_invariant_columns_and_steady(self):
        psi0 = OccupationState.from_string("101010")
        t_grid = np.linspace(0.0, 10.0, 11)
        res = ensemble_evolve(
            psi0, 3, ModelParams(h=0.5), SectorMode.sample(4, 2), t_grid,
            dissipation=DissipationSpec(l=2), want_steady=True,
        )
        assert np.abs(res.trace - 1.0).max() < 1e-8
        assert res.hermiticity_residual.max() < 1e-10
        assert res.min_eigenvalue.min() > -1e-8
        assert res.steady is not None
        assert len(res.steady_converged) == 4 and all(res.steady_converged)
        res.steady.validate()

    def test_worker_count_does_not_change_results(self):
        psi0 = OccupationState.from_string("1010")
        t_grid = np.linspace(0.0, 4.0, 5)
        kw = dict(
            dissipation=DissipationSpec(l=2),
            prop=PropagatorParams(method="rk4"),
        )
        one = ensemble_evolve(
            psi0, 2, ModelParams(h=0.5), SectorMode.sample(4, 5), t_grid,
            workers=1, **kw,
        )
        two = ensemble_evolve(
            psi0, 2, ModelParams(h=0.5), SectorMode.sample(4, 5), t_grid,
            workers=2, **kw,
        )
        assert np.array_equal(one.fidelity, two.fidelity)
        assert np.array_equal(one.rho_final.mat, two.rho_final.mat)
