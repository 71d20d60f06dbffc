"""Occupation basis, Jordan-Wigner signs, and quadratic-operator assembly."""

from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z2dfl.fock import (
    MAX_SITES,
    OccupationState,
    apply_annihilation,
    apply_creation,
    build_quadratic_operator,
    enumerate_basis,
    number_operator,
)


class TestOccupationState:
    def test_from_string_roundtrip(self):
        s = OccupationState.from_string("1010101010")
        assert s.L == 10
        assert s.bitstring() == "1010101010"
        assert s.bits == (1, 0, 1, 0, 1, 0, 1, 0, 1, 0)
        assert s.n_particles == 5

    def test_site_one_is_most_significant(self):
        assert OccupationState.from_string("10").value == 2
        assert OccupationState.from_string("01").value == 1
        assert OccupationState.from_string("1000").bit(1) == 1
        assert OccupationState.from_string("1000").bit(4) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            OccupationState(L=0, value=0)
        with pytest.raises(ValueError):
            OccupationState(L=2, value=4)
        with pytest.raises(ValueError):
            OccupationState.from_bits((0, 2))
        with pytest.raises(ValueError):
            OccupationState.from_string("10").bit(3)

    @given(st.integers(1, 12), st.data())
    def test_bits_value_consistency(self, L, data):
        value = data.draw(st.integers(0, (1 << L) - 1))
        s = OccupationState(L, value)
        assert OccupationState.from_bits(s.bits) == s
        assert s.n_particles == sum(s.bits)


class TestEnumerateBasis:
    def test_half_filled_ten_site_indices(self):
        # regression anchors for the 1-based, value-ordered convention
        b = enumerate_basis(10, 5)
        assert b.dim == 252
        assert b.index_of(OccupationState.from_string("1010101010")) == 176
        assert b.index_of(OccupationState.from_string("0101010101")) == 77
        assert b.index_of(OccupationState.from_string("0000011111")) == 1
        assert b.index_of(OccupationState.from_string("1111100000")) == 252

    def test_dimension_is_binomial(self):
        for L, Nf in [(4, 2), (6, 3), (8, 4), (12, 4), (5, 0), (5, 5)]:
            assert enumerate_basis(L, Nf).dim == comb(L, Nf)

    def test_index_state_roundtrip(self):
        b = enumerate_basis(6, 3)
        for k in range(1, b.dim + 1):
            assert b.index_of(b.state(k)) == k

    def test_states_ascend_by_value(self):
        b = enumerate_basis(7, 3)
        values = [s.value for s in b.states]
        assert values == sorted(values)

    def test_index_of_rejects_mismatches(self):
        b = enumerate_basis(4, 2)
        with pytest.raises(ValueError):
            b.index_of(OccupationState.from_string("110"))
        with pytest.raises(ValueError):
            b.index_of(OccupationState.from_string("1110"))
        with pytest.raises(ValueError):
            b.state(0)
        with pytest.raises(ValueError):
            b.state(b.dim + 1)

    def test_capacity_and_range_checks(self):
        with pytest.raises(ValueError):
            enumerate_basis(MAX_SITES + 1, 2)
        with pytest.raises(ValueError):
            enumerate_basis(4, 5)
        with pytest.raises(ValueError):
            enumerate_basis(0, 0)

    def test_dump_format(self):
        lines = enumerate_basis(3, 1).dump().splitlines()
        assert lines == ["1,001", "2,010", "3,100"]


class TestLadderOperators:
    def test_annihilation_examples(self):
        s = OccupationState.from_string("1010")
        assert apply_annihilation(s, 1) == (1, OccupationState.from_string("0010"))
        assert apply_annihilation(s, 3) == (-1, OccupationState.from_string("1000"))
        assert apply_annihilation(s, 2) is None

    def test_creation_examples(self):
        s = OccupationState.from_string("1010")
        assert apply_creation(s, 2) == (-1, OccupationState.from_string("1110"))
        assert apply_creation(s, 4) == (1, OccupationState.from_string("1011"))
        assert apply_creation(s, 1) is None

    def test_creation_inverts_annihilation(self):
        s = OccupationState.from_string("0110101")
        for j in range(1, 8):
            ann = apply_annihilation(s, j)
            if ann is None:
                continue
            sign, mid = ann
            sign2, back = apply_creation(mid, j)
            assert back == s
            assert sign * sign2 == 1

    @given(st.integers(0, (1 << 6) - 1), st.integers(1, 6), st.integers(1, 6))
    @settings(max_examples=200)
    def test_anticommutation_at_state_level(self, value, j, k):
        # c_j c_k |s> = - c_k c_j |s> for j != k
        if j == k:
            return
        s = OccupationState(6, value)

        def act(order):
            sign = 1
            cur = s
            for site in order:
                step = apply_annihilation(cur, site)
                if step is None:
                    return None
                sign *= step[0]
                cur = step[1]
            return sign, cur

        jk, kj = act((j, k)), act((k, j))
        assert (jk is None) == (kj is None)
        if jk is not None:
            assert jk[1] == kj[1]
            assert jk[0] == -kj[0]


class TestQuadraticOperator:
    def test_total_number_is_scalar(self):
        b = enumerate_basis(5, 2)
        N = build_quadratic_operator(b, [(1.0, j, j) for j in range(1, 6)])
        assert np.allclose(N.toarray(), 2 * np.eye(b.dim))

    def test_density_difference_two_sites(self):
        # basis {|01>, |10>}: n_1 - n_2 = diag(-1, +1)
        b = enumerate_basis(2, 1)
        op = build_quadratic_operator(b, [(1.0, 1, 1), (-1.0, 2, 2)])
        assert np.allclose(op.toarray(), np.diag([-1.0, 1.0]))

    def test_pair_jump_columns_two_sites(self):
        # (c+_1 + c+_2)(c_1 - c_2) = n_1 - n_2 - c+_1 c_2 + c+_2 c_1;
        # columns by hand: O|01> = -|01> - |10>, O|10> = |01> + |10>
        b = enumerate_basis(2, 1)
        op = build_quadratic_operator(
            b, [(1.0, 1, 1), (-1.0, 2, 2), (-1.0, 1, 2), (1.0, 2, 1)]
        )
        assert np.allclose(op.toarray(), [[-1.0, 1.0], [-1.0, 1.0]])

    def test_hermitian_terms_give_hermitian_matrix(self):
        b = enumerate_basis(6, 3)
        terms = []
        for j in range(1, 6):
            terms += [(-1.3, j, j + 1), (-1.3, j + 1, j)]
        terms += [(0.7j, 2, 5), (-0.7j, 5, 2)]
        H = build_quadratic_operator(b, terms)
        assert (H != H.conj().T).nnz == 0

    def test_number_commutator_algebra(self):
        # [n_m, c+_j c_k] = (delta_mj - delta_mk) c+_j c_k
        b = enumerate_basis(5, 2)
        for j, k, m in [(1, 4, 1), (1, 4, 4), (1, 4, 3), (2, 3, 2), (2, 2, 2)]:
            hop = build_quadratic_operator(b, [(1.0, j, k)])
            n_m = number_operator(b, m)
            comm = (n_m @ hop - hop @ n_m).toarray()
            expect = ((m == j) - (m == k)) * hop.toarray()
            assert np.allclose(comm, expect)

    def test_exchange_signs_flag_only_affects_strings(self):
        # adjacent hops cross no intermediate sites: both conventions agree
        b = enumerate_basis(5, 2)
        terms = [(1.0, 2, 3), (1.0, 3, 2)]
        signed = build_quadratic_operator(b, terms, exchange_signs=True)
        plain = build_quadratic_operator(b, terms, exchange_signs=False)
        assert (signed != plain).nnz == 0
        # a range-2 hop does cross one: conventions differ where it is occupied
        far = [(1.0, 1, 3)]
        assert (
            build_quadratic_operator(b, far, exchange_signs=True)
            != build_quadratic_operator(b, far, exchange_signs=False)
        ).nnz > 0

    def test_site_range_checked(self):
        b = enumerate_basis(4, 2)
        with pytest.raises(ValueError):
            build_quadratic_operator(b, [(1.0, 0, 1)])
        with pytest.raises(ValueError):
            build_quadratic_operator(b, [(1.0, 1, 5)])
