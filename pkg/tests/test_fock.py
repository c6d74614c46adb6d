import numpy as np
import pytest

from chargepair import fock
from chargepair.fock import (
    ANNIHILATE,
    CREATE,
    DOWN,
    UP,
    FockState,
    Sector,
    apply_mode,
    assemble_operator,
    enumerate_basis,
)


def op(kind, spin, site):
    return (kind, spin, site)


class TestEnumeration:
    def test_single_site_has_four_states(self):
        states = enumerate_basis(1)
        assert len(states) == 4
        assert [s.word for s in states] == [0, 1, 2, 3]

    def test_sector_counts(self):
        states = enumerate_basis(2, Sector(1, 1))
        assert len(states) == 4
        assert all(s.n_up == 1 and s.n_down == 1 for s in states)

    def test_full_enumeration_is_lexicographic(self):
        words = [s.word for s in enumerate_basis(3)]
        assert words == list(range(64))

    @pytest.mark.parametrize("L", [0, 13])
    def test_site_count_range(self, L):
        with pytest.raises(ValueError):
            enumerate_basis(L)

    def test_sector_dimension_formula(self):
        assert fock.sector_dimension(4, Sector(2, 1)) == 6 * 4
        assert fock.sector_dimension(3, None) == 64


class TestApplyMode:
    def test_create_on_vacuum(self):
        sign, new = apply_mode(fock.vacuum_state(2), CREATE, UP, 1)
        assert sign == 1
        assert new.up_bits == 0b01 and new.down_bits == 0

    def test_pauli_blocking(self):
        occupied = FockState(0b01, 0, 2)
        assert apply_mode(occupied, CREATE, UP, 1) is None
        assert apply_mode(fock.vacuum_state(2), ANNIHILATE, UP, 1) is None

    def test_order_antisymmetry(self):
        vac = fock.vacuum_state(2)
        s1, a = apply_mode(vac, CREATE, UP, 2)
        s2, a = apply_mode(a, CREATE, UP, 1)
        t1, b = apply_mode(vac, CREATE, UP, 1)
        t2, b = apply_mode(b, CREATE, UP, 2)
        assert a.word == b.word
        assert s1 * s2 == -t1 * t2

    def test_annihilate_undoes_create(self):
        state = FockState(0b0101, 0b0011, 4)
        s1, mid = apply_mode(state, CREATE, DOWN, 3)
        s2, back = apply_mode(mid, ANNIHILATE, DOWN, 3)
        assert back.word == state.word
        assert s1 * s2 == 1


class TestAssemble:
    def test_number_operator_single_site(self):
        n_up = assemble_operator(1, [(1.0, [op(CREATE, UP, 1), op(ANNIHILATE, UP, 1)])])
        assert np.allclose(n_up, np.diag([0, 1, 0, 1]))

    def test_pair_annihilation_sign(self):
        # c_up(1) c_up(2) sends the doubly up-occupied state to -|vacuum>,
        # by hand: c(2) passes the mode-1 creation operator once
        mat = assemble_operator(
            2, [(1.0, [op(ANNIHILATE, UP, 1), op(ANNIHILATE, UP, 2)])]
        )
        # one entry per spectator down configuration, all with the same sign
        for down_bits in range(4):
            col = fock.FockState(0b11, down_bits, 2).word
            row = fock.FockState(0, down_bits, 2).word
            assert mat[row, col] == -1.0
        assert np.count_nonzero(mat) == 4

    def test_hermitian_combination(self):
        mat = assemble_operator(
            2,
            [
                (1.0, [op(ANNIHILATE, UP, 1)]),
                (1.0, [op(CREATE, UP, 1)]),
            ],
        )
        assert np.max(np.abs(mat - mat.conj().T)) < 1e-15

    def test_linearity(self):
        t1 = [(0.7, [op(CREATE, UP, 1), op(ANNIHILATE, UP, 2)])]
        t2 = [(1.3j, [op(CREATE, DOWN, 2), op(ANNIHILATE, DOWN, 1)])]
        combined = assemble_operator(3, t1 + t2)
        assert np.allclose(
            combined, assemble_operator(3, t1) + assemble_operator(3, t2)
        )

    def test_sector_violation_detected(self):
        with pytest.raises(ValueError, match="sector"):
            assemble_operator(2, [(1.0, [op(CREATE, UP, 1)])], sector=Sector(1, 0))

    def test_sector_preserving_assembly(self):
        hop = assemble_operator(
            2,
            [
                (1.0, [op(CREATE, UP, 1), op(ANNIHILATE, UP, 2)]),
                (1.0, [op(CREATE, UP, 2), op(ANNIHILATE, UP, 1)]),
            ],
            sector=Sector(1, 1),
        )
        assert hop.shape == (4, 4)
        assert np.max(np.abs(hop - hop.conj().T)) < 1e-15


def mode_matrix(L, kind, spin, site):
    return assemble_operator(L, [(1.0, [op(kind, spin, site)])])


@pytest.mark.parametrize("L", [2, 3])
def test_canonical_anticommutation(L):
    modes = [(spin, site) for spin in (UP, DOWN) for site in range(1, L + 1)]
    ann = {m: mode_matrix(L, ANNIHILATE, *m) for m in modes}
    cre = {m: mode_matrix(L, CREATE, *m) for m in modes}
    eye = np.eye(4**L)
    for m1 in modes:
        for m2 in modes:
            anti = ann[m1] @ cre[m2] + cre[m2] @ ann[m1]
            expected = eye if m1 == m2 else 0.0
            assert np.max(np.abs(anti - expected)) < 1e-14
            anti2 = ann[m1] @ ann[m2] + ann[m2] @ ann[m1]
            assert np.max(np.abs(anti2)) < 1e-14


def test_canonical_anticommutation_spot_l4():
    L = 4
    pairs = [((UP, 1), (UP, 4)), ((UP, 2), (DOWN, 2)), ((DOWN, 1), (DOWN, 3))]
    eye = np.eye(4**L)
    for m1, m2 in pairs:
        a = mode_matrix(L, ANNIHILATE, *m1)
        c = mode_matrix(L, CREATE, *m2)
        anti = a @ c + c @ a
        expected = eye if m1 == m2 else 0.0
        assert np.max(np.abs(anti - expected)) < 1e-14
