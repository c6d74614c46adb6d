import numpy as np
import pytest
import scipy.sparse as sp
from fractions import Fraction

from chargepair import bethe
from chargepair.bethe import (
    BetheConfig,
    BetheRoots,
    bethe_residual,
    charge_gap,
    energy,
    l2_closed_forms,
    quantum_numbers,
    solve,
)
from chargepair.fock import Sector
from chargepair.models import ModelParams, build_model


def dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m)


def sector_levels(L, U, sector):
    h = build_model("charge_pair_transformed", ModelParams(L=L, U=U), sector=sector)
    return np.linalg.eigvalsh(dense(h))


class TestQuantumNumbers:
    def test_even_ground_sequences(self):
        cfg = quantum_numbers("ground", 6)
        assert cfg.sector == Sector(3, 3)
        assert [float(q) for q in cfg.q1] == [3, 2, 1, 0, -1, -2]
        assert [float(q) for q in cfg.q2] == [-1, 0, 1]

    def test_even_charge_excitation_half_integers(self):
        cfg = quantum_numbers("charge_excitation", 6)
        assert cfg.sector == Sector(3, 2)
        assert len(cfg.q1) == 5
        assert [float(q) for q in cfg.q1] == [2.5, 1.5, 0.5, -0.5, -1.5]

    def test_odd_ground_sequences(self):
        cfg = quantum_numbers("ground", 5)
        assert cfg.sector == Sector(3, 2)
        assert [float(q) for q in cfg.q1] == [2.5, 1.5, 0.5, -0.5, -1.5]
        assert [float(q) for q in cfg.q2] == [-1, 0]

    def test_multiple_of_four_rejected(self):
        with pytest.raises(ValueError, match="2 \\(mod 4\\)"):
            quantum_numbers("ground", 8)

    def test_state_parity_pairing(self):
        with pytest.raises(ValueError):
            quantum_numbers("spin_excitation", 5)
        with pytest.raises(ValueError):
            quantum_numbers("first_excitation", 6)

    def test_branch_numbers_strictly_monotone(self):
        with pytest.raises(ValueError, match="monotone"):
            BetheConfig(2, 1.0, Sector(1, 1),
                        (Fraction(1), Fraction(1)), (Fraction(0),), "even")
        with pytest.raises(ValueError, match="monotone"):
            BetheConfig(3, 1.0, Sector(2, 1),
                        (Fraction(1), Fraction(3), Fraction(2)), (Fraction(0),), "odd")


class TestResidual:
    def test_converged_roots_self_consistent(self):
        cfg = quantum_numbers("ground", 6, 2.0)
        roots = solve(cfg)
        assert np.max(np.abs(bethe_residual(roots, cfg))) <= 1e-12

    def test_perturbation_scales_with_size(self):
        # leading linear term is L * delta; at strong coupling the arctan
        # correction to the diagonal is negligible
        cfg = quantum_numbers("ground", 6, 500.0)
        roots = solve(cfg)
        k = roots.k.copy()
        k[2] += 1e-6
        res = bethe_residual(BetheRoots(k, roots.mu, 0.0, 0), cfg)
        assert abs(res[2]) == pytest.approx(6 * 1e-6, rel=0.05)
        # at moderate coupling the row residual stays of that order
        cfg = quantum_numbers("ground", 6, 2.0)
        roots = solve(cfg)
        k = roots.k.copy()
        k[2] += 1e-6
        res = bethe_residual(BetheRoots(k, roots.mu, 0.0, 0), cfg)
        assert 6e-6 <= abs(res[2]) <= 3 * 6e-6

    def test_decoupled_guess_residual_shrinks_with_coupling(self):
        k0, mu0 = bethe._initial_guess(quantum_numbers("ground", 6, 50.0))
        weak = np.max(np.abs(bethe._residual(k0, mu0, quantum_numbers("ground", 6, 50.0))))
        k1, mu1 = bethe._initial_guess(quantum_numbers("ground", 6, 500.0))
        strong = np.max(np.abs(bethe._residual(k1, mu1, quantum_numbers("ground", 6, 500.0))))
        assert strong < weak
        assert strong < 20.0 / 500.0


class TestSolve:
    def test_two_site_ground_state(self):
        cfg = quantum_numbers("ground", 2, 3.0)
        roots = solve(cfg)
        assert np.max(np.abs(np.sort(roots.k) - np.array([0.0, np.pi]))) < 1e-12
        assert abs(roots.mu[0]) < 1e-12
        assert abs(energy(roots, cfg) + 1.5) < 1e-12

    @pytest.mark.parametrize(
        "L,state",
        [(6, "ground"), (6, "charge_excitation"), (6, "spin_excitation"),
         (5, "ground"), (5, "first_excitation"), (5, "charge_excitation"),
         (7, "ground"), (7, "charge_excitation")],
    )
    def test_energy_matches_exact_diagonalization(self, L, state):
        U = 2.0
        cfg = quantum_numbers(state, L, U)
        e = energy(solve(cfg), cfg)
        levels = sector_levels(L, U, cfg.sector)
        assert np.min(np.abs(levels - e)) < 1e-10

    @pytest.mark.parametrize("L,state", [(6, "ground"), (5, "ground"),
                                         (6, "charge_excitation"), (5, "charge_excitation")])
    def test_tabulated_states_are_sector_minima(self, L, state):
        U = 2.0
        cfg = quantum_numbers(state, L, U)
        e = energy(solve(cfg), cfg)
        assert abs(sector_levels(L, U, cfg.sector)[0] - e) < 1e-10

    def test_small_coupling_uses_continuation(self):
        cfg = quantum_numbers("ground", 6, 0.25)
        roots = solve(cfg)
        assert np.max(np.abs(bethe_residual(roots, cfg))) <= 1e-12


class TestEnergy:
    def test_empty_sector(self):
        cfg = BetheConfig(2, 3.0, Sector(0, 0), (), (), "even")
        roots = BetheRoots(np.zeros(0), np.zeros(0), 0.0, 0)
        assert energy(roots, cfg) == pytest.approx(1.5)

    def test_single_particle(self):
        cfg = BetheConfig(2, 3.0, Sector(1, 0), (Fraction(1, 2),), (), "even")
        roots = BetheRoots(np.array([np.pi / 2]), np.zeros(0), 0.0, 0)
        assert energy(roots, cfg) == pytest.approx(0.0, abs=1e-15)

    def test_chemical_potential_shift_is_linear(self):
        cfg = BetheConfig(2, 3.0, Sector(2, 0),
                          (Fraction(1, 2), -Fraction(1, 2)), (), "even")
        roots = BetheRoots(np.array([np.pi / 2, -np.pi / 2]), np.zeros(0), 0.0, 0)
        base = energy(roots, cfg)
        assert energy(roots, cfg, h1=0.3) - base == pytest.approx(0.6)
        assert energy(roots, cfg, h2=0.5) - base == pytest.approx(0.0)


class TestChargeGap:
    def test_even_gap_matches_exact_diagonalization(self):
        U = 2.0
        gap = charge_gap(6, U, "even")
        e_half = sector_levels(6, U, Sector(3, 3))[0]
        e_hole = sector_levels(6, U, Sector(3, 2))[0]
        assert abs(gap - (e_hole - e_half)) < 1e-10

    def test_odd_gap_matches_exact_diagonalization(self):
        U = 2.0
        gap = charge_gap(5, U, "odd")
        e_ground = sector_levels(5, U, Sector(3, 2))[0]
        e_charge = sector_levels(5, U, Sector(2, 2))[0]
        assert abs(gap - (e_charge - e_ground)) < 1e-10

    def test_parity_preconditions(self):
        with pytest.raises(ValueError):
            charge_gap(8, 2.0, "even")
        with pytest.raises(ValueError):
            charge_gap(6, 2.0, "odd")
        with pytest.raises(ValueError):
            charge_gap(6, 2.0, "both")


class TestClosedForms:
    def test_strong_coupling_row(self):
        rows = l2_closed_forms(6.0)
        upper = rows[3]
        z1, z2 = upper["exp_ik"]
        assert abs(z1 - (-6 - np.sqrt(20)) / 4) < 1e-14
        assert abs(z1.imag) == 0.0
        assert upper["energy"] == pytest.approx(3.0)

    def test_free_case(self):
        rows = l2_closed_forms(0.0)
        assert rows[2]["energy"] == pytest.approx(0.0)

    @pytest.mark.parametrize("U", [0.5, 2.0, 3.9, 4.0, 7.3])
    def test_momentum_product_from_quadratic(self, U):
        z1, z2 = l2_closed_forms(U)[3]["exp_ik"]
        assert abs(z1 * z2 - 1.0) < 1e-12
        assert abs(z1 + z2 + U / 2) < 1e-12

    def test_unit_modulus_below_threshold(self):
        z1, z2 = l2_closed_forms(2.0)[3]["exp_ik"]
        assert abs(abs(z1) - 1.0) < 1e-12 and abs(abs(z2) - 1.0) < 1e-12

    def test_rows_are_transformed_sector_levels(self):
        for U in (1.0, 2.5, 6.0):
            for row in l2_closed_forms(U):
                levels = sector_levels(2, U, row["sector"])
                assert np.min(np.abs(levels - row["energy"])) < 1e-12


class TestStrongCoupling:
    def test_deviation_small_and_decaying(self):
        d200 = bethe.strong_coupling_check(5, Fraction(1, 2), 200.0)
        d400 = bethe.strong_coupling_check(5, Fraction(1, 2), 400.0)
        assert d200 < 5e-2
        # the symmetric momentum set cancels the linear term, so the decay
        # is at least 1/U (observed close to 1/U^2)
        assert d400 < 0.6 * d200

    def test_rescaling_preserves_symmetric_configuration(self):
        U = 200.0
        cfg = quantum_numbers("ground", 5, U)
        roots = solve(cfg)
        mu = np.sort(roots.mu)
        lam = np.sort(2.0 * roots.mu / U)
        # both sets symmetric about zero, with the tolerance scaling linearly
        assert np.max(np.abs(lam + lam[::-1])) < 1e-8
        assert np.max(np.abs(mu + mu[::-1])) < 1e-8 * (U / 2.0)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            bethe.strong_coupling_check(6, Fraction(1, 2), 200.0)
        with pytest.raises(ValueError):
            bethe.strong_coupling_check(5, Fraction(1, 2), 10.0)
        with pytest.raises(ValueError):
            bethe.strong_coupling_check(5, Fraction(1), 200.0)


def test_half_filled_ground_momenta_symmetric():
    cfg = quantum_numbers("ground", 6, 2.0)
    roots = solve(cfg)
    sk = np.sort(np.sin(roots.k))
    assert np.max(np.abs(sk + sk[::-1])) < 1e-12
    total = np.sum(roots.k)
    assert abs(np.sin(total)) < 1e-12   # total momentum 0 mod pi
