import itertools
import math

import numpy as np
import pytest

from qthermo import ergo
from qthermo.ergo import (ergotropy, passive_state, qubit_temperatures,
                          temperature_conventional_flagged,
                          temperature_ergotropy, temperature_ergotropy_flagged,
                          temperatures)
from qthermo.opcore import (bloch_to_density, density_to_bloch,
                            field_to_hamiltonian, gibbs_state)

from conftest import random_density, random_hermitian, random_unitary


def brute_force_ergotropy(rho, H):
    """Minimum final energy over all population-to-level pairings."""
    pops = np.sort(np.linalg.eigvalsh(rho))[::-1]
    levels = np.sort(np.linalg.eigvalsh(H))
    u = float(np.trace(rho @ H).real)
    best = min(float(np.dot(pops[list(p)], levels))
               for p in itertools.permutations(range(len(levels))))
    return u - best


class TestPassiveState:
    def test_qubit_closed_form(self):
        r = np.array([0.45, 0.0, -0.80])
        h = np.array([0.0, 0.0, -0.5])
        dec = passive_state(bloch_to_density(r), field_to_hamiltonian(h))
        rnorm = np.linalg.norm(r)
        # passive Bloch vector: radius preserved, rotated onto h-hat
        assert np.allclose(density_to_bloch(dec.passive_state),
                           rnorm * np.array([0.0, 0.0, -1.0]), atol=1e-12)
        assert dec.internal_energy == pytest.approx(-np.dot(h, r), abs=1e-13)
        assert dec.passive_energy == pytest.approx(-0.5 * rnorm, abs=1e-13)
        assert dec.ergotropy == pytest.approx(-np.dot(h, r) + 0.5 * rnorm,
                                              abs=1e-13)

    def test_passive_state_is_passive(self, rng):
        # a passive state has zero ergotropy
        for d in (2, 3, 4):
            rho = random_density(rng, d)
            H = random_hermitian(rng, d)
            pi = passive_state(rho, H).passive_state
            assert ergotropy(pi, H) == pytest.approx(0.0, abs=1e-12)

    def test_commutes_with_hamiltonian(self, rng):
        rho = random_density(rng, 4)
        H = random_hermitian(rng, 4)
        pi = passive_state(rho, H).passive_state
        assert np.max(np.abs(pi @ H - H @ pi)) < 1e-10

    def test_gibbs_is_passive(self):
        H = np.diag([0.0, 1.0, 2.5])
        rho = gibbs_state(H, 0.8)
        assert ergotropy(rho, H) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            passive_state(random_density(rng, 2), random_hermitian(rng, 3))


class TestErgotropy:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_brute_force_oracle(self, rng, d):
        for _ in range(100):
            rho = random_density(rng, d)
            H = random_hermitian(rng, d)
            assert ergotropy(rho, H) == pytest.approx(
                brute_force_ergotropy(rho, H), abs=1e-10)

    def test_nonnegative(self, rng):
        for _ in range(500):
            rho = random_density(rng, 3)
            H = random_hermitian(rng, 3)
            assert ergotropy(rho, H) >= -1e-12

    def test_unitary_cannot_beat_it(self, rng):
        # energy extracted by any unitary is bounded by the ergotropy
        rho = random_density(rng, 3)
        H = random_hermitian(rng, 3)
        e = ergotropy(rho, H)
        u0 = float(np.trace(rho @ H).real)
        for _ in range(200):
            u = random_unitary(rng, 3)
            extracted = u0 - float(np.trace(u @ rho @ u.conj().T @ H).real)
            assert extracted <= e + 1e-10

    def test_degenerate_levels_tie_invariance(self, rng):
        # permuting degenerate levels must not change the ergotropy
        H = np.diag([0.0, 1.0, 1.0, 2.0])
        rho = random_density(rng, 4)
        u = np.eye(4)[:, [0, 2, 1, 3]]
        assert ergotropy(rho, H) == pytest.approx(
            ergotropy(rho, u @ H @ u.T), abs=1e-12)

    def test_pure_state_value(self):
        # excited qubit state against H = sigma_z/2: ergotropy = gap
        rho = np.diag([1.0, 0.0])
        H = np.diag([0.5, -0.5])
        assert ergotropy(rho, H) == pytest.approx(1.0, abs=1e-13)


class TestTemperatures:
    def test_gibbs_returns_inverse_beta(self, rng):
        for beta in (0.1, 1.0, 3.0):
            H = field_to_hamiltonian(np.array([0.0, 0.0, -0.5]))
            rho = gibbs_state(H, beta)
            trip = temperatures(rho, H)
            assert trip.t_ergo == pytest.approx(1.0 / beta, rel=1e-9)
            assert trip.t_conv == pytest.approx(1.0 / beta, rel=1e-9)
            assert trip.t_ent == pytest.approx(1.0 / beta, rel=1e-9)

    def test_gibbs_beyond_qubit(self, rng):
        H = random_hermitian(rng, 4)
        beta = 0.9
        rho = gibbs_state(H, beta)
        assert temperature_ergotropy(rho, H) == pytest.approx(1.0 / beta,
                                                              rel=1e-9)
        t_conv, _ = temperature_conventional_flagged(rho, H)
        assert t_conv == pytest.approx(1.0 / beta, rel=1e-9)

    def test_cold_gibbs_flagged_but_consistent(self):
        # a population far below the rank tolerance still gives 1/beta
        H = np.diag([0.0, 1.0, 30.0])
        rho = gibbs_state(H, 1.0)
        value, flag = temperature_ergotropy_flagged(rho, H)
        assert value == pytest.approx(1.0, rel=1e-6)
        assert flag == ergo.FLAG_NEAR_PURE

    def test_pure_state_is_zero(self):
        rho = np.diag([1.0, 0.0])
        H = np.diag([0.5, -0.5])
        value, flag = temperature_ergotropy_flagged(rho, H)
        assert value == 0.0
        assert flag == ergo.FLAG_PURE_LIMIT

    def test_maximally_mixed_sentinel(self):
        value, flag = temperature_ergotropy_flagged(np.eye(2) / 2,
                                                    np.diag([0.5, -0.5]))
        assert value == math.inf
        assert flag == ergo.FLAG_MAXIMALLY_MIXED

    def test_no_energy_scale_rejected(self, rng):
        with pytest.raises(ValueError):
            temperature_ergotropy(random_density(rng, 2), np.eye(2))

    def test_positivity_random_states(self, rng):
        for _ in range(2000):
            v = rng.standard_normal(3)
            v *= rng.uniform(0.0, 0.999) / np.linalg.norm(v)
            h = rng.standard_normal(3)
            trip = qubit_temperatures(v, h)
            assert trip.t_ergo >= 0.0

    def test_unitary_invariance(self, rng):
        rho = random_density(rng, 3)
        H = random_hermitian(rng, 3)
        u = random_unitary(rng, 3)
        a = temperature_ergotropy(rho, H)
        b = temperature_ergotropy(u @ rho @ u.conj().T, u @ H @ u.conj().T)
        assert a == pytest.approx(b, abs=1e-8)

    def test_qubit_closed_forms_match_general(self, rng):
        for _ in range(500):
            v = rng.standard_normal(3)
            v *= rng.uniform(0.05, 0.95) / np.linalg.norm(v)
            h = rng.standard_normal(3)
            rho = bloch_to_density(v)
            H = field_to_hamiltonian(h)
            gen = temperatures(rho, H)
            fast = qubit_temperatures(v, h)
            assert gen.t_ergo == pytest.approx(fast.t_ergo, rel=1e-8)
            if math.isfinite(gen.t_conv) and math.isfinite(fast.t_conv):
                assert gen.t_conv == pytest.approx(fast.t_conv, rel=1e-7)
            assert gen.t_ent == pytest.approx(fast.t_ent, rel=1e-8)

    def test_conventional_can_be_negative(self):
        # population-inverted state along the field: t_conv < 0 while
        # t_ergo stays positive
        trip = qubit_temperatures(np.array([0.0, 0.0, 0.6]),
                                  np.array([0.0, 0.0, -0.5]))
        assert trip.t_conv < 0.0
        assert trip.t_ergo > 0.0

    def test_transverse_state_conventional_divergent(self):
        trip = qubit_temperatures(np.array([0.6, 0.0, 0.0]),
                                  np.array([0.0, 0.0, -0.5]))
        assert math.isnan(trip.t_conv)
        assert trip.flags["t_conv"] == ergo.FLAG_DIVERGENT
        assert trip.t_ent == pytest.approx(0.0, abs=1e-15)

    def test_entropy_based_beyond_qubit_flagged(self, rng):
        trip = temperatures(random_density(rng, 3), random_hermitian(rng, 3))
        assert math.isnan(trip.t_ent)
        assert trip.flags["t_ent"] == "qubit-only"

    def test_ordering_against_conventional(self):
        # ergotropy-based equals h/atanh(r): independent of state direction
        h = np.array([0.0, 0.0, -0.5])
        for z in (-0.7, -0.3, 0.3, 0.7):
            trip = qubit_temperatures(np.array([0.0, 0.0, z]), h)
            assert trip.t_ergo == pytest.approx(0.5 / math.atanh(abs(z)),
                                                rel=1e-12)
