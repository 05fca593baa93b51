import itertools

import numpy as np
import pytest
from scipy.stats import chisquare

from tritanneal.anneal import (
    TARunConfig,
    delta_energy,
    local_energy,
    metropolis_sweep,
    restart_rng,
    ta_run,
)
from tritanneal.chain import ChainInstance, classical_energy, encode_config
from tritanneal.schedules import Schedule


class TestLocalEnergy:
    def test_bulk_site_both_neighbors_plus(self):
        inst = ChainInstance(N=3, J=1.0, h=0.2, D=0.0)
        assert local_energy(inst, np.array([1, 1, 1]), 1, 1) == pytest.approx(-2.2, abs=1e-12)

    def test_zero_value_vanishes(self, rng):
        for _ in range(10):
            inst = ChainInstance(N=4, J=rng.normal(), h=rng.normal(), D=rng.normal())
            s = rng.integers(-1, 2, 4)
            site = int(rng.integers(0, 4))
            assert local_energy(inst, s, site, 0) == 0.0

    def test_endpoint_with_minus_neighbor(self):
        # -J*m*sum(nb) - h*m + D*m^2 = -(-2)(-1)(-1) - 0.2*(-1) + 2 = 4.2
        inst = ChainInstance(N=2, J=-2.0, h=0.2, D=2.0)
        assert local_energy(inst, np.array([-1, -1]), 0, -1) == pytest.approx(4.2, abs=1e-12)

    def test_invalid_value_rejected(self):
        inst = ChainInstance(N=2, J=1.0, h=0.0, D=0.0)
        with pytest.raises(ValueError):
            local_energy(inst, np.array([0, 0]), 0, 2)
        with pytest.raises(ValueError):
            local_energy(inst, np.array([0, 0]), 5, 1)


class TestDeltaEnergy:
    def test_bulk_flip_example(self):
        inst = ChainInstance(N=3, J=1.0, h=0.2, D=0.0)
        assert delta_energy(inst, np.array([1, 0, 1]), 1, 1) == pytest.approx(-2.2, abs=1e-12)

    def test_antisymmetric_pair(self, rng):
        inst = ChainInstance(N=4, J=-0.7, h=0.2, D=1.3)
        for _ in range(20):
            s = rng.integers(-1, 2, 4)
            site = int(rng.integers(0, 4))
            alternatives = [m for m in (-1, 0, 1) if m != s[site]]
            m_new = int(rng.choice(alternatives))
            forward = delta_energy(inst, s, site, m_new)
            s_after = s.copy()
            s_after[site] = m_new
            backward = delta_energy(inst, s_after, site, int(s[site]))
            assert forward == pytest.approx(-backward, abs=1e-12)

    def test_same_value_rejected(self):
        inst = ChainInstance(N=2, J=1.0, h=0.0, D=0.0)
        with pytest.raises(ValueError):
            delta_energy(inst, np.array([1, 0]), 0, 1)

    def test_exhaustive_agreement_with_global_recompute(self):
        # every (configuration, site, new value) triple for N=3
        inst = ChainInstance(N=3, J=-2.0, h=0.2, D=1.5)
        for s_tuple in itertools.product((-1, 0, 1), repeat=3):
            s = np.array(s_tuple)
            e_before = classical_energy(inst, s)
            for site in range(3):
                for m_new in (-1, 0, 1):
                    if m_new == s[site]:
                        continue
                    s_after = s.copy()
                    s_after[site] = m_new
                    exact = classical_energy(inst, s_after) - e_before
                    assert abs(delta_energy(inst, s, site, m_new) - exact) < 1e-12

    def test_random_triples_five_sites(self, rng):
        inst = ChainInstance(N=5, J=1.0, h=0.2, D=-0.8)
        for _ in range(1000):
            s = rng.integers(-1, 2, 5)
            site = int(rng.integers(0, 5))
            m_new = int(rng.choice([m for m in (-1, 0, 1) if m != s[site]]))
            s_after = s.copy()
            s_after[site] = m_new
            exact = classical_energy(inst, s_after) - classical_energy(inst, s)
            assert abs(delta_energy(inst, s, site, m_new) - exact) < 1e-12


class TestMetropolisSweep:
    def test_downhill_always_accepted(self):
        # at very low temperature from a high-energy configuration, each
        # update that proposes a downhill move must take it
        inst = ChainInstance(N=2, J=5.0, h=0.2, D=0.0)
        rng = np.random.default_rng(3)
        s = np.array([1, -1], dtype=np.int8)  # frustrated, high energy
        e_start = classical_energy(inst, s)
        out = metropolis_sweep(inst, s, 1e-9, rng)
        assert classical_energy(inst, out) <= e_start

    def test_low_temperature_never_climbs(self, rng):
        inst = ChainInstance(N=5, J=1.0, h=0.2, D=0.0)
        s = rng.integers(-1, 2, 5)
        e = classical_energy(inst, s)
        gen = np.random.default_rng(11)
        for _ in range(200):
            s = metropolis_sweep(inst, s, 1e-12, gen)
            e_new = classical_energy(inst, s)
            assert e_new <= e + 1e-12
            e = e_new

    def test_input_not_mutated(self):
        inst = ChainInstance(N=3, J=1.0, h=0.2, D=0.0)
        s = np.array([0, 0, 0], dtype=np.int8)
        metropolis_sweep(inst, s, 1.0, np.random.default_rng(0))
        assert np.array_equal(s, [0, 0, 0])

    def test_temperature_must_be_positive(self):
        inst = ChainInstance(N=2, J=1.0, h=0.0, D=0.0)
        with pytest.raises(ValueError):
            metropolis_sweep(inst, np.array([0, 0]), 0.0, np.random.default_rng(0))


class TestTaRun:
    def easy_config(self, sweeps=1000, restarts=20, seed=0):
        # sqrt decay at moderate scale anneals the easy chain reliably
        return TARunConfig(
            sweeps=sweeps,
            restarts=restarts,
            seed=seed,
            schedule=Schedule("sqrt", 5.0, 1000.0),
        )

    def test_easy_instance_high_success(self):
        inst = ChainInstance(N=5, J=1.0, h=0.2, D=0.0)
        values = [ta_run(inst, self.easy_config(seed=s)).success_probability for s in range(5)]
        assert np.mean(values) >= 0.95

    def test_all_hits_give_unit_probability(self):
        # strongly funneled instance with a cold late schedule: every restart lands
        inst = ChainInstance(N=4, J=-2.0, h=0.2, D=5.0)
        res = ta_run(inst, self.easy_config(restarts=10, seed=4))
        assert res.success_probability == 1.0
        assert np.allclose(res.final_energies, res.ground_energy)

    def test_success_times_restarts_is_integer(self):
        inst = ChainInstance(N=3, J=-2.0, h=0.2, D=-2.0)
        res = ta_run(inst, self.easy_config(sweeps=100, restarts=7, seed=1))
        count = res.success_probability * 7
        assert count == pytest.approx(round(count), abs=1e-12)

    def test_final_energies_bounded_below_by_ground(self):
        inst = ChainInstance(N=4, J=-1.0, h=0.2, D=-1.0)
        res = ta_run(inst, self.easy_config(sweeps=200, restarts=10, seed=2))
        assert (res.final_energies >= res.ground_energy - 1e-6).all()

    def test_same_seed_bit_identical(self):
        inst = ChainInstance(N=5, J=-2.0, h=0.2, D=1.0)
        a = ta_run(inst, self.easy_config(sweeps=300, restarts=8, seed=11))
        b = ta_run(inst, self.easy_config(sweeps=300, restarts=8, seed=11))
        assert np.array_equal(a.final_energies, b.final_energies)
        assert a.success_probability == b.success_probability

    def test_monotone_budget(self):
        # more sweeps never hurt on the easy instance (one-sided, 0.05 slack)
        inst = ChainInstance(N=5, J=1.0, h=0.2, D=0.0)
        short = np.mean(
            [
                ta_run(inst, TARunConfig(10, 1, s, Schedule("linear", 5.0, 1000.0))).success_probability
                for s in range(100)
            ]
        )
        long = np.mean(
            [
                ta_run(inst, TARunConfig(10_000, 1, s, Schedule("linear", 5.0, 1000.0))).success_probability
                for s in range(100)
            ]
        )
        assert long >= short - 0.05

    def test_uniform_initial_draw(self):
        # the per-restart stream draws initial configurations uniformly
        counts = np.zeros(9, dtype=int)
        n_draws = 20000
        for r in range(n_draws):
            values = restart_rng(123, r).integers(-1, 2, 2)
            counts[encode_config(values)] += 1
        result = chisquare(counts)
        assert result.pvalue > 0.001

    def test_temperature_mode_flag(self):
        inst = ChainInstance(N=3, J=1.0, h=0.2, D=0.0)
        sched = Schedule("log", 20.0, 1000.0)
        normal = ta_run(inst, TARunConfig(200, 10, 5, sched))
        flipped = ta_run(inst, TARunConfig(200, 10, 5, sched, temperature_mode="inverse"))
        # inverse mode reads the decaying schedule as beta: cold start, warm end
        assert normal.ground_energy == flipped.ground_energy
        assert not np.array_equal(normal.final_energies, flipped.final_energies)

    def test_config_validation(self):
        sched = Schedule("log", 1.0, 10.0)
        with pytest.raises(ValueError):
            TARunConfig(0, 1, 0, sched)
        with pytest.raises(ValueError):
            TARunConfig(1, 0, 0, sched)
        with pytest.raises(ValueError):
            TARunConfig(1, 1, 0, sched, temperature_mode="kelvin")
