import itertools

import numpy as np
import pytest

from tritanneal.chain import ChainInstance, all_configs, classical_energy, encode_config
from tritanneal.landscape import (
    basin_curves_along_d,
    decompose_basins,
    energy_vs_f_scatter,
    greedy_descent,
    one_step_neighbors,
    order_parameter_f,
)


def cut_instance(D: float) -> ChainInstance:
    return ChainInstance(N=5, J=-2.0, h=0.2, D=D)


class TestOneStepNeighbors:
    def test_middle_level_has_two_moves(self):
        out = one_step_neighbors(np.array([0]))
        assert len(out) == 2
        assert {int(s[0]) for s in out} == {-1, 1}

    def test_edge_level_has_one_move(self):
        out = one_step_neighbors(np.array([1]))
        assert len(out) == 1
        assert int(out[0][0]) == 0

    def test_counting_rule(self):
        out = one_step_neighbors(np.array([1, 0, -1]))
        assert len(out) == 4  # 1 + 2 + 1

    def test_no_direct_pm_hop(self):
        for nb in one_step_neighbors(np.array([1, 1])):
            assert -1 not in nb  # +1 -> -1 would need two steps

    def test_symmetry(self):
        for s_tuple in itertools.product((-1, 0, 1), repeat=3):
            s = np.array(s_tuple)
            for nb in one_step_neighbors(s):
                back = [tuple(x) for x in one_step_neighbors(nb)]
                assert tuple(s) in back


class TestGreedyDescent:
    def test_local_minimum_is_fixed_point(self):
        inst = ChainInstance(N=5, J=1.0, h=0.2, D=0.0)
        minimum, length = greedy_descent(inst, np.ones(5, dtype=int))
        assert np.array_equal(minimum, np.ones(5))
        assert length == 0

    def test_all_starts_reach_all_zero_at_large_d(self):
        inst = cut_instance(5.0)
        for s_tuple in itertools.product((-1, 0, 1), repeat=5):
            minimum, _ = greedy_descent(inst, np.array(s_tuple))
            assert np.array_equal(minimum, np.zeros(5))

    def test_idempotent(self, rng):
        inst = cut_instance(-2.0)
        for _ in range(30):
            s = rng.integers(-1, 2, 5)
            m1, _ = greedy_descent(inst, s)
            m2, length = greedy_descent(inst, m1)
            assert np.array_equal(m1, m2)
            assert length == 0

    def test_energy_strictly_decreases_along_path(self, rng):
        inst = cut_instance(2.0)
        for _ in range(30):
            s = rng.integers(-1, 2, 5)
            minimum, length = greedy_descent(inst, s)
            if length:
                assert classical_energy(inst, minimum) < classical_energy(inst, s)

    def test_descends_to_strictly_lower_neighbor_only(self):
        # terminal config has no strictly lower one-step neighbour
        inst = cut_instance(-2.0)
        minimum, _ = greedy_descent(inst, np.array([0, 0, 0, 0, 0]))
        e_min = classical_energy(inst, minimum)
        for nb in one_step_neighbors(minimum):
            assert classical_energy(inst, nb) >= e_min


class TestDecomposeBasins:
    def test_single_funnel_at_large_positive_d(self):
        dec = decompose_basins(cut_instance(5.0))
        assert dec.n_basins == 1
        assert dec.largest_fraction == 1.0

    def test_many_basins_at_negative_d(self):
        dec = decompose_basins(cut_instance(-2.0))
        assert dec.n_basins > 1

    def test_partition_property(self):
        dec = decompose_basins(cut_instance(1.0))
        assert int(dec.basin_sizes.sum()) == 243
        assert (dec.basin_of >= 0).all()

    def test_roots_are_local_minima_and_unique(self):
        inst = cut_instance(-2.0)
        dec = decompose_basins(inst)
        assert len(dec.minima) == dec.n_basins
        for label, minimum in enumerate(dec.minima):
            e_min = classical_energy(inst, minimum)
            for nb in one_step_neighbors(minimum):
                assert classical_energy(inst, nb) >= e_min
            # each root drains to itself
            assert dec.basin_of[encode_config(minimum)] == label

    def test_largest_fraction_unity_iff_single_basin(self):
        for D in (-2.0, 5.0):
            dec = decompose_basins(cut_instance(D))
            assert (dec.largest_fraction == 1.0) == (dec.n_basins == 1)

    def test_matches_per_start_descent(self, rng):
        inst = cut_instance(2.0)
        dec = decompose_basins(inst)
        configs = all_configs(5)
        for index in rng.integers(0, 243, 40):
            minimum, _ = greedy_descent(inst, configs[index])
            assert np.array_equal(dec.minima[dec.basin_of[index]], minimum)


class TestBasinCurves:
    def test_antiferromagnetic_cut(self):
        base = ChainInstance(N=5, J=0.0, h=0.2, D=0.0)
        d_values = np.arange(-5.0, 5.5, 0.5)
        rows = basin_curves_along_d(base, -2.0, d_values)
        assert len(rows) == 21
        by_d = {row.D: row for row in rows}
        assert by_d[5.0].largest_fraction == 1.0
        assert by_d[5.0].n_basins <= by_d[-5.0].n_basins
        for row in rows:
            assert row.n_basins >= 1
            assert isinstance(row.n_basins, int)

    def test_rejects_nonfinite(self):
        base = ChainInstance(N=3, J=0.0, h=0.2, D=0.0)
        with pytest.raises(ValueError):
            basin_curves_along_d(base, -2.0, np.array([np.inf]))


class TestOrderParameter:
    def test_all_zero(self):
        assert order_parameter_f(np.zeros(5, dtype=int)) == 0.0

    def test_no_zeros(self):
        assert order_parameter_f(np.array([1, -1, 1, -1, 1])) == 1.0

    def test_single_occupied(self):
        assert order_parameter_f(np.array([1, 0, 0, 0, 0])) == pytest.approx(0.2)


class TestEnergyVsFScatter:
    def test_envelope_at_zero_f(self):
        scatter = energy_vs_f_scatter(cut_instance(-3.7))
        assert scatter.envelope_f[0] == 0.0
        assert scatter.envelope_energy[0] == 0.0  # unique f=0 config is all-zero

    def test_easy_plane_minima_split_in_f(self):
        scatter = energy_vs_f_scatter(cut_instance(2.0))
        f_minima = np.unique(scatter.f[scatter.is_local_min])
        assert len(f_minima) >= 2

    def test_easy_axis_minima_concentrate_at_f_one(self):
        scatter = energy_vs_f_scatter(cut_instance(-2.0))
        assert (scatter.f[scatter.is_local_min] == 1.0).all()

    def test_envelope_dominance(self):
        scatter = energy_vs_f_scatter(cut_instance(0.5))
        for f_val, e_min in zip(scatter.envelope_f, scatter.envelope_energy):
            subset = scatter.energy[scatter.f == f_val]
            assert (subset >= e_min).all()
            assert subset.min() == e_min

    def test_f_grid_is_rational(self):
        scatter = energy_vs_f_scatter(cut_instance(1.0))
        assert scatter.f.size == 243
        allowed = {k / 5 for k in range(6)}
        assert set(np.round(scatter.f, 12)) <= {round(v, 12) for v in allowed}
