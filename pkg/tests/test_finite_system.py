"""
有限系統驗證測試：精確分佈、暴力列舉對照、可測性、Stirling 殘差與集中性
"""

import unittest

import numpy as np

from core.config import VerifierConfig
from core.exceptions import CapacityError, DomainError
from core.model import ModelParams, PairMagnetization
from processors.critical_points import PointClass, find_critical_points
from processors.finite_system import (
    LatticePoint,
    SpinConfiguration,
    argmax_distance,
    compositions,
    enumerate_nu,
    exact_nu,
    g_correction,
    hamiltonian,
    hamiltonian_is_magnetization_measurable,
    magnetization,
    stirling_gap,
)
from testing.validator import PropertyValidator


class TestLattice(unittest.TestCase):

    def test_compositions(self):
        comps = compositions(3, 3)
        self.assertEqual(comps.shape, (10, 3))
        self.assertTrue(np.all(comps.sum(axis=1) == 3))
        self.assertEqual(len({tuple(row) for row in comps}), 10)

    def test_lattice_point_validation(self):
        with self.assertRaises(DomainError):
            LatticePoint((1, 2), (3, 1))
        with self.assertRaises(DomainError):
            LatticePoint((-1, 4), (2, 1))
        point = LatticePoint((1, 2, 1), (4, 0, 0))
        self.assertEqual(point.N, 4)
        self.assertEqual(point.as_magnetization().second.weights, (1.0, 0.0, 0.0))

    def test_spin_configuration_validation(self):
        with self.assertRaises(DomainError):
            SpinConfiguration((1, 2), (1,), 2)
        with self.assertRaises(DomainError):
            SpinConfiguration((1, 3), (1, 2), 2)

    def test_magnetization_counts(self):
        config = SpinConfiguration((1, 3, 3, 2), (2, 2, 2, 1), 3)
        self.assertEqual(magnetization(config), LatticePoint((1, 1, 2), (1, 3, 0)))


class TestHamiltonian(unittest.TestCase):

    def test_aligned_configuration(self):
        # 全部同號：成分內每對各一、成分間 N² 對
        N, J = 4, 0.5
        config = SpinConfiguration((1,) * N, (1,) * N, 2)
        within = 2 * N * (N - 1) / 2
        expected = -(within / (1 + J) + J * N * N / (1 + J)) / N
        self.assertAlmostEqual(hamiltonian(config, J), expected, places=14)

    def test_permutation_invariance_is_exact(self):
        rng = np.random.default_rng(50)
        for _ in range(50):
            first = rng.integers(1, 4, size=6)
            second = rng.integers(1, 4, size=6)
            original = SpinConfiguration(tuple(first), tuple(second), 3)
            shuffled = SpinConfiguration(tuple(rng.permutation(first)), tuple(rng.permutation(second)), 3)
            self.assertEqual(hamiltonian(original, 0.7), hamiltonian(shuffled, 0.7))


class TestExactDistribution(unittest.TestCase):

    def test_matches_brute_force(self):
        cases = [
            ModelParams.finite(2, 1.5, 0.4),
            ModelParams.finite(2, 4.0, 0.0),
            ModelParams.no_componentwise(2, 3.0),
            ModelParams.finite(3, 2.5, 0.3),
            ModelParams.no_componentwise(3, 3.0),
        ]
        for params in cases:
            for N in range(1, 5):
                if params.q ** (2 * N) > 10_000:
                    continue
                exact = exact_nu(N, params)
                brute = enumerate_nu(N, params)
                np.testing.assert_allclose(exact.log_probs, brute.log_probs, rtol=0, atol=1e-10,
                                           err_msg=f"{params}, N={N}")

    def test_normalization(self):
        validator = PropertyValidator()
        for params in (ModelParams.finite(3, 5.0, 0.8), ModelParams.finite(2, 4.0, 0.2)):
            table = exact_nu(30, params)
            result = validator.check_normalization(table.log_probs.ravel())
            self.assertTrue(result['valid'], msg=str(result))
            self.assertAlmostEqual(table.total_mass(), 1.0, places=10)

    def test_symmetry_under_component_swap(self):
        table = exact_nu(12, ModelParams.finite(3, 3.0, 0.4))
        np.testing.assert_allclose(table.log_probs, table.log_probs.T, atol=1e-12)

    def test_log_prob_lookup(self):
        table = exact_nu(3, ModelParams.finite(2, 2.0, 0.5))
        point = LatticePoint((3, 0), (3, 0))
        self.assertEqual(table.log_prob(point), table.log_probs[table._index[(3, 0)], table._index[(3, 0)]])
        with self.assertRaises(DomainError):
            table.log_prob(LatticePoint((2, 2), (4, 0)))

    def test_capacity(self):
        with self.assertRaises(CapacityError) as ctx:
            exact_nu(61, ModelParams.finite(3, 3.0, 0.4))
        self.assertGreater(ctx.exception.required_bytes, 0)
        with self.assertRaises(CapacityError):
            exact_nu(20, ModelParams.finite(3, 3.0, 0.4), VerifierConfig(max_n_q3=10))
        with self.assertRaises(CapacityError):
            exact_nu(5, ModelParams.finite(4, 3.0, 0.4), VerifierConfig(max_entries=100))
        with self.assertRaises(CapacityError):
            enumerate_nu(10, ModelParams.finite(3, 3.0, 0.4))
        with self.assertRaises(DomainError):
            exact_nu(0, ModelParams.finite(3, 3.0, 0.4))

    def test_to_frame(self):
        table = exact_nu(4, ModelParams.finite(2, 2.0, 0.5))
        frame = table.to_frame()
        self.assertEqual(list(frame.columns), ['n1', 'n2', 'm1', 'm2', 'log_prob'])
        self.assertEqual(len(frame), 25)
        self.assertTrue(np.all(frame[['n1', 'n2']].sum(axis=1) == 4))
        self.assertAlmostEqual(float(np.exp(frame['log_prob']).sum()), 1.0, places=12)


class TestMeasurability(unittest.TestCase):

    def test_hamiltonian_passes(self):
        check = hamiltonian_is_magnetization_measurable(6, 3, 0.5, trials=100, seed=1)
        self.assertTrue(check.passed)
        self.assertIsNone(check.witness)
        self.assertEqual(check.to_dict()['witness'], None)

    def test_position_dependent_energy_fails(self):
        check = hamiltonian_is_magnetization_measurable(
            4, 3, 0.5, trials=100, seed=2, energy=lambda config: float(config.first[0]))
        self.assertFalse(check.passed)
        original, shuffled = check.witness
        self.assertEqual(magnetization(original), magnetization(shuffled))
        self.assertEqual(len(check.to_dict()['witness']), 2)

    def test_size_limit(self):
        with self.assertRaises(DomainError):
            hamiltonian_is_magnetization_measurable(9, 3, 0.5, trials=1)


class TestStirlingComparison(unittest.TestCase):

    def test_gap_decays(self):
        report = stirling_gap(40, ModelParams.finite(3, 2.0, 0.5))
        gaps = [report.gaps[n] for n in (10, 20, 40)]
        self.assertGreater(gaps[0], gaps[1])
        self.assertGreater(gaps[1], gaps[2])
        self.assertLess(report.fitted_decay, -0.5)
        self.assertEqual(report.max_abs_gap, report.gaps[40])
        self.assertEqual(set(report.to_dict()['gaps']), {'10', '20', '40'})

    def test_gap_sharpens_at_random_parameters(self):
        rng = np.random.default_rng(40)
        cases = [ModelParams.no_componentwise(3, 2.9)]
        for _ in range(5):
            q = int(rng.integers(2, 4))
            cases.append(ModelParams.finite(q, rng.uniform(0.5, 6.0), rng.uniform(0.0, 1.0)))
        for params in cases:
            report = stirling_gap(40, params)
            gaps = [report.gaps[n] for n in (10, 20, 40)]
            self.assertTrue(PropertyValidator().check_nonincreasing(gaps, f"Stirling {params}")['valid'])

    def test_g_correction(self):
        params = ModelParams.finite(3, 2.0, 1.0)
        x = PairMagnetization.uniform(3)
        self.assertAlmostEqual(g_correction(params, x), 0.5 * 1.0 * 6 * np.log(1.0 / 3.0), places=14)
        with self.assertRaises(DomainError):
            g_correction(params, PairMagnetization.from_weights((1.0, 0.0, 0.0), (0.5, 0.25, 0.25)))


class TestConcentration(unittest.TestCase):

    def test_argmax_near_numeric_minimum(self):
        N = 60
        for beta, J in ((2.0, 0.5), (5.0, 0.1), (5.0, 0.8)):
            params = ModelParams.finite(3, beta, J)
            summary = find_critical_points(params)
            minima = [summary.points[i].location for i in summary.minima_order]
            table = exact_nu(N, params)
            self.assertLessEqual(argmax_distance(table, minima), 2.0 / N, msg=f"β={beta}, J={J}")

    def test_mass_concentrates_on_global_minima(self):
        N = 60
        params = ModelParams.finite(3, 5.0, 0.8)
        summary = find_critical_points(params)
        lowest = summary.points[summary.minima_order[0]].value
        global_minima = [p.location for p in summary.select(PointClass.LOCAL_MIN) if p.value <= lowest + 1e-9]
        self.assertEqual(len(global_minima), 3)

        table = exact_nu(N, params)
        self.assertLessEqual(argmax_distance(table, global_minima), 2.0 / N)
        self.assertGreater(table.mass_within(global_minima, 3.0 / N), 0.9)

    def test_argmax_distance_requires_points(self):
        table = exact_nu(3, ModelParams.finite(2, 2.0, 0.5))
        with self.assertRaises(DomainError):
            argmax_distance(table, [])


if __name__ == '__main__':
    unittest.main()
