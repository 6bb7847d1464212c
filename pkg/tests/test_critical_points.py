"""
臨界點普查測試：q=2 個數、q=3 兩種極端耦合、斜率判準與極小值排序
"""

import json
import unittest
from collections import Counter

import numpy as np

from core.exceptions import DomainError
from core.model import ModelParams, PairMagnetization, Regime, reduce
from processors.critical_points import (
    CriticalPointFinder,
    LandscapeSummary,
    Membership,
    PointClass,
    classify_index,
    classify_symmetric,
    find_critical_points,
    minima_ordering,
    symmetry_orbit,
)
from processors.landscape import free_energy_of, hessian, symmetric_point, symmetric_spectrum
from processors.scalar_analysis import f_tilde, solve_branches


def component_family(weights, branches, tol=1e-6):
    """單一成分屬於 q3、x_s 或 x_l 中的哪一種形狀"""
    ordered = np.sort(weights)
    for name, level in (('s', branches.x_s), ('l', branches.x_l), ('u', 1.0 / 3.0)):
        target = np.sort([level, level, 1.0 - 2.0 * level])
        if np.max(np.abs(ordered - target)) < tol:
            return name
    return '?'


class TestQ2Census(unittest.TestCase):

    def test_counts_follow_zeta_boundaries(self):
        cases = {
            0.5: (2, 1, 0, Regime.SYNCHRONIZED),
            0.28: (2, 2, 1, Regime.DESYNCHRONIZED),
            0.1: (4, 4, 1, Regime.DESYNCHRONIZED),
        }
        for J, (minima, saddles, maxima, regime) in cases.items():
            summary = find_critical_points(ModelParams.finite(2, 4.0, J))
            counts = summary.counts()
            self.assertEqual((counts.minima, counts.saddles, counts.maxima), (minima, saddles, maxima), msg=f"J={J}")
            self.assertEqual(counts.degenerate, 0)
            self.assertEqual(summary.regime, regime, msg=f"J={J}")

    def test_center_class(self):
        summary = find_critical_points(ModelParams.finite(2, 4.0, 0.5))
        center = summary.select(membership=Membership.UNIFORM)
        self.assertEqual(len(center), 1)
        self.assertEqual(center[0].classification, PointClass.SADDLE)
        self.assertEqual([summary.points[i].membership for i in summary.lowest_saddles], [Membership.UNIFORM])

    def test_minima_ordering_gap(self):
        summary = find_critical_points(ModelParams.finite(2, 4.0, 0.1))
        ordering = minima_ordering(summary)
        self.assertEqual(ordering.gap_label, "antidiagonal_vs_diagonal")
        self.assertGreater(ordering.numeric_gap, 0.0)
        self.assertAlmostEqual(ordering.analytic_gap, ordering.numeric_gap, delta=1e-7)
        self.assertEqual(ordering.ordered[0].gap, 0.0)
        gaps = [entry.gap for entry in ordering.ordered]
        self.assertEqual(gaps, sorted(gaps))
        # 兩個對角極小值並列最低
        self.assertEqual(ordering.ordered[0].membership, Membership.IN_S2)
        self.assertEqual(ordering.ordered[1].membership, Membership.IN_S2)


class TestZeroCouplingCensus(unittest.TestCase):

    def census(self, beta):
        summary = find_critical_points(ModelParams.finite(3, beta, 0.0))
        branches = solve_branches(beta)
        families = Counter()
        for point in summary.points:
            first = component_family(point.location.first.weights, branches)
            second = component_family(point.location.second.weights, branches)
            key = ''.join(sorted(first + second))
            families[(key, point.classification)] += 1
        return summary, families

    def test_middle_regimes(self):
        for beta in (2.76, 2.9):
            summary, families = self.census(beta)
            expected = Counter({
                ('uu', PointClass.LOCAL_MIN): 1,
                ('ss', PointClass.LOCAL_MIN): 9,
                ('su', PointClass.LOCAL_MIN): 6,
                ('ls', PointClass.SADDLE): 18,
                ('lu', PointClass.SADDLE): 6,
                ('ll', PointClass.HIGHER_INDEX): 9,
            })
            self.assertEqual(families, expected, msg=f"β={beta}")
            counts = summary.counts()
            self.assertEqual((counts.minima, counts.saddles, counts.higher_index), (16, 24, 9))

    def test_uniform_becomes_local_max(self):
        summary = find_critical_points(ModelParams.finite(3, 3.5, 0.0))
        uniform = summary.select(membership=Membership.UNIFORM)
        self.assertEqual(len(uniform), 1)
        self.assertEqual(uniform[0].classification, PointClass.LOCAL_MAX)
        self.assertEqual(uniform[0].morse_index, 4)

    def test_uniform_vs_small_gap(self):
        summary = find_critical_points(ModelParams.finite(3, 2.9, 0.0))
        ordering = minima_ordering(summary)
        self.assertEqual(ordering.gap_label, "uniform_vs_small")
        self.assertAlmostEqual(ordering.analytic_gap, f_tilde(solve_branches(2.9).x_s), places=14)
        self.assertAlmostEqual(ordering.analytic_gap, ordering.numeric_gap, delta=1e-8)
        # β₂ < β：𝔖² 點比 q₃ 低
        self.assertLess(ordering.numeric_gap, 0.0)


class TestNoComponentwiseCensus(unittest.TestCase):

    def test_three_minima_three_saddles(self):
        for beta, uniform_class in ((2.76, PointClass.LOCAL_MIN), (2.9, PointClass.LOCAL_MIN),
                                    (3.5, PointClass.HIGHER_INDEX)):
            summary = find_critical_points(ModelParams.no_componentwise(3, beta))
            uniform = summary.select(membership=Membership.UNIFORM)
            self.assertEqual(len(uniform), 1)
            self.assertEqual(uniform[0].classification, uniform_class)
            others = [p for p in summary.points if p.membership != Membership.UNIFORM]
            classes = Counter(p.classification for p in others)
            self.assertEqual(classes, Counter({PointClass.LOCAL_MIN: 3, PointClass.SADDLE: 3}), msg=f"β={beta}")
            # 所有臨界點都在對角上
            for point in others:
                self.assertIn(point.membership, (Membership.IN_S2, Membership.IN_L2))
            self.assertEqual(summary.regime, Regime.SYNCHRONIZED)

    def test_small_and_large_branches_between_beta1_and_beta3(self):
        summary = find_critical_points(ModelParams.no_componentwise(3, 2.76))
        self.assertEqual(len(summary.select(PointClass.LOCAL_MIN, Membership.IN_S2)), 3)
        self.assertEqual(len(summary.select(PointClass.SADDLE, Membership.IN_L2)), 3)
        self.assertEqual(summary.counts().minima, 4)


class TestSynchronizedCensus(unittest.TestCase):

    def test_high_temperature_single_minimum(self):
        summary = find_critical_points(ModelParams.finite(3, 2.0, 0.5))
        minima = summary.select(PointClass.LOCAL_MIN)
        self.assertEqual(len(minima), 1)
        self.assertEqual(minima[0].membership, Membership.UNIFORM)

    def test_cold_corner_minima_near_vertices(self):
        beta, J = 5.421052631578948, 0.5
        params = ModelParams.finite(3, beta, J)
        summary = find_critical_points(params)
        minima = summary.select(PointClass.LOCAL_MIN)
        self.assertEqual(len(minima), 3)
        self.assertEqual({p.membership for p in minima}, {Membership.IN_S2})

        x_s = solve_branches(beta).x_s
        targets = []
        for odd in range(3):
            weights = [x_s, x_s, x_s]
            weights[odd] = 1.0 - 2.0 * x_s
            targets.append(np.array([weights, weights]))
        for point in minima:
            distances = [np.max(np.abs(point.location.as_array() - t)) for t in targets]
            self.assertLess(min(distances), 1e-7)

        uniform_value = free_energy_of(params, PairMagnetization.uniform(3))
        self.assertLess(summary.points[summary.minima_order[0]].value, uniform_value)
        self.assertEqual(summary.regime, Regime.SYNCHRONIZED)


class TestFinderBehaviour(unittest.TestCase):

    def test_grid_density_floor(self):
        with self.assertRaises(DomainError):
            find_critical_points(ModelParams.finite(3, 3.0, 0.2), grid_density=7)

    def test_rejects_unsupported_q(self):
        with self.assertRaises(DomainError):
            find_critical_points(ModelParams.finite(4, 3.0, 0.2))

    def test_grid_starts_are_interior(self):
        starts = CriticalPointFinder.grid_starts(3, 8)
        self.assertEqual(starts.shape, (21 * 21, 4))
        self.assertTrue(np.all(starts > 0))
        self.assertTrue(np.all(starts[:, :2].sum(axis=1) < 1))

    def test_census_invariant_under_grid_density(self):
        cases = [
            ModelParams.finite(3, 3.2, 0.15),
            ModelParams.finite(3, 4.0, 0.1),
            ModelParams.finite(3, 2.9, 0.4),
            ModelParams.finite(3, 2.0, 0.5),
            ModelParams.finite(3, 3.5, 0.0),
            ModelParams.finite(3, 5.421052631578948, 0.5),
        ]
        for params in cases:
            reference = None
            for density in (8, 16, 32):
                summary = find_critical_points(params, grid_density=density)
                census = (summary.counts().to_dict(),
                          sorted((p.classification.value, p.membership.value) for p in summary.points))
                if reference is None:
                    reference = census
                else:
                    self.assertEqual(census, reference, msg=f"{params}, density={density}")

    def test_found_set_closed_under_symmetry(self):
        summary = find_critical_points(ModelParams.finite(3, 3.2, 0.15))
        locations = np.array([p.location.as_array().ravel() for p in summary.points])
        for point in summary.points:
            for image in symmetry_orbit(point.location):
                distances = np.max(np.abs(locations - image.as_array().ravel()), axis=1)
                self.assertLess(distances.min(), 1e-6)

    def test_minima_order_sorted(self):
        summary = find_critical_points(ModelParams.finite(3, 3.2, 0.15))
        values = [summary.points[i].value for i in summary.minima_order]
        self.assertEqual(values, sorted(values))
        for i in summary.minima_order:
            self.assertEqual(summary.points[i].classification, PointClass.LOCAL_MIN)

    def test_json_round_trip(self):
        summary = find_critical_points(ModelParams.finite(2, 4.0, 0.28))
        restored = LandscapeSummary.from_dict(json.loads(json.dumps(summary.to_dict())))
        self.assertEqual(restored, summary)

    def test_summary_rejects_bad_indices(self):
        summary = find_critical_points(ModelParams.finite(2, 4.0, 0.5))
        data = summary.to_dict()
        data['minima_order'] = [len(data['points'])]
        with self.assertRaises(DomainError):
            LandscapeSummary.from_dict(data)


class TestSlopeCriterion(unittest.TestCase):

    def test_matches_symmetric_spectrum(self):
        rng = np.random.default_rng(40)
        compared = 0
        for _ in range(1000):
            beta = rng.uniform(0.5, 8.0)
            J = rng.uniform(0.01, 1.0)
            s, t = rng.uniform(0.02, 0.48, size=2)
            params = ModelParams.finite(3, beta, J)
            spectrum = np.asarray(symmetric_spectrum(params, s, t))
            if np.min(np.abs(spectrum)) < 1e-3:
                continue
            expected = classify_index(int(np.sum(spectrum < 0)), 4)
            self.assertEqual(classify_symmetric(params, s, t), expected)
            compared += 1
        self.assertGreater(compared, 800)

    def test_no_componentwise_matches_dense(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            beta = rng.uniform(0.5, 8.0)
            s, t = rng.uniform(0.02, 0.48, size=2)
            params = ModelParams.no_componentwise(3, beta)
            spectrum = np.linalg.eigvalsh(hessian(params, reduce(symmetric_point(s, t))))
            if np.min(np.abs(spectrum)) < 1e-3:
                continue
            expected = classify_index(int(np.sum(spectrum < 0)), 4)
            self.assertEqual(classify_symmetric(params, s, t), expected)

    def test_q2_matches_dense(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            beta = rng.uniform(0.5, 8.0)
            J = rng.uniform(0.01, 1.0)
            s, t = rng.uniform(0.02, 0.98, size=2)
            params = ModelParams.finite(2, beta, J)
            point = PairMagnetization.from_weights((s, 1.0 - s), (t, 1.0 - t))
            spectrum = np.linalg.eigvalsh(hessian(params, reduce(point)))
            if np.min(np.abs(spectrum)) < 1e-3:
                continue
            expected = classify_index(int(np.sum(spectrum < 0)), 2)
            self.assertEqual(classify_symmetric(params, s, t), expected)

    def test_domain(self):
        with self.assertRaises(DomainError):
            classify_symmetric(ModelParams.finite(3, 3.0, 0.2), 0.6, 0.2)
        with self.assertRaises(DomainError):
            classify_symmetric(ModelParams.finite(2, 3.0, 0.2), 1.0, 0.2)


if __name__ == '__main__':
    unittest.main()
