"""
一維解析工具測試：臨界常數、分支解、曲線導數與極小值比較函數
"""

import math
import unittest

import numpy as np

from core.exceptions import DomainError, NoSolutionError, SolverError
from processors.scalar_analysis import (
    critical_constants,
    f_compare,
    f_tilde,
    find_root,
    phi,
    phi_prime,
    phi_second,
    psi_fn,
    psi_fn_prime,
    solve_branches,
    theta,
    theta_prime,
    xi,
    xi_prime,
)


class TestCriticalConstants(unittest.TestCase):

    def test_reference_values(self):
        constants = critical_constants()
        self.assertAlmostEqual(constants.m1, 0.2076, delta=1e-3)
        self.assertAlmostEqual(constants.beta1, 2.7465, delta=1e-3)
        self.assertEqual(constants.beta2, 4.0 * math.log(2.0))
        self.assertAlmostEqual(constants.beta2, 2.7726, delta=1e-4)
        self.assertEqual(constants.beta3, 3.0)
        self.assertAlmostEqual(constants.jc, 0.2419, delta=1e-3)

    def test_ordering(self):
        constants = critical_constants()
        self.assertLess(constants.beta1, constants.beta2)
        self.assertLess(constants.beta2, constants.beta3)

    def test_m1_minimizes_xi(self):
        constants = critical_constants()
        self.assertAlmostEqual(xi_prime(constants.m1), 0.0, places=9)
        self.assertGreater(xi(constants.m1 - 1e-3), constants.beta1)
        self.assertGreater(xi(constants.m1 + 1e-3), constants.beta1)

    def test_to_dict_keys(self):
        self.assertEqual(list(critical_constants().to_dict()), ['m1', 'beta1', 'beta2', 'beta3', 'jc'])


class TestXi(unittest.TestCase):

    def test_value_at_one_third(self):
        self.assertEqual(xi(1.0 / 3.0), 3.0)

    def test_continuous_across_series_cutoff(self):
        for h in (2e-6, 5e-6, 1e-5):
            x = 1.0 / 3.0 + h
            series = 3.0 + 4.5 * h + 27.0 * h * h
            self.assertAlmostEqual(xi(x), series, delta=1e-9)

    def test_derivative_sign_split_at_m1(self):
        m1 = critical_constants().m1
        grid = np.linspace(0.0, 0.5, 10002)[1:-1]
        for x in grid:
            if abs(x - m1) < 1e-6:
                continue
            if x < m1:
                self.assertLess(xi_prime(x), 0.0, msg=f"x={x}")
            else:
                self.assertGreater(xi_prime(x), 0.0, msg=f"x={x}")

    def test_derivative_matches_finite_difference(self):
        h = 1e-6
        for x in (0.05, 0.15, 0.25, 1.0 / 3.0 + 3e-4, 0.45):
            fd = (xi(x + h) - xi(x - h)) / (2 * h)
            self.assertAlmostEqual(xi_prime(x), fd, delta=1e-5 * max(1.0, abs(fd)))

    def test_domain(self):
        for bad in (0.0, 0.5, -0.1):
            with self.assertRaises(DomainError):
                xi(bad)


class TestBranches(unittest.TestCase):

    def test_solutions_satisfy_equation(self):
        m1 = critical_constants().m1
        for beta in (2.75, 2.9, 3.5, 5.0, 10.0):
            branches = solve_branches(beta)
            self.assertLess(branches.x_s, m1)
            self.assertLess(m1, branches.x_l)
            self.assertAlmostEqual(xi(branches.x_s), beta, delta=1e-10)
            self.assertAlmostEqual(xi(branches.x_l), beta, delta=1e-10)

    def test_one_third_is_a_branch_at_beta3(self):
        branches = solve_branches(3.0)
        self.assertAlmostEqual(branches.x_l, 1.0 / 3.0, delta=1e-9)

    def test_no_solution_at_or_below_beta1(self):
        beta1 = critical_constants().beta1
        for beta in (1.0, 2.5, beta1):
            with self.assertRaises(NoSolutionError):
                solve_branches(beta)


class TestCurves(unittest.TestCase):

    def test_phi_slope_at_inverse_beta(self):
        for beta, J in ((2.0, 0.3), (4.0, 0.1), (6.0, 0.9)):
            self.assertAlmostEqual(phi_prime(1.0 / beta, beta, J), 1.0, places=12)

    def test_derivatives_match_finite_differences(self):
        h = 1e-6
        beta, J = 3.7, 0.35
        for x in (0.05, 0.2, 0.4):
            self.assertAlmostEqual(phi_prime(x, beta, J), (phi(x + h, beta, J) - phi(x - h, beta, J)) / (2 * h),
                                   delta=1e-5)
            self.assertAlmostEqual(phi_second(x, beta, J),
                                   (phi_prime(x + h, beta, J) - phi_prime(x - h, beta, J)) / (2 * h),
                                   delta=1e-3)
            self.assertAlmostEqual(psi_fn_prime(x, beta, J),
                                   (psi_fn(x + h, beta, J) - psi_fn(x - h, beta, J)) / (2 * h), delta=1e-5)
        for s in (-0.8, 0.0, 0.6):
            self.assertAlmostEqual(theta_prime(s, beta, J),
                                   (theta(s + h, beta, J) - theta(s - h, beta, J)) / (2 * h), delta=1e-5)

    def test_psi_fixed_points(self):
        beta, J = 3.5, 0.2
        self.assertAlmostEqual(psi_fn(1.0 / 3.0, beta, J), 1.0 / 3.0, places=14)
        branches = solve_branches(beta)
        for x in (branches.x_s, branches.x_l):
            self.assertAlmostEqual(psi_fn(x, beta, J), x, places=9)

    def test_psi_slope_at_small_branch_exceeds_one(self):
        for beta in (2.8, 3.5, 5.0):
            x_s = solve_branches(beta).x_s
            for J in (0.05, 0.3, 0.8):
                self.assertGreater(psi_fn_prime(x_s, beta, J), 1.0)

    def test_curves_require_positive_J(self):
        with self.assertRaises(DomainError):
            phi(0.2, 3.0, 0.0)
        with self.assertRaises(DomainError):
            theta(1.0, 3.0, 0.2)


class TestComparisonFunctions(unittest.TestCase):

    def test_f_value_at_zero(self):
        self.assertAlmostEqual(f_compare(0.0), 2.0 * math.log(2.0), places=15)

    def test_f_increasing(self):
        grid = np.linspace(0.0, 0.99, 1001)[1:]
        values = [f_compare(x) for x in grid]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))

    def test_f_tilde_signs(self):
        grid = np.linspace(0.0, 0.5, 1002)[1:-1]
        for x in grid:
            value = f_tilde(x)
            if 1.0 / 6.0 < x < 1.0 / 3.0:
                self.assertGreater(value, 0.0, msg=f"x={x}")
            else:
                self.assertLess(value, 0.0, msg=f"x={x}")

    def test_f_tilde_roots(self):
        self.assertAlmostEqual(f_tilde(1.0 / 6.0), 0.0, places=12)
        self.assertAlmostEqual(f_tilde(1.0 / 3.0), 0.0, places=12)


class TestFindRoot(unittest.TestCase):

    def test_same_sign_bracket(self):
        with self.assertRaises(SolverError):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0, "test")

    def test_simple_root(self):
        self.assertAlmostEqual(find_root(lambda x: x * x - 2.0, 0.0, 2.0, "sqrt2"), math.sqrt(2.0), places=14)


if __name__ == '__main__':
    unittest.main()
