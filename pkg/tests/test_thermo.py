import math
import unittest

import numpy as np

from src.symbolic.subshift import SubshiftSpec
from src.thermo.potentials import Constant, coboundary, linear, potential_from_spec, symbol_table
from src.thermo.pressure import (
    EquilibriumStats, equilibrium_mean, level_entropy, normalized, pressure, pressure_matrix, pressure_sequence,
    zeta_pressure,
)
from src.thermo.sweep import subshift_sweep
from src.thermo.variance import (
    centered, cohomology_defect, covariance, pressure_form_potentials, pressure_norm_sq, variance, variance_estimate,
)
from src.utils.exceptions import (
    ConvergenceError, NonPositiveDenominatorError, SpecFormatError, ThermoError,
)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def bernoulli():
    full = SubshiftSpec.full_shift(2)
    return full, symbol_table(full, [math.log(0.3), math.log(0.7)])


class TestPressure(unittest.TestCase):

    def test_full_shift_entropy(self):
        full = SubshiftSpec.full_shift(2)
        stats = pressure(Constant(0.0), n=10, system=full)
        self.assertAlmostEqual(stats.pressure, math.log(2.0), delta=1e-10)
        self.assertAlmostEqual(stats.entropy, math.log(2.0), delta=1e-10)

    def test_golden_mean_orbit_estimator(self):
        stats = pressure(Constant(0.0), n=20, system=SubshiftSpec.golden_mean())
        self.assertAlmostEqual(stats.pressure, math.log(GOLDEN), delta=1e-6)

    def test_golden_mean_zeta_estimator(self):
        stats = pressure(Constant(0.0), n=8, estimator="zeta", system=SubshiftSpec.golden_mean())
        self.assertAlmostEqual(stats.pressure, math.log(GOLDEN), delta=1e-10)

    def test_golden_mean_matrix(self):
        golden = SubshiftSpec.golden_mean()
        value = pressure_matrix(symbol_table(golden, [0.0, 0.0]))
        self.assertAlmostEqual(value, math.log(GOLDEN), delta=1e-8)

    def test_bernoulli_measure(self):
        _, phi = bernoulli()
        stats = pressure(phi, n=10)
        entropy = -(0.3 * math.log(0.3) + 0.7 * math.log(0.7))
        self.assertAlmostEqual(stats.pressure, 0.0, delta=1e-12)
        self.assertAlmostEqual(stats.mean_energy, -entropy, delta=1e-10)
        self.assertAlmostEqual(stats.entropy, entropy, delta=1e-10)

    def test_variational_identity(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=3)
        stats = pressure(phi, n=12)
        self.assertAlmostEqual(stats.pressure, stats.mean_energy + stats.entropy, delta=1e-9)

    def test_zeta_and_matrix_agree(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=5)
        zeta = pressure(phi, n=8, estimator="zeta").pressure
        self.assertAlmostEqual(zeta, pressure_matrix(phi), delta=1e-9)

    def test_orbit_estimator_converges_to_matrix(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=7)
        self.assertAlmostEqual(pressure(phi, n=20).pressure, pressure_matrix(phi), delta=1e-4)

    def test_unknown_estimator(self):
        with self.assertRaises(ThermoError):
            pressure(Constant(0.0), n=4, estimator="spectral", system=SubshiftSpec.full_shift(2))

    def test_first_level(self):
        stats = pressure(Constant(0.0), n=1, system=SubshiftSpec.full_shift(2))
        self.assertAlmostEqual(stats.pressure, math.log(2.0), delta=1e-12)
        self.assertAlmostEqual(stats.entropy, math.log(2.0), delta=1e-12)

    def test_level_must_be_positive(self):
        with self.assertRaises(ThermoError):
            pressure(Constant(0.0), n=0, system=SubshiftSpec.full_shift(2))

    def test_constant_needs_system(self):
        with self.assertRaises(ThermoError):
            pressure(Constant(0.0), n=4)

    def test_periodic_matrix_does_not_converge(self):
        flip = SubshiftSpec.from_matrix([[0, 1], [1, 0]])
        with self.assertRaises(ConvergenceError):
            pressure_matrix(symbol_table(flip, [0.0, math.log(2.0)]), max_iter=50)

    def test_pressure_sequence(self):
        values = pressure_sequence(Constant(0.0), [4, 6, 8], system=SubshiftSpec.golden_mean())
        self.assertEqual(len(values), 3)
        errors = [abs(v - math.log(GOLDEN)) for v in values]
        self.assertTrue(errors[0] > errors[1] > errors[2])

    def test_zeta_without_positive_root(self):
        # 1 − u + u²/2 не имеет вещественных нулей
        self.assertIsNone(zeta_pressure([0.0, -50.0], 0.0))

    def test_zeta_root_far_from_ratio_is_rejected(self):
        # t₁ = 0.1, t₂ = 0.01: детерминант 1 − 0.1u с нулем u = 10
        self.assertIsNone(zeta_pressure([math.log(0.1), math.log(0.01)], 0.0))
        self.assertAlmostEqual(zeta_pressure([math.log(0.1), math.log(0.01)], math.log(0.1)), math.log(0.1),
                               delta=1e-12)

    def test_entropy_is_not_derived_from_pressure(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=3)
        stats = pressure(phi, n=4, estimator="zeta")
        self.assertGreater(abs(stats.variational_gap), 1e-8)
        self.assertTrue(any("Вариационное тождество" in d for d in stats.diagnostics))

    def test_variational_identity_is_enforced(self):
        with self.assertRaises(ThermoError):
            EquilibriumStats(pressure=0.7, mean_energy=0.0, entropy=0.6, orbit_period_used=4, estimator="orbit",
                             variational_tol=1e-9)

    def test_level_entropy_of_full_shift(self):
        full = SubshiftSpec.full_shift(2)
        sweep = subshift_sweep(full, 6)
        sums = np.zeros(len(sweep.periods))
        self.assertAlmostEqual(level_entropy(sweep, sums, 6), 6 * math.log(2.0), delta=1e-12)

    def test_normalized(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=11)
        self.assertAlmostEqual(pressure(normalized(phi, n=14), n=14).pressure, 0.0, delta=1e-9)


class TestEquilibriumMean(unittest.TestCase):

    def test_bernoulli_mean(self):
        full, phi = bernoulli()
        psi = symbol_table(full, [1.0, 0.0])
        self.assertAlmostEqual(equilibrium_mean(psi, phi, n=8), 0.3, delta=1e-12)

    def test_determinant_mean(self):
        full, phi = bernoulli()
        psi = symbol_table(full, [1.0, 0.0])
        self.assertAlmostEqual(equilibrium_mean(psi, phi, n=6, estimator="zeta"), 0.3, delta=1e-12)

    def test_cross_check(self):
        full, phi = bernoulli()
        psi = symbol_table(full, [0.7, -0.3])
        mean, derivative = equilibrium_mean(psi, phi, n=8, cross_check=True)
        self.assertAlmostEqual(mean, 0.0, delta=1e-12)
        self.assertAlmostEqual(derivative, 0.0, delta=1e-6)

    def test_determinant_mean_on_golden_mean(self):
        golden = SubshiftSpec.golden_mean()
        phi = CylinderPotentials.random(golden, seed=13)
        psi = symbol_table(golden, [1.0, -0.5])
        deep = equilibrium_mean(psi, phi, n=20)
        shallow = equilibrium_mean(psi, phi, n=8, estimator="zeta")
        self.assertAlmostEqual(deep, shallow, delta=1e-5)


class TestVariance(unittest.TestCase):

    def test_bernoulli_variance(self):
        full, phi = bernoulli()
        psi = symbol_table(full, [0.7, -0.3])
        estimate = variance_estimate(psi, phi, n=10)
        self.assertAlmostEqual(estimate.primary, 0.21, delta=1e-10)
        self.assertAlmostEqual(estimate.cross_check, 0.21, delta=1e-4)
        self.assertAlmostEqual(estimate.mean, 0.0, delta=1e-12)

    def test_pressure_norm(self):
        full, phi = bernoulli()
        psi = symbol_table(full, [0.7, -0.3])
        entropy = -(0.3 * math.log(0.3) + 0.7 * math.log(0.7))
        self.assertAlmostEqual(pressure_norm_sq(psi, phi, n=10), 0.21 / entropy, delta=1e-8)

    def test_coboundary_is_degenerate(self):
        full = SubshiftSpec.full_shift(3)
        psi = coboundary(full, [0.1, 0.5, -0.2])
        phi = Constant(-math.log(3.0))
        self.assertLess(cohomology_defect(psi, max_period=6), 1e-12)
        self.assertLess(variance(psi, phi, n=6, system=full), 1e-12)

    def test_non_coboundary_defect(self):
        full, _ = bernoulli()
        self.assertAlmostEqual(cohomology_defect(symbol_table(full, [0.7, -0.3]), max_period=4), 0.7, delta=1e-12)

    def test_unnormalized_potential_has_no_denominator(self):
        full = SubshiftSpec.full_shift(2)
        psi = symbol_table(full, [0.7, -0.3])
        with self.assertRaises(NonPositiveDenominatorError):
            pressure_norm_sq(psi, Constant(0.0), n=6, system=full)

    def test_covariance_is_bilinear(self):
        full, phi = bernoulli()
        psi1 = symbol_table(full, [0.7, -0.3])
        psi2 = psi1 * 2.0
        self.assertAlmostEqual(covariance(psi1, psi2, phi, n=8), 0.42, delta=1e-9)

    def test_pressure_form(self):
        full, phi = bernoulli()
        indicator = symbol_table(full, [1.0, 0.0])
        entropy = -(0.3 * math.log(0.3) + 0.7 * math.log(0.7))
        form = pressure_form_potentials(symbol_table(full, [0.7, -0.3]), indicator, phi, n=8)
        self.assertAlmostEqual(form, 0.21 / entropy, delta=1e-9)

    def test_centered_has_zero_mean(self):
        full, phi = bernoulli()
        psi = centered(symbol_table(full, [1.0, 0.0]), phi, n=8)
        self.assertAlmostEqual(equilibrium_mean(psi, phi, n=8), 0.0, delta=1e-12)


class TestPotentialCodec(unittest.TestCase):

    def test_linear_combination(self):
        full = SubshiftSpec.full_shift(2)
        phi = linear([(2.0, symbol_table(full, [1.0, 0.0])), (-1.0, Constant(0.5))])
        sweep = subshift_sweep(full, 3)
        sums = phi.orbit_sums(sweep)
        expected = [2.0 * w.count(1) - 0.5 * len(w) for w in sweep.orbit_objects()]
        np.testing.assert_allclose(sums, expected)

    def test_cylinder_from_spec(self):
        phi = potential_from_spec({"type": "cylinder", "spec": {"n": 2, "A": [[1, 1], [1, 1]]},
                                   "depth": 1, "values": [0.1, 0.2]})
        self.assertEqual(phi.values, (0.1, 0.2))

    def test_wrong_table_size(self):
        with self.assertRaises(SpecFormatError):
            symbol_table(SubshiftSpec.full_shift(3), [0.0, 1.0])

    def test_unknown_potential(self):
        with self.assertRaises(SpecFormatError):
            potential_from_spec({"type": "harmonic"})


class CylinderPotentials:

    @staticmethod
    def random(spec: SubshiftSpec, seed: int, depth: int = 2):
        from src.symbolic.subshift import count_admissible
        from src.thermo.potentials import CylinderTable

        rng = np.random.default_rng(seed)
        values = rng.uniform(-0.3, 0.3, count_admissible(spec, depth))
        return CylinderTable(spec=spec, depth=depth, values=tuple(values))


if __name__ == '__main__':
    unittest.main()
