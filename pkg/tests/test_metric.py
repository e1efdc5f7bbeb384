import math
import unittest

import numpy as np

from src.continuation.paths import ScaledPath, TangentPath
from src.maps.quasi_blaschke import QBPoint, TangentVector, qb
from src.maps.rational_map import blaschke, polynomial
from src.metric.dimension import dimension_convergence, hausdorff_dimension, solve_bowen
from src.metric.lyapunov import lyapunov_value
from src.metric.seminorm import (
    ScanVerdict, classify, degeneracy_scan, g_seminorm_sq, pressure_form, pressure_seminorm,
)
from src.metric.theorem import CheckStatus, sample_directions, theorem_main_check
from src.thermo.sweep import map_sweep
from src.utils.exceptions import BracketError, MapError

BLASCHKE_POINT = QBPoint(a=(0.5,), b=(0.5,))
GENERIC_POINT = QBPoint(a=(0.3 + 0.1j,), b=(0.2,))


def tangent(da, db, point=BLASCHKE_POINT):
    return TangentPath(point, TangentVector(da=(da,), db=(db,)))


def quadratic_dimension(c):
    return 1.0 + c * c / (4.0 * math.log(2.0))


class TestDimension(unittest.TestCase):

    def test_square(self):
        self.assertAlmostEqual(hausdorff_dimension(polynomial([0, 0, 1]), n=10).delta, 1.0, delta=1e-8)

    def test_cube(self):
        self.assertAlmostEqual(hausdorff_dimension(polynomial([0, 0, 0, 1]), n=6).delta, 1.0, delta=1e-8)

    def test_blaschke_product(self):
        self.assertAlmostEqual(hausdorff_dimension(blaschke([0.3]), n=10).delta, 1.0, delta=1e-6)

    def test_quasi_blaschke_on_locus(self):
        self.assertAlmostEqual(hausdorff_dimension(qb(BLASCHKE_POINT), n=8).delta, 1.0, delta=1e-4)

    def test_small_quadratic_perturbation(self):
        c = 0.05
        result = hausdorff_dimension(polynomial([c, 0, 1]), n=10)
        self.assertAlmostEqual(result.delta, quadratic_dimension(c), delta=5e-4)
        self.assertLess(result.residual, 1e-10)

    def test_quadratic_perturbation(self):
        c = 0.1
        result = hausdorff_dimension(polynomial([c, 0, 1]), n=10)
        self.assertAlmostEqual(result.delta, quadratic_dimension(c), delta=1e-3)
        self.assertGreater(result.delta, 1.0)

    def test_convergence_table(self):
        rows = dimension_convergence(polynomial([0.05, 0, 1]), [6, 8, 10])
        self.assertEqual([r["period"] for r in rows], [6, 8, 10])
        self.assertAlmostEqual(rows[-1]["delta"], quadratic_dimension(0.05), delta=5e-4)
        self.assertLess(abs(rows[-1]["delta"] - rows[-2]["delta"]), 1e-3)
        self.assertTrue(all(r["delta"] > 1.0 for r in rows))

    def test_bracket_without_root(self):
        sweep = map_sweep(polynomial([0, 0, 1]), 4)
        with self.assertRaises(BracketError):
            solve_bowen(sweep, 3, "zeta", bracket=(1.5, 2.5))


class TestTraceWeights(unittest.TestCase):

    def test_circle_sweep_uses_one_dimensional_weight(self):
        sweep = map_sweep(qb(BLASCHKE_POINT), 3)
        self.assertEqual(sweep.trace_power, 1)
        idx, r = sweep.level(1)
        # неподвижная точка z = 1 с мультипликатором 4/3
        self.assertEqual(len(idx), 1)
        self.assertAlmostEqual(sweep.multipliers[idx[0]].real, 4.0 / 3.0, delta=1e-10)
        self.assertAlmostEqual(float(np.exp(sweep.log_trace_weights(idx, r))[0]), 4.0, delta=1e-8)

    def test_plane_sweep_of_polynomial_uses_squared_weight(self):
        self.assertEqual(map_sweep(polynomial([0.05, 0, 1]), 3).trace_power, 2)

    def test_quasi_blaschke_sweep_off_locus(self):
        self.assertEqual(map_sweep(qb(GENERIC_POINT), 3).trace_power, 1)


class TestDegeneracyScan(unittest.TestCase):

    def test_classify(self):
        self.assertEqual(classify(1e-5), ScanVerdict.DEGENERATE)
        self.assertEqual(classify(5e-4), ScanVerdict.INCONCLUSIVE)
        self.assertEqual(classify(1e-2), ScanVerdict.NONDEGENERATE)

    def test_blaschke_direction(self):
        scan = degeneracy_scan(tangent(1, 1), max_period=8)
        self.assertEqual(scan.verdict, ScanVerdict.NONDEGENERATE)
        # δ ≡ 1 на локусе, поэтому запись равна d/dt log|λ| = −1/(1 + a)
        self.assertAlmostEqual(scan.entry_for(1)[0], -2.0 / 3.0, delta=1e-4)
        self.assertLess(abs(scan.ddelta), 1e-4)

    def test_j_direction(self):
        scan = degeneracy_scan(tangent(1j, 1j), max_period=8)
        self.assertEqual(scan.verdict, ScanVerdict.DEGENERATE)
        self.assertLess(scan.max_entry, 1e-4)

    def test_dimension_is_minimal_on_locus(self):
        for v in sample_directions(BLASCHKE_POINT, 4):
            path = TangentPath(BLASCHKE_POINT, v)
            scan = degeneracy_scan(path, max_period=8)
            self.assertLess(abs(scan.ddelta), 1e-4)
            self.assertGreater(scan.delta, 1.0 - 1e-4)


class TestSeminorm(unittest.TestCase):

    def test_tangent_direction_is_positive(self):
        result = pressure_seminorm(tangent(1, 1), n=8)
        self.assertGreater(result.value, 1e-3)
        self.assertAlmostEqual(result.delta, 1.0, delta=1e-4)
        self.assertAlmostEqual(result.lyapunov * result.delta, result.denominator, delta=1e-12)

    def test_j_direction_vanishes(self):
        self.assertLess(pressure_seminorm(tangent(1j, 1j), n=8).value, 1e-5)

    def test_scaling(self):
        path = tangent(1, 1)
        value = pressure_seminorm(path, n=6).value
        scaled = pressure_seminorm(ScaledPath(path, 0.5), n=6).value
        self.assertAlmostEqual(scaled, 0.25 * value, delta=1e-3 * value)

    def test_form_is_consistent_with_seminorm(self):
        path = tangent(1, 1)
        self.assertAlmostEqual(pressure_form(path, path, n=5), pressure_seminorm(path, n=5).value, delta=1e-9)

    def test_form_needs_common_base(self):
        with self.assertRaises(MapError):
            pressure_form(tangent(1, 1), tangent(1, 1, GENERIC_POINT), n=4)

    def test_g_hessian_matches_seminorm(self):
        result = g_seminorm_sq(tangent(1, 1), n=6)
        self.assertGreater(result.value, 0.0)
        self.assertAlmostEqual(result.ratio, 1.0, delta=2e-2)


class TestLyapunov(unittest.TestCase):

    def test_g_function_is_minimal_at_base(self):
        f = qb(BLASCHKE_POINT)
        n = 8
        base = map_sweep(f, n + 1)
        at_base = lyapunov_value(f, n, base=base)
        self.assertAlmostEqual(at_base.base_delta, 1.0, delta=1e-4)
        rng = np.random.default_rng(1)
        for _ in range(20):
            raw = rng.standard_normal(4).view(complex)
            v = TangentVector.from_array(1e-2 * raw / np.linalg.norm(raw))
            g = qb(BLASCHKE_POINT.moved(v, 1.0))
            value = lyapunov_value(f, n, g=g, base=base)
            self.assertGreaterEqual(value.g_value, at_base.g_value - 1e-9)


class TestTheoremCheck(unittest.TestCase):

    def test_generic_point(self):
        report = theorem_main_check(GENERIC_POINT, max_period=8)
        self.assertFalse(report.blaschke)
        self.assertTrue(all(d.scan.verdict == ScanVerdict.NONDEGENERATE for d in report.directions))
        self.assertNotEqual(report.status, CheckStatus.FAIL)
        check = next(c for c in report.checks if c.name == "dimension_above_one")
        self.assertNotEqual(check.status, CheckStatus.FAIL)
        gap = abs(report.dimension.delta - report.dimension_previous.delta)
        if check.status == CheckStatus.PASS:
            self.assertGreater(report.dimension.delta - gap, 1.0 + 1e-5)

    def test_blaschke_point(self):
        report = theorem_main_check(BLASCHKE_POINT, max_period=5)
        self.assertTrue(report.blaschke)
        for result in report.directions:
            if result.is_j_direction:
                self.assertEqual(result.scan.verdict, ScanVerdict.DEGENERATE)
            else:
                self.assertEqual(result.scan.verdict, ScanVerdict.NONDEGENERATE)
        self.assertEqual(report.status, CheckStatus.PASS)

    def test_rejected_point(self):
        with self.assertRaises(MapError):
            theorem_main_check(QBPoint(a=(2.0,), b=(2.0,)), max_period=3)

    def test_zero_direction_is_excluded(self):
        report = theorem_main_check(BLASCHKE_POINT, directions=[TangentVector(da=(0,), db=(0,))], max_period=3)
        self.assertEqual(len(report.excluded), 1)
        self.assertEqual(report.directions, [])


if __name__ == '__main__':
    unittest.main()
