import math
import unittest

import numpy as np

from src.maps.cycles import cycles, make_cycle, periodic_cycles_up_to
from src.maps.quasi_blaschke import (
    CertificationStatus, QBPoint, TangentVector, certify_component, involution, is_blaschke_point, qb,
    symmetrization, tangent_decompose,
)
from src.maps.rational_map import (
    RationalMap, blaschke, critical_points, fixed_points, is_infinite, map_from_spec, polynomial,
)
from src.maps.roots import aberth_ehrlich
from src.utils.exceptions import DegenerateMapError, MapError, NotBlaschkeError, SpecFormatError


def square():
    return polynomial([0, 0, 1])


class TestRationalMap(unittest.TestCase):

    def test_fixed_points_of_square(self):
        points = fixed_points(square())
        finite = sorted((fp.point for fp in points if not fp.at_infinity), key=lambda z: z.real)
        self.assertEqual(len(points), 3)
        self.assertEqual(sum(fp.at_infinity for fp in points), 1)
        self.assertAlmostEqual(abs(finite[0]), 0.0, delta=1e-12)
        self.assertAlmostEqual(abs(finite[1] - 1.0), 0.0, delta=1e-12)
        multipliers = {round(fp.multiplier.real, 9) for fp in points}
        self.assertEqual(multipliers, {0.0, 2.0})

    def test_critical_points_of_square(self):
        points = critical_points(square())
        self.assertEqual(len(points), 2)
        self.assertEqual(sum(is_infinite(z) for z in points), 1)
        finite = [z for z in points if not is_infinite(z)]
        self.assertAlmostEqual(abs(finite[0]), 0.0, delta=1e-12)

    def test_linear_map_is_degenerate(self):
        with self.assertRaises(DegenerateMapError):
            polynomial([0, 1])

    def test_common_factor_is_degenerate(self):
        # z(z − 1)/(z − 1)
        with self.assertRaises(DegenerateMapError):
            RationalMap(p=(0, -1, 1), q=(-1, 1))

    def test_blaschke_zero_outside_disk(self):
        with self.assertRaises(MapError):
            blaschke([1.2])

    def test_blaschke_keeps_circle(self):
        f = blaschke([0.3 + 0.2j, -0.4j])
        z = np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 17))
        np.testing.assert_allclose(np.abs(f(z)), 1.0, atol=1e-13)

    def test_blaschke_multiplier_at_one(self):
        self.assertAlmostEqual(blaschke([0.5]).multiplier_at(1.0), 4.0, delta=1e-12)

    def test_iterate_chain_rule(self):
        f = polynomial([0.1, 0, 1])
        value, slope = f.iterate(np.array([0.3 + 0.4j]), 3)
        z, expected = 0.3 + 0.4j, 1.0
        for _ in range(3):
            expected *= 2.0 * z
            z = z * z + 0.1
        self.assertAlmostEqual(value[0], z, delta=1e-13)
        self.assertAlmostEqual(slope[0], expected, delta=1e-12)

    def test_spec_codec(self):
        f = map_from_spec({"type": "poly", "coeffs": [[0.05, 0], 0, 1]})
        self.assertAlmostEqual(f.evaluate(0.0), 0.05)
        self.assertAlmostEqual(f(1.0), 1.05)
        self.assertEqual(map_from_spec(f.to_spec()).p, f.p)

    def test_unknown_map_type(self):
        with self.assertRaises(SpecFormatError):
            map_from_spec({"type": "mobius"})

    def test_bad_complex_literal(self):
        with self.assertRaises(SpecFormatError):
            map_from_spec({"type": "blaschke", "a": [[0.1, 0.2, 0.3]]})


class TestRoots(unittest.TestCase):

    def test_roots_of_unity(self):
        roots = aberth_ehrlich([-1, 0, 0, 0, 0, 1], seed=0)
        self.assertEqual(len(roots), 5)
        np.testing.assert_allclose(np.abs(np.asarray(roots) ** 5 - 1.0), 0.0, atol=1e-12)

    def test_companion_fallback(self):
        with self.assertLogs("Roots", level="WARNING"):
            roots = aberth_ehrlich([6, -7, 0, 1], max_iter=1, restarts=0)
        # z³ − 7z + 6 = (z − 1)(z − 2)(z + 3)
        np.testing.assert_allclose(roots, [-3.0, 1.0, 2.0], atol=1e-10)


class TestCycles(unittest.TestCase):

    def test_square_period_three(self):
        found = cycles(square(), 3, domain="circle")
        self.assertEqual(len(found), 3)
        self.assertEqual(sum(c.period for c in found), 7)
        for c in found:
            self.assertLess(c.residual(square()), 1e-12)
            self.assertAlmostEqual(abs(c.multiplier), 2.0 ** c.period, delta=1e-9)

    def test_exact_period(self):
        found = cycles(square(), 4, domain="circle", exact=True)
        self.assertTrue(all(c.period == 4 for c in found))
        self.assertEqual(len(found), 3)

    def test_plane_cycles_of_quadratic(self):
        f = polynomial([-0.2, 0, 1])
        found = cycles(f, 2, domain="plane", exact=True)
        self.assertEqual(len(found), 1)
        self.assertAlmostEqual(found[0].multiplier, 4.0 * (1.0 - 0.2), delta=1e-10)

    def test_primitive_cycles_up_to(self):
        found = periodic_cycles_up_to(blaschke([0.3]), 5)
        counts = [sum(1 for c in found if c.period == p) for p in range(1, 6)]
        # z = 0 притягивающая, на окружности 2^n − 1 точек периода n
        self.assertEqual(counts, [1, 1, 2, 3, 6])
        self.assertTrue(all(c.repelling for c in found))

    def test_make_cycle_is_canonical(self):
        f = square()
        w = np.exp(2j * math.pi / 3)
        first = make_cycle(f, [w, w * w])
        second = make_cycle(f, [w * w, w])
        self.assertEqual(first.key, second.key)
        self.assertAlmostEqual(first.multiplier, 4.0, delta=1e-12)


class TestQuasiBlaschke(unittest.TestCase):

    def test_normal_form(self):
        f = qb(QBPoint(a=(0.5,), b=(0.5,)))
        self.assertAlmostEqual(f(1.0), 1.0, delta=1e-14)
        self.assertAlmostEqual(f(0.0), 0.0, delta=1e-14)
        self.assertAlmostEqual(f.multiplier_at(1.0), 4.0 / 3.0, delta=1e-12)
        self.assertIsNotNone(f.circle)

    def test_involution_is_an_involution(self):
        point = QBPoint(a=(0.3 + 0.1j, -0.2j), b=(0.2, 0.1 + 0.4j))
        self.assertEqual(involution(involution(point)), point)

    def test_involution_conjugates_map(self):
        point = QBPoint(a=(0.3 + 0.1j,), b=(0.2,))
        f, g = qb(point), qb(involution(point))
        z = np.array([0.4 + 0.7j, -1.3 + 0.2j, 2.0 - 0.5j])
        sigma = lambda w: 1.0 / np.conj(w)
        np.testing.assert_allclose(g(z), sigma(f(sigma(z))), rtol=1e-12)

    def test_blaschke_locus(self):
        on, permutation = is_blaschke_point(QBPoint(a=(0.2, 0.3j), b=(-0.3j, 0.2)))
        self.assertTrue(on)
        self.assertEqual(permutation, (1, 0))
        off, _ = is_blaschke_point(QBPoint(a=(0.3 + 0.1j,), b=(0.2,)))
        self.assertFalse(off)

    def test_symmetrization_lands_on_locus(self):
        point = symmetrization(QBPoint(a=(0.3 + 0.1j,), b=(0.2,)))
        self.assertTrue(is_blaschke_point(point)[0])

    def test_tangent_decomposition(self):
        point = QBPoint(a=(0.2, -0.3 + 0.1j), b=(0.2, -0.3 - 0.1j))
        rng = np.random.default_rng(0)
        for _ in range(100):
            v = TangentVector.from_array(rng.standard_normal(8).view(complex))
            w1, w2 = tangent_decompose(point, v)
            np.testing.assert_allclose((w1 + w2.j()).as_array(), v.as_array(), atol=1e-14)
            np.testing.assert_allclose(np.asarray(w1.db), np.conj(w1.da), atol=1e-14)
            np.testing.assert_allclose(np.asarray(w2.db), np.conj(w2.da), atol=1e-14)

    def test_j_direction_has_no_tangent_part(self):
        point = QBPoint(a=(0.5,), b=(0.5,))
        w1, w2 = tangent_decompose(point, TangentVector(da=(1j,), db=(1j,)))
        self.assertLess(w1.norm(), 1e-15)
        self.assertAlmostEqual(w2.da[0], 1.0)

    def test_decomposition_off_locus(self):
        with self.assertRaises(NotBlaschkeError):
            tangent_decompose(QBPoint(a=(0.3 + 0.1j,), b=(0.2,)), TangentVector(da=(1,), db=(1,)))

    def test_mismatched_lengths(self):
        with self.assertRaises(MapError):
            QBPoint(a=(0.1, 0.2), b=(0.1,))


class TestCertification(unittest.TestCase):

    def test_certified_near_blaschke(self):
        certificate = certify_component(QBPoint(a=(0.5,), b=(0.5,)))
        self.assertEqual(certificate.status, CertificationStatus.CERTIFIED)
        self.assertTrue(certificate.point.validated)
        self.assertEqual(certificate.basin_counts, (1, 1))

    def test_repelling_zero_is_rejected(self):
        certificate = certify_component(QBPoint(a=(2.0,), b=(2.0,)))
        self.assertEqual(certificate.status, CertificationStatus.REJECTED)

    def test_off_locus_point(self):
        certificate = certify_component(QBPoint(a=(0.3 + 0.1j,), b=(0.2,)))
        self.assertEqual(certificate.status, CertificationStatus.CERTIFIED)


if __name__ == '__main__':
    unittest.main()
