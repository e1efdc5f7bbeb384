import math
import unittest

import numpy as np

from src.continuation.marking import marking_classes, transport_marking
from src.continuation.paths import (
    ConstantPath, MapSegmentPath, ScaledPath, SegmentPath, TangentPath, path_from_spec,
)
from src.continuation.tracking import dlog_multiplier, richardson_central, track_cycle, track_cycles
from src.maps.cycles import cycles
from src.maps.quasi_blaschke import QBPoint, TangentVector, qb, symmetrization
from src.maps.rational_map import blaschke, polynomial
from src.utils.exceptions import ContinuationError, SpecFormatError, TrackingError


def fixed_point_one(f):
    return next(c for c in cycles(f, 1, domain="circle") if abs(c.points[0] - 1.0) < 1e-9)


class TestPaths(unittest.TestCase):

    def test_tangent_path_moves_point(self):
        point = QBPoint(a=(0.5,), b=(0.5,))
        path = TangentPath(point, TangentVector(da=(1,), db=(1,)))
        self.assertEqual(path.point_at(0.0), point)
        self.assertAlmostEqual(path.point_at(1e-3).a[0], 0.501, delta=1e-15)

    def test_map_segment_interpolates_coefficients(self):
        path = MapSegmentPath(polynomial([0, 0, 1]), polynomial([-1, 0, 1]))
        self.assertAlmostEqual(path.map_at(0.25)(0.0), -0.25, delta=1e-15)

    def test_scaled_path(self):
        point = QBPoint(a=(0.5,), b=(0.5,))
        base = TangentPath(point, TangentVector(da=(1,), db=(1,)))
        scaled = ScaledPath(base, 2.0)
        self.assertEqual(scaled.point_at(1e-4), base.point_at(2e-4))

    def test_constant_path(self):
        path = ConstantPath(polynomial([0, 0, 1]))
        self.assertTrue(path.is_constant)

    def test_path_from_spec(self):
        path = path_from_spec({"type": "tangent", "at": {"a": [0.5], "b": [0.5]},
                               "dir": {"da": [1], "db": [1]}})
        self.assertIsInstance(path, TangentPath)

    def test_unknown_path(self):
        with self.assertRaises(SpecFormatError):
            path_from_spec({"type": "spiral"})


class TestTracking(unittest.TestCase):

    def test_richardson_is_exact_for_cubics(self):
        h = 1e-2
        values = {t: t ** 3 + 2.0 * t for t in (-h, -h / 2, h / 2, h)}
        self.assertAlmostEqual(richardson_central(values, h), 2.0, delta=1e-12)

    def test_quasi_blaschke_tangent(self):
        point = QBPoint(a=(0.5,), b=(0.5,))
        f = qb(point)
        path = TangentPath(point, TangentVector(da=(1,), db=(1,)))
        # λ(1) = 2/(1 + a) при a = b
        self.assertAlmostEqual(dlog_multiplier(path, fixed_point_one(f)).real, -2.0 / 3.0, delta=1e-6)

    def test_blaschke_segment(self):
        start = blaschke([0.5])
        path = MapSegmentPath(start, blaschke([0.6]), t_range=(-1.0, 1.0))
        # λ(1) = 2/(1 − a), a(t) = 0.5 + 0.1t
        self.assertAlmostEqual(dlog_multiplier(path, fixed_point_one(start)).real, 0.2, delta=1e-6)

    def test_constant_path_has_zero_derivative(self):
        f = polynomial([0, 0, 1])
        self.assertEqual(dlog_multiplier(ConstantPath(f), fixed_point_one(f)), 0j)

    def test_tracking_stops_when_cycle_stops_repelling(self):
        path = MapSegmentPath(polynomial([0, 0, 1]), polynomial([-1, 0, 1]))
        two_cycle = cycles(polynomial([0, 0, 1]), 2, domain="circle", exact=True)[0]
        with self.assertRaises(TrackingError) as ctx:
            track_cycle(path, two_cycle, grid=np.linspace(0.0, 1.0, 11))
        # λ = 4(1 − t) достигает 1 при t = 3/4
        self.assertLess(ctx.exception.last_t, 0.8 + 1e-12)
        self.assertGreater(ctx.exception.last_t, 0.5)

    def test_bundle_reports_partial_failure(self):
        f = polynomial([0, 0, 1])
        path = MapSegmentPath(f, polynomial([-1, 0, 1]))
        found = [fixed_point_one(f), cycles(f, 2, domain="circle", exact=True)[0]]
        bundle = track_cycles(path, found, grid=np.linspace(0.0, 1.0, 11))
        self.assertEqual(list(bundle.failures), [1])
        self.assertAlmostEqual(bundle.tracked_fraction, 0.5)
        track = bundle.tracks[0]
        # β(c) = (1 + √(1 − 4c))/2, λ = 2β
        self.assertAlmostEqual(track.multiplier_at(1.0), 1.0 + math.sqrt(5.0), delta=1e-9)

    def test_tracked_cycles_solve_endpoint_map(self):
        point = QBPoint(a=(0.3 + 0.1j,), b=(0.2,))
        path = SegmentPath(symmetrization(point), point)
        start = qb(symmetrization(point))
        three = cycles(start, 3, domain="circle", exact=True)
        bundle = track_cycles(path, three, grid=np.linspace(0.0, 1.0, 9))
        self.assertEqual(bundle.failures, {})
        end = qb(point)
        for track in bundle.tracks:
            cycle = track.cycle_at(1.0, end)
            self.assertLess(cycle.residual(end), 1e-10)
            self.assertAlmostEqual(cycle.multiplier, track.multiplier_at(1.0), delta=1e-9)


class TestMarking(unittest.TestCase):

    def test_marking_class_count(self):
        for d in (2, 3, 4):
            expected = math.factorial(d + 1) // (2 * (d - 1))
            self.assertEqual(len(marking_classes(d)), expected)

    def test_marking_at_blaschke_point(self):
        label = transport_marking(QBPoint(a=(0.2, -0.3), b=(0.2, -0.3)))
        self.assertEqual(label.class_key, (0, 1, (2, 3)))
        angle = label.endpoint_arguments[0]
        self.assertLess(min(angle, 2.0 * math.pi - angle), 1e-9)
        self.assertIn(label.class_index, range(len(marking_classes(3))))

    def test_marking_is_transported(self):
        near = QBPoint(a=(0.2, -0.3), b=(0.25, -0.3 + 0.05j))
        label = transport_marking(near)
        self.assertEqual(label.class_key, transport_marking(symmetrization(near)).class_key)
        self.assertEqual(len(label.cyclic_order), 2)

    def test_user_marking_must_list_every_fixed_point(self):
        with self.assertRaises(ContinuationError):
            transport_marking(QBPoint(a=(0.5,), b=(0.5,)), marking=[0.0, 1.0])


if __name__ == '__main__':
    unittest.main()
