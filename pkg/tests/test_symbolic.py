import unittest

from src.symbolic.subshift import (
    SubshiftSpec, canonical_rotation, count_admissible, count_periodic, enumerate_cylinders,
    enumerate_periodic_words, is_aperiodic, minimal_period, primitive_orbits,
)
from src.utils.exceptions import MalformedSubshiftError, ResourceCapError, SpecFormatError


class TestSubshiftSpec(unittest.TestCase):

    def test_rejects_non_binary_matrix(self):
        with self.assertRaises(MalformedSubshiftError):
            SubshiftSpec.from_matrix([[1, 2], [1, 1]])

    def test_rejects_zero_row(self):
        with self.assertRaises(MalformedSubshiftError):
            SubshiftSpec.from_matrix([[0, 0], [1, 1]])

    def test_from_dict_requires_matrix(self):
        with self.assertRaises(SpecFormatError):
            SubshiftSpec.from_dict({"n": 2})

    def test_from_dict_checks_size(self):
        with self.assertRaises(SpecFormatError):
            SubshiftSpec.from_dict({"n": 3, "A": [[1, 1], [1, 0]]})

    def test_dict_codec(self):
        spec = SubshiftSpec.golden_mean()
        self.assertEqual(SubshiftSpec.from_dict(spec.to_dict()), spec)

    def test_admissible_words(self):
        spec = SubshiftSpec.golden_mean()
        self.assertTrue(spec.is_admissible((1, 2, 1, 1)))
        self.assertFalse(spec.is_admissible((1, 2, 2)))
        self.assertFalse(spec.is_admissible((3,)))

    def test_aperiodicity(self):
        self.assertEqual(is_aperiodic(SubshiftSpec.golden_mean()), (True, 2))
        flip = SubshiftSpec.from_matrix([[0, 1], [1, 0]])
        self.assertEqual(is_aperiodic(flip), (False, None))


class TestCounting(unittest.TestCase):

    def test_full_shift_counts(self):
        spec = SubshiftSpec.full_shift(3)
        self.assertEqual(count_admissible(spec, 4), 81)
        self.assertEqual(count_periodic(spec, 5), 243)

    def test_golden_mean_periodic_counts_are_lucas_numbers(self):
        spec = SubshiftSpec.golden_mean()
        self.assertEqual([count_periodic(spec, n) for n in range(1, 8)], [1, 3, 4, 7, 11, 18, 29])

    def test_cylinders_are_lexicographic(self):
        words = enumerate_cylinders(SubshiftSpec.golden_mean(), 3)
        self.assertEqual(words, [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 1, 2)])

    def test_cylinder_cap(self):
        with self.assertRaises(ResourceCapError) as ctx:
            enumerate_cylinders(SubshiftSpec.full_shift(2), 5, cap=10)
        self.assertEqual(ctx.exception.count, 32)
        self.assertEqual(ctx.exception.cap, 10)

    def test_periodic_words_match_trace(self):
        spec = SubshiftSpec.golden_mean()
        for n in range(1, 9):
            self.assertEqual(len(enumerate_periodic_words(spec, n)), count_periodic(spec, n))

    def test_exact_period_words(self):
        words = enumerate_periodic_words(SubshiftSpec.full_shift(2), 4, exact=True)
        self.assertEqual(len(words), 12)
        self.assertTrue(all(minimal_period(w) == 4 for w in words))


class TestOrbits(unittest.TestCase):

    def test_canonical_rotation(self):
        self.assertEqual(canonical_rotation((2, 1, 1)), (1, 1, 2))
        self.assertEqual(canonical_rotation((1, 2, 1, 2)), (1, 2, 1, 2))

    def test_minimal_period(self):
        self.assertEqual(minimal_period((1, 2, 1, 2)), 2)
        self.assertEqual(minimal_period((1, 1, 2)), 3)

    def test_primitive_orbit_counts(self):
        full = SubshiftSpec.full_shift(2)
        # (1/p)·Σ μ(p/q)·2^q
        self.assertEqual([len(primitive_orbits(full, p)) for p in range(1, 7)], [2, 1, 2, 3, 6, 9])
        golden = SubshiftSpec.golden_mean()
        self.assertEqual([len(primitive_orbits(golden, p)) for p in range(1, 7)], [1, 1, 1, 1, 2, 2])

    def test_primitive_orbits_are_canonical(self):
        for word in primitive_orbits(SubshiftSpec.full_shift(3), 4):
            self.assertEqual(canonical_rotation(word), word)
            self.assertEqual(minimal_period(word), 4)


if __name__ == '__main__':
    unittest.main()
