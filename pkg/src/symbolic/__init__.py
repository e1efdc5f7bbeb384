from src.symbolic.subshift import (
    SubshiftSpec, Word, canonical_rotation, count_admissible, count_periodic,
    cylinder_array, enumerate_cylinders, enumerate_periodic_words, is_aperiodic,
    minimal_period, periodic_array, primitive_orbit_array, primitive_orbits,
)

__all__ = [
    "SubshiftSpec", "Word", "canonical_rotation", "count_admissible", "count_periodic",
    "cylinder_array", "enumerate_cylinders", "enumerate_periodic_words", "is_aperiodic",
    "minimal_period", "periodic_array", "primitive_orbit_array", "primitive_orbits",
]
