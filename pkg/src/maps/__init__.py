from src.maps.cycles import Cycle, cycles, make_cycle, periodic_cycles_up_to
from src.maps.quasi_blaschke import (
    CertificationStatus, ComponentCertificate, QBPoint, TangentVector, certify_component,
    involution, is_blaschke_point, qb, qb_point_from_spec, symmetrization, tangent_decompose,
)
from src.maps.rational_map import (
    INFINITY, CircleForm, FixedPoint, RationalMap, blaschke, critical_points, fixed_points,
    is_infinite, map_from_spec, polynomial,
)
from src.maps.roots import aberth_ehrlich

__all__ = [
    "Cycle", "cycles", "make_cycle", "periodic_cycles_up_to",
    "CertificationStatus", "ComponentCertificate", "QBPoint", "TangentVector", "certify_component",
    "involution", "is_blaschke_point", "qb", "qb_point_from_spec", "symmetrization", "tangent_decompose",
    "INFINITY", "CircleForm", "FixedPoint", "RationalMap", "blaschke", "critical_points", "fixed_points",
    "is_infinite", "map_from_spec", "polynomial", "aberth_ehrlich",
]
