from src.thermo.potentials import (
    Constant, CylinderTable, Geometric, Linear, PathDerivative, Potential,
    birkhoff_sum, coboundary, linear, potential_from_spec, symbol_table,
)
from src.thermo.pressure import (
    EquilibriumStats, equilibrium_mean, level_entropy, level_moments, mean_from_sums, normalized, pressure,
    pressure_matrix, pressure_sequence, pressure_value, stats_from_sums, zeta_mean, zeta_pressure,
)
from src.thermo.sweep import OrbitSweep, build_sweep, map_sweep, subshift_sweep, sweep_from_cycles, trace_power_for
from src.thermo.variance import (
    VarianceEstimate, centered, cohomology_defect, covariance, pressure_form_potentials,
    pressure_norm_sq, variance, variance_estimate, variance_from_sums,
)

__all__ = [
    "Constant", "CylinderTable", "Geometric", "Linear", "PathDerivative", "Potential",
    "birkhoff_sum", "coboundary", "linear", "potential_from_spec", "symbol_table",
    "EquilibriumStats", "equilibrium_mean", "level_entropy", "level_moments", "mean_from_sums", "normalized",
    "pressure", "pressure_matrix", "pressure_sequence", "pressure_value", "stats_from_sums", "zeta_mean",
    "zeta_pressure",
    "OrbitSweep", "build_sweep", "map_sweep", "subshift_sweep", "sweep_from_cycles", "trace_power_for",
    "VarianceEstimate", "centered", "cohomology_defect", "covariance", "pressure_form_potentials",
    "pressure_norm_sq", "variance", "variance_estimate", "variance_from_sums",
]
