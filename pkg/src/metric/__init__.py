from src.metric.dimension import (
    DimensionResult, dimension_convergence, equilibrium_lyapunov, hausdorff_dimension, log_slopes, solve_bowen,
)
from src.metric.family import TrackedSweep, base_sweep, track_sweep
from src.metric.lyapunov import LyapunovValue, g_function, lyapunov, lyapunov_value, path_between
from src.metric.seminorm import (
    DegeneracyScan, GSeminormResult, PathDerivativeData, ScanVerdict, SeminormResult, classify,
    degeneracy_scan, g_seminorm_sq, path_derivative_data, pressure_form, pressure_seminorm,
)
from src.metric.theorem import (
    CheckResult, CheckStatus, DirectionResult, TheoremReport, sample_directions, theorem_main_check,
)

__all__ = [
    "DimensionResult", "dimension_convergence", "equilibrium_lyapunov", "hausdorff_dimension", "log_slopes",
    "solve_bowen",
    "TrackedSweep", "base_sweep", "track_sweep",
    "LyapunovValue", "g_function", "lyapunov", "lyapunov_value", "path_between",
    "DegeneracyScan", "GSeminormResult", "PathDerivativeData", "ScanVerdict", "SeminormResult", "classify",
    "degeneracy_scan", "g_seminorm_sq", "path_derivative_data", "pressure_form", "pressure_seminorm",
    "CheckResult", "CheckStatus", "DirectionResult", "TheoremReport", "sample_directions", "theorem_main_check",
]
