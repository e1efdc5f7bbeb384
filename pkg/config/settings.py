# config/settings.py
"""
Численные значения по умолчанию для всех модулей pressurelab.
Любое значение можно переопределить JSON-конфигурацией или флагом командной строки.
"""

# Символическая динамика
CYLINDER_CAP = 10_000_000

# Давление и дисперсия
POWER_ITERATION_RTOL = 1e-12
POWER_ITERATION_MAX_ITER = 10_000
PRESSURE_CONVERGENCE_TOL = 1e-6
VARIATIONAL_TOL = 1e-9
ZETA_RATIO_GUARD = 0.5
VARIANCE_FD_STEP = 1e-3
VARIANCE_DISAGREEMENT_RTOL = 1e-2
VARIANCE_DISAGREEMENT_ATOL = 1e-5
DEFAULT_ESTIMATOR = "zeta"

# Отображения
BLASCHKE_TOL = 1e-9
NEWTON_TOL = 1e-12
CYCLE_RESIDUAL_TOL = 1e-10
POINT_SEPARATION_TOL = 1e-8
MULTIPLICITY_TOL = 1e-8
ABERTH_MAX_ITER = 500
CERTIFY_BUDGET = 200
CERTIFY_CONTRACTION = 0.9

# Продолжение
CONTINUATION_H = 1e-4
CONTINUATION_MIN_H = 1e-6
REPELLING_MARGIN = 1e-3
TRACK_GRID = 8
TRACK_MAX_NEWTON = 8
TRACK_MIN_STEP = 1e-9
COLLISION_TOL = 1e-6

# Метрика
DIMENSION_BRACKET = (0.5, 2.5)
DIMENSION_RESIDUAL = 1e-12
DIMENSION_MAX_NEWTON = 50
DEFAULT_PERIOD = 12
DEFAULT_SCAN_PERIOD = 8
TOL_DEG = 1e-4
DEG_HYSTERESIS = 10.0
TRACKED_FRACTION = 0.9
SEMINORM_TOL = 1e-5
DIRECTION_COUNT = 8
NONREAL_TOL = 1e-8
DIMENSION_EXCESS = 1e-5

# Командная строка
DEFAULT_SEED = 0
DEFAULT_DEPTH = 1
DEFAULT_T_MAX = 1e-3
