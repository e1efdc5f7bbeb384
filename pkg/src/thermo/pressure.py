# src/thermo/pressure.py
"""
Давление P(φ), равновесные средние и энтропия.

Оценки:
    "orbit" - отношение статсумм log(Z_{n+1}/Z_n);
    "zeta"  - наименьший положительный нуль усеченного детерминанта
              det(1 − zL) = Σ c_j z^j, восстановленного по следам Z_m;
    "matrix" - ведущее собственное число матрицы переходов между цилиндрами.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import sparse
from scipy.special import entr

from config import settings
from src.maps.rational_map import RationalMap
from src.symbolic.subshift import SubshiftSpec, cylinder_array
from src.thermo.potentials import Constant, CylinderTable, Potential, linear
from src.thermo.sweep import OrbitSweep, build_sweep
from src.utils.exceptions import ConvergenceError, ThermoError

logger = logging.getLogger("Pressure")

ESTIMATORS = ("orbit", "zeta")


@dataclass(frozen=True)
class EquilibriumStats:
    """
    Давление и равновесные величины на уровне n.

    Attributes:
        pressure: P(φ) выбранной оценкой.
        mean_energy: ∫φ dm (mean_from_sums с той же оценкой).
        entropy: h_m(σ) = H_{n+1} − H_n, где H_m - энтропия Шеннона весов Гиббса точек уровня m.
        orbit_period_used: Уровень n.
        estimator: "orbit", "zeta" или "matrix".
        ratio_pressure: Оценка log(Z_{n+1}/Z_n) (всегда вычисляется).
        diagnostics: Предупреждения, возникшие при вычислении.
        variational_tol: Допуск вариационного тождества (проверяется при создании).
    """
    pressure: float
    mean_energy: float
    entropy: float
    orbit_period_used: int
    estimator: str
    ratio_pressure: float = math.nan
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)
    variational_tol: float = field(default=math.inf, compare=False, repr=False)

    def __post_init__(self):
        if abs(self.variational_gap) > self.variational_tol:
            raise ThermoError(f"Нарушено вариационное тождество: расхождение {abs(self.variational_gap):.3g}")

    @property
    def variational_gap(self) -> float:
        """P − (h + ∫φ dm); ноль для точной оценки."""
        return self.pressure - (self.mean_energy + self.entropy)

    def to_dict(self) -> dict:
        return {"pressure": self.pressure, "mean_energy": self.mean_energy, "entropy": self.entropy,
                "variational_gap": self.variational_gap,
                "orbit_period_used": self.orbit_period_used, "estimator": self.estimator,
                "ratio_pressure": self.ratio_pressure, "diagnostics": list(self.diagnostics)}


def resolve_sweep(potentials: Sequence[Potential], max_period: int, sweep: Optional[OrbitSweep] = None,
                  system: Union[SubshiftSpec, RationalMap, None] = None, **kwargs) -> OrbitSweep:
    """Возвращает переданный проход или строит его по системе потенциалов."""
    if sweep is not None:
        if sweep.max_period < max_period:
            raise ThermoError(f"Проходу нужен период ≥ {max_period}, доступно {sweep.max_period}")
        return sweep
    if system is None:
        system = next((p.system for p in potentials if p.system is not None), None)
    if system is None:
        raise ThermoError("Не задана система: укажите подсдвиг или отображение")
    return build_sweep(system, max_period, **kwargs)


def _determinant(scaled: np.ndarray, dscaled: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Коэффициенты c_j усеченного детерминанта и их производные по параметру.

    c_0 = 1, c_j = −(1/j)·Σ_{m=1}^{j} t_m c_{j−m}; производные c'_j получаются
    дифференцированием той же рекурсии по следам t'_m.
    """
    count = len(scaled)
    dscaled = np.zeros(count) if dscaled is None else dscaled
    coeffs = np.zeros(count + 1)
    dcoeffs = np.zeros(count + 1)
    coeffs[0] = 1.0
    for j in range(1, count + 1):
        coeffs[j] = -sum(scaled[m - 1] * coeffs[j - m] for m in range(1, j + 1)) / j
        dcoeffs[j] = -sum(dscaled[m - 1] * coeffs[j - m] + scaled[m - 1] * dcoeffs[j - m]
                          for m in range(1, j + 1)) / j
    return coeffs, dcoeffs


def _smallest_positive_root(coeffs: np.ndarray) -> Optional[float]:
    roots = np.roots(coeffs[::-1])
    real = [r.real for r in roots if r.real > 0 and abs(r.imag) <= 1e-8 * abs(r)]
    if not real:
        return None
    u = min(real)
    deriv = P.polyder(coeffs)
    for _ in range(20):
        step = P.polyval(u, coeffs) / P.polyval(u, deriv)
        u -= step
        if abs(step) <= 1e-16 * abs(u):
            break
    if not (u > 0 and math.isfinite(u)):
        return None
    # нуль далеко от оценки по отношению - артефакт усечения
    if abs(math.log(u)) > settings.ZETA_RATIO_GUARD:
        return None
    return float(u)


def level_moments(sweep: OrbitSweep, phi_sums: np.ndarray, psi_sums: np.ndarray, m: int) -> Tuple[float, float]:
    """(E_m[S_mψ], Var_m[S_mψ]) по весам Гиббса точек уровня m."""
    idx, r, weights = sweep.gibbs(m, phi_sums)
    values = r * psi_sums[idx]
    mean = float(np.dot(weights, values))
    return mean, float(np.dot(weights, (values - mean) ** 2))


def level_entropy(sweep: OrbitSweep, sums: np.ndarray, m: int) -> float:
    """Энтропия Шеннона весов Гиббса точек уровня m (вес орбиты делится поровну между p точками)."""
    idx, _, weights = sweep.gibbs(m, sums)
    periods = sweep.periods[idx]
    return float(np.sum(periods * entr(weights / periods)))


def zeta_pressure(log_traces: Sequence[float], reference: float) -> Optional[float]:
    """
    Давление по усеченному динамическому детерминанту.

    Следы t_m = Z_m (m = 1..N) масштабируются множителем e^{−m·reference}.

    Returns:
        −log z₀ для наименьшего положительного нуля z₀ или None, если его нет
        или он отличается от e^{−reference} больше чем в e^{ZETA_RATIO_GUARD} раз.
    """
    count = len(log_traces)
    scaled = np.array([math.exp(log_traces[m - 1] - m * reference) for m in range(1, count + 1)])
    u = _smallest_positive_root(_determinant(scaled)[0])
    return None if u is None else reference - math.log(u)


def zeta_mean(sweep: OrbitSweep, phi_sums: np.ndarray, psi_sums: np.ndarray, n: int) -> Optional[float]:
    """
    ∫ψ dm(φ) = dP(φ + sψ)/ds при s = 0 по усеченному детерминанту.

    Производная следа t'_m = t_m·E_m[S_mψ], где E_m - среднее по весам Гиббса
    уровня m; производная нуля z₀ находится по теореме о неявной функции.

    Returns:
        Среднее или None, если у детерминанта нет положительного нуля.
    """
    log_z = [sweep.log_partition(m, phi_sums) for m in range(1, n + 2)]
    reference = log_z[n] - log_z[n - 1]
    scaled = np.array([math.exp(log_z[m - 1] - m * reference) for m in range(1, n + 2)])
    means = np.array([level_moments(sweep, phi_sums, psi_sums, m)[0] for m in range(1, n + 2)])
    coeffs, dcoeffs = _determinant(scaled, scaled * means)
    u = _smallest_positive_root(coeffs)
    if u is None:
        return None
    slope = P.polyval(u, P.polyder(coeffs))
    if slope == 0:
        return None
    du = -P.polyval(u, dcoeffs) / slope
    return float(-du / u)


def pressure_value(sweep: OrbitSweep, sums: np.ndarray, n: int, estimator: str = "orbit") -> float:
    """Давление по суммам Биркгофа без диагностики (для многократных вызовов в решателях)."""
    log_z = [sweep.log_partition(m, sums) for m in range(1, n + 2)]
    ratio = log_z[n] - log_z[n - 1]
    if estimator == "zeta":
        zeta = zeta_pressure(log_z, ratio)
        if zeta is not None:
            return zeta
    return ratio


def pressure(phi: Potential, n: int = settings.DEFAULT_PERIOD, estimator: str = "orbit",
             sweep: Optional[OrbitSweep] = None, system=None,
             logger_: Optional[logging.Logger] = None) -> EquilibriumStats:
    """
    Давление P(φ) по периодическим орбитам.

    Args:
        phi: Потенциал.
        n: Уровень (используются периоды до n + 1).
        estimator: "orbit" или "zeta".
        sweep: Готовый проход по орбитам (период ≥ n + 1).
        system: Система для потенциалов без собственной системы (Constant).

    Returns:
        EquilibriumStats.
    """
    log = logger_ or logger
    if estimator not in ESTIMATORS:
        raise ThermoError(f"Неизвестная оценка давления: {estimator!r}")
    if n < 1:
        raise ThermoError("Уровень n должен быть положительным")
    sweep = resolve_sweep([phi], n + 1, sweep, system)
    sums = phi.orbit_sums(sweep)
    return stats_from_sums(sweep, sums, n, estimator, log)


def stats_from_sums(sweep: OrbitSweep, sums: np.ndarray, n: int, estimator: str = "orbit",
                    log: Optional[logging.Logger] = None) -> EquilibriumStats:
    """EquilibriumStats по суммам Биркгофа на орбитах прохода."""
    log = log or logger
    diagnostics: List[str] = []
    log_z = [sweep.log_partition(m, sums) for m in range(1, n + 2)]
    ratio = log_z[n] - log_z[n - 1]
    previous = log_z[n - 1] - log_z[n - 2] if n >= 2 else ratio
    if abs(ratio - previous) > settings.PRESSURE_CONVERGENCE_TOL:
        message = (f"Оценка давления не сошлась на уровне {n}: "
                   f"|ΔP| = {abs(ratio - previous):.3g} > {settings.PRESSURE_CONVERGENCE_TOL:g}")
        diagnostics.append(message)
        log.warning(message)

    value = ratio
    if estimator == "zeta":
        zeta = zeta_pressure(log_z, ratio)
        if zeta is None:
            message = "Детерминант не имеет положительного нуля: используется оценка по отношению"
            diagnostics.append(message)
            log.warning(message)
        else:
            value = zeta

    mean_energy = mean_from_sums(sweep, sums, sums, n, estimator)
    entropy = level_entropy(sweep, sums, n + 1) - level_entropy(sweep, sums, n)
    # для подсдвига и оценки по отношению H_m = log Z_m − E_m[S_mφ] тождественно
    exact = estimator == "orbit" and sweep.is_symbolic
    tolerance = 10 * settings.VARIATIONAL_TOL * max(1.0, abs(value)) if exact else math.inf
    gap = abs(float(value) - (mean_energy + entropy))
    if not exact and gap > settings.PRESSURE_CONVERGENCE_TOL:
        message = f"Вариационное тождество выполнено с расхождением {gap:.3g} на уровне {n}"
        diagnostics.append(message)
        log.warning(message)
    return EquilibriumStats(pressure=float(value), mean_energy=mean_energy, entropy=entropy,
                            orbit_period_used=n, estimator=estimator, ratio_pressure=float(ratio),
                            diagnostics=tuple(diagnostics), variational_tol=tolerance)


def pressure_sequence(phi: Potential, periods: Sequence[int], sweep: Optional[OrbitSweep] = None,
                      system=None, logger_: Optional[logging.Logger] = None) -> List[float]:
    """
    Оценки log(Z_{n+1}/Z_n) для нескольких n; предупреждает о немонотонной сходимости.
    """
    log = logger_ or logger
    sweep = resolve_sweep([phi], max(periods) + 1, sweep, system)
    sums = phi.orbit_sums(sweep)
    values = [sweep.log_partition(n + 1, sums) - sweep.log_partition(n, sums) for n in periods]
    gaps = np.abs(np.diff(values))
    if gaps.size > 1 and (np.diff(gaps) > 1e-15).any():
        log.warning("Сходимость оценок давления не монотонна по n")
    return values


def _cylinder_transfer_matrix(phi: CylinderTable, depth: int) -> sparse.csr_matrix:
    """M[w → w′] = e^{φ(w)} для допустимого сдвига w′ = w[1:] + s."""
    spec = phi.spec
    words = cylinder_array(spec, depth)
    base = spec.n ** np.arange(depth - 1, -1, -1, dtype=np.int64)
    codes = words @ base
    position = {int(c): i for i, c in enumerate(codes)}
    values = np.array([phi.value_of([int(s) + 1 for s in w]) for w in words])

    rows, cols, data = [], [], []
    for i, w in enumerate(words):
        tail = w[1:]
        for s in spec.successors[int(w[-1])]:
            code = int(np.dot(np.append(tail, s), base)) if depth > 1 else int(s)
            rows.append(i)
            cols.append(position[code])
            data.append(math.exp(values[i]))
    size = len(words)
    return sparse.csr_matrix((data, (rows, cols)), shape=(size, size))


def pressure_matrix(phi: CylinderTable, depth: Optional[int] = None,
                    rtol: float = settings.POWER_ITERATION_RTOL,
                    max_iter: int = settings.POWER_ITERATION_MAX_ITER) -> float:
    """
    log ведущего собственного числа матрицы переходов между цилиндрами глубины k.

    Собственное число ищется степенным методом.

    Raises:
        ConvergenceError: Если итерации не сошлись (например, матрица периодическая).
    """
    depth = phi.depth if depth is None else depth
    if depth < phi.depth:
        raise ThermoError(f"Глубина матрицы {depth} меньше глубины таблицы {phi.depth}")
    matrix = _cylinder_transfer_matrix(phi, depth)
    v = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    eigen = 0.0
    for _ in range(max_iter):
        w = matrix @ v
        new_eigen = float(w.sum() / v.sum())
        w /= w.sum()
        if abs(new_eigen - eigen) <= rtol * abs(new_eigen) and np.abs(w - v).max() <= rtol * 10:
            return math.log(new_eigen)
        v, eigen = w, new_eigen
    raise ConvergenceError(f"Степенной метод не сошелся за {max_iter} итераций")


def mean_from_sums(sweep: OrbitSweep, phi_sums: np.ndarray, psi_sums: np.ndarray, n: int,
                   estimator: str = "orbit") -> float:
    """
    Равновесное среднее по суммам Биркгофа.

    "orbit": E_{n+1}[S_{n+1}ψ] − E_n[S_nψ], производная оценки log(Z_{n+1}/Z_n);
    без уровня n + 1 в проходе - E_n[S_nψ]/n. "zeta": производная детерминанта.
    """
    if estimator == "zeta":
        value = zeta_mean(sweep, phi_sums, psi_sums, n)
        if value is not None:
            return value
    if sweep.max_period < n + 1:
        return level_moments(sweep, phi_sums, psi_sums, n)[0] / n
    return level_moments(sweep, phi_sums, psi_sums, n + 1)[0] - level_moments(sweep, phi_sums, psi_sums, n)[0]


def equilibrium_mean(psi: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
                     sweep: Optional[OrbitSweep] = None, system=None, cross_check: bool = False,
                     h: float = settings.VARIANCE_FD_STEP,
                     estimator: str = "orbit") -> Union[float, Tuple[float, float]]:
    """
    ∫ψ dm(φ) по mean_from_sums.

    При cross_check=True возвращает также (P(φ + hψ) − P(φ − hψ))/(2h).
    """
    sweep = resolve_sweep([phi, psi], n + 1, sweep, system)
    phi_sums = phi.orbit_sums(sweep)
    psi_sums = psi.orbit_sums(sweep)
    mean = mean_from_sums(sweep, phi_sums, psi_sums, n, estimator)
    if not cross_check:
        return mean
    plus = stats_from_sums(sweep, phi_sums + h * psi_sums, n).ratio_pressure
    minus = stats_from_sums(sweep, phi_sums - h * psi_sums, n).ratio_pressure
    return mean, (plus - minus) / (2.0 * h)


def normalized(phi: Potential, n: int = settings.DEFAULT_PERIOD, estimator: str = "orbit",
               sweep: Optional[OrbitSweep] = None, system=None) -> Potential:
    """φ − P(φ): потенциал с нулевым давлением."""
    value = pressure(phi, n, estimator, sweep, system).pressure
    return linear([(1.0, phi), (-value, Constant(1.0))])
