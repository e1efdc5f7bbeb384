# src/metric/dimension.py
"""
Размерность Хаусдорфа множества Жюлиа из уравнения Боуэна P(−δ·log|f'|) = 0.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from config import settings
from src.maps.rational_map import RationalMap
from src.thermo.pressure import mean_from_sums, pressure_value
from src.thermo.sweep import OrbitSweep, map_sweep
from src.utils.exceptions import BracketError, CriticalOrbitError, DimensionError, MonotonicityError

logger = logging.getLogger("Dimension")

MONOTONICITY_GRID = 10


@dataclass(frozen=True)
class DimensionResult:
    """
    Решение уравнения Боуэна.

    Attributes:
        delta: Размерность δ.
        bracket: Интервал (lo, hi), содержащий δ.
        period_used: Уровень n.
        newton_iters: Число шагов Ньютона.
        residual: |P(−δ·log|f'|)|.
        lyapunov: Равновесный показатель Ляпунова ∫log|f'| dm_δ.
        estimator: Оценка давления.
        cycle_count: Число примитивных циклов в проходе.
        diagnostics: Предупреждения.
    """
    delta: float
    bracket: Tuple[float, float]
    period_used: int
    newton_iters: int
    residual: float
    lyapunov: float
    estimator: str
    cycle_count: int = 0
    diagnostics: Tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {"delta": self.delta, "bracket": list(self.bracket), "period_used": self.period_used,
                "newton_iters": self.newton_iters, "residual": self.residual, "lyapunov": self.lyapunov,
                "estimator": self.estimator, "cycle_count": self.cycle_count,
                "diagnostics": list(self.diagnostics)}


def log_slopes(sweep: OrbitSweep) -> np.ndarray:
    """log|λ_C| = S_p log|f'| по циклам прохода."""
    magnitudes = np.abs(sweep.multipliers)
    if (magnitudes == 0).any():
        raise CriticalOrbitError("Критическая точка на цикле: log|f'| не определен")
    return np.log(magnitudes)


def equilibrium_lyapunov(sweep: OrbitSweep, delta: float, n: int, values: Optional[np.ndarray] = None,
                         estimator: str = "orbit") -> float:
    """
    ∫log|g'| dν для равновесной меры ν потенциала −δ·log|f'|.

    Args:
        values: log|λ_C(g)| по циклам (по умолчанию - циклы самого прохода).
        estimator: "orbit" - разность средних уровней n + 1 и n, "zeta" - производная детерминанта.
    """
    logs = log_slopes(sweep)
    target = logs if values is None else values
    return mean_from_sums(sweep, -delta * logs, target, n, estimator)


def solve_bowen(sweep: OrbitSweep, n: int, estimator: str = settings.DEFAULT_ESTIMATOR,
                bracket: Tuple[float, float] = settings.DIMENSION_BRACKET,
                logger_: Optional[logging.Logger] = None) -> DimensionResult:
    """
    Корень s ↦ P(−s·log|f'|) на отрезке bracket.

    Монотонность проверяется на сетке из 10 точек, затем корень уточняется
    методом Ньютона с защитой бисекцией; при неудаче используется brentq.
    Если оценка zeta не проходит проверку сетки, решение повторяется с оценкой orbit.

    Raises:
        MonotonicityError: Если функция давления не убывает на сетке.
        BracketError: Если функция не меняет знак на отрезке.
    """
    log = logger_ or logger
    if sweep.max_period < n + 1:
        raise DimensionError(f"Нужны циклы до периода {n + 1}, доступны до {sweep.max_period}")
    logs = log_slopes(sweep)
    diagnostics: List[str] = []

    def g(s: float) -> float:
        return pressure_value(sweep, -s * logs, n, estimator)

    def slope(s: float) -> float:
        return -mean_from_sums(sweep, -s * logs, logs, n, estimator)

    grid = np.linspace(bracket[0], bracket[1], MONOTONICITY_GRID)
    values = np.array([g(s) for s in grid])
    failure: Optional[DimensionError] = None
    if not (np.diff(values) < 0).all():
        failure = MonotonicityError("Функция s ↦ P(−s·log|f'|) не убывает на сетке: некорректные данные о циклах")
    elif not (values[0] > 0 > values[-1]):
        failure = BracketError(f"P(−s·log|f'|) не меняет знак на [{bracket[0]}, {bracket[1]}]: "
                               f"g(lo) = {values[0]:.6g}, g(hi) = {values[-1]:.6g}")
    if failure is not None:
        if estimator != "zeta":
            raise failure
        log.warning(f"{failure}; повтор с оценкой orbit")
        result = solve_bowen(sweep, n, "orbit", bracket, log)
        return replace(result, diagnostics=(f"Оценка zeta отклонена: {failure}",) + result.diagnostics)

    k = int(np.flatnonzero(values <= 0)[0])
    lo, hi = float(grid[k - 1]), float(grid[k])
    if values[k] == 0:
        lo = hi
    s = hi if lo == hi else 0.5 * (lo + hi)
    value = g(s)
    iterations = 0
    while iterations < settings.DIMENSION_MAX_NEWTON and lo != hi:
        iterations += 1
        if value > 0:
            lo = s
        elif value < 0:
            hi = s
        else:
            break
        derivative = slope(s)
        step = value / derivative if derivative < 0 else np.inf
        candidate = s - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        converged = abs(candidate - s) <= 4 * np.finfo(float).eps * max(1.0, abs(s))
        s, value = candidate, g(candidate)
        if converged and abs(value) <= settings.DIMENSION_RESIDUAL:
            break
    else:
        if lo != hi and abs(value) > settings.DIMENSION_RESIDUAL:
            message = "Метод Ньютона не достиг невязки, используется brentq"
            diagnostics.append(message)
            log.warning(message)
            s = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            value = g(s)

    residual = abs(value)
    if residual > settings.DIMENSION_RESIDUAL:
        message = f"Невязка уравнения Боуэна {residual:.3g} превышает {settings.DIMENSION_RESIDUAL:g}"
        diagnostics.append(message)
        log.warning(message)
    return DimensionResult(delta=float(s), bracket=(min(lo, s), max(hi, s)), period_used=n,
                           newton_iters=iterations, residual=residual,
                           lyapunov=equilibrium_lyapunov(sweep, s, n, estimator=estimator), estimator=estimator,
                           cycle_count=len(sweep.periods), diagnostics=tuple(diagnostics))


def hausdorff_dimension(f: RationalMap, n: int = settings.DEFAULT_PERIOD,
                        estimator: str = settings.DEFAULT_ESTIMATOR, sweep: Optional[OrbitSweep] = None,
                        domain: Optional[str] = None, path=None,
                        bracket: Tuple[float, float] = settings.DIMENSION_BRACKET,
                        logger_: Optional[logging.Logger] = None) -> DimensionResult:
    """
    Размерность Хаусдорфа множества Жюлиа гиперболического отображения.

    Args:
        f: Отображение.
        n: Уровень (нужны циклы периодов до n + 1).
        estimator: "zeta" или "orbit".
        sweep: Готовый проход по циклам f.
        domain: Режим перечисления циклов.
        path: Путь продолжения для режима "plane".
        bracket: Отрезок поиска.

    Returns:
        DimensionResult.
    """
    log = logger_ or logger
    if sweep is None:
        sweep = map_sweep(f, n + 1, domain=domain, path=path, logger_=log)
    result = solve_bowen(sweep, n, estimator, bracket, log)
    log.info(f"δ({f.label or 'f'}) = {result.delta:.15g} (n={n}, невязка {result.residual:.2g})")
    return result


def dimension_convergence(f: RationalMap, periods: Sequence[int], estimator: str = settings.DEFAULT_ESTIMATOR,
                          sweep: Optional[OrbitSweep] = None, domain: Optional[str] = None, path=None,
                          logger_: Optional[logging.Logger] = None) -> List[Dict[str, float]]:
    """
    Таблица δ по уровням n для построения графиков сходимости.

    Returns:
        Строки {"period", "delta", "delta_orbit", "residual"}.
    """
    log = logger_ or logger
    periods = sorted(set(int(p) for p in periods))
    if sweep is None:
        sweep = map_sweep(f, max(periods) + 1, domain=domain, path=path, logger_=log)
    rows = []
    for n in periods:
        chosen = solve_bowen(sweep, n, estimator, logger_=log)
        ratio = chosen if estimator == "orbit" else solve_bowen(sweep, n, "orbit", logger_=log)
        rows.append({"period": n, "delta": chosen.delta, "delta_orbit": ratio.delta, "residual": chosen.residual})
    return rows
