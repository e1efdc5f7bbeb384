# src/metric/lyapunov.py
"""
Функционал Ляпунова Ly(ν_f, g) = ∫log|g'∘φ_g| dν_f и функция G_f(g) = δ(g)·Ly(ν_f, g).

ν_f - равновесная мера потенциала −δ(f)·log|f'|, представленная весами
Гиббса на циклах f; циклы g получаются продолжением циклов f вдоль пути.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import settings
from src.continuation.paths import MapSegmentPath, ParamPath, SegmentPath
from src.maps.quasi_blaschke import QBPoint
from src.maps.rational_map import RationalMap
from src.metric.dimension import equilibrium_lyapunov, solve_bowen
from src.metric.family import track_sweep
from src.thermo.sweep import OrbitSweep, map_sweep

logger = logging.getLogger("Lyapunov")


@dataclass(frozen=True)
class LyapunovValue:
    """Ly(ν_f, g), δ(f), δ(g) и G_f(g) для одной пары отображений."""
    lyapunov: float
    base_delta: float
    target_delta: float

    @property
    def g_value(self) -> float:
        return self.target_delta * self.lyapunov

    def to_dict(self) -> dict:
        return {"lyapunov": self.lyapunov, "base_delta": self.base_delta, "target_delta": self.target_delta,
                "G": self.g_value}


def path_between(f: RationalMap, g: RationalMap) -> ParamPath:
    """Отрезок из f в g: по координатам (a, b), если оба отображения заданы точками QB."""
    if isinstance(f.origin, QBPoint) and isinstance(g.origin, QBPoint):
        return SegmentPath(f.origin, g.origin)
    return MapSegmentPath(f, g)


def lyapunov_value(f: RationalMap, n: int = settings.DEFAULT_PERIOD, g: Optional[RationalMap] = None,
                   path: Optional[ParamPath] = None, t: float = 1.0, base: Optional[OrbitSweep] = None,
                   estimator: str = settings.DEFAULT_ESTIMATOR, workers: Optional[int] = None,
                   logger_: Optional[logging.Logger] = None) -> LyapunovValue:
    """
    Ly(ν_f, g) и размерности δ(f), δ(g).

    Args:
        f: Базовое отображение.
        n: Уровень.
        g: Целевое отображение (None - g = f, если не задан путь).
        path: Путь с path(0) = f; тогда g = path(t).
        t: Параметр цели на пути.
        base: Готовый проход по циклам f (период ≥ n + 1).

    Raises:
        TrackingError: Если хотя бы один цикл не продолжается до g.
    """
    log = logger_ or logger
    if base is None:
        base = map_sweep(f, n + 1, logger_=log)
    base_delta = solve_bowen(base, n, estimator, logger_=log).delta
    if path is None and g is None:
        return LyapunovValue(lyapunov=equilibrium_lyapunov(base, base_delta, n, estimator=estimator),
                             base_delta=base_delta, target_delta=base_delta)

    if path is None:
        path, t = path_between(f, g), 1.0
    grid = tuple(np.linspace(0.0, t, settings.TRACK_GRID + 1))
    family = track_sweep(path, base, grid=grid, workers=workers, logger_=log)
    target = family.sweep_at(grid[-1])
    target_logs = np.log(np.abs(target.multipliers))
    target_delta = solve_bowen(target, n, estimator, logger_=log).delta
    ly = equilibrium_lyapunov(base, base_delta, n, values=target_logs, estimator=estimator)
    return LyapunovValue(lyapunov=ly, base_delta=base_delta, target_delta=target_delta)


def lyapunov(f: RationalMap, n: int = settings.DEFAULT_PERIOD, g: Optional[RationalMap] = None,
             path: Optional[ParamPath] = None, t: float = 1.0, **kwargs) -> float:
    """Ly(ν_f, g) = ∫log|g'| dν_f по циклам f, продолженным до g."""
    return lyapunov_value(f, n, g, path, t, **kwargs).lyapunov


def g_function(f: RationalMap, n: int = settings.DEFAULT_PERIOD, g: Optional[RationalMap] = None,
               path: Optional[ParamPath] = None, t: float = 1.0, **kwargs) -> float:
    """G_f(g) = δ(g)·Ly(ν_f, g); локальный минимум в g = f."""
    return lyapunov_value(f, n, g, path, t, **kwargs).g_value
