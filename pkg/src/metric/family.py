# src/metric/family.py
"""
Проход по циклам, продолженный вдоль пути f_t.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.continuation.paths import ParamPath
from src.continuation.tracking import TrackBundle, dlog_from_track, normalize_grid, track_cycles
from src.maps.cycles import Cycle
from src.thermo.sweep import OrbitSweep, map_sweep
from src.utils.exceptions import TrackingError

logger = logging.getLogger("TrackedSweep")


@dataclass
class TrackedSweep:
    """
    Циклы базового прохода, продолженные по сетке t.

    Attributes:
        path: Путь f_t.
        base: Проход по циклам f_0.
        bundle: Треки в порядке base.cycles.
    """
    path: ParamPath
    base: OrbitSweep
    bundle: TrackBundle

    @property
    def grid(self) -> Tuple[float, ...]:
        return self.bundle.grid

    @property
    def mask(self) -> np.ndarray:
        return np.array([t is not None for t in self.bundle.tracks], dtype=bool)

    @property
    def cycles(self) -> List[Cycle]:
        return [c for c, ok in zip(self.base.cycles, self.mask) if ok]

    def multipliers_at(self, t: float) -> np.ndarray:
        """Мультипликаторы продолженных циклов в узле t."""
        return np.array([track.multiplier_at(t) for track in self.bundle.successful()], dtype=complex)

    def sweep_at(self, t: float) -> OrbitSweep:
        """
        Проход для f_t по продолженным циклам.

        Циклы остаются базовыми (ключи для потенциалов вдоль пути), мультипликаторы - в узле t.
        """
        mask = self.mask
        return replace(self.base, periods=self.base.periods[mask], map=self.path.map_at(t),
                       cycles=self.cycles, multipliers=self.multipliers_at(t))

    def dlogs(self, h: float) -> np.ndarray:
        """d/dt log λ_C при t = 0 для каждого продолженного цикла."""
        return np.array([dlog_from_track(track, h) for track in self.bundle.successful()], dtype=complex)


def base_sweep(path: ParamPath, max_period: int, logger_: Optional[logging.Logger] = None) -> OrbitSweep:
    """Проход по циклам f_0 до периода max_period."""
    return map_sweep(path.map_at(0.0), max_period, logger_=logger_)


def track_sweep(path: ParamPath, base: OrbitSweep, grid: Optional[Sequence[float]] = None,
                h: Optional[float] = None, workers: Optional[int] = None,
                min_fraction: Optional[float] = None,
                logger_: Optional[logging.Logger] = None) -> TrackedSweep:
    """
    Продолжает все циклы прохода вдоль пути.

    Args:
        path: Путь f_t с f_0 = base.map.
        base: Проход по циклам f_0.
        grid: Узлы по t.
        h: Шаг сетки по умолчанию.
        workers: Число потоков.
        min_fraction: Допустимая доля продолженных циклов (None - нужны все).

    Raises:
        TrackingError: Если продолжено меньше циклов, чем требуется.
    """
    log = logger_ or logger
    bundle = track_cycles(path, base.cycles, grid=normalize_grid(grid, path, h), workers=workers, logger_=log)
    if bundle.failures:
        first = next(iter(bundle.failures.values()))
        if min_fraction is None:
            raise first
        if bundle.tracked_fraction < min_fraction:
            raise TrackingError(f"Продолжено {bundle.tracked_fraction:.1%} циклов, требуется {min_fraction:.0%}: "
                                f"{first}", last_t=first.last_t)
    return TrackedSweep(path=path, base=base, bundle=bundle)


def failure_table(family: TrackedSweep) -> List[Dict[str, object]]:
    """Отказы продолжения для отчета."""
    rows = []
    for index, error in family.bundle.failures.items():
        cycle = family.base.cycles[index]
        rows.append({"period": cycle.period, "point": cycle.points[0], "last_t": error.last_t, "reason": str(error)})
    return rows


def node_grid(h: float) -> Tuple[float, ...]:
    """Сетка {±h, ±h/2, 0} для одного шага Ричардсона."""
    return (-h, -h / 2.0, 0.0, h / 2.0, h)
