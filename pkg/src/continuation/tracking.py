# src/continuation/tracking.py
"""
Продолжение отталкивающих циклов вдоль пути f_t методом предиктор–корректор.

Корректор - метод Ньютона для всей циклической системы {f_t(z_i) − z_{i+1}},
векторизованный по всем циклам одного периода. Шаг по t делится пополам,
если Ньютону нужно больше TRACK_MAX_NEWTON итераций.
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from src.continuation.paths import ParamPath
from src.maps.cycles import Cycle, make_cycle
from src.maps.rational_map import RationalMap
from src.utils.exceptions import BranchConsistencyError, TrackingError
from src.utils.workers import get_pool

logger = logging.getLogger("CycleTracking")


@dataclass(frozen=True)
class CycleTrack:
    """
    Цикл, продолженный по сетке значений t.

    Attributes:
        cycle: Цикл при t = 0.
        grid: Узлы сетки по возрастанию (содержит 0).
        points: Точки цикла в каждом узле (базовая точка сохраняется).
        multipliers: Мультипликатор в каждом узле.
    """
    cycle: Cycle
    grid: Tuple[float, ...]
    points: Tuple[Tuple[complex, ...], ...] = field(repr=False)
    multipliers: Tuple[complex, ...]

    def node(self, t: float) -> int:
        for i, value in enumerate(self.grid):
            if value == t:
                return i
        raise KeyError(f"Узел t={t!r} отсутствует в сетке")

    def multiplier_at(self, t: float) -> complex:
        return self.multipliers[self.node(t)]

    def log_multipliers(self) -> np.ndarray:
        """
        Непрерывная ветвь log λ_C(t) по узлам сетки, от главного значения при t = 0.

        Raises:
            BranchConsistencyError: Если аргумент λ меняется между соседними узлами больше чем на π/2.
        """
        lam = np.asarray(self.multipliers, dtype=complex)
        zero = self.node(0.0)
        logs = np.empty(lam.size, dtype=complex)
        logs[zero] = cmath.log(lam[zero])
        for i in range(zero + 1, lam.size):
            logs[i] = logs[i - 1] + _log_ratio(lam[i], lam[i - 1], self.grid[i])
        for i in range(zero - 1, -1, -1):
            logs[i] = logs[i + 1] + _log_ratio(lam[i], lam[i + 1], self.grid[i])
        return logs

    def cycle_at(self, t: float, f: RationalMap) -> Cycle:
        return make_cycle(f, self.points[self.node(t)])


def _log_ratio(current: complex, previous: complex, t: float) -> complex:
    jump = cmath.log(current / previous)
    if abs(jump.imag) > np.pi / 2:
        raise BranchConsistencyError(f"Скачок ветви log λ около t={t:.6g}: Δarg = {jump.imag:.3f}")
    return jump


@dataclass
class TrackBundle:
    """Результат продолжения набора циклов: треки по индексам входа и отказы."""
    grid: Tuple[float, ...]
    tracks: List[Optional[CycleTrack]]
    failures: Dict[int, TrackingError]

    @property
    def tracked_fraction(self) -> float:
        if not self.tracks:
            return 1.0
        return sum(t is not None for t in self.tracks) / len(self.tracks)

    def successful(self) -> List[CycleTrack]:
        return [t for t in self.tracks if t is not None]


def batched_newton(f: RationalMap, z: np.ndarray, max_iter: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Метод Ньютона для стопки циклических систем одного периода.

    Args:
        f: Отображение.
        z: Массив (число циклов, период) начальных приближений.
        max_iter: Предел итераций.

    Returns:
        (уточненные точки, маска сходимости, число итераций по строкам).
    """
    z = np.array(z, dtype=complex)
    m, p = z.shape
    shift = np.roll(np.identity(p), 1, axis=1)
    eye = np.identity(p)
    active = np.ones(m, dtype=bool)
    iterations = np.zeros(m, dtype=int)

    with np.errstate(all='ignore'):
        for _ in range(max_iter):
            if not active.any():
                break
            rows = np.flatnonzero(active)
            za = z[rows]
            value, slope = f.value_and_derivative(za)
            residual = value - np.roll(za, -1, axis=1)
            jacobian = slope[:, :, None] * eye - shift
            try:
                step = np.linalg.solve(jacobian, residual[:, :, None])[:, :, 0]
            except np.linalg.LinAlgError:
                return z, np.zeros(m, dtype=bool), iterations
            za = za - step
            z[rows] = za
            iterations[rows] += 1
            done = np.abs(step).max(axis=1) <= settings.NEWTON_TOL * (1.0 + np.abs(za).max(axis=1))
            active[rows[done]] = False

        residual = np.abs(f(z) - np.roll(z, -1, axis=1)).max(axis=1)
    ok = ~active & np.isfinite(residual) & (residual <= settings.CYCLE_RESIDUAL_TOL * (1.0 + np.abs(z).max(axis=1)))
    return z, ok, iterations


def _track_direction(path: ParamPath, z0: np.ndarray, nodes: Sequence[float],
                     failures: Dict[int, TrackingError], rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Продолжает строки z0 от t = 0 через узлы nodes (по удалению от 0).

    Отказавшие строки записываются в failures по индексам rows.
    """
    m = z0.shape[0]
    points = np.full((len(nodes),) + z0.shape, np.nan, dtype=complex)
    multipliers = np.full((len(nodes), m), np.nan, dtype=complex)
    alive = np.ones(m, dtype=bool)
    for row in range(m):
        if rows[row] in failures:
            alive[row] = False
    if not nodes:
        return points, multipliers

    t_cur, z_cur = 0.0, z0.copy()
    t_prev, z_prev = None, None
    step = abs(nodes[0])

    for k, target in enumerate(nodes):
        while t_cur != target and alive.any():
            remaining = abs(target - t_cur)
            h = min(step, remaining)
            t_next = target if h >= remaining else t_cur + np.sign(target - t_cur) * h
            if z_prev is not None and t_cur != t_prev:
                predicted = z_cur + (z_cur - z_prev) * ((t_next - t_cur) / (t_cur - t_prev))
            else:
                predicted = z_cur

            f = path.map_at(t_next)
            idx = np.flatnonzero(alive)
            z_new, ok, iterations = batched_newton(f, predicted[idx], settings.TRACK_MAX_NEWTON)
            if ok.all():
                z_prev, t_prev = z_cur.copy(), t_cur
                z_cur[idx] = z_new
                t_cur = t_next
                if iterations.max(initial=0) <= settings.TRACK_MAX_NEWTON // 2:
                    step = 2.0 * h
                continue

            step = h / 2.0
            if step < settings.TRACK_MIN_STEP * max(1.0, abs(t_cur)):
                for row in idx[~ok]:
                    failures[int(rows[row])] = TrackingError(
                        f"Шаг продолжения исчез около t={t_cur:.6g} (столкновение циклов или выход из компоненты)",
                        last_t=float(t_cur))
                alive[idx[~ok]] = False
                step = remaining

        if not alive.any():
            break
        f = path.map_at(target)
        idx = np.flatnonzero(alive)
        lam = np.prod(f.derivative(z_cur[idx]), axis=1)
        weak = np.abs(lam) <= 1.0 + settings.REPELLING_MARGIN
        for j in np.flatnonzero(weak):
            failures[int(rows[idx[j]])] = TrackingError(
                f"Цикл перестал быть отталкивающим при t={target:.6g}: |λ| = {abs(lam[j]):.6g}",
                last_t=float(t_prev if t_prev is not None else 0.0))
        alive[idx[weak]] = False
        points[k, alive] = z_cur[alive]
        multipliers[k, idx[~weak]] = lam[~weak]
    return points, multipliers


def normalize_grid(grid: Optional[Sequence[float]], path: ParamPath, h: Optional[float] = None) -> Tuple[float, ...]:
    """Сортированная сетка с узлом 0; по умолчанию {±h, ±h/2, 0}."""
    if grid is None:
        h = path.default_h if h is None else h
        grid = (-h, -h / 2.0, h / 2.0, h)
    return tuple(sorted(set(float(t) for t in grid) | {0.0}))


def _track_group(path: ParamPath, group: List[Cycle], rows: np.ndarray,
                 grid: Tuple[float, ...]) -> Tuple[List[Optional[CycleTrack]], Dict[int, TrackingError]]:
    failures: Dict[int, TrackingError] = {}
    f0 = path.map_at(0.0)
    z0, ok, _ = batched_newton(f0, np.array([c.points for c in group]), settings.TRACK_MAX_NEWTON)
    lam0 = np.prod(f0.derivative(z0), axis=1)
    for i in np.flatnonzero(~ok | (np.abs(lam0) <= 1.0 + settings.REPELLING_MARGIN)):
        failures[int(rows[i])] = TrackingError("Начальный цикл не уточняется или не отталкивающий", last_t=0.0)

    positive = [t for t in grid if t > 0]
    negative = [t for t in reversed(grid) if t < 0]
    pos_points, pos_mult = _track_direction(path, z0, positive, failures, rows)
    neg_points, neg_mult = _track_direction(path, z0, negative, failures, rows)

    tracks: List[Optional[CycleTrack]] = []
    for i, cycle in enumerate(group):
        if int(rows[i]) in failures:
            tracks.append(None)
            continue
        node_points = ([tuple(neg_points[k, i]) for k in range(len(negative) - 1, -1, -1)]
                       + [tuple(z0[i])]
                       + [tuple(pos_points[k, i]) for k in range(len(positive))])
        node_mult = ([complex(neg_mult[k, i]) for k in range(len(negative) - 1, -1, -1)]
                     + [complex(lam0[i])]
                     + [complex(pos_mult[k, i]) for k in range(len(positive))])
        tracks.append(CycleTrack(cycle=cycle, grid=grid, points=tuple(node_points), multipliers=tuple(node_mult)))
    return tracks, failures


def track_cycles(path: ParamPath, cycles: Sequence[Cycle], grid: Optional[Sequence[float]] = None,
                 h: Optional[float] = None, workers: Optional[int] = None,
                 logger_: Optional[logging.Logger] = None) -> TrackBundle:
    """
    Продолжает набор циклов вдоль пути; циклы одного периода обрабатываются одной стопкой.

    Args:
        path: Путь f_t; циклы должны принадлежать f_0.
        cycles: Отталкивающие циклы f_0.
        grid: Узлы по t (0 добавляется автоматически).
        h: Шаг сетки по умолчанию.
        workers: Число потоков.

    Returns:
        TrackBundle с треками в порядке входа и отказами.
    """
    log = logger_ or logger
    grid = normalize_grid(grid, path, h)
    cycles = list(cycles)
    periods = sorted({c.period for c in cycles})
    groups = [np.array([i for i, c in enumerate(cycles) if c.period == p], dtype=int) for p in periods]

    def run(rows: np.ndarray):
        return _track_group(path, [cycles[i] for i in rows], rows, grid)

    results = get_pool(workers).map_ordered(run, groups)

    tracks: List[Optional[CycleTrack]] = [None] * len(cycles)
    failures: Dict[int, TrackingError] = {}
    for rows, (group_tracks, group_failures) in zip(groups, results):
        for row, track in zip(rows, group_tracks):
            tracks[int(row)] = track
        failures.update(group_failures)

    if failures:
        log.warning(f"Не удалось продолжить {len(failures)} из {len(cycles)} циклов")
    return TrackBundle(grid=grid, tracks=tracks, failures=dict(sorted(failures.items())))


def track_cycle(path: ParamPath, cycle: Cycle, grid: Optional[Sequence[float]] = None,
                h: Optional[float] = None) -> CycleTrack:
    """
    Продолжает один цикл по сетке.

    Raises:
        TrackingError: Если шаг исчез или цикл перестал быть отталкивающим.
    """
    bundle = track_cycles(path, [cycle], grid=grid, h=h, workers=1)
    if 0 in bundle.failures:
        raise bundle.failures[0]
    return bundle.tracks[0]


def richardson_central(values: Dict[float, complex], h: float) -> complex:
    """
    Центральная разность с одним шагом Ричардсона по шагам h и h/2.

    Args:
        values: Значения функции в узлах ±h и ±h/2.
        h: Шаг.
    """
    coarse = (values[h] - values[-h]) / (2.0 * h)
    fine = (values[h / 2.0] - values[-h / 2.0]) / h
    return (4.0 * fine - coarse) / 3.0


def dlog_from_track(track: CycleTrack, h: float) -> complex:
    """d/dt log λ_C при t = 0 по треку, содержащему узлы ±h и ±h/2."""
    logs = track.log_multipliers()
    values = {t: logs[i] for i, t in enumerate(track.grid)}
    return complex(richardson_central(values, h))


def dlog_multiplier(path: ParamPath, cycle: Cycle, h: Optional[float] = None) -> complex:
    """
    Производная d/dt log λ_C(f_t) при t = 0.

    Вещественная часть равна d/dt log|λ_C|.

    Raises:
        TrackingError: Если продолжение на [−h, h] не удалось.
        BranchConsistencyError: Если ветвь логарифма прыгает между узлами.
    """
    h = path.default_h if h is None else h
    if path.is_constant:
        return 0j
    track = track_cycle(path, cycle, h=h)
    return dlog_from_track(track, h)


def continue_cycles(path: ParamPath, base: Sequence[Cycle], t_end: float = 1.0,
                    steps: int = settings.TRACK_GRID, workers: Optional[int] = None,
                    logger_: Optional[logging.Logger] = None) -> List[Cycle]:
    """
    Переносит циклы f_0 в циклы f_{t_end}; неудачные треки отбрасываются с предупреждением.
    """
    log = logger_ or logger
    grid = tuple(np.linspace(0.0, t_end, steps + 1))
    bundle = track_cycles(path, base, grid=grid, workers=workers, logger_=log)
    f_end = path.map_at(t_end)
    return [track.cycle_at(float(grid[-1]), f_end) for track in bundle.successful()]
