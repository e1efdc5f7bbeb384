# src/maps/cycles.py
"""
Периодические циклы рациональных отображений.

Режим "circle" (только отображения с формой Бляшке) решает F^n(θ) = θ + 2πk
для монотонного подъема f|S¹ векторной бисекцией по всем k сразу. Режим
"plane" продолжает циклы из отображения с известными циклами по пути
параметров; запасной вариант - метод Ньютона из сетки начальных точек.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from config import settings
from src.maps.rational_map import RationalMap
from src.utils.exceptions import MapError

logger = logging.getLogger("Cycles")

CycleKey = Tuple[int, float, float]


def _point_order(z: complex) -> Tuple[float, float]:
    return (round(z.real, 9), round(z.imag, 9))


def canonical_points(points: Sequence[complex]) -> Tuple[complex, ...]:
    """Циклический сдвиг, начинающийся с лексикографически наименьшей точки."""
    points = [complex(z) for z in points]
    start = min(range(len(points)), key=lambda i: _point_order(points[i]))
    return tuple(points[start:] + points[:start])


@dataclass(frozen=True)
class Cycle:
    """
    Периодическая орбита z₀…z_{n−1} с f(z_i) = z_{i+1 mod n}.

    Attributes:
        points: Точки цикла в канонической ротации.
        period: Точный период n.
        multiplier: λ = Π f'(z_i).
        repelling: |λ| > 1.
    """
    points: Tuple[complex, ...]
    period: int
    multiplier: complex
    repelling: bool

    @property
    def key(self) -> CycleKey:
        """Ключ для сопоставления циклов между проходами."""
        z = self.points[0]
        return (self.period, round(z.real, 8), round(z.imag, 8))

    @property
    def log_multiplier_abs(self) -> float:
        return math.log(abs(self.multiplier))

    def residual(self, f: RationalMap) -> float:
        z = np.asarray(self.points)
        return float(np.abs(f(z) - np.roll(z, -1)).max())

    def rotated(self, shift: int) -> "Cycle":
        """Тот же цикл с другой базовой точкой (без канонизации)."""
        shift %= self.period
        pts = self.points[shift:] + self.points[:shift]
        return Cycle(points=pts, period=self.period, multiplier=self.multiplier, repelling=self.repelling)


def make_cycle(f: RationalMap, points: Sequence[complex]) -> Cycle:
    """Создает канонический цикл и вычисляет мультипликатор."""
    pts = canonical_points(points)
    multiplier = complex(np.prod(f.derivative(np.asarray(pts))))
    return Cycle(points=pts, period=len(pts), multiplier=multiplier, repelling=abs(multiplier) > 1.0)


def cyclic_newton(f: RationalMap, points: Sequence[complex], tol: float = settings.NEWTON_TOL,
                  max_iter: int = 20) -> Tuple[np.ndarray, int, float]:
    """
    Метод Ньютона для системы {f(z_i) − z_{i+1}} по всему циклу.

    Returns:
        (точки, число итераций, невязка).
    """
    z = np.array(points, dtype=complex)
    n = z.size
    shift = np.roll(np.identity(n), 1, axis=1)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        value, slope = f.value_and_derivative(z)
        residual = value - np.roll(z, -1)
        jacobian = np.diag(slope) - shift
        try:
            step = np.linalg.solve(jacobian, residual)
        except np.linalg.LinAlgError:
            break
        z = z - step
        if np.abs(step).max() <= tol * (1.0 + np.abs(z).max()):
            break
    residual = float(np.abs(f(z) - np.roll(z, -1)).max())
    return z, iterations, residual


def _divisors(n: int) -> List[int]:
    return [p for p in range(1, n + 1) if n % p == 0]


def group_periodic_points(f: RationalMap, points: np.ndarray, n: int,
                          exact: bool = False) -> List[Cycle]:
    """
    Группирует точки с f^n(z) = z в орбиты.

    Args:
        f: Отображение.
        points: Уточненные точки периода, делящего n.
        n: Период.
        exact: Оставить только орбиты точного периода n.

    Returns:
        Циклы, отсортированные по (период, первая точка).
    """
    orbit = np.empty((points.size, n + 1), dtype=complex)
    orbit[:, 0] = points
    for i in range(1, n + 1):
        orbit[:, i] = f(orbit[:, i - 1])

    period = np.full(points.size, n)
    assigned = np.zeros(points.size, dtype=bool)
    for p in _divisors(n):
        close = np.abs(orbit[:, p] - orbit[:, 0]) < settings.POINT_SEPARATION_TOL * 100
        fresh = close & ~assigned
        period[fresh] = p
        assigned |= fresh

    candidates: List[Cycle] = []
    for row, p in zip(orbit, period):
        if exact and p != n:
            continue
        polished, _, residual = cyclic_newton(f, row[:p])
        if residual > settings.CYCLE_RESIDUAL_TOL:
            logger.debug(f"Невязка цикла периода {p}: {residual:.3g}")
        candidates.append(make_cycle(f, polished))
    return sorted(_merge_duplicates(candidates), key=lambda c: (c.period, _point_order(c.points[0])))


def _merge_duplicates(candidates: List[Cycle]) -> List[Cycle]:
    """Оставляет по одному циклу из каждой группы совпадающих орбит (поиск соседей в cKDTree)."""
    if not candidates:
        return []
    owners = np.concatenate([np.full(c.period, i) for i, c in enumerate(candidates)])
    points = np.concatenate([np.asarray(c.points) for c in candidates])
    tree = cKDTree(np.column_stack([points.real, points.imag]))
    firsts = np.array([[c.points[0].real, c.points[0].imag] for c in candidates])
    parent = list(range(len(candidates)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, neighbours in enumerate(tree.query_ball_point(firsts, r=10 * settings.POINT_SEPARATION_TOL)):
        for j in neighbours:
            a, b = find(i), find(int(owners[j]))
            if a != b and candidates[a].period == candidates[b].period:
                parent[max(a, b)] = min(a, b)
    return [c for i, c in enumerate(candidates) if find(i) == i]


def circle_periodic_points(f: RationalMap, n: int, bisection_steps: int = 60) -> np.ndarray:
    """
    Все d^n − 1 решений F^n(θ) = θ + 2πk на окружности (векторная бисекция).
    """
    if f.circle is None:
        raise MapError("Режим 'circle' доступен только для отображений в форме Бляшке")
    form = f.circle
    count = form.degree ** n - 1

    def g(theta: np.ndarray) -> np.ndarray:
        value = np.asarray(theta, dtype=float)
        for _ in range(n):
            value = form.lift(value)
        return value - theta

    two_pi = 2.0 * math.pi
    g0 = float(g(np.array([0.0]))[0])
    k_min = math.ceil(g0 / two_pi - 1e-12)
    targets = two_pi * (k_min + np.arange(count))

    lo = np.zeros(count)
    hi = np.full(count, two_pi)
    for _ in range(bisection_steps):
        mid = 0.5 * (lo + hi)
        below = g(mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    theta = 0.5 * (lo + hi)

    z = np.exp(1j * theta)
    # Полировка Ньютоном для f^n(z) − z
    for _ in range(4):
        value, slope = f.iterate(z, n)
        z = z - (value - z) / (slope - 1.0)
    return z


def _dedupe_points(points: np.ndarray, tol: float) -> np.ndarray:
    if points.size == 0:
        return points
    order = np.lexsort((points.imag, points.real))
    points = points[order]
    kept = [points[0]]
    for z in points[1:]:
        if min(abs(z - k) for k in kept[-64:]) > tol:
            kept.append(z)
    return np.asarray(kept)


def grid_periodic_points(f: RationalMap, n: int, radius: Tuple[float, float] = (0.2, 5.0),
                         seeds_per_point: int = 6, max_iter: int = 60) -> np.ndarray:
    """
    Запасной поиск: Ньютон для f^n(z) − z из полярной сетки начальных точек.
    Оставляются только сошедшиеся отталкивающие точки.
    """
    target = f.degree ** n
    count = max(64, seeds_per_point * target)
    radial = max(4, int(math.sqrt(count / 8)))
    angular = max(16, count // radial)
    radii = np.geomspace(radius[0], radius[1], radial)
    angles = 2.0 * math.pi * (np.arange(angular) + 0.5) / angular
    z = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()

    with np.errstate(all='ignore'):
        for _ in range(max_iter):
            value, slope = f.iterate(z, n)
            step = (value - z) / (slope - 1.0)
            step = np.where(np.isfinite(step), step, 0.0)
            z = z - step
        value, slope = f.iterate(z, n)
        good = np.isfinite(value) & (np.abs(value - z) < 1e-9 * (1 + np.abs(z))) & (np.abs(slope) > 1.0)
    return _dedupe_points(z[good], settings.POINT_SEPARATION_TOL * 100)


def cycles(f: RationalMap, n: int, domain: str = "circle", path=None, exact: bool = False,
           logger_: Optional[logging.Logger] = None) -> List[Cycle]:
    """
    Перечисляет циклы периода, делящего n.

    Args:
        f: Гиперболическое отображение.
        n: Период.
        domain: "circle" (формы Бляшке) или "plane".
        path: Для "plane" - путь ParamPath с path(1) = f и известными циклами в path(0);
            по умолчанию для многочленов берется гомотопия коэффициентов из z^d.
        exact: Только точный период n.

    Returns:
        Список Cycle, упорядоченный по (период, первая точка).
    """
    log = logger_ or logger
    if n < 1:
        raise MapError("Период должен быть не меньше 1")

    if domain == "circle":
        points = circle_periodic_points(f, n)
        found = group_periodic_points(f, points, n, exact=exact)
        expected = f.degree ** n - 1
    elif domain == "plane":
        found = _plane_cycles(f, n, path, log, exact)
        expected = f.degree ** n - 1
    else:
        raise MapError(f"Неизвестный режим перечисления циклов: {domain!r}")

    total = sum(c.period for c in found if n % c.period == 0)
    if not exact and total != expected:
        log.warning(f"Неполное перечисление циклов периода {n}: {total} точек вместо {expected}")
    return found


def _plane_cycles(f: RationalMap, n: int, path, log: logging.Logger, exact: bool) -> List[Cycle]:
    from src.continuation.paths import default_plane_path
    from src.continuation.tracking import continue_cycles

    if path is None and f.circle is not None:
        return cycles(f, n, domain="circle", exact=exact)
    if path is None:
        path = default_plane_path(f)
    if path is None:
        log.info(f"Нет пути продолжения для {f.label or 'отображения'}, используется сетка Ньютона")
        return group_periodic_points(f, grid_periodic_points(f, n), n, exact=exact)

    start = path.map_at(0.0)
    if start.circle is None:
        raise MapError("Начало пути продолжения должно быть отображением в форме Бляшке")
    base = cycles(start, n, domain="circle", exact=exact)
    tracked = continue_cycles(path, base, t_end=1.0)
    return sorted(tracked, key=lambda c: (c.period, _point_order(c.points[0])))


def periodic_cycles_up_to(f: RationalMap, max_period: int, domain: str = "circle", path=None,
                          logger_: Optional[logging.Logger] = None) -> List[Cycle]:
    """Все примитивные циклы периодов 1..max_period (по одному разу)."""
    seen: Dict[CycleKey, Cycle] = {}
    for n in range(1, max_period + 1):
        for cycle in cycles(f, n, domain=domain, path=path, exact=True, logger_=logger_):
            seen.setdefault(cycle.key, cycle)
    return sorted(seen.values(), key=lambda c: (c.period, _point_order(c.points[0])))


def iter_cycle_rows(found: Iterable[Cycle]) -> List[list]:
    """Строки CSV: period, re(z₀), im(z₀), re(λ), im(λ), repelling."""
    return [[c.period, c.points[0].real, c.points[0].imag, c.multiplier.real, c.multiplier.imag, c.repelling]
            for c in found]
