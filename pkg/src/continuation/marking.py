# src/continuation/marking.py
"""
Перенос циклического порядка неподвижных точек вдоль пути к локусу Бляшке.

Метки 0..d: метка 0 - точка 0, метка 1 - точка ∞, метка 2 - точка 1,
остальные конечные неподвижные точки нумеруются по аргументу. Классы
разметок: пара меток {0, ∞} без порядка и циклический порядок остальных
меток с точностью до одновременной перестановки 0 ↔ ∞ и обращения
ориентации (сопряжение z ↦ 1/z).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from src.continuation.paths import ConstantPath, ParamPath, SegmentPath
from src.continuation.tracking import track_cycles
from src.maps.cycles import make_cycle
from src.maps.quasi_blaschke import QBPoint, is_blaschke_point, qb, symmetrization
from src.maps.rational_map import fixed_points, is_infinite
from src.utils.exceptions import CollisionError, ContinuationError, TrackingError

logger = logging.getLogger("Marking")

MarkingKey = Tuple[int, int, Tuple[int, ...]]


def _rotate_to_min(order: Sequence[int]) -> Tuple[int, ...]:
    order = tuple(order)
    if not order:
        return order
    start = order.index(min(order))
    return order[start:] + order[:start]


def canonical_marking(zero_label: int, infinity_label: int, cyclic_order: Sequence[int]) -> MarkingKey:
    """Канонический представитель класса разметки."""
    direct = (zero_label, infinity_label, _rotate_to_min(cyclic_order))
    swapped = (infinity_label, zero_label, _rotate_to_min(tuple(reversed(tuple(cyclic_order)))))
    return min(direct, swapped)


@lru_cache(maxsize=None)
def marking_classes(d: int) -> Tuple[MarkingKey, ...]:
    """
    Все классы разметок для степени d, отсортированные.

    Их число равно (d + 1)!/(2(d − 1)).
    """
    if d < 2:
        raise ValueError("Степень должна быть не меньше 2")
    classes = set()
    for perm in permutations(range(d + 1)):
        classes.add(canonical_marking(perm[0], perm[1], perm[2:]))
    result = tuple(sorted(classes))
    expected = math.factorial(d + 1) // (2 * (d - 1))
    if len(result) != expected:
        raise RuntimeError(f"Число классов разметок {len(result)} != {expected}")
    return result


@dataclass(frozen=True)
class MarkingLabel:
    """
    Циклический порядок, перенесенный на локус Бляшке.

    Attributes:
        zero_label: Метка точки 0.
        infinity_label: Метка точки ∞.
        cyclic_order: Метки остальных точек против часовой стрелки, начиная с метки точки 1.
        class_key: Канонический представитель класса.
        class_index: Номер класса в marking_classes(d).
        endpoint_arguments: Аргументы точек на окружности в конце пути (в порядке cyclic_order).
    """
    zero_label: int
    infinity_label: int
    cyclic_order: Tuple[int, ...]
    class_key: MarkingKey
    class_index: int
    endpoint_arguments: Tuple[float, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"zero": self.zero_label, "infinity": self.infinity_label,
                "cyclic_order": list(self.cyclic_order),
                "class": [self.class_key[0], self.class_key[1], list(self.class_key[2])],
                "class_index": self.class_index,
                "endpoint_arguments": list(self.endpoint_arguments)}


def _default_labels(points: List[complex]) -> Dict[int, complex]:
    """Метки 0, ∞, 1, затем остальные точки по аргументу в [0, 2π)."""
    finite = [i for i, z in enumerate(points) if not is_infinite(z)]
    zero = min(finite, key=lambda i: abs(points[i]))
    rest = [i for i in finite if i != zero]
    one = min(rest, key=lambda i: abs(points[i] - 1.0))
    others = sorted((i for i in rest if i != one), key=lambda i: cmath.phase(points[i]) % (2.0 * math.pi))
    labels = {0: points[zero], 1: complex(math.inf, 0.0), 2: points[one]}
    for k, i in enumerate(others):
        labels[3 + k] = points[i]
    return labels


def _user_labels(points: List[complex], marking: Sequence[complex]) -> Dict[int, complex]:
    """Сопоставляет пользовательскую разметку ближайшим неподвижным точкам."""
    if len(marking) != len(points):
        raise ContinuationError(f"Разметка должна содержать {len(points)} точек")
    labels: Dict[int, complex] = {}
    used = set()
    for label, target in enumerate(marking):
        if is_infinite(complex(target)):
            candidates = [i for i, z in enumerate(points) if is_infinite(z) and i not in used]
        else:
            candidates = sorted((i for i, z in enumerate(points) if not is_infinite(z) and i not in used),
                                key=lambda i: abs(points[i] - complex(target)))
        if not candidates:
            raise ContinuationError(f"Точка разметки {target} не является неподвижной")
        used.add(candidates[0])
        labels[label] = points[candidates[0]]
    return labels


def transport_marking(point: QBPoint, path: Optional[ParamPath] = None, steps: int = settings.TRACK_GRID,
                      marking: Optional[Sequence[complex]] = None, seed: int = settings.DEFAULT_SEED,
                      logger_: Optional[logging.Logger] = None) -> MarkingLabel:
    """
    Вычисляет класс разметки точки QB переносом к локусу Бляшке.

    Args:
        point: Сертифицированная точка (начало пути, t = 0).
        path: Путь с концом на локусе Бляшке при t = 1 (по умолчанию отрезок к симметризации).
        steps: Число узлов сетки продолжения.
        marking: Необязательная пользовательская разметка d + 1 неподвижных точек.

    Returns:
        MarkingLabel.

    Raises:
        CollisionError: Если две неподвижные точки сближаются ближе COLLISION_TOL.
        TrackingError: Если продолжение не удалось.
    """
    log = logger_ or logger
    f0 = qb(point)
    d = point.degree
    points = [fp.point for fp in fixed_points(f0, seed=seed, logger_=log)]
    labels = _user_labels(points, marking) if marking is not None else _default_labels(points)

    zero_label = next(k for k, z in labels.items() if not is_infinite(z) and abs(z) < 1e-10)
    infinity_label = next(k for k, z in labels.items() if is_infinite(z))
    moving = sorted(k for k in labels if k not in (zero_label, infinity_label))

    if path is None:
        on_locus, _ = is_blaschke_point(point)
        path = ConstantPath(f0) if on_locus else SegmentPath(point, symmetrization(point))

    grid = tuple(np.linspace(0.0, 1.0, steps + 1))
    if path.is_constant:
        grid = (0.0,)
    cycles = [make_cycle(f0, [labels[k]]) for k in moving]
    bundle = track_cycles(path, cycles, grid=grid, workers=1, logger_=log)
    if bundle.failures:
        index, error = next(iter(bundle.failures.items()))
        raise TrackingError(f"Неподвижная точка с меткой {moving[index]} не продолжена: {error}",
                            last_t=error.last_t)

    nodes = np.array([[track.points[i][0] for track in bundle.tracks] for i in range(len(bundle.grid))])
    for i, t in enumerate(bundle.grid):
        row = np.concatenate([[0.0], nodes[i]])
        gaps = np.abs(row[:, None] - row[None, :]) + np.identity(row.size)
        if gaps.min() < settings.COLLISION_TOL:
            raise CollisionError(f"Неподвижные точки сблизились при t={t:.6g}: разметка не определена")

    end = nodes[-1]
    f_end = path.map_at(float(bundle.grid[-1]))
    if f_end.circle is None:
        log.warning("Конец пути не лежит на локусе Бляшке: порядок берется по аргументу")
    arguments = [(cmath.phase(z) % (2.0 * math.pi), k) for z, k in zip(end, moving)]
    start_label = min(moving, key=lambda k: abs(end[moving.index(k)] - 1.0))
    arguments.sort()
    order = [k for _, k in arguments]
    shift = order.index(start_label)
    order = order[shift:] + order[:shift]
    angles = [a for a, _ in arguments]
    angles = angles[shift:] + angles[:shift]

    key = canonical_marking(zero_label, infinity_label, order)
    classes = marking_classes(d)
    return MarkingLabel(zero_label=zero_label, infinity_label=infinity_label, cyclic_order=tuple(order),
                        class_key=key, class_index=classes.index(key), endpoint_arguments=tuple(angles))
