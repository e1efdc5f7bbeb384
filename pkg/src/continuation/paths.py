# src/continuation/paths.py
"""
Пути в пространстве параметров t ↦ f_t.

Варианты: отрезок между точками QB, касательная прямая в точке QB,
гомотопия коэффициентов двух отображений, постоянный путь и
перепараметризация t ↦ path(c·t).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config import settings
from src.maps.quasi_blaschke import QBPoint, TangentVector, qb, qb_point_from_spec, symmetrization
from src.maps.rational_map import RationalMap, map_from_spec, polynomial
from src.utils.exceptions import SpecFormatError


class ParamPath:
    """
    Базовый класс гладкого пути f_t, t ∈ [−T, T].

    Подклассы определяют map_at; point_at и tangent доступны для путей в QB.
    """

    t_range: Tuple[float, float] = (-1.0, 1.0)

    def map_at(self, t: float) -> RationalMap:
        raise NotImplementedError

    def point_at(self, t: float) -> Optional[QBPoint]:
        return None

    @property
    def tangent(self) -> Optional[TangentVector]:
        return None

    @property
    def is_constant(self) -> bool:
        return False

    @property
    def default_h(self) -> float:
        lo, hi = self.t_range
        return settings.CONTINUATION_H * max(1.0, hi - lo)

    def to_spec(self) -> Dict[str, Any]:
        raise NotImplementedError


class _QBLinePath(ParamPath):
    """Прямая t ↦ (a + t·da, b + t·db); отображения кэшируются по t."""

    def __init__(self, base: QBPoint, direction: TangentVector, t_range: Tuple[float, float]):
        self.base = base
        self.direction = direction
        self.t_range = t_range
        self._map_cache = lru_cache(maxsize=256)(self._build)

    def _build(self, t: float) -> RationalMap:
        if t == 0.0:
            return qb(self.base)
        return qb(self.base.moved(self.direction, t))

    def point_at(self, t: float) -> QBPoint:
        return self.base if t == 0.0 else self.base.moved(self.direction, t)

    def map_at(self, t: float) -> RationalMap:
        return self._map_cache(float(t))

    @property
    def tangent(self) -> TangentVector:
        return self.direction

    @property
    def is_constant(self) -> bool:
        return self.direction.norm() == 0.0


class SegmentPath(_QBLinePath):
    """Отрезок из start (t = 0) в end (t = 1)."""

    def __init__(self, start: QBPoint, end: QBPoint):
        direction = TangentVector(da=tuple(np.asarray(end.a) - np.asarray(start.a)),
                                  db=tuple(np.asarray(end.b) - np.asarray(start.b)))
        super().__init__(start, direction, (0.0, 1.0))
        self.end = end

    def point_at(self, t: float) -> QBPoint:
        if t == 1.0:
            return self.end
        return super().point_at(t)

    def map_at(self, t: float) -> RationalMap:
        if t == 1.0:
            return qb(self.end)
        return super().map_at(t)

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "segment", "from": self.base.to_spec(), "to": self.end.to_spec()}


class TangentPath(_QBLinePath):
    """Прямая через точку at в направлении dir на [−T, T]."""

    def __init__(self, at: QBPoint, direction: TangentVector, t_max: float = settings.DEFAULT_T_MAX):
        super().__init__(at, direction, (-t_max, t_max))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "tangent", "at": self.base.to_spec(), "dir": self.direction.to_spec(),
                "t_max": self.t_range[1]}


class MapSegmentPath(ParamPath):
    """Гомотопия коэффициентов p_t = (1 − t)p₀ + t·p₁, q_t аналогично."""

    def __init__(self, start: RationalMap, end: RationalMap, t_range: Tuple[float, float] = (0.0, 1.0)):
        self.start = start
        self.end = end
        self.t_range = t_range
        size_p = max(len(start.p), len(end.p))
        size_q = max(len(start.q), len(end.q))
        self._p0, self._p1 = _padded(start.p, size_p), _padded(end.p, size_p)
        self._q0, self._q1 = _padded(start.q, size_q), _padded(end.q, size_q)
        self._map_cache = lru_cache(maxsize=256)(self._build)

    def _build(self, t: float) -> RationalMap:
        if t == 0.0:
            return self.start
        if t == 1.0:
            return self.end
        p = (1.0 - t) * self._p0 + t * self._p1
        q = (1.0 - t) * self._q0 + t * self._q1
        return RationalMap(p=tuple(p), q=tuple(q), label=f"homotopy(t={t:.6g})")

    def map_at(self, t: float) -> RationalMap:
        return self._map_cache(float(t))

    @property
    def is_constant(self) -> bool:
        return bool(np.array_equal(self._p0, self._p1) and np.array_equal(self._q0, self._q1))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "map_segment", "from": self.start.to_spec(), "to": self.end.to_spec(),
                "t_range": list(self.t_range)}


class ConstantPath(ParamPath):
    """f_t = f для всех t."""

    def __init__(self, f: RationalMap, t_max: float = settings.DEFAULT_T_MAX):
        self.f = f
        self.t_range = (-t_max, t_max)

    def map_at(self, t: float) -> RationalMap:
        return self.f

    def point_at(self, t: float) -> Optional[QBPoint]:
        return self.f.origin if isinstance(self.f.origin, QBPoint) else None

    @property
    def tangent(self) -> Optional[TangentVector]:
        point = self.point_at(0.0)
        return TangentVector.zero(point.degree - 1) if point is not None else None

    @property
    def is_constant(self) -> bool:
        return True

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "constant", "map": self.f.to_spec(), "t_max": self.t_range[1]}


class ScaledPath(ParamPath):
    """Перепараметризация t ↦ base(c·t); касательный вектор умножается на c."""

    def __init__(self, base: ParamPath, factor: float):
        self.base = base
        self.factor = float(factor)
        lo, hi = base.t_range
        if self.factor == 0.0:
            self.t_range = (lo, hi)
        else:
            ends = sorted((lo / self.factor, hi / self.factor))
            self.t_range = (ends[0], ends[1])

    def map_at(self, t: float) -> RationalMap:
        return self.base.map_at(self.factor * t)

    def point_at(self, t: float) -> Optional[QBPoint]:
        return self.base.point_at(self.factor * t)

    @property
    def tangent(self) -> Optional[TangentVector]:
        tangent = self.base.tangent
        return tangent.scaled(self.factor) if tangent is not None else None

    @property
    def is_constant(self) -> bool:
        return self.factor == 0.0 or self.base.is_constant

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "scaled", "path": self.base.to_spec(), "factor": self.factor}


def _padded(coeffs, size: int) -> np.ndarray:
    result = np.zeros(size, dtype=complex)
    result[:len(coeffs)] = coeffs
    return result


def default_plane_path(f: RationalMap) -> Optional[ParamPath]:
    """
    Путь продолжения к f из отображения с циклами на окружности.

    Для точки QB - отрезок из ее симметризации; для многочлена -
    гомотопия коэффициентов из z^d; иначе None.
    """
    if isinstance(f.origin, QBPoint):
        return SegmentPath(symmetrization(f.origin), f.origin)
    if isinstance(f.origin, dict) and f.origin.get("type") == "poly":
        monomial = polynomial([0.0] * f.degree + [1.0], label=f"z^{f.degree}")
        return MapSegmentPath(monomial, f)
    return None


def path_from_spec(spec: Dict[str, Any], t_max: float = settings.DEFAULT_T_MAX) -> ParamPath:
    """
    Создает путь из JSON-спецификации.

    Поддерживаются "segment", "tangent", "map_segment", "constant" и "scaled".

    Raises:
        SpecFormatError: Если тип пути неизвестен или поля отсутствуют.
    """
    kind = spec.get("type")
    try:
        if kind == "segment":
            return SegmentPath(qb_point_from_spec(spec["from"]), qb_point_from_spec(spec["to"]))
        if kind == "tangent":
            return TangentPath(qb_point_from_spec(spec["at"]), TangentVector.from_spec(spec["dir"]),
                               float(spec.get("t_max", t_max)))
        if kind == "map_segment":
            t_range = tuple(spec.get("t_range", (0.0, 1.0)))
            return MapSegmentPath(map_from_spec(spec["from"]), map_from_spec(spec["to"]),
                                  (float(t_range[0]), float(t_range[1])))
        if kind == "constant":
            return ConstantPath(map_from_spec(spec["map"]), float(spec.get("t_max", t_max)))
        if kind == "scaled":
            return ScaledPath(path_from_spec(spec["path"], t_max), float(spec["factor"]))
    except KeyError as e:
        raise SpecFormatError(f"В спецификации пути '{kind}' нет поля {e}")
    raise SpecFormatError(f"Неизвестный тип пути: {kind!r}")
