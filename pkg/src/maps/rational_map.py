# src/maps/rational_map.py
"""
Рациональные отображения f = p/q, произведения Бляшке и неподвижные точки.

Коэффициенты многочленов хранятся по возрастанию степеней. Точка ∞
обрабатывается через карту w = 1/z.
"""

import cmath
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from config import settings
from src.maps.roots import aberth_ehrlich, trim_coefficients
from src.utils.exceptions import DegenerateMapError, MapError, SpecFormatError

logger = logging.getLogger("RationalMap")

INFINITY = complex(float("inf"), 0.0)


def is_infinite(z: complex) -> bool:
    return not cmath.isfinite(z)


@dataclass(frozen=True)
class CircleForm:
    """
    Представление f(z) = c·z·Π (z − α_j)/(1 − ᾱ_j z) с |c| = 1, |α_j| < 1.

    Используется для перечисления циклов на единичной окружности.
    """
    factor: complex
    zeros: Tuple[complex, ...]

    @property
    def degree(self) -> int:
        return 1 + len(self.zeros)

    def lift(self, theta: np.ndarray) -> np.ndarray:
        """
        Непрерывный подъем f|S¹ на R: F(θ) = dθ + arg c + 2·Σ Arg(1 − α_j e^{−iθ}).
        """
        theta = np.asarray(theta, dtype=float)
        value = self.degree * theta + cmath.phase(self.factor)
        for alpha in self.zeros:
            value = value + 2.0 * np.angle(1.0 - alpha * np.exp(-1j * theta))
        return value


@dataclass(frozen=True)
class RationalMap:
    """
    Рациональное отображение степени d ≥ 2.

    Attributes:
        p: Коэффициенты числителя по возрастанию степеней.
        q: Коэффициенты знаменателя по возрастанию степеней.
        circle: Форма Бляшке, если отображение сохраняет единичную окружность.
        label: Краткое описание для отчетов.
        origin: Параметры, из которых построено отображение (например, QBPoint).
    """
    p: Tuple[complex, ...]
    q: Tuple[complex, ...]
    circle: Optional[CircleForm] = None
    label: str = field(default="", compare=False)
    origin: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        p = trim_coefficients(self.p)
        q = trim_coefficients(self.q)
        object.__setattr__(self, "p", tuple(complex(c) for c in p))
        object.__setattr__(self, "q", tuple(complex(c) for c in q))
        if np.abs(q).max() == 0:
            raise DegenerateMapError("Знаменатель тождественно равен нулю")
        if self.degree < 2:
            raise DegenerateMapError(f"Степень отображения должна быть ≥ 2, получено {self.degree}")
        self._check_common_factor()

    def _check_common_factor(self):
        """Отклоняет p и q с общим корнем (результант ≈ 0)."""
        p = np.asarray(self.p)
        q = np.asarray(self.q)
        small, large = (q, p) if q.size <= p.size else (p, q)
        if small.size < 2:
            return
        scale = np.abs(large).max()
        for root in aberth_ehrlich(small):
            magnitude = max(1.0, abs(root)) ** (large.size - 1)
            if abs(P.polyval(root, large)) < 1e-10 * scale * magnitude:
                raise DegenerateMapError(f"Числитель и знаменатель имеют общий корень {root:.6g}")

    @property
    def degree(self) -> int:
        return max(len(self.p), len(self.q)) - 1

    @cached_property
    def _p(self) -> np.ndarray:
        return np.asarray(self.p, dtype=complex)

    @cached_property
    def _q(self) -> np.ndarray:
        return np.asarray(self.q, dtype=complex)

    @cached_property
    def _dp(self) -> np.ndarray:
        return P.polyder(self._p) if self._p.size > 1 else np.zeros(1, dtype=complex)

    @cached_property
    def _dq(self) -> np.ndarray:
        return P.polyder(self._q) if self._q.size > 1 else np.zeros(1, dtype=complex)

    def evaluate(self, z):
        """Значение f(z) (векторно)."""
        return P.polyval(z, self._p) / P.polyval(z, self._q)

    __call__ = evaluate

    def derivative(self, z):
        """Производная f'(z) = (p'q − pq')/q² (векторно)."""
        pv = P.polyval(z, self._p)
        qv = P.polyval(z, self._q)
        return (P.polyval(z, self._dp) * qv - pv * P.polyval(z, self._dq)) / (qv * qv)

    def value_and_derivative(self, z) -> Tuple[Any, Any]:
        pv = P.polyval(z, self._p)
        qv = P.polyval(z, self._q)
        return pv / qv, (P.polyval(z, self._dp) * qv - pv * P.polyval(z, self._dq)) / (qv * qv)

    def iterate(self, z, n: int):
        """n-я итерация f^n(z) и производная (f^n)'(z) по правилу цепочки."""
        value = np.asarray(z, dtype=complex)
        slope = np.ones_like(value)
        for _ in range(n):
            value, d = self.value_and_derivative(value)
            slope = slope * d
        return value, slope

    def chart_at_infinity(self) -> "RationalMap":
        """Отображение g(w) = 1/f(1/w) в карте w = 1/z."""
        d = self.degree
        p = np.zeros(d + 1, dtype=complex)
        q = np.zeros(d + 1, dtype=complex)
        p[:len(self.p)] = self.p
        q[:len(self.q)] = self.q
        return RationalMap(p=tuple(q[::-1]), q=tuple(p[::-1]), label=f"chart∞({self.label})")

    def multiplier_at(self, z: complex) -> complex:
        """Мультипликатор f'(z) в неподвижной точке (∞ через карту w = 1/z)."""
        if is_infinite(z):
            return complex(self.chart_at_infinity().derivative(0.0))
        return complex(self.derivative(z))

    def fixed_point_polynomial(self) -> np.ndarray:
        """Коэффициенты числителя f(z) − z, то есть p − z·q."""
        zq = np.concatenate([[0.0], self._q])
        size = max(zq.size, self._p.size)
        result = np.zeros(size, dtype=complex)
        result[:self._p.size] += self._p
        result[:zq.size] -= zq
        return trim_coefficients(result)

    def critical_polynomial(self) -> np.ndarray:
        """Коэффициенты p'q − pq' (конечные критические точки)."""
        return trim_coefficients(P.polysub(P.polymul(self._dp, self._q), P.polymul(self._p, self._dq)))

    def to_spec(self) -> Dict[str, Any]:
        if isinstance(self.origin, dict):
            return dict(self.origin)
        if self.origin is not None and hasattr(self.origin, "to_spec"):
            return self.origin.to_spec()
        return {"type": "rational",
                "p": [[c.real, c.imag] for c in self.p],
                "q": [[c.real, c.imag] for c in self.q]}


@dataclass(frozen=True)
class FixedPoint:
    """Неподвижная точка и ее мультипликатор."""
    point: complex
    multiplier: complex

    @property
    def at_infinity(self) -> bool:
        return is_infinite(self.point)


def polynomial(coeffs: Sequence[complex], label: str = "") -> RationalMap:
    """Многочлен с коэффициентами по возрастанию степеней."""
    values = tuple(complex(c) for c in trim_coefficients(coeffs))
    origin = {"type": "poly", "coeffs": [[c.real, c.imag] for c in values]}
    circle = None
    # c·z^d с |c| = 1 сохраняет единичную окружность
    if len(values) > 2 and all(c == 0 for c in values[:-1]) and abs(abs(values[-1]) - 1.0) < 1e-15:
        circle = CircleForm(values[-1], (0j,) * (len(values) - 2))
    return RationalMap(p=values, q=(1.0 + 0j,), circle=circle, label=label or "poly", origin=origin)


def _expand_blaschke(factor: complex, zeros: Sequence[complex]) -> Tuple[np.ndarray, np.ndarray]:
    p = np.array([0.0, factor], dtype=complex)
    q = np.array([1.0], dtype=complex)
    for alpha in zeros:
        p = P.polymul(p, [-alpha, 1.0])
        q = P.polymul(q, [1.0, -np.conj(alpha)])
    return p, q


def blaschke(a: Sequence[complex], d: Optional[int] = None, factor: complex = 1.0) -> RationalMap:
    """
    Конечное произведение Бляшке f(z) = z·Π (z − a_i)/(1 − ā_i z).

    Args:
        a: Нули a_1..a_{d-1} внутри единичного круга.
        d: Степень (по умолчанию len(a) + 1).
        factor: Унимодулярный множитель.

    Raises:
        MapError: Если |a_i| ≥ 1 или длина a не равна d − 1.
    """
    zeros = tuple(complex(v) for v in a)
    if d is not None and len(zeros) != d - 1:
        raise MapError(f"Для степени {d} нужно {d - 1} нулей, получено {len(zeros)}")
    if any(abs(v) >= 1.0 for v in zeros):
        raise MapError("Нули произведения Бляшке должны лежать в единичном круге")
    if abs(abs(factor) - 1.0) > 1e-12:
        raise MapError("Множитель произведения Бляшке должен быть унимодулярным")
    p, q = _expand_blaschke(complex(factor), zeros)
    label = "blaschke(" + ", ".join(f"{v:.6g}" for v in zeros) + ")"
    origin = {"type": "blaschke", "a": [[v.real, v.imag] for v in zeros]}
    return RationalMap(p=tuple(p), q=tuple(q), circle=CircleForm(complex(factor), zeros), label=label,
                       origin=origin if factor == 1.0 else None)


def fixed_points(f: RationalMap, seed: int = settings.DEFAULT_SEED,
                 logger_: Optional[logging.Logger] = None) -> List[FixedPoint]:
    """
    Все d+1 неподвижных точек с кратностью и их мультипликаторы.

    Конечные точки - корни p − z·q (Аберт–Эрлих + Ньютон); недостающие
    до d+1 корни лежат в ∞.

    Returns:
        Список FixedPoint: конечные точки по (Re, Im), затем ∞.
    """
    log = logger_ or logger
    roots = aberth_ehrlich(f.fixed_point_polynomial(), seed=seed)
    points = [complex(r) for r in roots]
    missing = f.degree + 1 - len(points)
    points.extend([INFINITY] * missing)

    finite = [z for z in points if not is_infinite(z)]
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            if abs(finite[i] - finite[j]) < settings.MULTIPLICITY_TOL:
                log.warning(f"Кратная неподвижная точка около {finite[i]:.6g}: "
                            f"отображение вне гиперболических компонент")
    if missing > 1:
        log.warning("Кратная неподвижная точка в ∞")

    return [FixedPoint(point=z, multiplier=f.multiplier_at(z)) for z in points]


def critical_points(f: RationalMap, seed: int = settings.DEFAULT_SEED) -> List[complex]:
    """
    Все 2d − 2 критические точки с кратностью; недостающие конечные - в ∞.
    """
    roots = [complex(r) for r in aberth_ehrlich(f.critical_polynomial(), seed=seed)]
    roots.extend([INFINITY] * (2 * f.degree - 2 - len(roots)))
    return roots


def _complex_list(raw: Any, name: str) -> List[complex]:
    if not isinstance(raw, list):
        raise SpecFormatError(f"Поле '{name}' должно быть списком")
    values = []
    for item in raw:
        if isinstance(item, (list, tuple)) and len(item) == 2:
            values.append(complex(float(item[0]), float(item[1])))
        elif isinstance(item, (int, float)):
            values.append(complex(float(item), 0.0))
        else:
            raise SpecFormatError(f"Некорректное комплексное число в поле '{name}': {item!r}")
    return values


def map_from_spec(spec: Dict[str, Any]) -> RationalMap:
    """
    Создает отображение из JSON-спецификации.

    Поддерживаются {"type":"poly","coeffs":[...]}, {"type":"blaschke","a":[...]},
    {"type":"qb","a":[...],"b":[...]} и {"type":"rational","p":[...],"q":[...]}.
    """
    kind = spec.get("type")
    if kind == "poly":
        return polynomial(_complex_list(spec.get("coeffs"), "coeffs"))
    if kind == "blaschke":
        return blaschke(_complex_list(spec.get("a"), "a"))
    if kind == "qb":
        from src.maps.quasi_blaschke import qb, qb_point_from_spec
        return qb(qb_point_from_spec(spec))
    if kind == "rational":
        return RationalMap(p=tuple(_complex_list(spec.get("p"), "p")),
                           q=tuple(_complex_list(spec.get("q"), "q")))
    raise SpecFormatError(f"Неизвестный тип отображения: {kind!r}")


def complex_list_from_spec(raw: Any, name: str) -> List[complex]:
    """Разбирает список комплексных чисел [[re, im], ...] или вещественных."""
    return _complex_list(raw, name)
