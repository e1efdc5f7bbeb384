# src/maps/quasi_blaschke.py
"""
Квазиблашкевы отображения в нормальной форме

    Q_{a,b}(z) = Π (1 + b_j)/(1 + a_j) · z · Π (z + a_j)/(1 + b_j z),

инволюция ι, локус Бляшке, разложение касательных векторов и
сертификация принадлежности гиперболической компоненте.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import linear_sum_assignment

from config import settings
from src.maps.rational_map import CircleForm, RationalMap, complex_list_from_spec, critical_points, is_infinite
from src.utils.exceptions import (
    AmbiguousPairingError, DenominatorError, MapError, NotBlaschkeError, SpecFormatError,
)

logger = logging.getLogger("QuasiBlaschke")


def _as_tuple(values: Sequence[complex]) -> Tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class TangentVector:
    """
    Касательный вектор (da, db) в координатах (a, b).

    Комплексная структура J действует умножением всех компонент на i.
    """
    da: Tuple[complex, ...]
    db: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "da", _as_tuple(self.da))
        object.__setattr__(self, "db", _as_tuple(self.db))
        if len(self.da) != len(self.db):
            raise MapError("Компоненты da и db касательного вектора должны иметь одинаковую длину")

    @classmethod
    def zero(cls, size: int) -> "TangentVector":
        return cls(da=(0j,) * size, db=(0j,) * size)

    def as_array(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.da), np.asarray(self.db)])

    @classmethod
    def from_array(cls, values: np.ndarray) -> "TangentVector":
        half = values.size // 2
        return cls(da=tuple(values[:half]), db=tuple(values[half:]))

    def scaled(self, c: complex) -> "TangentVector":
        return TangentVector.from_array(c * self.as_array())

    def j(self) -> "TangentVector":
        """J·v."""
        return self.scaled(1j)

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector.from_array(self.as_array() - other.as_array())

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def to_spec(self) -> Dict[str, Any]:
        return {"da": [[v.real, v.imag] for v in self.da], "db": [[v.real, v.imag] for v in self.db]}

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> "TangentVector":
        return cls(da=tuple(complex_list_from_spec(spec.get("da"), "da")),
                   db=tuple(complex_list_from_spec(spec.get("db"), "db")))


@dataclass(frozen=True)
class QBPoint:
    """
    Точка QB_d^fm в координатах (a, b).

    Attributes:
        a: Параметры числителя a_1..a_{d−1}.
        b: Параметры знаменателя b_1..b_{d−1}.
        validated: Точка сертифицирована внутри гиперболической компоненты.
    """
    a: Tuple[complex, ...]
    b: Tuple[complex, ...]
    validated: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_tuple(self.a))
        object.__setattr__(self, "b", _as_tuple(self.b))
        if len(self.a) != len(self.b):
            raise MapError(f"Длины a ({len(self.a)}) и b ({len(self.b)}) должны совпадать")
        if not self.a:
            raise MapError("Степень квазиблашкева отображения должна быть ≥ 2")
        for name, values in (("a", self.a), ("b", self.b)):
            for j, v in enumerate(values):
                if abs(1.0 + v) < 1e-14:
                    raise DenominatorError(f"Знаменатель нормальной формы обращается в ноль: 1 + {name}_{j + 1} = 0")

    @property
    def degree(self) -> int:
        return len(self.a) + 1

    def moved(self, v: TangentVector, t: float) -> "QBPoint":
        """Точка (a + t·da, b + t·db)."""
        a = np.asarray(self.a) + t * np.asarray(v.da)
        b = np.asarray(self.b) + t * np.asarray(v.db)
        return QBPoint(a=tuple(a), b=tuple(b))

    def with_validated(self, validated: bool = True) -> "QBPoint":
        return QBPoint(a=self.a, b=self.b, validated=validated)

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "qb",
                "a": [[v.real, v.imag] for v in self.a],
                "b": [[v.real, v.imag] for v in self.b]}


def qb_point_from_spec(spec: Dict[str, Any]) -> QBPoint:
    """Создает QBPoint из {"type":"qb","a":[…],"b":[…]}."""
    if "a" not in spec or "b" not in spec:
        raise SpecFormatError("Спецификация qb должна содержать поля 'a' и 'b'")
    a = complex_list_from_spec(spec["a"], "a")
    b = complex_list_from_spec(spec["b"], "b")
    if len(a) != len(b):
        raise SpecFormatError("Поля 'a' и 'b' должны иметь одинаковую длину")
    return QBPoint(a=tuple(a), b=tuple(b))


def normal_form_factor(point: QBPoint) -> complex:
    """Нормирующий множитель Π (1 + b_j)/(1 + a_j), дающий Q(1) = 1."""
    factor = 1.0 + 0j
    for a, b in zip(point.a, point.b):
        factor *= (1.0 + b) / (1.0 + a)
    return factor


def qb(point: QBPoint) -> RationalMap:
    """
    Отображение Q_{a,b} в коэффициентной форме.

    Q(0) = 0, Q(∞) = ∞, Q(1) = 1. На локусе Бляшке (b = ā, |a_j| < 1)
    к отображению прикрепляется форма Бляшке с нулями −a_j.

    Raises:
        DenominatorError: Если 1 + a_j = 0 или 1 + b_j = 0.
    """
    factor = normal_form_factor(point)
    p = np.array([0.0, factor], dtype=complex)
    q = np.array([1.0], dtype=complex)
    for a, b in zip(point.a, point.b):
        p = P.polymul(p, [a, 1.0])
        q = P.polymul(q, [1.0, b])

    circle = None
    on_locus, pairing = _pairing(point, settings.BLASCHKE_TOL)
    if on_locus and all(abs(v) < 1.0 for v in point.a):
        # При b = ā множитель унимодулярен
        circle = CircleForm(factor / abs(factor), tuple(-v for v in point.a))

    label = ("qb(a=[" + ", ".join(f"{v:.6g}" for v in point.a) + "], b=["
             + ", ".join(f"{v:.6g}" for v in point.b) + "])")
    return RationalMap(p=tuple(p), q=tuple(q), circle=circle, label=label, origin=point)


def involution(point: QBPoint) -> QBPoint:
    """ι: ([a], [b]) ↦ ([b̄], [ā])."""
    return QBPoint(a=tuple(np.conj(point.b)), b=tuple(np.conj(point.a)), validated=point.validated)


def _pairing(point: QBPoint, tol: float) -> Tuple[bool, Tuple[int, ...]]:
    a = np.asarray(point.a)
    b = np.asarray(point.b)
    cost = np.abs(b[:, None] - np.conj(a)[None, :])
    rows, cols = linear_sum_assignment(cost)
    permutation = tuple(int(c) for c in cols[np.argsort(rows)])
    matched = cost[np.arange(b.size), list(permutation)]
    return bool(matched.max() < tol), permutation


def is_blaschke_point(point: QBPoint, tol: float = settings.BLASCHKE_TOL) -> Tuple[bool, Tuple[int, ...]]:
    """
    Проверяет, лежит ли точка на локусе Бляшке (неподвижном множестве ι).

    Args:
        point: Точка QB.
        tol: Допуск |b_j − conj(a_{π(j)})|.

    Returns:
        (результат, перестановка π с b_j ≈ conj(a_{π(j)})).

    Raises:
        AmbiguousPairingError: Если две различные пары одинаково допустимы.
    """
    on_locus, permutation = _pairing(point, tol)
    if not on_locus:
        return False, permutation

    a = np.asarray(point.a)
    b = np.asarray(point.b)
    size = len(permutation)
    for j1 in range(size):
        for j2 in range(j1 + 1, size):
            k1, k2 = permutation[j1], permutation[j2]
            if a[k1] == a[k2]:
                continue
            swapped = max(abs(b[j1] - np.conj(a[k2])), abs(b[j2] - np.conj(a[k1])))
            if swapped < tol:
                raise AmbiguousPairingError(
                    f"Пары для b_{j1 + 1} и b_{j2 + 1} неразличимы при допуске {tol:g}")
    return True, permutation


def _ordered_like_a(point: QBPoint, permutation: Sequence[int], values: Sequence[complex]) -> np.ndarray:
    """Переставляет компоненты, относящиеся к b, так что b_new[π(j)] = b[j]."""
    result = np.empty(len(values), dtype=complex)
    for j, k in enumerate(permutation):
        result[k] = values[j]
    return result


def tangent_decompose(point: QBPoint, v: TangentVector,
                      tol: float = settings.BLASCHKE_TOL) -> Tuple[TangentVector, TangentVector]:
    """
    Разложение v = w₁ + J·w₂ с w₁ ∈ T B (вторая компонента сопряжена первой).

    Компоненты db переставляются по паре локуса Бляшке и возвращаются
    в исходном порядке.

    Raises:
        NotBlaschkeError: Если точка не лежит на локусе Бляшке.
    """
    on_locus, permutation = is_blaschke_point(point, tol)
    if not on_locus:
        raise NotBlaschkeError("Разложение определено только в точках локуса Бляшке")
    if len(v.da) != len(point.a):
        raise MapError("Размерность касательного вектора не совпадает со степенью точки")

    v1 = np.asarray(v.da)
    v2 = _ordered_like_a(point, permutation, v.db)
    w1_a = (v1 + np.conj(v2)) / 2.0
    w1_b = (v2 + np.conj(v1)) / 2.0
    jw2_a = v1 - w1_a
    jw2_b = v2 - w1_b

    back = list(permutation)
    w1 = TangentVector(da=tuple(w1_a), db=tuple(w1_b[back]))
    w2 = TangentVector(da=tuple(-1j * jw2_a), db=tuple(-1j * jw2_b[back]))
    return w1, w2


def symmetrization(point: QBPoint) -> QBPoint:
    """Ближайшая точка Бляшке ((a + b̄)/2, conj((a + b̄)/2)) по покомпонентному сопряжению."""
    mid = (np.asarray(point.a) + np.conj(np.asarray(point.b))) / 2.0
    return QBPoint(a=tuple(mid), b=tuple(np.conj(mid)))


class CertificationStatus(str, Enum):
    CERTIFIED = "CERTIFIED"
    REJECTED = "REJECTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ComponentCertificate:
    """Результат проверки принадлежности точки компоненте QB_d."""
    status: CertificationStatus
    point: QBPoint
    reason: str
    basin_counts: Tuple[int, int] = (0, 0)
    radii: Tuple[float, float] = (0.0, 0.0)
    iterations: int = 0

    @property
    def certified(self) -> bool:
        return self.status == CertificationStatus.CERTIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status.value, "reason": self.reason,
                "basin_counts": list(self.basin_counts), "radii": list(self.radii),
                "iterations": self.iterations, "point": self.point.to_spec()}


def _contraction_radius(f: RationalMap, samples: int = 512) -> float:
    """
    Наибольший радиус r, на котором sup_{|z|=r} |f(z)/z| ≤ CERTIFY_CONTRACTION
    и внутри круга нет полюсов; 0, если такого радиуса в сетке нет.
    """
    poles = [r for r in np.roots(np.asarray(f.q)[::-1])] if len(f.q) > 1 else []
    nearest_pole = min((abs(z) for z in poles), default=math.inf)
    angles = 2.0 * math.pi * np.arange(samples) / samples
    circle = np.exp(1j * angles)
    for r in np.geomspace(0.95, 1e-3, 60):
        if r >= 0.95 * nearest_pole:
            continue
        ratio = np.abs(f(r * circle)) / r
        if ratio.max() <= settings.CERTIFY_CONTRACTION:
            return float(r)
    return 0.0


def _attracting_cycle(f: RationalMap, z: complex, max_period: int = 20) -> Optional[int]:
    """Период притягивающего цикла, к которому сошлась орбита z, если такой есть."""
    for period in range(1, max_period + 1):
        value, slope = f.iterate(np.array([z]), period)
        if abs(value[0] - z) < 1e-9 * (1.0 + abs(z)) and abs(slope[0]) < 1.0:
            return period
    return None


def certify_component(point: QBPoint, budget: int = settings.CERTIFY_BUDGET,
                      seed: int = settings.DEFAULT_SEED,
                      logger_: Optional[logging.Logger] = None) -> ComponentCertificate:
    """
    Проверяет, что Q_{a,b} лежит в гиперболической компоненте, содержащей z^d.

    Критерий: 0 и ∞ притягивающие; найдены круги |z| < r₀ и |z| > 1/r∞, на
    которых |Q(z)| ≤ c|z| (c < 1); все 2d − 2 критические точки попадают в них
    за budget итераций, по d − 1 в каждый бассейн.

    Returns:
        ComponentCertificate со статусом CERTIFIED, REJECTED (найден другой
        притягивающий цикл или неверное распределение критических точек) или
        INCONCLUSIVE (бюджет исчерпан или радиусы не найдены).
    """
    log = logger_ or logger
    f = qb(point)
    d = point.degree

    lam0 = f.multiplier_at(0.0)
    lam_inf = f.multiplier_at(complex(math.inf, 0.0))
    if abs(lam0) >= 1.0 or abs(lam_inf) >= 1.0:
        return ComponentCertificate(CertificationStatus.REJECTED, point,
                                    f"0 или ∞ не притягивающие: |λ₀|={abs(lam0):.6g}, |λ∞|={abs(lam_inf):.6g}")

    r0 = _contraction_radius(f)
    r_inf = _contraction_radius(f.chart_at_infinity())
    if r0 == 0.0 or r_inf == 0.0:
        return ComponentCertificate(CertificationStatus.INCONCLUSIVE, point,
                                    "Не найдены сжимающие круги вокруг 0 и ∞", radii=(r0, r_inf))

    counts = [0, 0]
    pending: List[complex] = []
    for c in critical_points(f, seed=seed):
        if is_infinite(c):
            counts[1] += 1
        else:
            pending.append(c)

    z = np.asarray(pending, dtype=complex)
    state = np.zeros(z.size, dtype=int)
    iterations = 0
    with np.errstate(all='ignore'):
        for iterations in range(budget + 1):
            inner = (state == 0) & (np.abs(z) < r0)
            outer = (state == 0) & ((np.abs(z) > 1.0 / r_inf) | ~np.isfinite(z))
            state[inner] = 1
            state[outer] = 2
            if (state != 0).all():
                break
            z = np.where(state == 0, f(z), z)
    counts[0] += int((state == 1).sum())
    counts[1] += int((state == 2).sum())

    unresolved = z[state == 0]
    for w in unresolved:
        period = _attracting_cycle(f, complex(w))
        if period is not None:
            return ComponentCertificate(CertificationStatus.REJECTED, point,
                                        f"Критическая орбита притягивается к циклу периода {period}",
                                        basin_counts=(counts[0], counts[1]), radii=(r0, r_inf),
                                        iterations=iterations)
    if unresolved.size:
        log.info(f"Сертификация {f.label}: {unresolved.size} критических орбит не разрешены за {budget} итераций")
        return ComponentCertificate(CertificationStatus.INCONCLUSIVE, point, "Бюджет итераций исчерпан",
                                    basin_counts=(counts[0], counts[1]), radii=(r0, r_inf),
                                    iterations=iterations)

    if counts != [d - 1, d - 1]:
        return ComponentCertificate(CertificationStatus.REJECTED, point,
                                    f"Критические точки распределены {counts[0]}/{counts[1]} вместо {d - 1}/{d - 1}",
                                    basin_counts=(counts[0], counts[1]), radii=(r0, r_inf),
                                    iterations=iterations)

    return ComponentCertificate(CertificationStatus.CERTIFIED, point.with_validated(True),
                                "Все критические точки в бассейнах 0 и ∞",
                                basin_counts=(counts[0], counts[1]), radii=(r0, r_inf),
                                iterations=iterations)
