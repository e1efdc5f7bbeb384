# src/thermo/potentials.py
"""
Потенциалы и их суммы Биркгофа по периодическим орбитам.

Каждый вариант умеет одно: S_pφ по одной орбите (birkhoff_sum) и
векторно по всем орбитам прохода (orbit_sums).
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.maps.cycles import Cycle, CycleKey
from src.maps.rational_map import RationalMap, map_from_spec
from src.symbolic.subshift import SubshiftSpec, count_admissible, cylinder_array
from src.utils.exceptions import CriticalOrbitError, SpecFormatError, ThermoError

if TYPE_CHECKING:
    from src.thermo.sweep import OrbitSweep

System = Union[SubshiftSpec, RationalMap]
Orbit = Union[Sequence[int], Cycle]


class Potential:
    """Базовый класс потенциала."""

    kind: str = ""

    @property
    def system(self) -> Optional[System]:
        """Подсдвиг или отображение, на котором определен потенциал (None - любой)."""
        return None

    def birkhoff_sum(self, orbit: Orbit) -> float:
        raise NotImplementedError

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        """S_pφ для каждой примитивной орбиты прохода (в порядке sweep.orbits)."""
        return np.array([self.birkhoff_sum(o) for o in sweep.orbit_objects()], dtype=float)

    def to_spec(self) -> Dict[str, Any]:
        raise NotImplementedError

    def __add__(self, other: "Potential") -> "Potential":
        return linear([(1.0, self), (1.0, other)])

    def __sub__(self, other: "Potential") -> "Potential":
        return linear([(1.0, self), (-1.0, other)])

    def __mul__(self, c: float) -> "Potential":
        return linear([(float(c), self)])

    __rmul__ = __mul__


def _orbit_length(orbit: Orbit) -> int:
    return orbit.period if isinstance(orbit, Cycle) else len(orbit)


@dataclass(frozen=True)
class Constant(Potential):
    """φ ≡ c."""
    c: float
    kind = "constant"

    def birkhoff_sum(self, orbit: Orbit) -> float:
        return _orbit_length(orbit) * self.c

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        return sweep.periods.astype(float) * self.c

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "constant", "c": self.c}


@dataclass(frozen=True)
class Geometric(Potential):
    """φ = −s·log|f'| на циклах множества Жюлиа."""
    map: RationalMap
    s: float = 1.0
    kind = "geometric"

    @property
    def system(self) -> RationalMap:
        return self.map

    def birkhoff_sum(self, orbit: Orbit) -> float:
        if not isinstance(orbit, Cycle):
            raise ThermoError("Геометрический потенциал определен только на циклах отображения")
        slopes = np.abs(self.map.derivative(np.asarray(orbit.points)))
        if (slopes == 0).any():
            raise CriticalOrbitError("Критическая точка на цикле: log|f'| не определен")
        return float(-self.s * np.log(slopes).sum())

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        if sweep.map is self.map or sweep.map == self.map:
            magnitudes = np.abs(sweep.multipliers)
            if (magnitudes == 0).any():
                raise CriticalOrbitError("Критическая точка на цикле: log|f'| не определен")
            return -self.s * np.log(magnitudes)
        return super().orbit_sums(sweep)

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "geometric", "map": self.map.to_spec(), "s": self.s}


@dataclass(frozen=True)
class CylinderTable(Potential):
    """
    φ(x) = value(x₀…x_{k−1}); значения в порядке перечисления цилиндров глубины k.
    """
    spec: SubshiftSpec
    depth: int
    values: Tuple[float, ...]
    kind = "cylinder"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        expected = count_admissible(self.spec, self.depth)
        if len(self.values) != expected:
            raise SpecFormatError(f"Таблица глубины {self.depth} должна содержать {expected} значений, "
                                  f"получено {len(self.values)}")

    @property
    def system(self) -> SubshiftSpec:
        return self.spec

    def _lookup(self) -> np.ndarray:
        """Значения, индексированные кодом слова в системе счисления по основанию n."""
        words = cylinder_array(self.spec, self.depth)
        codes = words @ (self.spec.n ** np.arange(self.depth - 1, -1, -1, dtype=np.int64))
        table = np.full(self.spec.n ** self.depth, np.nan)
        table[codes] = self.values
        return table

    def window_sums(self, words: np.ndarray) -> np.ndarray:
        """S_pφ для массива периодических слов (число слов, p), символы с 0."""
        if words.size == 0:
            return np.zeros(words.shape[0])
        table = self._lookup()
        period = words.shape[1]
        total = np.zeros(words.shape[0])
        for i in range(period):
            code = np.zeros(words.shape[0], dtype=np.int64)
            for j in range(self.depth):
                code = code * self.spec.n + words[:, (i + j) % period]
            total += table[code]
        if np.isnan(total).any():
            raise ThermoError("Орбита содержит недопустимое слово для таблицы потенциала")
        return total

    def birkhoff_sum(self, orbit: Orbit) -> float:
        if isinstance(orbit, Cycle):
            raise ThermoError("Табличный потенциал определен только на символических орбитах")
        word = np.asarray([[s - 1 for s in orbit]], dtype=np.int64)
        return float(self.window_sums(word)[0])

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        if sweep.spec is None:
            raise ThermoError("Табличный потенциал требует символический проход")
        parts = [self.window_sums(sweep.words_by_period[p]) for p in sweep.period_list]
        return np.concatenate(parts) if parts else np.zeros(0)

    def value_of(self, word: Sequence[int]) -> float:
        """Значение на цилиндре word (символы с 1)."""
        table = self._lookup()
        code = 0
        for s in word[:self.depth]:
            code = code * self.spec.n + (s - 1)
        return float(table[code])

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "cylinder", "spec": self.spec.to_dict(), "depth": self.depth, "values": list(self.values)}


@dataclass(frozen=True)
class PathDerivative(Potential):
    """
    ψ = d/dt|₀ (−δ(f_t)·log|f_t'|), заданный суммами Биркгофа D_C на циклах.
    """
    map: RationalMap
    sums: Tuple[Tuple[CycleKey, float], ...] = field(repr=False)
    label: str = ""
    kind = "path_derivative"

    @property
    def system(self) -> RationalMap:
        return self.map

    def _table(self) -> Dict[CycleKey, float]:
        return dict(self.sums)

    def birkhoff_sum(self, orbit: Orbit) -> float:
        if not isinstance(orbit, Cycle):
            raise ThermoError("Производная вдоль пути определена только на циклах")
        try:
            return self._table()[orbit.key]
        except KeyError:
            raise ThermoError(f"Нет значения D_C для цикла {orbit.key}")

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        table = self._table()
        try:
            return np.array([table[c.key] for c in sweep.cycles], dtype=float)
        except KeyError as e:
            raise ThermoError(f"Нет значения D_C для цикла {e}")

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "path_derivative", "map": self.map.to_spec(), "label": self.label,
                "sums": [[k[0], k[1], k[2], v] for k, v in self.sums]}


@dataclass(frozen=True)
class Linear(Potential):
    """Σ c_i·φ_i без вложенных линейных комбинаций."""
    terms: Tuple[Tuple[float, Potential], ...]
    kind = "linear"

    def __post_init__(self):
        if any(isinstance(p, Linear) for _, p in self.terms):
            raise ThermoError("Линейная комбинация должна быть развернута (используйте linear())")

    @property
    def system(self) -> Optional[System]:
        for _, p in self.terms:
            if p.system is not None:
                return p.system
        return None

    def birkhoff_sum(self, orbit: Orbit) -> float:
        return float(sum(c * p.birkhoff_sum(orbit) for c, p in self.terms))

    def orbit_sums(self, sweep: "OrbitSweep") -> np.ndarray:
        total = np.zeros(len(sweep.periods))
        for c, p in self.terms:
            if c != 0.0:
                total = total + c * p.orbit_sums(sweep)
        return total

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "linear", "terms": [[c, p.to_spec()] for c, p in self.terms]}


def linear(terms: Sequence[Tuple[float, Potential]]) -> Potential:
    """Линейная комбинация с разворачиванием вложенных Linear."""
    flat: List[Tuple[float, Potential]] = []
    for c, p in terms:
        if isinstance(p, Linear):
            flat.extend((c * ci, pi) for ci, pi in p.terms)
        else:
            flat.append((float(c), p))
    if len(flat) == 1 and flat[0][0] == 1.0:
        return flat[0][1]
    return Linear(terms=tuple(flat))


def birkhoff_sum(potential: Potential, orbit: Orbit) -> float:
    """S_nφ за один обход орбиты (слово с символами от 1 или Cycle)."""
    return potential.birkhoff_sum(orbit)


def symbol_table(spec: SubshiftSpec, per_symbol: Sequence[float]) -> CylinderTable:
    """Потенциал глубины 1: значение на каждом символе."""
    if len(per_symbol) != spec.n:
        raise SpecFormatError(f"Нужно {spec.n} значений, получено {len(per_symbol)}")
    return CylinderTable(spec=spec, depth=1, values=tuple(per_symbol))


def coboundary(spec: SubshiftSpec, h: Sequence[float]) -> CylinderTable:
    """Кограница ψ = h∘σ − h для h, зависящего от первого символа (таблица глубины 2)."""
    words = cylinder_array(spec, 2)
    values = [h[int(w[1])] - h[int(w[0])] for w in words]
    return CylinderTable(spec=spec, depth=2, values=tuple(values))


def potential_from_spec(spec: Dict[str, Any], system: Optional[System] = None) -> Potential:
    """
    Создает потенциал из JSON-объекта (тегированное объединение по полю "type").

    Args:
        spec: JSON-объект потенциала.
        system: Подсдвиг по умолчанию для табличных потенциалов без поля "spec".
    """
    kind = spec.get("type")
    try:
        if kind == "constant":
            return Constant(float(spec["c"]))
        if kind == "cylinder":
            sft = SubshiftSpec.from_dict(spec["spec"]) if "spec" in spec else system
            if not isinstance(sft, SubshiftSpec):
                raise SpecFormatError("Для табличного потенциала нужен подсдвиг")
            return CylinderTable(spec=sft, depth=int(spec.get("depth", 1)), values=tuple(spec["values"]))
        if kind == "geometric":
            f = map_from_spec(spec["map"]) if "map" in spec else system
            if not isinstance(f, RationalMap):
                raise SpecFormatError("Для геометрического потенциала нужно отображение")
            return Geometric(map=f, s=float(spec.get("s", 1.0)))
        if kind == "linear":
            return linear([(float(c), potential_from_spec(p, system)) for c, p in spec["terms"]])
        if kind == "path_derivative":
            f = map_from_spec(spec["map"])
            sums = tuple(((int(r[0]), float(r[1]), float(r[2])), float(r[3])) for r in spec["sums"])
            return PathDerivative(map=f, sums=sums, label=spec.get("label", ""))
    except (KeyError, TypeError, ValueError) as e:
        raise SpecFormatError(f"Некорректная спецификация потенциала '{kind}': {e}")
    raise SpecFormatError(f"Неизвестный тип потенциала: {kind!r}")
