# src/thermo/sweep.py
"""
Проход по периодическим орбитам системы до максимального периода.

Для подсдвига орбиты - канонические периодические слова, для отображения -
примитивные циклы. Статсуммы

    Z_m = Σ_{p|m} Σ_{орбиты периода p} p · w(орбита, m/p) · e^{(m/p)·S_pφ}

вычисляются через log-sum-exp; w ≡ 1 для подсдвигов и 1/|1 − λ^{−m/p}|^k
для циклов отображения. При k = 1 (множество Жюлиа - окружность, а также
семейство QB, деформирующее отображения окружности) Z_m - след одномерного
оператора Рюэля; при k = 2 - след L^m на функциях на плоскости.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from src.maps.cycles import Cycle, periodic_cycles_up_to
from src.maps.quasi_blaschke import QBPoint
from src.maps.rational_map import RationalMap
from src.symbolic.subshift import SubshiftSpec, primitive_orbit_array
from src.utils.exceptions import MalformedSubshiftError, ThermoError
from src.utils.workers import get_pool

logger = logging.getLogger("OrbitSweep")


@dataclass
class OrbitSweep:
    """
    Примитивные периодические орбиты периодов 1..max_period.

    Attributes:
        max_period: Наибольший период.
        periods: Период каждой орбиты (в порядке прохода).
        spec: Подсдвиг (для символического прохода).
        words_by_period: Канонические слова (символы с 0) по периодам.
        map: Отображение (для прохода по циклам).
        cycles: Примитивные циклы отображения.
        multipliers: Мультипликаторы циклов.
        trace_power: Степень k в весе 1/|1 − λ^{−r}|^k.
    """
    max_period: int
    periods: np.ndarray
    spec: Optional[SubshiftSpec] = None
    words_by_period: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    map: Optional[RationalMap] = None
    cycles: List[Cycle] = field(default_factory=list, repr=False)
    multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex), repr=False)
    trace_power: int = 2

    @property
    def period_list(self) -> List[int]:
        return list(range(1, self.max_period + 1))

    @property
    def is_symbolic(self) -> bool:
        return self.spec is not None

    @property
    def system(self) -> Union[SubshiftSpec, RationalMap]:
        return self.spec if self.spec is not None else self.map

    def orbit_objects(self) -> List[Union[Tuple[int, ...], Cycle]]:
        """Орбиты как слова (символы с 1) или Cycle."""
        if self.spec is not None:
            return [tuple(int(s) + 1 for s in w) for p in self.period_list for w in self.words_by_period[p]]
        return list(self.cycles)

    def level(self, m: int) -> Tuple[np.ndarray, np.ndarray]:
        """Индексы орбит с p | m и кратности обхода r = m/p."""
        if m > self.max_period:
            raise ThermoError(f"Уровень {m} превышает максимальный период прохода {self.max_period}")
        idx = np.flatnonzero(m % self.periods == 0)
        return idx, m // self.periods[idx]

    def log_trace_weights(self, idx: np.ndarray, r: np.ndarray) -> np.ndarray:
        """log(p·w) для орбит idx, обходимых r раз."""
        log_p = np.log(self.periods[idx].astype(float))
        if self.spec is not None:
            return log_p
        lam_r = self.multipliers[idx] ** (-r.astype(float))
        return log_p - self.trace_power * np.log(np.abs(1.0 - lam_r))

    def log_partition(self, m: int, sums: np.ndarray) -> float:
        """log Z_m для потенциала с суммами Биркгофа sums по орбитам."""
        idx, r = self.level(m)
        if idx.size == 0:
            return -np.inf
        return float(logsumexp(self.log_trace_weights(idx, r) + r * sums[idx]))

    def gibbs(self, m: int, sums: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Нормированные веса точек уровня m.

        Returns:
            (индексы орбит, кратности r, веса с суммой 1).
        """
        idx, r = self.level(m)
        log_w = self.log_trace_weights(idx, r) + r * sums[idx]
        return idx, r, np.exp(log_w - logsumexp(log_w))

    def point_count(self, m: int) -> int:
        """Число точек уровня m (с учетом кратности p)."""
        idx, _ = self.level(m)
        return int(self.periods[idx].sum())


def subshift_sweep(spec: SubshiftSpec, max_period: int, cap: Optional[int] = None,
                   workers: Optional[int] = None) -> OrbitSweep:
    """
    Проход по каноническим периодическим словам подсдвига.

    Raises:
        MalformedSubshiftError: Если матрица не апериодична.
    """
    aperiodic, _ = spec.aperiodicity
    if not aperiodic:
        raise MalformedSubshiftError("Матрица переходов не апериодична: давление по орбитам не определено")
    periods = list(range(1, max_period + 1))
    words = get_pool(workers).map_ordered(lambda p: primitive_orbit_array(spec, p, cap), periods)
    by_period = dict(zip(periods, words))
    counts = np.concatenate([np.full(w.shape[0], p, dtype=np.int64) for p, w in by_period.items()])
    return OrbitSweep(max_period=max_period, periods=counts, spec=spec, words_by_period=by_period)


def trace_power_for(f: RationalMap, domain: str) -> int:
    """Степень веса следа: 1 на окружности и в семействе QB, иначе 2."""
    if domain == "circle" or isinstance(f.origin, QBPoint):
        return 1
    return 2


def map_sweep(f: RationalMap, max_period: int, domain: Optional[str] = None, path=None,
              logger_: Optional[logging.Logger] = None) -> OrbitSweep:
    """
    Проход по примитивным циклам отображения.

    Args:
        f: Гиперболическое отображение.
        max_period: Наибольший период.
        domain: "circle" или "plane" (по умолчанию по наличию формы Бляшке).
        path: Путь продолжения для режима "plane".
    """
    log = logger_ or logger
    domain = domain or ("circle" if f.circle is not None else "plane")
    found = periodic_cycles_up_to(f, max_period, domain=domain, path=path, logger_=log)
    repelling = [c for c in found if c.repelling]
    if len(repelling) != len(found):
        log.warning(f"Отброшено {len(found) - len(repelling)} неотталкивающих циклов")
    return sweep_from_cycles(f, repelling, max_period, trace_power_for(f, domain))


def sweep_from_cycles(f: RationalMap, found: List[Cycle], max_period: int,
                      trace_power: Optional[int] = None) -> OrbitSweep:
    """Проход по заданному набору примитивных циклов (например, продолженных)."""
    if trace_power is None:
        trace_power = trace_power_for(f, "circle" if f.circle is not None else "plane")
    if trace_power not in (1, 2):
        raise ThermoError(f"Степень веса следа должна быть 1 или 2, получено {trace_power}")
    found = [c for c in found if c.period <= max_period]
    periods = np.array([c.period for c in found], dtype=np.int64)
    multipliers = np.array([c.multiplier for c in found], dtype=complex)
    return OrbitSweep(max_period=max_period, periods=periods, map=f, cycles=found, multipliers=multipliers,
                      trace_power=trace_power)


def build_sweep(system: Union[SubshiftSpec, RationalMap], max_period: int, **kwargs) -> OrbitSweep:
    """Проход для подсдвига или отображения."""
    if isinstance(system, SubshiftSpec):
        return subshift_sweep(system, max_period, cap=kwargs.get("cap"), workers=kwargs.get("workers"))
    if isinstance(system, RationalMap):
        return map_sweep(system, max_period, domain=kwargs.get("domain"), path=kwargs.get("path"))
    raise ThermoError("Система должна быть подсдвигом или рациональным отображением")