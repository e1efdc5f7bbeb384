# src/metric/seminorm.py
"""
Полунорма давления на гиперболической компоненте.

Для пути f_t с f_0 = f производная потенциала ψ = d/dt|₀(−δ(f_t)·log|f_t'|)
задается суммами Биркгофа на циклах

    D_C = −(δ'(0)·log|λ_C| + δ(0)·Re d/dt log λ_C),

а ‖v‖²_P = Var(ψ, m₀)/(δ₀·Ly), где m₀ - равновесная мера −δ₀·log|f'|.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import settings
from src.continuation.paths import ParamPath
from src.continuation.tracking import richardson_central
from src.maps.cycles import Cycle
from src.metric.dimension import equilibrium_lyapunov, log_slopes, solve_bowen
from src.metric.family import TrackedSweep, base_sweep, failure_table, node_grid, track_sweep
from src.thermo.potentials import PathDerivative
from src.thermo.sweep import OrbitSweep
from src.thermo.variance import covariance_from_sums, energy_denominator, variance_from_sums
from src.utils.exceptions import MapError

logger = logging.getLogger("PressureSeminorm")


class ScanVerdict(str, Enum):
    DEGENERATE = "degenerate"
    NONDEGENERATE = "nondegenerate"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PathDerivativeData:
    """
    Производные вдоль пути по всем продолженным циклам.

    Attributes:
        family: Продолженный проход.
        h: Шаг разностей.
        deltas: δ(f_t) в узлах сетки.
        ddelta: dδ/dt при t = 0.
        dlogs: d/dt log λ_C при t = 0.
        entries: d/dt[δ·log|λ_C|] при t = 0 (D_C = −entries).
    """
    family: TrackedSweep
    h: float
    deltas: Dict[float, float]
    ddelta: float
    dlogs: np.ndarray
    entries: np.ndarray

    @property
    def delta(self) -> float:
        return self.deltas[0.0]

    @property
    def sweep(self) -> OrbitSweep:
        return self.family.sweep_at(0.0)

    @property
    def cycles(self) -> List[Cycle]:
        return self.family.cycles

    def potential(self, label: str = "") -> PathDerivative:
        """ψ как потенциал с суммами D_C на базовых циклах."""
        sums = tuple((c.key, float(-e)) for c, e in zip(self.cycles, self.entries))
        return PathDerivative(map=self.family.base.map, sums=sums, label=label)


def path_derivative_data(path: ParamPath, n: int, h: Optional[float] = None, base: Optional[OrbitSweep] = None,
                         estimator: str = settings.DEFAULT_ESTIMATOR, min_fraction: Optional[float] = None,
                         workers: Optional[int] = None,
                         logger_: Optional[logging.Logger] = None) -> PathDerivativeData:
    """
    Продолжает циклы периодов ≤ n + 1 по сетке {±h, ±h/2, 0} и дифференцирует δ·log|λ_C|.

    dδ/dt вычисляется разностью размерностей в узлах, а не предполагается нулевой.
    """
    log = logger_ or logger
    h = path.default_h if h is None else h
    if base is None:
        base = base_sweep(path, n + 1, logger_=log)
    family = track_sweep(path, base, grid=node_grid(h), workers=workers, min_fraction=min_fraction, logger_=log)
    deltas = {t: solve_bowen(family.sweep_at(t), n, estimator, logger_=log).delta for t in family.grid}
    ddelta = float(richardson_central(deltas, h).real)
    dlogs = family.dlogs(h)
    logs0 = log_slopes(family.sweep_at(0.0))
    entries = ddelta * logs0 + deltas[0.0] * dlogs.real
    log.debug(f"δ₀ = {deltas[0.0]:.15g}, dδ/dt = {ddelta:.3e}, циклов {len(entries)}")
    return PathDerivativeData(family=family, h=h, deltas=deltas, ddelta=ddelta, dlogs=dlogs, entries=entries)


@dataclass(frozen=True)
class SeminormResult:
    """
    ‖v‖²_P вдоль пути.

    Attributes:
        value: Var/denominator.
        variance: Var(ψ, m₀).
        denominator: −∫φ₀ dm₀ = δ₀·Ly.
        delta: δ₀.
        ddelta: dδ/dt при t = 0.
        lyapunov: Ly = denominator/δ₀.
        cross_check: Значение по второй разности давления.
        period_used: Уровень n.
        h: Шаг по t.
        cycle_table: Строки (цикл, D_C, d/dt log λ_C).
    """
    value: float
    variance: float
    denominator: float
    delta: float
    ddelta: float
    lyapunov: float
    cross_check: float
    period_used: int
    h: float
    cycle_table: Tuple[Tuple[Cycle, float, complex], ...] = field(default=(), repr=False)

    def rows(self) -> List[list]:
        """CSV: period, re λ, im λ, D_C, re dlog λ, im dlog λ."""
        return [[c.period, c.multiplier.real, c.multiplier.imag, d, dl.real, dl.imag]
                for c, d, dl in self.cycle_table]

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "variance": self.variance, "denominator": self.denominator,
                "delta": self.delta, "ddelta": self.ddelta, "lyapunov": self.lyapunov,
                "cross_check": self.cross_check, "period_used": self.period_used, "h": self.h,
                "cycle_count": len(self.cycle_table)}


def _phi_sums(data: PathDerivativeData) -> np.ndarray:
    return -data.delta * log_slopes(data.sweep)


def pressure_seminorm(path: ParamPath, n: int = settings.DEFAULT_PERIOD, h: Optional[float] = None,
                      estimator: str = settings.DEFAULT_ESTIMATOR, base: Optional[OrbitSweep] = None,
                      cross_check: bool = True, workers: Optional[int] = None,
                      logger_: Optional[logging.Logger] = None) -> SeminormResult:
    """
    Квадрат полунормы давления касательного вектора пути в точке f_0.

    Args:
        path: Путь f_t внутри гиперболической компоненты.
        n: Уровень (циклы периодов до n + 1).
        h: Шаг по t (по умолчанию path.default_h).
        estimator: Оценка давления для уравнения Боуэна.
        base: Готовый проход по циклам f_0.
        cross_check: Сверять дисперсию со второй разностью давления.

    Raises:
        EstimatorDisagreementError: Если оценки дисперсии расходятся.
        TrackingError: Если хотя бы один цикл не продолжается.
    """
    log = logger_ or logger
    data = path_derivative_data(path, n, h, base, estimator, workers=workers, logger_=log)
    sweep = data.sweep
    phi_sums = _phi_sums(data)
    psi_sums = data.potential().orbit_sums(sweep)
    denominator = energy_denominator(sweep, phi_sums, n, log)
    estimate = variance_from_sums(sweep, phi_sums, psi_sums, n, cross_check=cross_check, log=log)
    table = tuple((c, float(d), complex(dl)) for c, d, dl in zip(data.cycles, psi_sums, data.dlogs))
    result = SeminormResult(value=estimate.primary / denominator, variance=estimate.primary,
                            denominator=denominator, delta=data.delta, ddelta=data.ddelta,
                            lyapunov=denominator / data.delta, cross_check=estimate.cross_check / denominator,
                            period_used=n, h=data.h, cycle_table=table)
    log.info(f"‖v‖²_P = {result.value:.6e} (Var = {result.variance:.6e}, δ·Ly = {denominator:.6g})")
    return result


def _same_base(first: ParamPath, second: ParamPath) -> bool:
    f, g = first.map_at(0.0), second.map_at(0.0)
    return (len(f.p) == len(g.p) and len(f.q) == len(g.q)
            and np.allclose(f.p, g.p, atol=1e-14) and np.allclose(f.q, g.q, atol=1e-14))


def pressure_form(path1: ParamPath, path2: ParamPath, n: int = settings.DEFAULT_PERIOD, h: Optional[float] = None,
                  estimator: str = settings.DEFAULT_ESTIMATOR, base: Optional[OrbitSweep] = None,
                  cross_check: bool = True, workers: Optional[int] = None,
                  logger_: Optional[logging.Logger] = None) -> float:
    """
    Форма давления ⟨v₁, v₂⟩_P = Cov(ψ₁, ψ₂)/(δ₀·Ly) по общему проходу.

    Raises:
        MapError: Если пути начинаются в разных отображениях.
    """
    log = logger_ or logger
    if not _same_base(path1, path2):
        raise MapError("Пути формы давления должны начинаться в одном отображении")
    if base is None:
        base = base_sweep(path1, n + 1, logger_=log)
    first = path_derivative_data(path1, n, h, base, estimator, workers=workers, logger_=log)
    second = path_derivative_data(path2, n, h, base, estimator, workers=workers, logger_=log)
    sweep = first.sweep
    phi_sums = _phi_sums(first)
    denominator = energy_denominator(sweep, phi_sums, n, log)
    cov = covariance_from_sums(sweep, phi_sums, first.potential().orbit_sums(sweep),
                               second.potential().orbit_sums(sweep), n, cross_check)
    return cov / denominator


@dataclass(frozen=True)
class DegeneracyScan:
    """
    Таблица d/dt[δ·log|λ_C|] по отталкивающим циклам и вердикт.

    Attributes:
        verdict: DEGENERATE / NONDEGENERATE / INCONCLUSIVE.
        max_period: Наибольший проверенный период N.
        max_entry: max |entry|.
        tol_deg: Порог вырожденности.
        tracked_fraction: Доля продолженных циклов.
        entries: Строки (цикл, entry).
        failures: Отказы продолжения.
    """
    verdict: ScanVerdict
    max_period: int
    max_entry: float
    tol_deg: float
    tracked_fraction: float
    delta: float
    ddelta: float
    entries: Tuple[Tuple[Cycle, float], ...] = field(default=(), repr=False)
    failures: Tuple[Dict[str, Any], ...] = field(default=(), repr=False)

    def entry_for(self, period: int) -> List[float]:
        return [e for c, e in self.entries if c.period == period]

    def rows(self) -> List[list]:
        """CSV: period, re z₀, im z₀, re λ, im λ, entry."""
        return [[c.period, c.points[0].real, c.points[0].imag, c.multiplier.real, c.multiplier.imag, e]
                for c, e in self.entries]

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.verdict.value, "max_period": self.max_period, "max_entry": self.max_entry,
                "tol_deg": self.tol_deg, "tracked_fraction": self.tracked_fraction, "delta": self.delta,
                "ddelta": self.ddelta, "cycle_count": len(self.entries), "failures": list(self.failures)}


def classify(max_entry: float, tol_deg: float = settings.TOL_DEG,
             hysteresis: float = settings.DEG_HYSTERESIS) -> ScanVerdict:
    """Вердикт по наибольшей записи с полосой гистерезиса."""
    if max_entry < tol_deg:
        return ScanVerdict.DEGENERATE
    if max_entry > hysteresis * tol_deg:
        return ScanVerdict.NONDEGENERATE
    return ScanVerdict.INCONCLUSIVE


def degeneracy_scan(path: ParamPath, max_period: int = settings.DEFAULT_SCAN_PERIOD, h: Optional[float] = None,
                    tol_deg: float = settings.TOL_DEG, hysteresis: float = settings.DEG_HYSTERESIS,
                    estimator: str = settings.DEFAULT_ESTIMATOR, base: Optional[OrbitSweep] = None,
                    workers: Optional[int] = None, logger_: Optional[logging.Logger] = None) -> DegeneracyScan:
    """
    Критерий вырожденности по мультипликаторам: ‖v‖_P = 0 ⇔ d/dt[δ·log|λ_C|] = 0 для всех циклов.

    Отказы продолжения допускаются, если продолжено не меньше TRACKED_FRACTION циклов.
    """
    log = logger_ or logger
    if path.is_constant:
        log.info("Постоянный путь: вырожден тривиально")
    data = path_derivative_data(path, max_period, h, base, estimator, min_fraction=settings.TRACKED_FRACTION,
                                workers=workers, logger_=log)
    keep = [i for i, c in enumerate(data.cycles) if c.period <= max_period]
    entries = tuple((data.cycles[i], float(data.entries[i])) for i in keep)
    max_entry = max((abs(e) for _, e in entries), default=0.0)
    verdict = classify(max_entry, tol_deg, hysteresis)
    log.info(f"Сканирование до периода {max_period}: max|entry| = {max_entry:.3e} → {verdict.value}")
    return DegeneracyScan(verdict=verdict, max_period=max_period, max_entry=max_entry, tol_deg=tol_deg,
                          tracked_fraction=data.family.bundle.tracked_fraction, delta=data.delta,
                          ddelta=data.ddelta, entries=entries, failures=tuple(failure_table(data.family)))


@dataclass(frozen=True)
class GSeminormResult:
    """
    ‖v‖²_G как вторая разность t ↦ G_f(f_t) и отношение конформной эквивалентности.

    Attributes:
        value: d²/dt² G_f(f_t) при t = 0.
        seminorm: ‖v‖²_P.
        ratio: ‖v‖²_P·(δ·Ly)/‖v‖²_G (≈ 1).
        g_values: G_f(f_t) в узлах.
    """
    value: float
    seminorm: float
    ratio: float
    g_values: Dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"g_seminorm_sq": self.value, "pressure_seminorm_sq": self.seminorm, "ratio": self.ratio,
                "g_values": [[t, v] for t, v in sorted(self.g_values.items())]}


def g_seminorm_sq(path: ParamPath, n: int = settings.DEFAULT_PERIOD, h: Optional[float] = None,
                  estimator: str = settings.DEFAULT_ESTIMATOR, base: Optional[OrbitSweep] = None,
                  workers: Optional[int] = None, logger_: Optional[logging.Logger] = None) -> GSeminormResult:
    """
    Гессиан G_f вдоль пути со сравнением с полунормой давления.

    Вторая разность берется с шагом 10·h и уточняется по Ричардсону.
    """
    log = logger_ or logger
    h = path.default_h if h is None else h
    if base is None:
        base = base_sweep(path, n + 1, logger_=log)
    wide = 10.0 * h
    family = track_sweep(path, base, grid=node_grid(wide), workers=workers, logger_=log)
    sweep0 = family.sweep_at(0.0)
    delta0 = solve_bowen(sweep0, n, estimator, logger_=log).delta

    g_values: Dict[float, float] = {}
    for t in family.grid:
        sweep_t = family.sweep_at(t)
        delta_t = delta0 if t == 0.0 else solve_bowen(sweep_t, n, estimator, logger_=log).delta
        ly = equilibrium_lyapunov(sweep0, delta0, n, values=log_slopes(sweep_t), estimator=estimator)
        g_values[t] = delta_t * ly

    def second(step: float) -> float:
        return (g_values[step] - 2.0 * g_values[0.0] + g_values[-step]) / (step * step)

    value = (4.0 * second(wide / 2.0) - second(wide)) / 3.0
    seminorm = pressure_seminorm(path, n, h, estimator, base=base, workers=workers, logger_=log)
    scaled = seminorm.value * seminorm.denominator
    ratio = scaled / value if value > 0 else float("nan")
    return GSeminormResult(value=value, seminorm=seminorm.value, ratio=ratio, g_values=g_values)
