# src/metric/theorem.py
"""
Проверка вырожденности полунормы давления на QB_d^fm по выборке направлений.

В точке вне локуса Бляшке все направления должны быть невырожденными и δ > 1;
вывод о δ делается, только если оценки уровней N − 1 и N различаются меньше, чем δ − 1.
В точке локуса J-направления вырождены; при невырожденности на касательном
пространстве локуса компонента вырожденного направления вдоль локуса мала.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from src.continuation.paths import TangentPath
from src.maps.quasi_blaschke import (
    CertificationStatus, ComponentCertificate, QBPoint, TangentVector, certify_component, is_blaschke_point, qb,
    tangent_decompose,
)
from src.metric.dimension import DimensionResult, solve_bowen
from src.metric.seminorm import DegeneracyScan, ScanVerdict, degeneracy_scan, pressure_seminorm
from src.thermo.sweep import map_sweep
from src.utils.exceptions import MapError

logger = logging.getLogger("TheoremCheck")

WP_NOTE = ("Сравнение с метрикой Вейля–Петерссона не выполняется: нормирующие константы "
           "требуют спариваний групп Фукса и не вычисляются этой библиотекой")


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    detail: str = ""
    value: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": self.status.value, "detail": self.detail, "value": self.value}


@dataclass
class DirectionResult:
    """Сканирование одного направления и его разложение в точке локуса."""
    direction: TangentVector
    scan: DegeneracyScan
    tangent_part: Optional[TangentVector] = None
    j_part: Optional[TangentVector] = None
    tangent_seminorm: Optional[float] = None

    @property
    def is_j_direction(self) -> bool:
        return self.tangent_part is not None and self.tangent_part.norm() <= 1e-12 * self.direction.norm()

    def to_dict(self) -> Dict[str, Any]:
        data = {"direction": self.direction.to_spec(), "scan": self.scan.to_dict()}
        if self.tangent_part is not None:
            data["tangent_part"] = self.tangent_part.to_spec()
            data["j_part"] = self.j_part.to_spec()
            data["is_j_direction"] = self.is_j_direction
            data["tangent_seminorm"] = self.tangent_seminorm
        return data


@dataclass
class TheoremReport:
    """Структурированный отчет проверки."""
    point: QBPoint
    blaschke: bool
    certificate: Optional[ComponentCertificate]
    dimension: DimensionResult
    nonreal_multiplier: bool
    directions: List[DirectionResult] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    excluded: List[Dict[str, Any]] = field(default_factory=list)
    dimension_previous: Optional[DimensionResult] = None

    @property
    def status(self) -> CheckStatus:
        statuses = {c.status for c in self.checks}
        if CheckStatus.FAIL in statuses:
            return CheckStatus.FAIL
        if CheckStatus.INCONCLUSIVE in statuses:
            return CheckStatus.INCONCLUSIVE
        return CheckStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status.value, "point": self.point.to_spec(), "blaschke": self.blaschke,
                "certificate": self.certificate.to_dict() if self.certificate else None,
                "dimension": self.dimension.to_dict(),
                "dimension_previous": self.dimension_previous.to_dict() if self.dimension_previous else None,
                "nonreal_multiplier": self.nonreal_multiplier,
                "directions": [d.to_dict() for d in self.directions],
                "checks": [c.to_dict() for c in self.checks], "notes": list(self.notes),
                "excluded": list(self.excluded)}


def sample_directions(point: QBPoint, count: int = settings.DIRECTION_COUNT,
                      seed: int = settings.DEFAULT_SEED) -> List[TangentVector]:
    """
    Направления для сканирования: по четыре базисных на каждую координату
    ((1, 1), (i, −i), (i, i), (−1, 1)), затем случайные единичные векторы.
    """
    size = len(point.a)
    basis: List[TangentVector] = []
    for j in range(size):
        for da, db in ((1, 1), (1j, -1j), (1j, 1j), (-1, 1)):
            a = np.zeros(size, dtype=complex)
            b = np.zeros(size, dtype=complex)
            a[j], b[j] = da, db
            basis.append(TangentVector(da=tuple(a), db=tuple(b)))
    rng = np.random.default_rng(seed)
    while len(basis) < count:
        raw = rng.standard_normal(4 * size).view(complex)
        raw /= np.linalg.norm(raw)
        basis.append(TangentVector.from_array(raw))
    return basis[:count]


def _verdict_status(verdict: ScanVerdict, expected: ScanVerdict) -> CheckStatus:
    if verdict == ScanVerdict.INCONCLUSIVE:
        return CheckStatus.INCONCLUSIVE
    return CheckStatus.PASS if verdict == expected else CheckStatus.FAIL


def _label(v: TangentVector) -> str:
    return "(" + ", ".join(f"{z:.3g}" for z in v.da + v.db) + ")"


def theorem_main_check(point: QBPoint, directions: Optional[Sequence[TangentVector]] = None,
                       max_period: int = settings.DEFAULT_SCAN_PERIOD, h: Optional[float] = None,
                       t_max: float = settings.DEFAULT_T_MAX, tol_deg: float = settings.TOL_DEG,
                       seminorm_tol: float = settings.SEMINORM_TOL, blaschke_tol: float = settings.BLASCHKE_TOL,
                       seed: int = settings.DEFAULT_SEED, wp_comparison: bool = False,
                       workers: Optional[int] = None, logger_: Optional[logging.Logger] = None) -> TheoremReport:
    """
    Проверяет свойства вырожденности полунормы давления в точке QB_d^fm.

    Args:
        point: Точка (сертифицируется, если не помечена validated).
        directions: Направления (по умолчанию sample_directions).
        max_period: Наибольший период циклов N.
        h: Шаг по t.
        t_max: Полуширина касательных путей.
        tol_deg: Порог вырожденности сканирования.
        seminorm_tol: Порог полунормы для условного утверждения о локусе.
        wp_comparison: Добавить примечание о сравнении с метрикой Вейля–Петерссона.

    Returns:
        TheoremReport; INCONCLUSIVE-проверки не считаются провалами.

    Raises:
        MapError: Если точка не лежит в компоненте.
    """
    log = logger_ or logger
    certificate = None
    if not point.validated:
        certificate = certify_component(point, seed=seed, logger_=log)
        if certificate.status == CertificationStatus.REJECTED:
            raise MapError(f"Точка вне гиперболической компоненты: {certificate.reason}")
        if certificate.certified:
            point = certificate.point

    blaschke, _ = is_blaschke_point(point, blaschke_tol)
    f = qb(point)
    base = map_sweep(f, max_period + 1, logger_=log)
    dimension = solve_bowen(base, max_period, logger_=log)
    previous = solve_bowen(base, max_period - 1, logger_=log) if max_period >= 2 else None
    nonreal = bool(np.any(np.abs(base.multipliers.imag) > settings.NONREAL_TOL * np.abs(base.multipliers)))

    report = TheoremReport(point=point, blaschke=blaschke, certificate=certificate, dimension=dimension,
                           nonreal_multiplier=nonreal, dimension_previous=previous)
    if certificate is not None and certificate.status == CertificationStatus.INCONCLUSIVE:
        report.checks.append(CheckResult("component", CheckStatus.INCONCLUSIVE, certificate.reason))
    if wp_comparison:
        report.notes.append(WP_NOTE)

    for v in directions if directions is not None else sample_directions(point, seed=seed):
        if v.norm() == 0:
            report.excluded.append({"direction": v.to_spec(), "reason": "нулевое направление"})
            continue
        path = TangentPath(point, v, t_max)
        scan = degeneracy_scan(path, max_period, h, tol_deg, base=base, workers=workers, logger_=log)
        result = DirectionResult(direction=v, scan=scan)
        if blaschke:
            result.tangent_part, result.j_part = tangent_decompose(point, v, blaschke_tol)
        report.directions.append(result)

    if blaschke:
        _check_blaschke(report, point, max_period, h, t_max, seminorm_tol, base, workers, log)
    else:
        _check_generic(report, dimension, report.dimension_previous)
    log.info(f"Проверка в точке {point.to_spec()}: {report.status.value}")
    return report


def _check_generic(report: TheoremReport, dimension: DimensionResult, previous: Optional[DimensionResult]):
    excess = dimension.delta - 1.0
    gap = abs(dimension.delta - previous.delta) if previous is not None else np.inf
    if excess - settings.DIMENSION_EXCESS > gap:
        status = CheckStatus.PASS
    elif settings.DIMENSION_EXCESS - excess > gap:
        status = CheckStatus.FAIL
    else:
        # разность уровней N − 1 и N сравнима с δ − 1
        status = CheckStatus.INCONCLUSIVE
    report.checks.append(CheckResult(
        "dimension_above_one", status,
        f"δ − 1 = {excess:.3e}, |δ_N − δ_(N−1)| = {gap:.3e}", dimension.delta))
    for result in report.directions:
        report.checks.append(CheckResult(
            f"nondegenerate {_label(result.direction)}",
            _verdict_status(result.scan.verdict, ScanVerdict.NONDEGENERATE),
            f"max|entry| = {result.scan.max_entry:.3e}", result.scan.max_entry))
    if status == CheckStatus.PASS:
        report.checks.append(CheckResult(
            "nonreal_repelling_multiplier",
            CheckStatus.PASS if report.nonreal_multiplier else CheckStatus.INCONCLUSIVE,
            "найден невещественный мультипликатор" if report.nonreal_multiplier
            else f"не найден среди циклов периода ≤ {dimension.period_used + 1}"))
    if status == CheckStatus.PASS and dimension.delta < 2.0:
        report.notes.append("δ ∈ (1, 2): полунорма давления невырождена во всех направлениях")


def _check_blaschke(report: TheoremReport, point: QBPoint, max_period: int, h: Optional[float], t_max: float,
                    seminorm_tol: float, base, workers: Optional[int], log: logging.Logger):
    for result in report.directions:
        if result.is_j_direction:
            report.checks.append(CheckResult(
                f"j_direction_degenerate {_label(result.direction)}",
                _verdict_status(result.scan.verdict, ScanVerdict.DEGENERATE),
                f"max|entry| = {result.scan.max_entry:.3e}", result.scan.max_entry))

    tangent = [r for r in report.directions if not r.is_j_direction]
    values: List[Tuple[DirectionResult, float]] = []
    for result in tangent:
        size = result.tangent_part.norm()
        unit = result.tangent_part.scaled(1.0 / size)
        value = pressure_seminorm(TangentPath(point, unit, t_max), max_period, h, base=base, workers=workers,
                                  logger_=log).value
        result.tangent_seminorm = value * size * size
        values.append((result, value))

    if not values:
        report.checks.append(CheckResult("tangent_nondegenerate", CheckStatus.SKIPPED,
                                         "нет направлений с компонентой вдоль локуса"))
        return
    floor = min(v for _, v in values)
    if floor < seminorm_tol:
        report.checks.append(CheckResult(
            "tangent_nondegenerate", CheckStatus.SKIPPED,
            f"условие не выполнено: min ‖w₁‖²_P = {floor:.3e} < {seminorm_tol:g}", floor))
        return
    report.notes.append(f"Полунорма на выборке касательных к локусу ≥ {floor:.3e}")
    for result in report.directions:
        if result.scan.verdict != ScanVerdict.DEGENERATE:
            continue
        value = result.tangent_seminorm if result.tangent_seminorm is not None else 0.0
        report.checks.append(CheckResult(
            f"degenerate_is_j_direction {_label(result.direction)}",
            CheckStatus.PASS if value < seminorm_tol else CheckStatus.FAIL,
            f"‖w₁‖²_P = {value:.3e}", value))
