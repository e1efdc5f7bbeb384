# src/controllers/command_controller.py
"""
Модуль содержит класс CommandController, который связывает подкоманды
командной строки с вычислительными модулями библиотеки.

Каждая команда возвращает CommandOutcome: отчет (словарь с полным
разрешенным RunConfig), таблицу для CSV и код завершения.
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from config import settings
from src.continuation.marking import transport_marking
from src.continuation.paths import path_from_spec
from src.controllers.run_config import RunConfig
from src.maps.cycles import Cycle, cycles, iter_cycle_rows, periodic_cycles_up_to
from src.maps.quasi_blaschke import (
    CertificationStatus, QBPoint, TangentVector, certify_component, involution, is_blaschke_point, qb,
    qb_point_from_spec,
)
from src.maps.rational_map import complex_list_from_spec, map_from_spec
from src.metric.dimension import dimension_convergence, hausdorff_dimension
from src.metric.seminorm import ScanVerdict, degeneracy_scan, g_seminorm_sq, pressure_form, pressure_seminorm
from src.metric.theorem import CheckStatus, sample_directions, theorem_main_check
from src.symbolic.subshift import SubshiftSpec
from src.thermo.potentials import Constant, CylinderTable, Potential, potential_from_spec, symbol_table
from src.thermo.pressure import pressure, pressure_matrix, pressure_sequence, resolve_sweep
from src.thermo.sweep import map_sweep
from src.thermo.variance import cohomology_defect, variance_estimate
from src.utils.exceptions import ConfigError, MapError, SpecFormatError
from src.utils.file_manager import load_json

PATH_TYPES = ("segment", "tangent", "map_segment", "constant", "scaled")
INVOLUTION_PERIOD = 6
INVOLUTION_TOL = 1e-8
CONVERGENCE_ROWS = 6


class ExitCode(IntEnum):
    OK = 0
    BAD_INPUT = 1
    FAILURE = 2
    INCONCLUSIVE = 3
    RESOURCE_CAP = 4


@dataclass
class CommandOutcome:
    """
    Результат одной подкоманды.

    Attributes:
        command: Имя подкоманды.
        report: Отчет для JSON и текстового вывода.
        exit_code: Код завершения.
        header: Заголовки CSV-таблицы.
        rows: Строки CSV-таблицы.
    """
    command: str
    report: Dict[str, Any]
    exit_code: ExitCode = ExitCode.OK
    header: Tuple[str, ...] = ()
    rows: List[list] = field(default_factory=list)


def exit_code_for(status: CheckStatus) -> ExitCode:
    if status == CheckStatus.FAIL:
        return ExitCode.FAILURE
    if status == CheckStatus.INCONCLUSIVE:
        return ExitCode.INCONCLUSIVE
    return ExitCode.OK


class CommandController:
    """
    Контроллер подкоманд.
    Загружает спецификации, вызывает библиотеку и собирает отчеты.
    """

    def __init__(self, config: RunConfig, logger: Optional[logging.Logger] = None):
        self.config = config
        self.logger = logger or logging.getLogger("CommandController")

    def log_info(self, message: str):
        """Вспомогательный метод для логирования информации"""
        self.logger.info(message)

    def run(self) -> CommandOutcome:
        """Выполняет подкоманду из конфигурации."""
        handler = getattr(self, f"cmd_{self.config.command}")
        self.log_info(f"Запуск команды {self.config.command} ({self.config.input})")
        return handler()

    # ---- общие вспомогательные методы -------------------------------------

    def _load(self, path: Optional[str]) -> Dict[str, Any]:
        if path is None:
            raise ConfigError(f"Команде {self.config.command} нужен файл спецификации")
        return load_json(path)

    def _report(self, result: Dict[str, Any], status: str = "ok", **extra) -> Dict[str, Any]:
        report = {"command": self.config.command, "status": status, "config": self.config.to_dict(),
                  "result": result}
        report.update(extra)
        return report

    def _period(self, default: int) -> int:
        return int(self.config.period_max) if self.config.period_max is not None else default

    def _map_estimator(self) -> str:
        if self.config.estimator == "matrix":
            raise ConfigError("Оценка matrix применима только к подсдвигам конечного типа")
        return self.config.estimator

    def _point(self, data: Dict[str, Any]) -> QBPoint:
        point = qb_point_from_spec(data)
        return point.with_validated() if data.get("validated") else point

    def _certified(self, point: QBPoint) -> QBPoint:
        if point.validated:
            return point
        certificate = certify_component(point, seed=self.config.seed, logger_=self.logger)
        if certificate.status == CertificationStatus.REJECTED:
            raise MapError(f"Точка вне гиперболической компоненты: {certificate.reason}")
        if certificate.status == CertificationStatus.INCONCLUSIVE:
            self.logger.warning(f"Компонента не сертифицирована: {certificate.reason}")
            return point
        return certificate.point

    # ---- подкоманды -------------------------------------------------------

    def cmd_pressure(self) -> CommandOutcome:
        """
        Давление и равновесные величины потенциала на подсдвиге (или отображении).

        Вход: {"spec": {...}} или {"map": {...}}, необязательные "potential"
        (по умолчанию φ ≡ 0) и "observable" (ψ для среднего и дисперсии).
        """
        data = self._load(self.config.input)
        if "spec" in data:
            system = SubshiftSpec.from_dict(data["spec"])
        elif "map" in data:
            system = map_from_spec(data["map"])
        else:
            raise SpecFormatError("Во входе команды pressure нужно поле 'spec' или 'map'")
        phi = potential_from_spec(data.get("potential", {"type": "constant", "c": 0.0}), system)
        n = self._period(settings.DEFAULT_PERIOD)
        estimator = "orbit" if self.config.estimator == "matrix" else self.config.estimator

        sweep = resolve_sweep([phi], n + 1, system=system, workers=self.config.workers,
                             domain=self.config.domain)
        stats = pressure(phi, n, estimator, sweep=sweep, logger_=self.logger)
        described = system.to_dict() if isinstance(system, SubshiftSpec) else system.to_spec()
        result: Dict[str, Any] = {"system": described, "potential": phi.to_spec(), "stats": stats.to_dict()}
        if self.config.estimator == "matrix":
            result["matrix_pressure"] = pressure_matrix(self._cylinder_table(phi, system),
                                                        max(self.config.depth, getattr(phi, "depth", 1)))
            result["pressure"] = result["matrix_pressure"]
        else:
            result["pressure"] = stats.pressure

        if "observable" in data:
            psi = potential_from_spec(data["observable"], system)
            estimate = variance_estimate(psi, phi, n, sweep=sweep, h=self.config.h, logger_=self.logger)
            result["observable"] = {"potential": psi.to_spec(), **estimate.to_dict(),
                                    "cohomology_defect": cohomology_defect(psi, n, sweep=sweep)}

        periods = list(range(2, n + 1))
        sequence = pressure_sequence(phi, periods, sweep=sweep, logger_=self.logger)
        rows = [[p, v] for p, v in zip(periods, sequence)]
        result["convergence"] = [{"period": p, "pressure": v} for p, v in rows]
        return CommandOutcome("pressure", self._report(result), header=("period", "pressure"), rows=rows)

    @staticmethod
    def _cylinder_table(phi: Potential, system) -> CylinderTable:
        if isinstance(phi, CylinderTable):
            return phi
        if isinstance(phi, Constant) and isinstance(system, SubshiftSpec):
            return symbol_table(system, [phi.c] * system.n)
        raise ConfigError("Оценка matrix требует табличного или постоянного потенциала на подсдвиге")

    def cmd_dimension(self) -> CommandOutcome:
        """δ(J(f)) и таблица сходимости δ по уровню n."""
        f = map_from_spec(self._load(self.config.input))
        n = self._period(settings.DEFAULT_PERIOD)
        estimator = self._map_estimator()
        sweep = map_sweep(f, n + 1, domain=self.config.domain, logger_=self.logger)
        dimension = hausdorff_dimension(f, n, estimator, sweep=sweep, logger_=self.logger)
        periods = range(max(2, n - CONVERGENCE_ROWS + 1), n + 1)
        table = dimension_convergence(f, periods, estimator, sweep=sweep, logger_=self.logger)
        result = {"map": f.to_spec(), "dimension": dimension.to_dict(), "convergence": table}
        rows = [[r["period"], r["delta"], r["delta_orbit"], r["residual"]] for r in table]
        return CommandOutcome("dimension", self._report(result),
                              header=("period", "delta", "delta_orbit", "residual"), rows=rows)

    def cmd_norm(self) -> CommandOutcome:
        """‖v‖²_P вдоль пути; с --input2 также форма давления, с g_check - ‖v‖²_G."""
        path = path_from_spec(self._load(self.config.input), self.config.t_max)
        n = self._period(settings.DEFAULT_PERIOD)
        estimator = self._map_estimator()
        seminorm = pressure_seminorm(path, n, self.config.h, estimator, workers=self.config.workers,
                                     logger_=self.logger)
        result: Dict[str, Any] = {"path": path.to_spec(), "seminorm": seminorm.to_dict()}
        if self.config.input2:
            other = path_from_spec(self._load(self.config.input2), self.config.t_max)
            result["path2"] = other.to_spec()
            result["pressure_form"] = pressure_form(path, other, n, self.config.h, estimator,
                                                    workers=self.config.workers, logger_=self.logger)
        if self.config.g_check:
            result["g_check"] = g_seminorm_sq(path, n, self.config.h, estimator, workers=self.config.workers,
                                              logger_=self.logger).to_dict()
        return CommandOutcome("norm", self._report(result),
                              header=("period", "re_lambda", "im_lambda", "D_C", "re_dlog", "im_dlog"),
                              rows=seminorm.rows())

    def cmd_scan(self) -> CommandOutcome:
        """
        Сканирование вырожденности.

        Вход - путь (одно сканирование) или точка QB: {"type":"qb",...} либо
        {"point": {...}, "directions": [{"da":…,"db":…}, ...]} (проверка по направлениям).
        """
        data = self._load(self.config.input)
        n = self._period(settings.DEFAULT_SCAN_PERIOD)
        if data.get("type") in PATH_TYPES:
            return self._scan_path(data, n)

        point = self._point(data.get("point", data))
        directions: Optional[Sequence[TangentVector]] = None
        if "directions" in data:
            directions = [TangentVector.from_spec(v) for v in data["directions"]]
        elif self.config.directions != settings.DIRECTION_COUNT:
            directions = sample_directions(point, self.config.directions, self.config.seed)
        report = theorem_main_check(point, directions, n, self.config.h, self.config.t_max, self.config.tol,
                                    seed=self.config.seed, wp_comparison=self.config.wp_comparison,
                                    workers=self.config.workers, logger_=self.logger)
        rows = [[i, r.scan.verdict.value, r.scan.max_entry, r.scan.tracked_fraction, r.scan.delta]
                for i, r in enumerate(report.directions)]
        status = report.status
        return CommandOutcome("scan", self._report(report.to_dict(), status.value), exit_code_for(status),
                              header=("direction", "verdict", "max_entry", "tracked_fraction", "delta"),
                              rows=rows)

    def _scan_path(self, data: Dict[str, Any], n: int) -> CommandOutcome:
        path = path_from_spec(data, self.config.t_max)
        scan = degeneracy_scan(path, n, self.config.h, self.config.tol, estimator=self._map_estimator(),
                               workers=self.config.workers, logger_=self.logger)
        code = ExitCode.INCONCLUSIVE if scan.verdict == ScanVerdict.INCONCLUSIVE else ExitCode.OK
        result = {"path": path.to_spec(), "scan": scan.to_dict()}
        return CommandOutcome("scan", self._report(result, scan.verdict.value), code,
                              header=("period", "re_z0", "im_z0", "re_lambda", "im_lambda", "entry"),
                              rows=scan.rows())

    def cmd_cycles(self) -> CommandOutcome:
        """Циклы периода, делящего n (CSV)."""
        f = map_from_spec(self._load(self.config.input))
        n = self._period(settings.DEFAULT_SCAN_PERIOD)
        domain = self.config.domain or ("circle" if f.circle is not None else "plane")
        found = cycles(f, n, domain=domain, logger_=self.logger)
        rows = iter_cycle_rows(found)
        result = {"map": f.to_spec(), "period": n, "domain": domain, "cycle_count": len(found),
                  "point_count": sum(c.period for c in found)}
        return CommandOutcome("cycles", self._report(result),
                              header=("period", "re_z0", "im_z0", "re_lambda", "im_lambda", "repelling"),
                              rows=rows)

    def cmd_order(self) -> CommandOutcome:
        """
        Класс разметки неподвижных точек переносом к локусу Бляшке.

        Вход - точка QB или {"point": {...}, "path": {...}, "marking": [...]}.
        Класс пересчитывается на вдвое более мелкой сетке; несовпадение - провал.
        """
        data = self._load(self.config.input)
        point = self._certified(self._point(data.get("point", data)))
        path = path_from_spec(data["path"], self.config.t_max) if "path" in data else None
        marking = complex_list_from_spec(data["marking"], "marking") if "marking" in data else None

        label = transport_marking(point, path, self.config.grid, marking, self.config.seed, self.logger)
        refined = transport_marking(point, path, 2 * self.config.grid, marking, self.config.seed, self.logger)
        stable = label.class_key == refined.class_key
        if not stable:
            self.logger.error(f"Класс разметки зависит от сетки: {label.class_index} != {refined.class_index}")
        result = {"point": point.to_spec(), "marking": label.to_dict(), "grid_stable": stable,
                  "refined_class_index": refined.class_index}
        code = ExitCode.OK if stable else ExitCode.FAILURE
        return CommandOutcome("order", self._report(result, "pass" if stable else "fail"), code,
                              header=("label", "argument"),
                              rows=[[k, a] for k, a in zip(label.cyclic_order, label.endpoint_arguments)])

    def cmd_involution(self) -> CommandOutcome:
        """ι(x) и проверка сопряженности мультипликаторов соответствующих циклов."""
        point = self._certified(self._point(self._load(self.config.input)))
        image = involution(point)
        n = self._period(INVOLUTION_PERIOD)
        f, g = qb(point), qb(image)
        f_cycles = periodic_cycles_up_to(f, n, domain="plane", logger_=self.logger)
        g_cycles = periodic_cycles_up_to(g, n, domain="plane", logger_=self.logger)
        rows, unmatched = match_conjugate_cycles(f_cycles, g_cycles)

        deviation = max((r[-1] for r in rows), default=0.0)
        fixed, _ = is_blaschke_point(point)
        passed = not unmatched and len(f_cycles) == len(g_cycles) and deviation <= INVOLUTION_TOL
        if not passed:
            self.logger.error(f"Сопряженность мультипликаторов нарушена: отклонение {deviation:.3e}, "
                              f"без пары {len(unmatched)}")
        result = {"point": point.to_spec(), "image": image.to_spec(), "fixed_by_involution": fixed,
                  "max_period": n, "cycle_count": len(f_cycles), "image_cycle_count": len(g_cycles),
                  "unmatched": unmatched, "max_deviation": deviation, "tolerance": INVOLUTION_TOL}
        return CommandOutcome("involution", self._report(result, "pass" if passed else "fail"),
                              ExitCode.OK if passed else ExitCode.FAILURE,
                              header=("period", "re_lambda", "im_lambda", "re_lambda_image", "im_lambda_image",
                                      "deviation"),
                              rows=rows)


def match_conjugate_cycles(f_cycles: List[Cycle], g_cycles: List[Cycle],
                           tol: float = 1e-6) -> Tuple[List[list], List[int]]:
    """
    Сопоставляет циклы f и g = σ∘f∘σ, σ(z) = 1/z̄: цикл f через точки z
    переходит в цикл g через точки 1/z̄ с мультипликатором λ̄.

    Returns:
        (строки period, λ_f, λ_g, |λ_g − λ̄_f|/max(1, |λ_f|); индексы циклов f без пары).
    """
    if not g_cycles:
        return [], list(range(len(f_cycles)))
    owners = [j for j, c in enumerate(g_cycles) for _ in c.points]
    points = np.array([z for c in g_cycles for z in c.points])
    tree = cKDTree(np.column_stack([points.real, points.imag]))

    rows: List[list] = []
    unmatched: List[int] = []
    for i, cycle in enumerate(f_cycles):
        target = 1.0 / np.conj(cycle.points[0])
        distance, j = tree.query([target.real, target.imag])
        partner = g_cycles[owners[j]]
        if distance > tol * max(1.0, abs(target)) or partner.period != cycle.period:
            unmatched.append(i)
            continue
        lam, image = cycle.multiplier, partner.multiplier
        deviation = abs(image - np.conj(lam)) / max(1.0, abs(lam))
        rows.append([cycle.period, lam.real, lam.imag, image.real, image.imag, float(deviation)])
    return rows, unmatched
