# src/controllers/run_config.py
"""
Конфигурация запуска командной строки.

Значения берутся по возрастанию приоритета: config/settings.py → JSON-файл
--config → флаги командной строки → переменная окружения PRESSURELAB_WORKERS
(только число потоков).
"""

import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from config import settings
from src.utils.exceptions import ConfigError
from src.utils.file_manager import load_json
from src.utils.workers import WORKERS_ENV_VAR, default_workers

COMMANDS = ("pressure", "dimension", "norm", "scan", "cycles", "order", "involution")
FORMATS = ("json", "csv", "text")
ESTIMATORS = ("orbit", "zeta", "matrix")
DOMAINS = ("circle", "plane")


@dataclass(frozen=True)
class RunConfig:
    """
    Полностью разрешенные параметры одного запуска.

    Attributes:
        command: Подкоманда.
        input: JSON-спецификация (подсдвиг с потенциалом, отображение, путь или точка).
        input2: Второй путь для формы давления.
        output: Файл результата (None - stdout).
        format: json, csv или text.
        period_max: Уровень n / наибольший период (None - значение команды по умолчанию).
        depth: Глубина матрицы цилиндров.
        tol: Порог вырожденности tol_deg.
        h: Шаг по t.
        t_max: Полуширина касательных путей.
        grid: Число шагов продолжения.
        seed: Зерно случайных начальных приближений.
        workers: Число потоков.
        estimator: orbit, zeta или matrix.
        domain: circle или plane (None - по отображению).
        directions: Число направлений сканирования.
        g_check: Вычислять ‖v‖²_G вместе с полунормой.
        wp_comparison: Запрошено сравнение с метрикой Вейля–Петерссона.
        log_file: Файл логов.
        verbose: Уровень DEBUG.
    """
    command: str
    input: Optional[str] = None
    input2: Optional[str] = None
    output: Optional[str] = None
    format: str = "json"
    period_max: Optional[int] = None
    depth: int = settings.DEFAULT_DEPTH
    tol: float = settings.TOL_DEG
    h: Optional[float] = None
    t_max: float = settings.DEFAULT_T_MAX
    grid: int = settings.TRACK_GRID
    seed: int = settings.DEFAULT_SEED
    workers: int = 1
    estimator: str = settings.DEFAULT_ESTIMATOR
    domain: Optional[str] = None
    directions: int = settings.DIRECTION_COUNT
    g_check: bool = False
    wp_comparison: bool = False
    log_file: Optional[str] = None
    verbose: bool = False

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def resolve(cls, command: str, flags: Mapping[str, Any], config_path: Optional[str] = None,
                environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        """
        Собирает конфигурацию по приоритетам.

        Args:
            command: Подкоманда.
            flags: Значения флагов (None - флаг не задан).
            config_path: JSON-файл конфигурации.
            environ: Окружение (по умолчанию os.environ).

        Raises:
            ConfigError: Если значение неизвестно или вне допустимого диапазона.
        """
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {"command": command, "workers": default_workers()}
        known = set(cls.field_names())

        if config_path:
            data = load_json(config_path)
            unknown = sorted(set(data) - known)
            if unknown:
                raise ConfigError(f"Неизвестные параметры в {config_path}: {', '.join(unknown)}")
            values.update({k: v for k, v in data.items() if k != "command"})

        for key, value in flags.items():
            if key in known and key != "command" and value is not None:
                values[key] = value

        if environ.get(WORKERS_ENV_VAR):
            try:
                values["workers"] = int(environ[WORKERS_ENV_VAR])
            except ValueError:
                raise ConfigError(f"{WORKERS_ENV_VAR} должно быть целым числом")

        try:
            config = cls(**values)
        except TypeError as e:
            raise ConfigError(f"Некорректная конфигурация: {e}")
        config.validate()
        return config

    def validate(self):
        """
        Raises:
            ConfigError: Если параметр вне документированного диапазона.
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"Неизвестная команда: {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"Формат должен быть одним из {', '.join(FORMATS)}")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"Оценка давления должна быть одной из {', '.join(ESTIMATORS)}")
        if self.domain is not None and self.domain not in DOMAINS:
            raise ConfigError(f"Режим циклов должен быть одним из {', '.join(DOMAINS)}")
        if self.period_max is not None and not 1 <= int(self.period_max) <= 30:
            raise ConfigError("--period-max должен быть в диапазоне [1, 30]")
        if not 1 <= int(self.depth) <= 24:
            raise ConfigError("--depth должен быть в диапазоне [1, 24]")
        if not 0 < float(self.tol) < 1:
            raise ConfigError("--tol должен быть в интервале (0, 1)")
        if self.h is not None and not settings.CONTINUATION_MIN_H <= float(self.h) <= 1e-1:
            raise ConfigError(f"--h должен быть в диапазоне [{settings.CONTINUATION_MIN_H:g}, 0.1]")
        if not 0 < float(self.t_max) <= 1:
            raise ConfigError("--t-max должен быть в интервале (0, 1]")
        if not 1 <= int(self.grid) <= 10_000:
            raise ConfigError("--grid должен быть в диапазоне [1, 10000]")
        if int(self.workers) < 1:
            raise ConfigError("Число потоков должно быть положительным")
        if int(self.directions) < 1:
            raise ConfigError("Число направлений должно быть положительным")
        if self.input is None:
            raise ConfigError(f"Команде {self.command} нужен --input")

    def with_overrides(self, **changes) -> "RunConfig":
        config = replace(self, **changes)
        config.validate()
        return config

    def to_dict(self) -> Dict[str, Any]:
        """Конфигурация для отчета (без путей логов, уровня вывода и числа потоков)."""
        data = asdict(self)
        for key in ("log_file", "verbose", "workers"):
            data.pop(key)
        return data
