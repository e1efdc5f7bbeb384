# src/main.py
"""
Точка входа командной строки pressurelab.

Подкоманды: pressure, dimension, norm, scan, cycles, order, involution.
Коды завершения: 0 - успех, 1 - некорректный вход, 2 - проверка не пройдена
или вычисление не удалось, 3 - есть только неопределенные проверки,
4 - превышен предел ресурсов.
"""

import argparse
import logging
import os
import sys
import traceback
from typing import List, Optional

from src.controllers.command_controller import CommandController, CommandOutcome, ExitCode
from src.controllers.run_config import COMMANDS, DOMAINS, ESTIMATORS, FORMATS, RunConfig
from src.reporting.report_generator import ReportGenerator
from src.utils.exceptions import (
    ConfigError, MapError, PressureLabError, ResourceCapError, SpecFormatError, SubshiftError,
)
from src.utils.file_manager import dumps_report, render_csv, write_text
from src.utils.logger import setup_logger
from src.utils.resources import Resources

APP_NAME = "pressurelab"
APP_VERSION = "0.1.0"

BAD_INPUT_ERRORS = (ConfigError, SpecFormatError, SubshiftError, MapError)


def setup_exception_hook(logger: logging.Logger):
    """Настраивает глобальный обработчик исключений"""

    def exception_hook(exc_type, exc_value, exc_traceback):
        """Обрабатывает непойманные исключения"""
        tb_text = ''.join(traceback.format_exception(exc_type, exc_value, exc_traceback))
        logger.error(f"Непойманное исключение:\n{tb_text}")
        sys.__excepthook__(exc_type, exc_value, exc_traceback)

    sys.excepthook = exception_hook


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON-спецификация входа")
    common.add_argument("--input2", help="второй путь (форма давления)")
    common.add_argument("--output", help="файл результата (по умолчанию stdout)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--period-max", dest="period_max", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--h", type=float)
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--grid", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--estimator", choices=ESTIMATORS)
    common.add_argument("--domain", choices=DOMAINS)
    common.add_argument("--directions", type=int)
    common.add_argument("--g-check", dest="g_check", action="store_true", default=None)
    common.add_argument("--wp-comparison", dest="wp_comparison", action="store_true", default=None)
    common.add_argument("--config", dest="config_path", help="JSON-файл конфигурации запуска")
    common.add_argument("--log-file", dest="log_file")
    common.add_argument("--verbose", action="store_true", default=None)

    parser = argparse.ArgumentParser(prog=APP_NAME, description="Термодинамический формализм и полунорма давления")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser.parse_args(argv)


def render_output(outcome: CommandOutcome, fmt: str) -> str:
    """Текст результата в выбранном формате."""
    if fmt == "csv":
        return render_csv(outcome.header, outcome.rows)
    if fmt == "text":
        return ReportGenerator().render(outcome.report)
    return dumps_report(outcome.report)


def exit_code_for_error(error: PressureLabError) -> ExitCode:
    if isinstance(error, ResourceCapError):
        return ExitCode.RESOURCE_CAP
    if isinstance(error, BAD_INPUT_ERRORS):
        return ExitCode.BAD_INPUT
    return ExitCode.FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """Основная функция запуска командной строки"""
    args = _parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config_path")}

    level = logging.DEBUG if args.verbose else logging.INFO
    if args.log_file:
        Resources.ensure_dir_exists(os.path.dirname(args.log_file))
    logger = setup_logger(APP_NAME, args.log_file, level)
    setup_exception_hook(logger)

    try:
        config = RunConfig.resolve(args.command, flags, args.config_path)
        outcome = CommandController(config, logger).run()
        text = render_output(outcome, config.format)
    except PressureLabError as e:
        code = exit_code_for_error(e)
        logger.error(f"{type(e).__name__}: {e}")
        return int(code)

    if write_text(config.output, text) is None:
        sys.stdout.write(text)
    else:
        logger.info(f"Результат записан в {config.output}")
    return int(outcome.exit_code)


if __name__ == '__main__':
    raise SystemExit(main())
