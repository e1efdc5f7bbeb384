# src/controllers/__init__.py
"""
Пакет содержит контроллеры командной строки, которые соединяют разобранные
флаги с вычислительными модулями.
"""

from src.controllers.command_controller import CommandController, CommandOutcome, ExitCode
from src.controllers.run_config import RunConfig

# Определяем версию пакета
__version__ = "0.1.0"
