# src/reporting/report_generator.py

from typing import Any, Dict, Optional

import jinja2

from src.utils.file_manager import to_jsonable
from src.utils.resources import Resources


class ReportGenerator:
    """
    Генератор текстовых сводок по отчетам команд.
    Каждой подкоманде соответствует шаблон <команда>.txt.jinja.
    """

    FALLBACK_TEMPLATE = "generic.txt.jinja"

    def __init__(self, templates_dir: Optional[str] = None):
        """
        Инициализирует генератор сводок.

        Args:
            templates_dir: Путь к директории с шаблонами (по умолчанию src/templates).
        """
        self.env = jinja2.Environment(
            loader=jinja2.FileSystemLoader(templates_dir or str(Resources.TEMPLATES_DIR)),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            undefined=jinja2.StrictUndefined,
        )

        self.env.filters['num'] = self.format_value
        self.env.filters['cnum'] = self.format_complex

    @staticmethod
    def format_value(value: Any, digits: int = 10) -> str:
        """Число с заданным числом значащих цифр; None - как «—»."""
        if value is None:
            return "—"
        if isinstance(value, bool):
            return "да" if value else "нет"
        if isinstance(value, (int, float)):
            return format(value, f".{digits}g")
        return str(value)

    @classmethod
    def format_complex(cls, value: Any, digits: int = 8) -> str:
        """Пара [re, im] как a+bi."""
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            return cls.format_value(value, digits)
        re, im = value
        if re is None or im is None:
            return "—"
        sign = "-" if im < 0 else "+"
        return f"{format(re, f'.{digits}g')}{sign}{format(abs(im), f'.{digits}g')}i"

    def render(self, report: Dict[str, Any]) -> str:
        """
        Формирует текстовую сводку отчета.

        Args:
            report: Отчет команды (поля command, status, config, result).

        Returns:
            Текст сводки с окончаниями строк LF.
        """
        command = report.get("command", "")
        try:
            template = self.env.get_template(f"{command}.txt.jinja")
        except jinja2.TemplateNotFound:
            template = self.env.get_template(self.FALLBACK_TEMPLATE)
        return template.render(report=to_jsonable(report), result=to_jsonable(report.get("result", {})))
