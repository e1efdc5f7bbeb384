# src/utils/resources.py
"""
Модуль для работы с ресурсами приложения.
Предоставляет удобные методы для получения путей к шаблонам отчетов.
"""

import os
from pathlib import Path


class Resources:
    """Класс для работы с ресурсами приложения."""

    # Базовые пути
    PACKAGE_DIR = Path(__file__).resolve().parent.parent
    TEMPLATES_DIR = PACKAGE_DIR / "templates"

    @classmethod
    def get_template_path(cls, template_name: str) -> str:
        """
        Возвращает полный путь к шаблону отчета.

        Args:
            template_name: Имя шаблона без расширения или с расширением

        Returns:
            Полный путь к файлу шаблона
        """
        # Добавляем расширение .jinja, если его нет
        if not template_name.endswith('.jinja'):
            template_name = f"{template_name}.jinja"

        return str(cls.TEMPLATES_DIR / template_name)

    @classmethod
    def ensure_dir_exists(cls, dir_path: str) -> bool:
        """
        Проверяет существование директории и создает ее, если она не существует.

        Args:
            dir_path: Путь к директории

        Returns:
            True, если директория существует или была успешно создана, иначе False
        """
        if not dir_path:
            return True
        try:
            os.makedirs(dir_path, exist_ok=True)
            return True
        except OSError:
            return False
