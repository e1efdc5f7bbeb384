# src/utils/file_manager.py
"""
Модуль для работы с файловой системой приложения.
Предоставляет функции для чтения JSON-спецификаций, записи отчетов и CSV-таблиц.
"""

import csv
import io
import json
import math
import os
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.utils.exceptions import ConfigLoadError, SpecFormatError
from src.utils.resources import Resources


def load_json(path: str) -> Dict[str, Any]:
    """
    Загружает JSON-файл спецификации или конфигурации.

    Args:
        path: Путь к файлу.

    Returns:
        Словарь с содержимым файла.

    Raises:
        ConfigLoadError: Если файл не существует или не читается.
        SpecFormatError: Если содержимое не является JSON-объектом.
    """
    if not os.path.exists(path):
        raise ConfigLoadError(f"Файл не найден: {path}")

    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"Некорректный JSON в файле {path}: {e}")
    except OSError as e:
        raise ConfigLoadError(f"Ошибка при чтении файла {path}: {e}")

    if not isinstance(data, dict):
        raise SpecFormatError(f"Ожидался JSON-объект в файле {path}")

    return data


def to_jsonable(value: Any) -> Any:
    """
    Приводит результат вычислений к виду, пригодному для json.dumps.

    Комплексные числа записываются парой [re, im], массивы numpy - списками,
    нечисловые значения с плавающей точкой - как null.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps_report(report: Dict[str, Any]) -> str:
    """
    Сериализует отчет в JSON с фиксированным порядком ключей и окончанием строки LF.

    repr() чисел с плавающей точкой дает кратчайшую запись, точно
    восстанавливающую значение (не более 17 значащих цифр).
    """
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def format_number(value: Any) -> str:
    """Форматирует число для CSV с 17 значащими цифрами."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)


def render_csv(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    """
    Формирует CSV-таблицу в виде строки.

    Args:
        header: Заголовки столбцов.
        rows: Строки таблицы.

    Returns:
        Текст CSV с окончаниями строк LF.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def write_text(path: Optional[str], text: str) -> Optional[str]:
    """
    Записывает текст в файл или, если путь не указан, возвращает None
    (вывод в stdout выполняет вызывающая сторона).
    """
    if not path:
        return None
    Resources.ensure_dir_exists(os.path.dirname(path))
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    return path
