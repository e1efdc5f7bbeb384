# src/utils/exceptions.py
"""
Модуль содержит пользовательские классы исключений для библиотеки pressurelab.
Это позволяет более точно обрабатывать различные типы ошибок
и переводить их в коды завершения командной строки.
"""

from typing import Optional


class PressureLabError(Exception):
    """Базовый класс для исключений в библиотеке pressurelab."""
    pass


class SubshiftError(PressureLabError):
    """Базовый класс для исключений, связанных с подсдвигами конечного типа."""
    pass


class MalformedSubshiftError(SubshiftError):
    """Матрица переходов не 0/1 или содержит нулевую строку/столбец."""
    pass


class ResourceCapError(PressureLabError):
    """Число перечисляемых объектов превышает настроенный предел."""

    def __init__(self, message: str, count: int = 0, cap: int = 0):
        super().__init__(message)
        self.count = count
        self.cap = cap


class ThermoError(PressureLabError):
    """Базовый класс для исключений термодинамического формализма."""
    pass


class ConvergenceError(ThermoError):
    """Итерационный метод не сошелся."""
    pass


class EstimatorDisagreementError(ThermoError):
    """Основная оценка и перекрестная проверка расходятся сильнее допуска."""

    def __init__(self, message: str, primary: float = 0.0, cross_check: float = 0.0):
        super().__init__(message)
        self.primary = primary
        self.cross_check = cross_check


class NonPositiveDenominatorError(ThermoError):
    """Знаменатель нормы давления -∫φ dm неположителен."""
    pass


class MapError(PressureLabError):
    """Базовый класс для исключений, связанных с рациональными отображениями."""
    pass


class DegenerateMapError(MapError):
    """Отображение вырождено: степень меньше 2 или общий множитель p и q."""
    pass


class DenominatorError(MapError):
    """Знаменатель нормальной формы Q_{a,b} обращается в ноль."""
    pass


class CriticalOrbitError(MapError):
    """Геометрический потенциал вычисляется в точке, где f' = 0."""
    pass


class NotBlaschkeError(MapError):
    """Точка не лежит на локусе Бляшке."""
    pass


class AmbiguousPairingError(MapError):
    """Сопоставление b с сопряженными a неоднозначно."""
    pass


class ContinuationError(PressureLabError):
    """Базовый класс для исключений продолжения циклов."""
    pass


class TrackingError(ContinuationError):
    """Шаг продолжения стал меньше допустимого."""

    def __init__(self, message: str, last_t: Optional[float] = None):
        super().__init__(message)
        self.last_t = last_t


class BranchConsistencyError(ContinuationError):
    """Ветвь логарифма мультипликатора прыгнула примерно на 2πi."""
    pass


class CollisionError(ContinuationError):
    """Две отслеживаемые неподвижные точки сблизились (параболическая граница)."""
    pass


class DimensionError(PressureLabError):
    """Базовый класс для исключений при решении уравнения Боуэна."""
    pass


class BracketError(DimensionError):
    """Функция давления не меняет знак на отрезке поиска."""
    pass


class MonotonicityError(DimensionError):
    """Функция s ↦ P(-s·log|f'|) не убывает на сетке: плохие данные о циклах."""
    pass


class ConfigError(PressureLabError):
    """Базовый класс для исключений, связанных с конфигурацией."""
    pass


class ConfigLoadError(ConfigError):
    """Исключение, связанное с загрузкой конфигурации или файла спецификации."""
    pass


class SpecFormatError(ConfigError):
    """JSON-спецификация имеет неверный формат."""
    pass
