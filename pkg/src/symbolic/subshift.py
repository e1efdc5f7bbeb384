# src/symbolic/subshift.py
"""
Подсдвиги конечного типа (Σ_A^+, σ): допустимые слова, цилиндры и периодические
последовательности.

Символы нумеруются с 1, как в записи i_j ∈ {1, …, n}. Перечисления строятся
поуровневым расширением слов по графу переходов и сверяются с точными
целочисленными степенями матрицы A.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from src.utils.exceptions import MalformedSubshiftError, ResourceCapError, SpecFormatError

Word = Tuple[int, ...]


def _integer_power(matrix: np.ndarray, k: int) -> np.ndarray:
    """Точная степень целочисленной матрицы (без переполнения, dtype=object)."""
    base = matrix.astype(object)
    result = np.identity(matrix.shape[0], dtype=int).astype(object)
    while k > 0:
        if k & 1:
            result = result.dot(base)
        base = base.dot(base)
        k >>= 1
    return result


@dataclass(frozen=True)
class SubshiftSpec:
    """
    Алфавит {1..n} и 0/1 матрица переходов A.

    Attributes:
        n: Размер алфавита.
        A: Матрица переходов (кортеж строк).
    """
    n: int
    A: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        matrix = np.asarray(self.A)
        if self.n < 1 or matrix.shape != (self.n, self.n):
            raise MalformedSubshiftError(
                f"Матрица переходов должна иметь размер {self.n}×{self.n}, получено {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise MalformedSubshiftError("Матрица переходов должна содержать только 0 и 1")
        if (matrix.sum(axis=1) == 0).any() or (matrix.sum(axis=0) == 0).any():
            raise MalformedSubshiftError("Матрица переходов содержит нулевую строку или столбец")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "SubshiftSpec":
        """Создает подсдвиг по матрице переходов."""
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        return cls(n=len(rows), A=rows)

    @classmethod
    def full_shift(cls, d: int) -> "SubshiftSpec":
        """Полный сдвиг на d символах."""
        return cls.from_matrix(np.ones((d, d), dtype=int).tolist())

    @classmethod
    def golden_mean(cls) -> "SubshiftSpec":
        """Сдвиг золотого сечения: запрещено слово 22."""
        return cls.from_matrix([[1, 1], [1, 0]])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SubshiftSpec":
        """
        Создает подсдвиг из JSON-объекта {"n": int, "A": [[0|1, ...], ...]}.

        Raises:
            SpecFormatError: Если поля отсутствуют.
        """
        if "A" not in data:
            raise SpecFormatError("В спецификации подсдвига нет поля 'A'")
        spec = cls.from_matrix(data["A"])
        if "n" in data and int(data["n"]) != spec.n:
            raise SpecFormatError(f"Поле n={data['n']} не совпадает с размером матрицы {spec.n}")
        return spec

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "A": [list(row) for row in self.A]}

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.A, dtype=int)

    @cached_property
    def successors(self) -> List[np.ndarray]:
        """Для каждого символа (с 0) - упорядоченный массив допустимых последователей (с 0)."""
        return [np.flatnonzero(self.matrix[i]) for i in range(self.n)]

    @cached_property
    def aperiodicity(self) -> Tuple[bool, Optional[int]]:
        return is_aperiodic(self)

    def is_admissible(self, word: Sequence[int]) -> bool:
        """Проверяет допустимость слова (символы с 1)."""
        if any(s < 1 or s > self.n for s in word):
            return False
        return all(self.A[a - 1][b - 1] == 1 for a, b in zip(word, word[1:]))


def is_aperiodic(spec: SubshiftSpec) -> Tuple[bool, Optional[int]]:
    """
    Проверяет апериодичность матрицы A.

    Используются насыщающие булевы степени, поэтому переполнения нет.

    Args:
        spec: Подсдвиг.

    Returns:
        Кортеж (апериодична, наименьшее k ≤ n² с A^k > 0 или None).
    """
    boolean = spec.matrix.astype(bool)
    power = boolean.copy()
    for k in range(1, spec.n * spec.n + 1):
        if power.all():
            return True, k
        power = (power.astype(np.int64) @ boolean.astype(np.int64)) > 0
    return False, None


def count_admissible(spec: SubshiftSpec, k: int) -> int:
    """Число допустимых слов длины k: 1ᵀ A^{k-1} 1."""
    if k < 1:
        raise ValueError("Длина слова должна быть не меньше 1")
    return int(_integer_power(spec.matrix, k - 1).sum())


def count_periodic(spec: SubshiftSpec, n: int) -> int:
    """Число точек с σ^n x = x: trace(A^n)."""
    if n < 1:
        raise ValueError("Период должен быть не меньше 1")
    return int(np.trace(_integer_power(spec.matrix, n)))


def _check_cap(count: int, cap: Optional[int], what: str):
    cap = settings.CYLINDER_CAP if cap is None else cap
    if count > cap:
        raise ResourceCapError(f"Число {what} ({count}) превышает предел {cap}", count=count, cap=cap)


def cylinder_array(spec: SubshiftSpec, k: int, cap: Optional[int] = None) -> np.ndarray:
    """
    Допустимые слова длины k в виде массива (число слов, k) с символами от 0.

    Строки упорядочены лексикографически.
    """
    if k < 1:
        raise ValueError("Глубина цилиндра должна быть не меньше 1")
    expected = count_admissible(spec, k)
    _check_cap(expected, cap, "цилиндров")

    succ_counts = spec.matrix.sum(axis=1)
    words = np.arange(spec.n, dtype=np.int64).reshape(-1, 1)
    for _ in range(k - 1):
        last = words[:, -1]
        counts = succ_counts[last]
        extended = np.repeat(words, counts, axis=0)
        appended = np.concatenate([spec.successors[s] for s in last]) if len(last) else np.empty(0, np.int64)
        words = np.column_stack([extended, appended.astype(np.int64)])

    if words.shape[0] != expected:
        raise RuntimeError(f"Перечисление цилиндров нарушено: {words.shape[0]} != {expected}")
    return words


def enumerate_cylinders(spec: SubshiftSpec, k: int, cap: Optional[int] = None) -> List[Word]:
    """
    Перечисляет допустимые слова длины k в лексикографическом порядке.

    Args:
        spec: Подсдвиг.
        k: Глубина (k ≥ 1).
        cap: Предел числа слов (по умолчанию 10^7).

    Returns:
        Список слов (символы с 1).

    Raises:
        ResourceCapError: Если число слов превышает предел.
    """
    words = cylinder_array(spec, k, cap)
    return [tuple(int(s) + 1 for s in row) for row in words]


def _word_keys(words: np.ndarray, base: int) -> Optional[np.ndarray]:
    """Кодирует слова целыми числами в системе счисления base (порядок сохраняется)."""
    length = words.shape[1]
    if length * np.log2(max(base, 2)) >= 62:
        return None
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return words @ powers


def _rotation_keys(words: np.ndarray, base: int) -> Optional[np.ndarray]:
    """Ключи всех циклических сдвигов: массив (число слов, длина)."""
    length = words.shape[1]
    keys = [_word_keys(np.roll(words, -r, axis=1), base) for r in range(length)]
    if keys[0] is None:
        return None
    return np.column_stack(keys)


def _least_rotation(word: Sequence[int]) -> Tuple[int, ...]:
    return min(tuple(word[r:]) + tuple(word[:r]) for r in range(len(word)))


def canonical_rotation(word: Sequence[int]) -> Word:
    """Лексикографически наименьший циклический сдвиг слова."""
    return tuple(int(s) for s in _least_rotation(list(word)))


def minimal_period(word: Sequence[int]) -> int:
    """Наименьший период периодической последовательности с повторяемым блоком word."""
    length = len(word)
    for p in range(1, length + 1):
        if length % p == 0 and tuple(word) == tuple(word[p:]) + tuple(word[:p]):
            return p
    return length


def periodic_array(spec: SubshiftSpec, period: int, exact: bool = False,
                   cap: Optional[int] = None) -> np.ndarray:
    """
    Периодические слова длины period (символы с 0), отсортированные лексикографически.

    Args:
        spec: Подсдвиг.
        period: Период n.
        exact: Оставить только слова точного периода n.
        cap: Предел числа слов.
    """
    if period < 1:
        raise ValueError("Период должен быть не меньше 1")
    expected = count_periodic(spec, period)
    _check_cap(expected, cap, "периодических слов")

    # Внутреннее перечисление цилиндров ограничено только числом периодических слов
    words = cylinder_array(spec, period, cap=count_admissible(spec, period))
    closing = spec.matrix[words[:, -1], words[:, 0]] == 1
    words = words[closing]
    if words.shape[0] != expected:
        raise RuntimeError(f"Перечисление периодических слов нарушено: {words.shape[0]} != {expected}")

    if exact and period > 1:
        keys = _rotation_keys(words, spec.n)
        if keys is not None:
            repeated = (keys[:, 1:] == keys[:, :1]).any(axis=1)
        else:
            repeated = np.array([minimal_period(list(w)) < period for w in words])
        words = words[~repeated]
    return words


def enumerate_periodic_words(spec: SubshiftSpec, period: int, exact: bool = False,
                             cap: Optional[int] = None) -> List[Word]:
    """
    Перечисляет представителей x с σ^n x = x (слово длины n на точку).

    По умолчанию включаются и точки делящих периодов, поэтому число слов
    равно trace(A^n); флаг exact оставляет только точный период n.

    Args:
        spec: Подсдвиг.
        period: Период n ≥ 1.
        exact: Только точный период.
        cap: Предел числа слов.

    Returns:
        Отсортированный список слов (символы с 1).
    """
    words = periodic_array(spec, period, exact=exact, cap=cap)
    return [tuple(int(s) + 1 for s in row) for row in words]


def primitive_orbit_array(spec: SubshiftSpec, period: int, cap: Optional[int] = None) -> np.ndarray:
    """
    По одному каноническому слову (наименьший сдвиг) на σ-орбиту точного периода.
    Символы с 0.
    """
    words = periodic_array(spec, period, exact=True, cap=cap)
    if period == 1 or words.shape[0] == 0:
        return words
    keys = _rotation_keys(words, spec.n)
    if keys is not None:
        canonical = keys[:, 0] == keys.min(axis=1)
    else:
        canonical = np.array([tuple(w) == _least_rotation(list(w)) for w in words])
    return words[canonical]


def primitive_orbits(spec: SubshiftSpec, period: int, cap: Optional[int] = None) -> List[Word]:
    """Канонические представители орбит точного периода (символы с 1)."""
    return [tuple(int(s) + 1 for s in row) for row in primitive_orbit_array(spec, period, cap)]
