# src/maps/roots.py
"""
Одновременный поиск корней многочлена методом Аберта–Эрлиха с полировкой Ньютоном.

Коэффициенты задаются по возрастанию степеней: c[0] + c[1]·z + … + c[n]·z^n.
"""

import logging
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from config import settings

logger = logging.getLogger("Roots")


def trim_coefficients(coeffs, rtol: float = 1e-14) -> np.ndarray:
    """Отбрасывает старшие коэффициенты, пренебрежимо малые относительно максимального."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.abs(coeffs).max()
    if scale == 0:
        return np.zeros(1, dtype=complex)
    last = coeffs.size - 1
    while last > 0 and abs(coeffs[last]) <= rtol * scale:
        last -= 1
    return coeffs[:last + 1]


def newton_polish(coeffs: np.ndarray, roots: np.ndarray, tol: float = settings.NEWTON_TOL,
                  max_iter: int = 20) -> np.ndarray:
    """Уточняет корни методом Ньютона (векторно по всем корням)."""
    deriv = P.polyder(coeffs)
    z = np.array(roots, dtype=complex)
    for _ in range(max_iter):
        value = P.polyval(z, coeffs)
        slope = P.polyval(z, deriv)
        safe = np.abs(slope) > 0
        step = np.zeros_like(z)
        step[safe] = value[safe] / slope[safe]
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            break
    return z


def aberth_ehrlich(coeffs, seed: int = settings.DEFAULT_SEED, tol: float = settings.NEWTON_TOL,
                   max_iter: int = settings.ABERTH_MAX_ITER, restarts: int = 3,
                   logger_: Optional[logging.Logger] = None) -> np.ndarray:
    """
    Находит все корни многочлена методом Аберта–Эрлиха.

    Начальные приближения лежат на окружности радиуса границы Коши со
    случайным (детерминированным по seed) поворотом; при отсутствии
    сходимости выполняется перезапуск с новым возмущением. Если все
    запуски не сошлись, корни берутся из np.roots (сопровождающая матрица).

    Args:
        coeffs: Коэффициенты по возрастанию степеней.
        seed: Зерно генератора начальных приближений.
        tol: Относительный допуск на поправку.
        max_iter: Максимальное число итераций на один запуск.
        restarts: Число перезапусков.

    Returns:
        Массив корней (с кратностью), отсортированный по (Re, Im).
    """
    log = logger_ or logger
    coeffs = trim_coefficients(coeffs)
    degree = coeffs.size - 1
    if degree < 1:
        return np.empty(0, dtype=complex)
    if degree == 1:
        return np.array([-coeffs[0] / coeffs[1]], dtype=complex)

    monic = coeffs / coeffs[-1]
    deriv = P.polyder(monic)
    # Граница Коши для модулей корней
    radius = 1.0 + np.abs(monic[:-1]).max()
    rng = np.random.default_rng(seed)

    z = None
    for attempt in range(restarts + 1):
        phase = rng.uniform(0.0, 2.0 * np.pi)
        angles = 2.0 * np.pi * np.arange(degree) / degree + phase + 0.4
        scale = radius * (0.5 + 0.5 * rng.uniform(0.5, 1.0))
        z = scale * np.exp(1j * angles)

        converged = False
        for _ in range(max_iter):
            value = P.polyval(z, monic)
            slope = P.polyval(z, deriv)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            repulsion = inv.sum(axis=1)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratio = value / slope
                offset = ratio / (1.0 - ratio * repulsion)
            offset = np.where(np.isfinite(offset), offset, 0.0)
            z = z - offset
            if np.all(np.abs(offset) <= tol * (1.0 + np.abs(z))):
                converged = True
                break

        if converged:
            break
        log.debug(f"Метод Аберта–Эрлиха не сошелся, перезапуск {attempt + 1}")
    else:
        log.warning(f"Метод Аберта–Эрлиха не сошелся за {restarts + 1} запусков: "
                    "корни берутся из собственных чисел сопровождающей матрицы")
        z = np.roots(monic[::-1]).astype(complex)

    z = newton_polish(monic, z, tol=tol)
    order = np.lexsort((z.imag, z.real))
    return z[order]
