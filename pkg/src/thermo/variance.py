# src/thermo/variance.py
"""
Асимптотическая дисперсия, ковариация, норма давления и дефект когомологичности.

Основная оценка дисперсии - Var_{n+1}[S_{n+1}ψ] − Var_n[S_nψ] по весам Гиббса,
вторая производная оценки давления log(Z_{n+1}/Z_n).
Перекрестная проверка - вторая центральная разность t ↦ P(φ + tψ).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import settings
from src.thermo.potentials import Constant, Potential, linear
from src.thermo.pressure import equilibrium_mean, level_moments, mean_from_sums, pressure_value, resolve_sweep
from src.thermo.sweep import OrbitSweep
from src.utils.exceptions import EstimatorDisagreementError, NonPositiveDenominatorError

logger = logging.getLogger("Variance")


@dataclass(frozen=True)
class VarianceEstimate:
    """
    Дисперсия Var(ψ, m(φ)) двумя способами.

    Attributes:
        primary: Взвешенная дисперсия по орбитам.
        cross_check: Вторая разность давления (nan, если не вычислялась).
        mean: Равновесное среднее ψ.
        h: Шаг конечной разности.
    """
    primary: float
    cross_check: float
    mean: float
    h: float

    @property
    def discrepancy(self) -> float:
        return abs(self.primary - self.cross_check)

    def to_dict(self) -> dict:
        return {"variance": self.primary, "cross_check": self.cross_check, "mean": self.mean, "h": self.h}


def weighted_moments(sweep: OrbitSweep, phi_sums: np.ndarray, psi_sums: np.ndarray, n: int) -> Tuple[float, float]:
    """
    (ψ̄, Var) как разности моментов уровней n + 1 и n.

    Без уровня n + 1 в проходе - моменты уровня n, деленные на n.
    """
    mean_n, spread_n = level_moments(sweep, phi_sums, psi_sums, n)
    if sweep.max_period < n + 1:
        return mean_n / n, spread_n / n
    mean_next, spread_next = level_moments(sweep, phi_sums, psi_sums, n + 1)
    return mean_next - mean_n, spread_next - spread_n


def sup_proxy(sweep: OrbitSweep, psi_sums: np.ndarray) -> float:
    """max |S_pψ|/p по орбитам прохода."""
    if psi_sums.size == 0:
        return 0.0
    return float(np.max(np.abs(psi_sums) / sweep.periods))


def check_agreement(primary: float, cross_check: float, what: str = "дисперсии",
                    rtol: float = settings.VARIANCE_DISAGREEMENT_RTOL,
                    atol: float = settings.VARIANCE_DISAGREEMENT_ATOL):
    """
    Raises:
        EstimatorDisagreementError: Если оценки расходятся сильнее допуска.
    """
    if math.isnan(cross_check):
        return
    gap = abs(primary - cross_check)
    if gap > max(atol, rtol * max(abs(primary), abs(cross_check))):
        raise EstimatorDisagreementError(
            f"Оценки {what} расходятся: по орбитам {primary:.10g}, по разности давления {cross_check:.10g}",
            primary=primary, cross_check=cross_check)


def variance_from_sums(sweep: OrbitSweep, phi_sums: np.ndarray, psi_sums: np.ndarray, n: int,
                       h: Optional[float] = None, cross_check: bool = True,
                       log: Optional[logging.Logger] = None) -> VarianceEstimate:
    """
    Дисперсия по готовым суммам Биркгофа.

    Args:
        sweep: Проход по орбитам (период ≥ n + 1 для перекрестной проверки).
        phi_sums, psi_sums: S_pφ и S_pψ по орбитам прохода.
        n: Уровень.
        h: Шаг разности (по умолчанию VARIANCE_FD_STEP / max(1, sup|ψ|)).
        cross_check: Вычислять ли вторую разность давления.

    Raises:
        EstimatorDisagreementError: Если оценки расходятся сильнее допуска.
    """
    log = log or logger
    mean, primary = weighted_moments(sweep, phi_sums, psi_sums, n)
    if h is None:
        h = settings.VARIANCE_FD_STEP / max(1.0, sup_proxy(sweep, psi_sums))

    second = math.nan
    if cross_check:
        centered = psi_sums - mean * sweep.periods
        plus = pressure_value(sweep, phi_sums + h * centered, n)
        zero = pressure_value(sweep, phi_sums, n)
        minus = pressure_value(sweep, phi_sums - h * centered, n)
        second = (plus - 2.0 * zero + minus) / (h * h)
        log.debug(f"Дисперсия: по орбитам {primary:.12g}, по разности {second:.12g} (h={h:g})")
        check_agreement(primary, second)
    return VarianceEstimate(primary=max(primary, 0.0), cross_check=second, mean=mean, h=h)


def variance_estimate(psi: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
                      sweep: Optional[OrbitSweep] = None, system=None, h: Optional[float] = None,
                      cross_check: bool = True, logger_: Optional[logging.Logger] = None) -> VarianceEstimate:
    """Var(ψ, m(φ)) с обеими оценками."""
    sweep = resolve_sweep([phi, psi], n + 1, sweep, system)
    return variance_from_sums(sweep, phi.orbit_sums(sweep), psi.orbit_sums(sweep), n, h, cross_check,
                              logger_ or logger)


def variance(psi: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
             sweep: Optional[OrbitSweep] = None, system=None, h: Optional[float] = None,
             cross_check: bool = True) -> float:
    """
    Асимптотическая дисперсия Var(ψ, m(φ)).

    ψ центрируется равновесным средним. Возвращает основную оценку.
    """
    return variance_estimate(psi, phi, n, sweep, system, h, cross_check).primary


def covariance(psi1: Potential, psi2: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
               sweep: Optional[OrbitSweep] = None, system=None, cross_check: bool = True) -> float:
    """Cov(ψ₁, ψ₂) = (Var(ψ₁ + ψ₂) − Var(ψ₁) − Var(ψ₂))/2 по одному проходу."""
    sweep = resolve_sweep([phi, psi1, psi2], n + 1, sweep, system)
    phi_sums = phi.orbit_sums(sweep)
    s1 = psi1.orbit_sums(sweep)
    s2 = psi2.orbit_sums(sweep)
    return covariance_from_sums(sweep, phi_sums, s1, s2, n, cross_check)


def covariance_from_sums(sweep: OrbitSweep, phi_sums: np.ndarray, s1: np.ndarray, s2: np.ndarray, n: int,
                         cross_check: bool = True) -> float:
    both = variance_from_sums(sweep, phi_sums, s1 + s2, n, cross_check=cross_check).primary
    first = variance_from_sums(sweep, phi_sums, s1, n, cross_check=cross_check).primary
    second = variance_from_sums(sweep, phi_sums, s2, n, cross_check=cross_check).primary
    return 0.5 * (both - first - second)


def energy_denominator(sweep: OrbitSweep, phi_sums: np.ndarray, n: int,
                       log: Optional[logging.Logger] = None) -> float:
    """
    −∫φ dm(φ).

    Raises:
        NonPositiveDenominatorError: Если значение неположительно.
    """
    log = log or logger
    level_pressure = pressure_value(sweep, phi_sums, n)
    if abs(level_pressure) > settings.PRESSURE_CONVERGENCE_TOL:
        log.warning(f"Потенциал не нормирован: P(φ) = {level_pressure:.3g}")
    denominator = -mean_from_sums(sweep, phi_sums, phi_sums, n)
    if not denominator > 0:
        raise NonPositiveDenominatorError(
            f"Знаменатель нормы давления −∫φ dm = {denominator:.6g} неположителен (P(φ) = {level_pressure:.3g})")
    return denominator


def pressure_norm_sq(psi: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
                     sweep: Optional[OrbitSweep] = None, system=None, cross_check: bool = True) -> float:
    """
    ‖ψ‖²_P = Var(ψ, m(φ)) / (−∫φ dm) для P(φ) = 0.

    Raises:
        NonPositiveDenominatorError: Если −∫φ dm ≤ 0.
    """
    sweep = resolve_sweep([phi, psi], n + 1, sweep, system)
    phi_sums = phi.orbit_sums(sweep)
    denominator = energy_denominator(sweep, phi_sums, n)
    var = variance_from_sums(sweep, phi_sums, psi.orbit_sums(sweep), n, cross_check=cross_check).primary
    return var / denominator


def pressure_form_potentials(psi1: Potential, psi2: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
                             sweep: Optional[OrbitSweep] = None, system=None, cross_check: bool = True) -> float:
    """Билинейная форма давления Cov(ψ₁, ψ₂)/(−∫φ dm)."""
    sweep = resolve_sweep([phi, psi1, psi2], n + 1, sweep, system)
    phi_sums = phi.orbit_sums(sweep)
    denominator = energy_denominator(sweep, phi_sums, n)
    cov = covariance_from_sums(sweep, phi_sums, psi1.orbit_sums(sweep), psi2.orbit_sums(sweep), n, cross_check)
    return cov / denominator


def cohomology_defect(psi: Potential, max_period: int = settings.DEFAULT_SCAN_PERIOD,
                      sweep: Optional[OrbitSweep] = None, system=None) -> float:
    """
    max |S_pψ|/p по периодическим орбитам периода ≤ max_period.

    Ноль тогда и только тогда, когда ψ - кограница на проверенных орбитах.
    """
    sweep = resolve_sweep([psi], max_period, sweep, system)
    keep = sweep.periods <= max_period
    sums = psi.orbit_sums(sweep)[keep]
    if sums.size == 0:
        return 0.0
    return float(np.max(np.abs(sums) / sweep.periods[keep]))


def centered(psi: Potential, phi: Potential, n: int = settings.DEFAULT_PERIOD,
             sweep: Optional[OrbitSweep] = None, system=None) -> Potential:
    """ψ − ∫ψ dm(φ)."""
    mean = equilibrium_mean(psi, phi, n, sweep, system)
    return linear([(1.0, psi), (-mean, Constant(1.0))])
