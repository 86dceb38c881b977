"""
Численные эксперименты над одной ячейкой: ошибка по норме, наклон в log-log,
ортонормированность, оптимальный порядок, оценка следующего коэффициента.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from loguru import logger

from services import exact_core
from services.errors import InvalidInputError, NumericalFailureError, TruncationTooSmallError
from services.reference_solver import reference_state, sector_eigenvalue
from services.wavefunction import assemble_eigenvector, default_truncation

__all__ = (
    "SATURATION_BOUND",
    "SlopeFit",
    "OrthonormalityCell",
    "OptimalOrderScan",
    "NextCoefficientEstimate",
    "norm_error",
    "convergence_cell",
    "fit_slope",
    "orthonormality_cell",
    "optimal_order_scan",
    "estimate_next_eigenvalue_coefficient",
    "sset_omega",
)

SATURATION_BOUND = math.sqrt(2.0)


def norm_error(asymptotic: np.ndarray, exact: np.ndarray) -> float:
    """||a - s e|| со знаком s, выбранным по перекрытию; не превосходит sqrt(2)."""
    sign = -1.0 if float(np.dot(asymptotic, exact)) < 0 else 1.0
    return min(float(np.linalg.norm(asymptotic - sign * exact)), SATURATION_BOUND)


def convergence_cell(n: int, omega: float, orders: Sequence[int], x0: float = 0.0) -> dict[int, float]:
    """Ошибки ||psi^(m) - psi_exact|| для всех m при фиксированных (n, omega)."""
    if not orders:
        raise InvalidInputError("Список порядков пуст")
    j0 = default_truncation(n, max(orders), omega)
    seed = assemble_eigenvector(n, 1, omega, x0, j0).values
    exact = reference_state(n, omega, x0, j0, seed).vector
    errors = {}
    for m in orders:
        try:
            vector = assemble_eigenvector(n, m, omega, x0, j0).values
        except (NumericalFailureError, TruncationTooSmallError) as e:
            logger.warning(f"[n={n} m={m} omega={omega}] асимптотический вектор не построен, ошибка насыщена: {e}")
            errors[m] = SATURATION_BOUND
            continue
        errors[m] = norm_error(vector, exact)
    logger.debug(f"[n={n} omega={omega}] ошибки {errors}")
    return errors


@dataclass(frozen=True)
class SlopeFit:
    slope: float | None
    intercept: float | None
    used: tuple[float, ...]
    censored: tuple[float, ...]


def fit_slope(omegas: Sequence[float], errors: Sequence[float], floor: float = 1e-11, min_points: int = 4) -> SlopeFit:
    """МНК по log error от log omega; точки ниже floor отбрасываются."""
    used = [(w, e) for w, e in zip(omegas, errors) if e >= floor]
    censored = tuple(w for w, e in zip(omegas, errors) if e < floor)
    if len(used) < min_points:
        return SlopeFit(None, None, tuple(w for w, _ in used), censored)
    log_omega = np.log([w for w, _ in used])
    log_error = np.log([e for _, e in used])
    slope, intercept = np.polyfit(log_omega, log_error, 1)
    return SlopeFit(float(slope), float(intercept), tuple(w for w, _ in used), censored)


@dataclass(frozen=True)
class OrthonormalityCell:
    omega: float
    max_deviation: float
    worst_pair: tuple[int, int]
    diagonal_deviation: float


def orthonormality_cell(n_values: Sequence[int], m: int, omega: float, x0: float = 0.0) -> OrthonormalityCell:
    if len(set(n_values)) < 2:
        raise InvalidInputError("Нужны хотя бы два различных n")
    levels = sorted(set(n_values))
    j0 = max(default_truncation(n, m, omega) for n in levels)
    vectors = {n: assemble_eigenvector(n, m, omega, x0, j0).values for n in levels}
    worst, worst_pair = 0.0, (levels[0], levels[1])
    for first, second in itertools.combinations(levels, 2):
        overlap = abs(float(np.dot(vectors[first], vectors[second])))
        if overlap > worst:
            worst, worst_pair = overlap, (first, second)
    diagonal = max(abs(float(np.dot(v, v)) - 1.0) for v in vectors.values())
    return OrthonormalityCell(omega, worst, worst_pair, diagonal)


@dataclass(frozen=True)
class OptimalOrderScan:
    n: int
    omega: float
    reference: float
    deltas: tuple[float, ...]

    @property
    def argmin(self) -> int:
        return int(np.argmin(self.deltas))


def optimal_order_scan(n: int, omega: float, m_max: int, x0: float = 0.0) -> OptimalOrderScan:
    """Delta lambda(omega, n, m) = |lambda_exact - sum_{k<=m} lambda^(k) omega^k| для m = 0..m_max."""
    reference = sector_eigenvalue(n, omega, x0)
    deltas = tuple(abs(reference - exact_core.eigenvalue_series_value(n, m, omega)) for m in range(m_max + 1))
    scan = OptimalOrderScan(n, omega, reference, deltas)
    logger.info(f"[n={n} omega={omega}] оптимальный порядок {scan.argmin}, ошибка {deltas[scan.argmin]:.3e}")
    return scan


@dataclass(frozen=True)
class NextCoefficientEstimate:
    n: int
    order: int
    estimate: float
    levels: tuple[float, ...]
    residuals: tuple[float, ...] = field(repr=False)
    ill_conditioned: bool = False


def estimate_next_eigenvalue_coefficient(
    n: int,
    m_known: int,
    omega0: float,
    halvings: int = 3,
    x0: float = 0.0,
    spread: float = 0.05,
    floor: float = 1e-14,
) -> NextCoefficientEstimate:
    """
    (lambda_exact - частичная сумма)/omega^(m+1) на omega0 2^-k, экстраполяция Ричардсона к omega -> 0.
    """
    if halvings < 1:
        raise InvalidInputError(f"Нужна хотя бы одна итерация деления omega, получено {halvings}")
    omegas = [omega0 / 2**k for k in range(halvings + 1)]
    raw_residuals = [
        sector_eigenvalue(n, w, x0) - exact_core.eigenvalue_series_value(n, m_known, w) for w in omegas
    ]
    ill_conditioned = any(abs(r) < floor for r in raw_residuals)
    column = [r / w ** (m_known + 1) for r, w in zip(raw_residuals, omegas)]
    diagonal = [column[0]]
    for j in range(1, halvings + 1):
        factor = 2.0**j
        column = [(factor * column[i + 1] - column[i]) / (factor - 1.0) for i in range(len(column) - 1)]
        diagonal.append(column[0])
    estimate = diagonal[-1]
    if abs(diagonal[-1] - diagonal[-2]) > spread * abs(estimate):
        ill_conditioned = True
    if ill_conditioned:
        logger.warning(f"[n={n} m={m_known + 1}] плохо обусловленная оценка: {diagonal}")
    return NextCoefficientEstimate(n, m_known + 1, estimate, tuple(diagonal), tuple(raw_residuals), ill_conditioned)


def sset_omega(charging_energy: float, josephson_energy: float) -> float:
    """omega = sqrt(2 E_C / E_J)."""
    if not charging_energy > 0 or not josephson_energy > 0:
        raise InvalidInputError(
            f"E_C и E_J должны быть > 0, получено E_C={charging_energy}, E_J={josephson_energy}"
        )
    return math.sqrt(2.0 * charging_energy / josephson_energy)
