"""
Эталонный решатель: конечная трёхдиагональная матрица H(x0), собственные значения
бисекцией по Штурму (LAPACK stebz), векторы обратными итерациями.
"""

import math
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Sequence

import numpy as np
import scipy.linalg
from loguru import logger

from services.errors import InvalidInputError, NumericalFailureError
from services.wavefunction import DEFAULT_TAIL_EPSILON, default_truncation

__all__ = (
    "ParityMode",
    "TridiagonalOperator",
    "EigenPair",
    "build_tridiagonal",
    "select_dimension",
    "sturm_count",
    "eigenvalues",
    "eigenpairs",
    "reflection_parity",
    "expand_to_full",
    "sector_for_state",
    "sector_eigenvalue",
    "reference_state",
    "x0_splitting",
)

RESIDUAL_TOLERANCE = 1e-12
CLUSTER_TOLERANCE = 1e-3
RANDOM_SEED = 20240517
TAIL_MARGIN = 0.25
_SHIFT_STEPS = (0.0, 1e-13, -1e-13, 1e-11, -1e-11)
_MAX_ITERATIONS = 8


class ParityMode(str, Enum):
    NONE = "none"
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    diag: np.ndarray
    offdiag: np.ndarray
    j_offset: int
    parity_mode: ParityMode
    omega: float
    x0: float

    @property
    def dimension(self) -> int:
        return len(self.diag)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.j_offset, self.j_offset + self.dimension)

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        result = self.diag * vector
        result[:-1] += self.offdiag * vector[1:]
        result[1:] += self.offdiag * vector[:-1]
        return result

    def gershgorin_intervals(self) -> np.ndarray:
        radius = np.zeros(self.dimension)
        radius[:-1] += np.abs(self.offdiag)
        radius[1:] += np.abs(self.offdiag)
        return np.column_stack((self.diag - radius, self.diag + radius))


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float
    index: int = 0


def build_tridiagonal(omega: float, x0: float, j0: int, parity_mode: ParityMode | str = ParityMode.NONE) -> TridiagonalOperator:
    parity_mode = ParityMode(parity_mode)
    if omega < 0:
        raise InvalidInputError(f"omega должна быть >= 0, получено {omega}")
    if abs(x0) > 0.5:
        raise InvalidInputError(f"x0 должен лежать в [-1/2, 1/2], получено {x0}")
    if parity_mode is not ParityMode.NONE and x0 != 0:
        raise InvalidInputError(f"Чётные/нечётные секторы существуют только при x0 = 0 (x0={x0})")

    if parity_mode is ParityMode.NONE:
        if j0 < 0:
            raise InvalidInputError(f"j0 должен быть >= 0, получено {j0}")
        j_offset = -j0
    elif parity_mode is ParityMode.EVEN:
        if j0 < 0:
            raise InvalidInputError(f"j0 должен быть >= 0, получено {j0}")
        j_offset = 0
    else:
        if j0 < 1:
            raise InvalidInputError(f"Нечётный сектор требует j0 >= 1, получено {j0}")
        j_offset = 1

    j = np.arange(j_offset, j0 + 1, dtype=float)
    diag = 0.5 * omega**2 * (j - x0) ** 2
    offdiag = np.full(len(j) - 1, -0.5)
    if parity_mode is ParityMode.EVEN and len(offdiag):
        offdiag[0] = -1.0 / math.sqrt(2.0)
    diag.setflags(write=False)
    offdiag.setflags(write=False)
    return TridiagonalOperator(diag, offdiag, j_offset, parity_mode, omega, x0)


def select_dimension(
    omega: float,
    n: int,
    mode: Literal["tail", "strict"] = "tail",
    x0: float = 0.0,
    tail_epsilon: float = DEFAULT_TAIL_EPSILON,
    tail_margin: float = TAIL_MARGIN,
) -> int:
    if not omega > 0:
        raise InvalidInputError(f"omega должна быть > 0, получено {omega}")
    if mode == "strict":
        j0 = math.ceil((2.0 / omega**2 + 1.0) / 2.0)
    elif mode == "tail":
        j0 = math.ceil((1.0 + tail_margin) * default_truncation(n, 1, omega, tail_epsilon))
    else:
        raise InvalidInputError(f"Неизвестный режим выбора размерности: {mode}")
    # при x0 = +-1/2 предпочитаем чётное j0
    if abs(abs(x0) - 0.5) < 1e-12 and j0 % 2:
        j0 += 1
    return j0


def sturm_count(op: TridiagonalOperator, sigma: float) -> int:
    """Число собственных значений строго меньше sigma (знаки LDL^T разложения T - sigma)."""
    count = 0
    pivot = 1.0
    off_squared = (op.offdiag * op.offdiag).tolist()
    for i, d in enumerate(op.diag.tolist()):
        pivot = d - sigma - (off_squared[i - 1] / pivot if i else 0.0)
        if pivot == 0.0:
            pivot = -sys.float_info.min
        if pivot < 0.0:
            count += 1
    return count


def _certify(op: TridiagonalOperator, value: float, index: int) -> None:
    delta = 1e-9 * max(1.0, abs(value))
    below, above = sturm_count(op, value - delta), sturm_count(op, value + delta)
    if below > index or above < index + 1:
        raise NumericalFailureError(
            f"Счётчик Штурма не согласован с рангом {index}: {below} ниже, {above} выше lambda={value}"
        )


def eigenvalues(op: TridiagonalOperator, lowest_count: int) -> np.ndarray:
    if not 1 <= lowest_count <= op.dimension:
        raise InvalidInputError(f"lowest_count={lowest_count} вне [1, {op.dimension}]")
    if op.dimension == 1:
        return np.array([op.diag[0]])
    values = scipy.linalg.eigvalsh_tridiagonal(
        op.diag, op.offdiag, select="i", select_range=(0, lowest_count - 1), lapack_driver="stebz"
    )
    for index, value in enumerate(values):
        _certify(op, float(value), index)
    return values


def _banded(op: TridiagonalOperator, shift: float) -> np.ndarray:
    bands = np.zeros((3, op.dimension))
    bands[0, 1:] = op.offdiag
    bands[1, :] = op.diag - shift
    bands[2, :-1] = op.offdiag
    return bands


def _inverse_iteration(
    op: TridiagonalOperator, value: float, start: np.ndarray, locked: Sequence[np.ndarray]
) -> tuple[np.ndarray, float]:
    scale = max(1.0, abs(value))
    tolerance = RESIDUAL_TOLERANCE * scale
    residual = math.inf
    for step in _SHIFT_STEPS:
        vector = start / np.linalg.norm(start)
        try:
            bands = _banded(op, value + step * scale)
            for _ in range(_MAX_ITERATIONS):
                vector = scipy.linalg.solve_banded((1, 1), bands, vector, check_finite=False)
                for other in locked:
                    vector -= np.dot(other, vector) * other
                vector /= np.linalg.norm(vector)
                residual = float(np.linalg.norm(op.matvec(vector) - value * vector))
                if residual <= tolerance:
                    return vector, residual
        except (np.linalg.LinAlgError, ValueError, FloatingPointError) as e:
            logger.debug(f"Обратная итерация при сдвиге {step}: {e}")
            continue
        logger.debug(f"Обратная итерация не сошлась при сдвиге {step}: невязка {residual:.3e}")
    raise NumericalFailureError(
        f"Обратная итерация не сошлась для lambda={value}: невязка {residual:.3e} > {tolerance:.3e}"
    )


def _mirror_indices(op: TridiagonalOperator) -> np.ndarray:
    if op.parity_mode is not ParityMode.NONE:
        raise InvalidInputError("Отражение определено только для полного оператора")
    twice = 2 * op.x0
    if abs(twice - round(twice)) > 1e-12:
        raise InvalidInputError(f"Отражение j -> 2x0 - j требует полуцелого x0, получено {op.x0}")
    mirrored = int(round(twice)) - op.grid
    return mirrored - op.j_offset


def reflection_parity(vector: np.ndarray, op: TridiagonalOperator) -> int:
    """Чётность вектора относительно j -> 2x0 - j: +1, -1 или 0, если она не определена."""
    indices = _mirror_indices(op)
    inside = (indices >= 0) & (indices < op.dimension)
    mirrored = np.zeros_like(vector)
    mirrored[inside] = vector[indices[inside]]
    overlap = float(np.dot(vector, mirrored))
    if abs(overlap) < 0.5:
        return 0
    return 1 if overlap > 0 else -1


def _resolve_reflection_pairs(op: TridiagonalOperator, pairs: list[EigenPair]) -> list[EigenPair]:
    indices = _mirror_indices(op)
    inside = (indices >= 0) & (indices < op.dimension)
    resolved = list(pairs)
    for i in range(len(pairs) - 1):
        first, second = resolved[i], resolved[i + 1]
        if abs(first.value - second.value) > CLUSTER_TOLERANCE * max(1.0, abs(first.value)):
            continue
        basis = np.column_stack((first.vector, second.vector))
        mirrored = np.zeros_like(basis)
        mirrored[inside] = basis[indices[inside]]
        _, rotation = np.linalg.eigh(basis.T @ mirrored)
        rotated = basis @ rotation
        resolved[i] = EigenPair(first.value, rotated[:, 0], first.residual, first.index)
        resolved[i + 1] = EigenPair(second.value, rotated[:, 1], second.residual, second.index)
        logger.debug(f"Пара {i}, {i + 1} разделена по чётности отражения")
    return resolved


def eigenpairs(
    op: TridiagonalOperator,
    lowest_count: int,
    seeds: Sequence[np.ndarray | None] | None = None,
) -> list[EigenPair]:
    values = eigenvalues(op, lowest_count)
    if op.dimension == 1:
        return [EigenPair(float(values[0]), np.array([1.0]), 0.0, 0)]
    pairs: list[EigenPair] = []
    for index, value in enumerate(values.tolist()):
        seed = seeds[index] if seeds is not None and index < len(seeds) else None
        if seed is None:
            start = np.random.default_rng(RANDOM_SEED + index).standard_normal(op.dimension)
        else:
            start = np.asarray(seed, dtype=float).copy()
        locked = [
            pair.vector for pair in pairs if abs(pair.value - value) <= CLUSTER_TOLERANCE * max(1.0, abs(value))
        ]
        vector, residual = _inverse_iteration(op, value, start, locked)
        if seed is not None:
            sign = 1.0 if np.dot(vector, seed) >= 0 else -1.0
        else:
            sign = 1.0 if vector[int(np.argmax(np.abs(vector)))] > 0 else -1.0
        pairs.append(EigenPair(value, sign * vector, residual, index))
    if op.parity_mode is ParityMode.NONE and abs(abs(op.x0) - 0.5) < 1e-12:
        pairs = _resolve_reflection_pairs(op, pairs)
    return pairs


def expand_to_full(vector: np.ndarray, op: TridiagonalOperator) -> np.ndarray:
    """Вектор сектора -> единичный вектор на полной сетке j in [-j0, j0]."""
    if op.parity_mode is ParityMode.NONE:
        return np.asarray(vector, dtype=float)
    j0 = op.j_offset + op.dimension - 1
    full = np.zeros(2 * j0 + 1)
    if op.parity_mode is ParityMode.EVEN:
        full[j0] = math.sqrt(2.0) * vector[0]
        full[j0 + 1 :] = vector[1:]
        full[:j0] = vector[1:][::-1]
    else:
        full[j0 + 1 :] = vector
        full[:j0] = -vector[::-1]
    return full / math.sqrt(2.0)


def sector_for_state(n: int, x0: float) -> tuple[ParityMode, int]:
    """(сектор, ранг в секторе) для уровня n."""
    if n < 0:
        raise InvalidInputError(f"n должно быть >= 0, получено {n}")
    if x0 == 0:
        return (ParityMode.ODD, (n - 1) // 2) if n % 2 else (ParityMode.EVEN, n // 2)
    return ParityMode.NONE, n


def _sector_operator(n: int, omega: float, x0: float, j0: int | None) -> tuple[TridiagonalOperator, int]:
    mode, rank = sector_for_state(n, x0)
    if j0 is None:
        j0 = select_dimension(omega, n, "tail", x0)
    j0 = max(j0, rank + 2)
    return build_tridiagonal(omega, x0, j0, mode), rank


def sector_eigenvalue(n: int, omega: float, x0: float = 0.0, j0: int | None = None) -> float:
    op, rank = _sector_operator(n, omega, x0, j0)
    return float(eigenvalues(op, rank + 1)[rank])


def reference_state(
    n: int, omega: float, x0: float = 0.0, j0: int | None = None, seed: np.ndarray | None = None
) -> EigenPair:
    """Точный уровень n: значение и единичный вектор на полной сетке [-j0, j0]."""
    op, rank = _sector_operator(n, omega, x0, j0)
    seeds = None
    if seed is not None:
        full_j0 = op.j_offset + op.dimension - 1
        if len(seed) != 2 * full_j0 + 1:
            raise InvalidInputError("Затравочный вектор задан на другой сетке")
        sector_seed = np.asarray(seed)[full_j0 + op.j_offset :]
        seeds = [None] * rank + [sector_seed]
    pair = eigenpairs(op, rank + 1, seeds)[rank]
    full = expand_to_full(pair.vector, op)
    return EigenPair(pair.value, full, pair.residual, n)


def x0_splitting(n: int, omega: float) -> float:
    return sector_eigenvalue(n, omega, 0.5) - sector_eigenvalue(n, omega, 0.0)
