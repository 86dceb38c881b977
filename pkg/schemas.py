import math
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from services.errors import InvalidInputError

SATURATION_LIMIT = math.sqrt(2.0) + 1e-9


def _default_order_constants() -> dict[int, float]:
    return {1: 0.03, 2: 0.002, 3: 0.0006, 4: 1.5e-6, 5: 3e-8}


class ExperimentSettings(BaseModel):
    """Допуски численных экспериментов; значения по умолчанию совпадают с settings.json."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    precision_floor: float = Field(1e-11, gt=0, alias="PRECISION_FLOOR")
    tail_epsilon: float = Field(1e-18, gt=0, lt=1, alias="TAIL_EPSILON")
    tail_margin: float = Field(0.25, ge=0, alias="TAIL_MARGIN")
    order_constants: dict[int, float] = Field(default_factory=_default_order_constants, alias="ORDER_CONSTANTS")
    min_fit_points: int = Field(4, ge=2, alias="MIN_FIT_POINTS")
    ill_conditioned_spread: float = Field(0.05, gt=0, alias="ILL_CONDITIONED_SPREAD")
    halving_steps: int = Field(3, ge=1, alias="HALVING_STEPS")

    def expected_prefactor(self, n: int, m: int) -> float | None:
        """C(n, m) ~ c_m (2n+1)^(2m); None, если c_m не задан."""
        constant = self.order_constants.get(m)
        if constant is None:
            return None
        return constant * (2 * n + 1) ** (2 * m)


def parse_int_list(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as e:
        raise InvalidInputError(f"Ожидался список целых через запятую, получено {raw!r}") from e
    if not values:
        raise InvalidInputError("Пустой список")
    return values


def parse_omega_grid(raw: str) -> tuple[float, ...]:
    """START:STOP:POINTS -> геометрическая сетка numpy.geomspace(START, STOP, POINTS)."""
    parts = raw.split(":")
    if len(parts) != 3:
        raise InvalidInputError(f"Сетка omega задаётся как START:STOP:POINTS, получено {raw!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise InvalidInputError(f"Не удалось разобрать сетку omega {raw!r}: {e}") from e
    if not (start > 0 and stop > 0):
        raise InvalidInputError(f"Границы сетки omega должны быть > 0, получено {start}, {stop}")
    if points < 2 or start == stop:
        raise InvalidInputError(f"Сетка omega вырождена: {raw!r}")
    return tuple(float(w) for w in np.geomspace(start, stop, points))


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_values: tuple[int, ...] = Field(min_length=1)
    orders: tuple[int, ...] = Field(min_length=1)
    omegas: tuple[float, ...] = Field(min_length=2)
    x0: float = Field(0.0, ge=-0.5, le=0.5)
    out: Path | None = None
    format: Literal["csv", "json"] = "csv"
    settings: ExperimentSettings = Field(default_factory=ExperimentSettings)

    @field_validator("n_values")
    @classmethod
    def _non_negative(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(n < 0 for n in value):
            raise ValueError("n должно быть >= 0")
        return tuple(sorted(set(value)))

    @field_validator("orders")
    @classmethod
    def _positive_orders(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(m < 1 for m in value):
            raise ValueError("порядок m должен быть >= 1")
        return tuple(sorted(set(value)))

    @field_validator("omegas")
    @classmethod
    def _decreasing_grid(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(not w > 0 for w in value):
            raise ValueError("все omega должны быть > 0")
        ordered = tuple(sorted(value, reverse=True))
        if len(set(ordered)) != len(ordered):
            raise ValueError("значения omega повторяются")
        return ordered


# --- ЗАПИСИ РЕЗУЛЬТАТОВ ---


class EigenvalueRecord(BaseModel):
    n: int
    order: int
    omega: float
    x0: float
    method: Literal["series", "matrix"]
    eigenvalue: float


class MathieuRecord(BaseModel):
    family: Literal["a", "b"]
    order: int
    q: float
    nu: float | None
    method: Literal["asymptotic", "matrix"]
    value: float


class ConvergenceRecord(BaseModel):
    n: int
    m: int
    omega: float
    norm_error: float = Field(ge=0, le=SATURATION_LIMIT)
    censored: bool = False
    fitted_slope: float | None = None
    prefactor: float | None = None
    expected_prefactor: float | None = None


class OrthonormalityRecord(BaseModel):
    m: int
    omega: float
    max_deviation: float = Field(ge=0)
    worst_n: int
    worst_n_prime: int
    diagonal_deviation: float = Field(ge=0)
    halving_ratio: float | None = None
    local_rate: float | None = None


class ScanRecord(BaseModel):
    n: int
    omega: float
    m: int
    delta: float
    is_argmin: bool


class EstimateRecord(BaseModel):
    n: int
    order: int
    omega0: float
    estimate: float
    ill_conditioned: bool
