"""
Характеристические значения Матьё при больших q через дискретный осциллятор:
q = 4/omega^2, a = 2 q lambda, nu = 2 x0.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Literal

from loguru import logger

from services import exact_core
from services.errors import InvalidInputError
from services.reference_solver import ParityMode, build_tridiagonal, eigenvalues, select_dimension

__all__ = (
    "MathieuFamily",
    "MathieuQuery",
    "MathieuSector",
    "q_from_omega",
    "omega_from_q",
    "characteristic_from_eigenvalue",
    "eigenvalue_from_characteristic",
    "mathieu_characteristic",
)

DEFAULT_SERIES_ORDER = 16


class MathieuFamily(str, Enum):
    A = "a"
    B = "b"


@dataclass(frozen=True)
class MathieuSector:
    x0: float
    parity_mode: ParityMode
    rank: int
    level: int


def q_from_omega(omega: Fraction | float) -> Fraction | float:
    return 4 / omega**2


def omega_from_q(q: float) -> float:
    return 2.0 / math.sqrt(q)


def characteristic_from_eigenvalue(eigenvalue: Fraction | float, q: Fraction | float) -> Fraction | float:
    return 2 * q * eigenvalue


def eigenvalue_from_characteristic(characteristic: Fraction | float, q: Fraction | float) -> Fraction | float:
    return characteristic / (2 * q)


@dataclass(frozen=True)
class MathieuQuery:
    order: int
    q: float
    nu: float | None = None
    family: MathieuFamily = MathieuFamily.A

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", MathieuFamily(self.family))
        if self.order < 0:
            raise InvalidInputError(f"Порядок должен быть >= 0, получено {self.order}")
        if not self.q > 0:
            raise InvalidInputError(f"q должно быть > 0, получено {self.q}")
        if self.family is MathieuFamily.B and self.order < 1:
            raise InvalidInputError("Семейство b начинается с порядка 1")
        if self.nu is not None and not 0.0 <= self.nu <= 1.0:
            raise InvalidInputError(f"nu должен лежать в [0, 1], получено {self.nu}")
        if self.nu in (0.0, 1.0) and int(self.nu) != self.order % 2:
            raise InvalidInputError(
                f"nu={self.nu:g} несовместим с чётностью порядка {self.order} для {self.family.value}_r"
            )

    @property
    def omega(self) -> float:
        return omega_from_q(self.q)

    def sector(self) -> MathieuSector:
        """a_2n, b_2n: x0 = 0 (чётный/нечётный сектор); a_2n+1, b_2n+1: x0 = 1/2."""
        nu = float(self.order % 2) if self.nu is None else self.nu
        r = self.order
        if nu == 0.0:
            if self.family is MathieuFamily.A:
                return MathieuSector(0.0, ParityMode.EVEN, r // 2, r)
            return MathieuSector(0.0, ParityMode.ODD, r // 2 - 1, r - 1)
        if nu == 1.0:
            level = r if self.family is MathieuFamily.A else r - 1
            return MathieuSector(0.5, ParityMode.NONE, level, level)
        logger.debug(f"Дробный nu={nu}: семейство {self.family.value} не различается, уровень {r}")
        return MathieuSector(nu / 2, ParityMode.NONE, r, r)


def mathieu_characteristic(
    query: MathieuQuery,
    method: Literal["matrix", "asymptotic"] = "matrix",
    series_order: int | None = None,
) -> float:
    sector = query.sector()
    omega = query.omega
    if method == "asymptotic":
        m_max = DEFAULT_SERIES_ORDER if series_order is None else series_order
        eigenvalue = exact_core.eigenvalue_series_value(sector.level, m_max, omega)
    elif method == "matrix":
        j0 = select_dimension(omega, sector.level, "tail", sector.x0)
        j0 = max(j0, sector.rank + 2)
        op = build_tridiagonal(omega, sector.x0, j0, sector.parity_mode)
        eigenvalue = float(eigenvalues(op, sector.rank + 1)[sector.rank])
    else:
        raise InvalidInputError(f"Неизвестный метод: {method}")
    value = characteristic_from_eigenvalue(eigenvalue, query.q)
    logger.debug(f"[{query.family.value}_{query.order} q={query.q}] a={value} ({method})")
    return value
