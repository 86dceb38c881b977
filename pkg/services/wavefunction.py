"""
Асимптотические собственные векторы psi^(n,m): экспоненциальная часть,
обобщённый полином Эрмита, выборка на сетке j - x0, усечение, нормировка.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

import numpy as np
from loguru import logger
from numpy.polynomial import hermite as physicists_hermite

from services import exact_core
from services.errors import InvalidInputError, NumericalFailureError, TruncationTooSmallError
from services.utils.formal_series import Coefficient

__all__ = (
    "Normalization",
    "ExponentPolynomial",
    "GeneralizedHermitePolynomial",
    "AsymptoticWavefunction",
    "exponent_polynomial",
    "generalized_hermite",
    "default_truncation",
    "assemble_eigenvector",
    "continuum_value",
    "continuum_eigenvector",
    "evaluate_asymptotic",
    "pointwise_residual",
)

BOUNDARY_TOLERANCE = 1e-12
DEFAULT_TAIL_EPSILON = 1e-18

Bindings = Mapping[Coefficient, Fraction]


class Normalization(str, Enum):
    UNIT_EUCLIDEAN = "euclidean"
    UNIT_LOWEST_TERM = "lowest"


def _check(n: int, m: int, omega: float) -> None:
    if n < 0 or m < 1:
        raise InvalidInputError(f"Требуется n >= 0, m >= 1, получено n={n}, m={m}")
    if not omega > 0:
        raise InvalidInputError(f"omega должна быть > 0, получено {omega}")


def _alpha(n: int, k: int, l: int, bindings: Bindings | None) -> Fraction:
    if bindings and Coefficient.alpha(k, l) in bindings:
        return bindings[Coefficient.alpha(k, l)]
    return exact_core.alpha_coefficient(n, k, l)


def _beta(n: int, k: int, l: int, bindings: Bindings | None) -> Fraction:
    if l > 1 and k > 0 and bindings and Coefficient.beta(k, l) in bindings:
        return bindings[Coefficient.beta(k, l)]
    return exact_core.beta_coefficient(n, k, l)


def _omega_polynomial(coefficients: tuple[Fraction, ...], omega: float) -> float:
    # точная сумма по степеням omega, во float один раз
    exact_omega = Fraction(omega)
    total = Fraction(0)
    for value in reversed(coefficients):
        total = total * exact_omega + value
    return float(total)


@dataclass(frozen=True)
class ExponentPolynomial:
    """E(xi) = sum alpha_{kl} omega^(l-1) xi^(2k), 1 <= k <= l <= m."""

    n: int
    m: int
    omega: float
    terms: Mapping[tuple[int, int], Fraction]

    def coefficients(self) -> np.ndarray:
        """c_k при (xi^2)^k, k = 0..m; c_0 = 0."""
        values = np.zeros(self.m + 1)
        for k in range(1, self.m + 1):
            per_order = tuple(self.terms.get((k, l), Fraction(0)) for l in range(1, self.m + 1))
            values[k] = _omega_polynomial(per_order, self.omega)
        return values

    def __call__(self, xi: np.ndarray | float) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        # polyval ждёт старшую степень первой
        return np.polyval(self.coefficients()[::-1], xi * xi)


@dataclass(frozen=True)
class GeneralizedHermitePolynomial:
    """h~_k(omega) = h_k sum_l beta_{kl} omega^(l-1); coefficients[k][l-1] = h_k beta_{kl}."""

    n: int
    m: int
    omega: float
    coefficients: tuple[tuple[Fraction, ...], ...]

    @property
    def parity(self) -> int:
        return self.n % 2

    def at(self, omega: float | None = None) -> np.ndarray:
        omega = self.omega if omega is None else omega
        return np.array([_omega_polynomial(row, omega) for row in self.coefficients])

    def __call__(self, xi: np.ndarray | float) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        reduced = np.polyval(self.at()[::-1], xi * xi)
        return reduced * xi**self.parity


def exponent_polynomial(n: int, m: int, omega: float, bindings: Bindings | None = None) -> ExponentPolynomial:
    _check(n, m, omega)
    terms = {(k, l): _alpha(n, k, l, bindings) for l in range(1, m + 1) for k in range(1, l + 1)}
    return ExponentPolynomial(n=n, m=m, omega=omega, terms=terms)


def generalized_hermite(n: int, m: int, omega: float, bindings: Bindings | None = None) -> GeneralizedHermitePolynomial:
    _check(n, m, omega)
    rows = []
    for k in range(n // 2 + 1):
        hermite = exact_core.hermite_coefficient(n, k)
        rows.append(tuple(hermite * _beta(n, k, l, bindings) for l in range(1, m + 1)))
    return GeneralizedHermitePolynomial(n=n, m=m, omega=omega, coefficients=tuple(rows))


def default_truncation(n: int, m: int, omega: float, epsilon: float = DEFAULT_TAIL_EPSILON) -> int:
    """j0 = floor(sqrt(3)/omega), но не меньше ширины гауссова хвоста и 4(n+1)/sqrt(omega)."""
    if not omega > 0:
        raise InvalidInputError(f"omega должна быть > 0, получено {omega}")
    epsilon = min(max(epsilon, 1e-300), 1.0)
    convergence = math.floor(math.sqrt(3.0) / omega)
    tail = math.ceil(math.sqrt(2.0 * math.log(1.0 / epsilon) / omega))
    spread = math.ceil(4 * (n + 1) / math.sqrt(omega))
    return max(convergence, tail, spread)


@dataclass(frozen=True, eq=False)
class AsymptoticWavefunction:
    n: int
    m: int
    omega: float
    x0: float
    j0: int
    normalization: Normalization
    values: np.ndarray = field(repr=False)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(-self.j0, self.j0 + 1)

    @property
    def x(self) -> np.ndarray:
        return self.grid - self.x0

    @property
    def xi(self) -> np.ndarray:
        return math.sqrt(self.omega) * self.x

    def metadata(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "omega": self.omega,
            "x0": self.x0,
            "j0": self.j0,
            "normalization": self.normalization.value,
        }

    def to_rows(self) -> list[dict]:
        return [
            {"j": int(j), "x": float(x), "psi": float(psi)} for j, x, psi in zip(self.grid, self.x, self.values)
        ]

    def overlap(self, other: "AsymptoticWavefunction") -> float:
        if self.j0 != other.j0 or self.x0 != other.x0:
            raise InvalidInputError("Векторы заданы на разных сетках")
        return float(np.dot(self.values, other.values))


def _unnormalised(n: int, m: int, omega: float, x: np.ndarray, bindings: Bindings | None) -> np.ndarray:
    xi = math.sqrt(omega) * x
    exponent = exponent_polynomial(n, m, omega, bindings)
    polynomial = generalized_hermite(n, m, omega, bindings)
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.exp(exponent(xi)) * polynomial(xi)
    if not np.all(np.isfinite(values)):
        raise NumericalFailureError(
            f"[n={n} m={m}] показатель расходится на краю сетки: omega xi^2 выходит за радиус сходимости"
        )
    return values / float(exact_core.hermite_coefficient(n, 0))


def evaluate_asymptotic(n: int, m: int, omega: float, x: np.ndarray | float, bindings: Bindings | None = None) -> np.ndarray:
    """psi^(n,m) в произвольных точках x, нормировка по младшему члену (psi ~ xi^p)."""
    _check(n, m, omega)
    return _unnormalised(n, m, omega, np.asarray(x, dtype=float), bindings)


def assemble_eigenvector(
    n: int,
    m: int,
    omega: float,
    x0: float = 0.0,
    j0: int | None = None,
    normalization: Normalization | str = Normalization.UNIT_EUCLIDEAN,
    bindings: Bindings | None = None,
) -> AsymptoticWavefunction:
    _check(n, m, omega)
    if abs(x0) > 0.5:
        raise InvalidInputError(f"x0 должен лежать в [-1/2, 1/2], получено {x0}")
    normalization = Normalization(normalization)
    if j0 is None:
        j0 = default_truncation(n, m, omega)
    if j0 < 0:
        raise InvalidInputError(f"j0 должен быть >= 0, получено {j0}")

    x = np.arange(-j0, j0 + 1) - x0
    values = _unnormalised(n, m, omega, x, bindings)

    peak = float(np.max(np.abs(values)))
    boundary = max(abs(values[0]), abs(values[-1])) / peak if peak > 0 else 1.0
    if boundary > BOUNDARY_TOLERANCE:
        raise TruncationTooSmallError(
            f"[n={n} m={m}] j0={j0} мало: краевая компонента {boundary:.3e} от пика",
            j0=j0,
            boundary_ratio=boundary,
        )

    if normalization is Normalization.UNIT_EUCLIDEAN:
        values = values / np.linalg.norm(values)
        positive = np.nonzero(x > 0)[0]
        if positive.size:
            index = positive[0]
            reference = np.sign(continuum_value(n, omega, x[index]))
            if reference != 0 and np.sign(values[index]) == -reference:
                values = -values

    values.setflags(write=False)
    logger.debug(f"[n={n} m={m}] собран вектор omega={omega}, x0={x0}, j0={j0}")
    return AsymptoticWavefunction(
        n=n, m=m, omega=omega, x0=x0, j0=j0, normalization=normalization, values=values
    )


def continuum_value(n: int, omega: float, x: np.ndarray | float) -> np.ndarray:
    """H_n(xi) exp(-xi^2/2) / h_0 через numpy.polynomial.hermite."""
    xi = math.sqrt(omega) * np.asarray(x, dtype=float)
    series = np.zeros(n + 1)
    series[n] = 1.0
    return physicists_hermite.hermval(xi, series) * np.exp(-0.5 * xi * xi) / float(exact_core.hermite_coefficient(n, 0))


def continuum_eigenvector(n: int, omega: float, x0: float = 0.0, j0: int | None = None) -> np.ndarray:
    if j0 is None:
        j0 = default_truncation(n, 1, omega)
    values = continuum_value(n, omega, np.arange(-j0, j0 + 1) - x0)
    return values / np.linalg.norm(values)


def pointwise_residual(
    n: int, m: int, omega: float, x: np.ndarray | float, bindings: Bindings | None = None
) -> np.ndarray:
    """|(psi_{x-1} + psi_{x+1}) / (2 psi_x (-lambda_n(m) + omega^2 x^2/2)) - 1|."""
    x = np.asarray(x, dtype=float)
    if bindings and Coefficient.eigenvalue(m) in bindings:
        exact_omega = Fraction(omega)
        eigenvalue = float(
            sum(bindings[Coefficient.eigenvalue(l)] * exact_omega**l for l in range(m + 1))
        )
    else:
        eigenvalue = exact_core.eigenvalue_series_value(n, m, omega)
    centre = evaluate_asymptotic(n, m, omega, x, bindings)
    neighbours = evaluate_asymptotic(n, m, omega, x - 1, bindings) + evaluate_asymptotic(n, m, omega, x + 1, bindings)
    return np.abs(neighbours / (2 * centre * (-eigenvalue + 0.5 * omega**2 * x**2)) - 1.0)
