"""
Точное ядро: коэффициенты Эрмита, ряд для собственных значений,
коэффициенты экспоненциальной (alpha) и полиномиальной (beta) частей.

Вся арифметика ведётся в fractions.Fraction; единственное преобразование
во float находится в eigenvalue_series_value.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping

from services import coefficient_data as data
from services.errors import InvalidInputError, OutOfTableError

__all__ = (
    "HatPolynomial",
    "gamma_half_ratio",
    "hermite_coefficient",
    "hermite_polynomial",
    "eigenvalue_term",
    "eigenvalue_coefficient",
    "eigenvalue_series_value",
    "max_eigenvalue_order",
    "alpha_polynomial",
    "alpha_coefficient",
    "beta_coefficient",
    "leading_beta_block",
    "exponent_slot_count",
    "CoefficientTables",
    "coefficient_tables",
    "dump_tables",
)


@dataclass(frozen=True)
class HatPolynomial:
    """Полином по n^ = 2n+1 с рациональными коэффициентами; coefficients[i] при n^**i."""

    coefficients: tuple[Fraction, ...]

    @classmethod
    def from_terms(cls, terms: Mapping[int, Fraction | int]) -> "HatPolynomial":
        if not terms:
            return cls(())
        degree = max(terms)
        coefficients = [Fraction(0)] * (degree + 1)
        for power, value in terms.items():
            if power < 0:
                raise InvalidInputError(f"Отрицательная степень n^: {power}")
            coefficients[power] += Fraction(value)
        return cls(tuple(coefficients)).trimmed()

    def trimmed(self) -> "HatPolynomial":
        coefficients = list(self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        return HatPolynomial(tuple(coefficients))

    @property
    def degree(self) -> int:
        return len(self.trimmed().coefficients) - 1

    def powers(self) -> list[int]:
        return [power for power, value in enumerate(self.coefficients) if value != 0]

    def evaluate(self, n_hat: int | Fraction) -> Fraction:
        result = Fraction(0)
        for value in reversed(self.coefficients):
            result = result * n_hat + value
        return result

    def at_state(self, n: int) -> Fraction:
        return self.evaluate(2 * n + 1)

    def __add__(self, other: "HatPolynomial") -> "HatPolynomial":
        size = max(len(self.coefficients), len(other.coefficients))
        left = self.coefficients + (Fraction(0),) * (size - len(self.coefficients))
        right = other.coefficients + (Fraction(0),) * (size - len(other.coefficients))
        return HatPolynomial(tuple(a + b for a, b in zip(left, right))).trimmed()

    def scale(self, factor: Fraction | int) -> "HatPolynomial":
        return HatPolynomial(tuple(value * factor for value in self.coefficients)).trimmed()


def _check_state(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise InvalidInputError(f"Квантовое число n должно быть целым >= 0, получено {n!r}")


def _double_factorial(value: int) -> int:
    result = 1
    while value > 1:
        result *= value
        value -= 2
    return result


@lru_cache(maxsize=None)
def gamma_half_ratio(k: int, l: int) -> Fraction:
    """r(k,l) = Г(k+1/2) / (sqrt(pi) Г(k+l)) = (2k-1)!! / (2^k (k+l-1)!)."""
    if k < 1 or l < 1:
        raise InvalidInputError(f"gamma_half_ratio определён для k, l >= 1, получено ({k}, {l})")
    return Fraction(_double_factorial(2 * k - 1), 2**k * factorial(k + l - 1))


@lru_cache(maxsize=None)
def hermite_coefficient(n: int, k: int) -> Fraction:
    """Коэффициент при xi^(p+2k) в H_n(xi), p = n mod 2."""
    _check_state(n)
    k_prime, parity = divmod(n, 2)
    if not 0 <= k <= k_prime:
        raise InvalidInputError(f"k={k} вне диапазона [0, {k_prime}] для n={n}")
    sign = -1 if (k_prime + k) % 2 else 1
    power = 2 * k + parity
    return Fraction(sign * 2**power * factorial(n), factorial(power) * factorial(k_prime - k))


def hermite_polynomial(n: int) -> list[Fraction]:
    """Плотный список коэффициентов H_n по возрастанию степеней xi."""
    _check_state(n)
    coefficients = [Fraction(0)] * (n + 1)
    k_prime, parity = divmod(n, 2)
    for k in range(k_prime + 1):
        coefficients[parity + 2 * k] = hermite_coefficient(n, k)
    return coefficients


# --- СОБСТВЕННЫЕ ЗНАЧЕНИЯ ---


@lru_cache(maxsize=None)
def eigenvalue_term(m: int) -> HatPolynomial:
    """lambda^(m) как полином по n^ (m <= 16)."""
    if m < 0:
        raise InvalidInputError(f"Порядок m должен быть >= 0, получено {m}")
    if m == 0:
        return HatPolynomial((Fraction(-1),))
    if m == 1:
        return HatPolynomial((Fraction(0), Fraction(1, 2)))
    if m not in data.EIGENVALUE_TERMS:
        raise OutOfTableError(f"lambda^({m}) не табулирован для произвольного n", family="lambda", order=m)
    exponent, numerators = data.EIGENVALUE_TERMS[m]
    terms = {m - 2 * i: Fraction(-value, 2**exponent) for i, value in enumerate(numerators)}
    return HatPolynomial.from_terms(terms)


def max_eigenvalue_order(n: int) -> int:
    _check_state(n)
    return data.MAX_GROUND_STATE_ORDER if n == 0 else data.MAX_EIGENVALUE_ORDER


def eigenvalue_coefficient(n: int, m: int) -> Fraction:
    _check_state(n)
    if m < 0:
        raise InvalidInputError(f"Порядок m должен быть >= 0, получено {m}")
    if m <= data.MAX_EIGENVALUE_ORDER:
        return eigenvalue_term(m).at_state(n)
    if n == 0 and m in data.GROUND_STATE_TERMS:
        numerator, exponent = data.GROUND_STATE_TERMS[m]
        return Fraction(-numerator, 2**exponent)
    raise OutOfTableError(f"lambda^({m}) для n={n} отсутствует в таблицах", family="lambda", n=n, order=m)


def eigenvalue_series_value(n: int, m_max: int, omega: float) -> float:
    """Частичная сумма sum_{m<=m_max} lambda^(m) omega^m; float только в самом конце."""
    if not omega > 0:
        raise InvalidInputError(f"omega должна быть > 0, получено {omega}")
    if m_max < 0:
        raise InvalidInputError(f"m_max должен быть >= 0, получено {m_max}")
    exact_omega = Fraction(omega)
    total = Fraction(0)
    for m in reversed(range(m_max + 1)):
        total = total * exact_omega + eigenvalue_coefficient(n, m)
    return float(total)


# --- ЭКСПОНЕНЦИАЛЬНАЯ ЧАСТЬ ---


def _k_polynomial(coefficients: Iterable[int], k: int) -> int:
    result = 0
    for value in reversed(tuple(coefficients)):
        result = result * k + value
    return result


def _family_terms(parts: tuple, k: int, factor: Fraction) -> dict[int, Fraction]:
    terms: dict[int, Fraction] = {}
    for hat_power, k_coefficients, divisor in parts:
        terms[hat_power] = terms.get(hat_power, Fraction(0)) + factor * Fraction(
            _k_polynomial(k_coefficients, k), divisor
        )
    return terms


@lru_cache(maxsize=None)
def alpha_polynomial(k: int, l: int) -> HatPolynomial:
    """alpha_{k,l} как полином по n^ для семейств l-k <= 6 и трёх отдельных значений."""
    if k < 1 or l < k:
        raise InvalidInputError(f"alpha_{{k,l}} требует 1 <= k <= l, получено ({k}, {l})")
    delta = l - k
    sign = -1 if k % 2 else 1
    if delta == 0:
        value = sign * Fraction(4, 4**k) * gamma_half_ratio(k, 1) / (2 * k - 1) ** 2
        return HatPolynomial((value,))
    if delta == 1:
        prefactor = sign * Fraction(1, 4 * 4**k)
        return HatPolynomial.from_terms(
            {0: prefactor / k, 1: prefactor * gamma_half_ratio(k, 1) / k}
        )
    if delta in data.ALPHA_FAMILIES:
        shift, plain, gamma_divisor, gamma = data.ALPHA_FAMILIES[delta]
        prefactor = sign * Fraction(2) ** shift / 4**k
        terms = _family_terms(plain, k, prefactor)
        gamma_factor = prefactor * gamma_half_ratio(k, delta) / gamma_divisor
        for power, value in _family_terms(gamma, k, gamma_factor).items():
            terms[power] = terms.get(power, Fraction(0)) + value
        return HatPolynomial.from_terms(terms)
    if (k, l) in data.ALPHA_EXTRAS:
        terms: dict[int, Fraction] = {}
        for group_sign, divisor, group in data.ALPHA_EXTRAS[(k, l)]:
            for power, value in group.items():
                terms[power] = terms.get(power, Fraction(0)) + Fraction(group_sign * value, divisor)
        return HatPolynomial.from_terms(terms)
    raise OutOfTableError(f"alpha_{{{k},{l}}} не имеет замкнутой формы", family="alpha", order=l)


def alpha_coefficient(n: int, k: int, l: int) -> Fraction:
    _check_state(n)
    if (k, l) == (1, 30) and n == 0:
        return Fraction(*data.GROUND_STATE_ALPHA_1_30)
    try:
        return alpha_polynomial(k, l).at_state(n)
    except OutOfTableError as ex:
        ex.n = n
        raise


# --- ПОЛИНОМИАЛЬНАЯ ЧАСТЬ ---


def _table_bracket(table: tuple[int, tuple[tuple[int, ...], ...]], k: int, k_prime: int) -> Fraction:
    denominator, rows = table
    total = 0
    for prime_power, row in enumerate(rows):
        row_value = sum(c * k ** (i + 1) for i, c in enumerate(row))
        total += row_value * k_prime**prime_power
    return Fraction(total, denominator)


def leading_beta_block(which: str, l: int, second_index: int, k: int, k_prime: int) -> Fraction:
    """Блоки B(l,2l-2), B(l,2l-3), B~(l,2l-3), B~(l,2l-4); which = "B" или "Bbar"."""
    if l < 4:
        raise InvalidInputError(f"Блоки beta определены для l >= 4, получено l={l}")
    tail = 10 * k_prime - k
    if which == "B" and second_index == 2 * l - 2:
        return Fraction(k ** (l - 1) * tail ** (l - 1), 48 ** (l - 1) * factorial(l - 1))
    if which == "B" and second_index == 2 * l - 3:
        bracket = (l - 2) * 658 * k_prime**2 + (402 - 126 * l) * k_prime * k + (8 * l - 31) * k**2
        return Fraction(k ** (l - 2) * tail ** (l - 3) * bracket, 5 * 48 ** (l - 1) * factorial(l - 2))
    if which == "Bbar" and second_index == 2 * l - 3:
        return Fraction(4 * k ** (l - 1) * tail ** (l - 2), 48 ** (l - 2) * factorial(l - 2))
    if which == "Bbar" and second_index == 2 * l - 4:
        bracket = (
            (2632 * l - 2576) * k_prime**2 + (1470 - 504 * l) * k_prime * k + (32 * l - 145) * k**2
        )
        return Fraction(k ** (l - 2) * tail ** (l - 4) * bracket, 5 * 48 ** (l - 1) * factorial(l - 3))
    raise InvalidInputError(f"Неизвестное семейство блоков: {which}({l},{second_index})")


@lru_cache(maxsize=None)
def beta_coefficient(n: int, k: int, l: int) -> Fraction:
    """
    beta_{k,l}: beta_{k,1} = 1, beta_{0,l>1} = 0. Индексация по анзацу: первая
    поправка по omega имеет l = 2.
    """
    _check_state(n)
    k_prime, parity = divmod(n, 2)
    if not 0 <= k <= k_prime:
        raise InvalidInputError(f"k={k} вне диапазона [0, {k_prime}] для n={n}")
    if l < 1:
        raise InvalidInputError(f"l должен быть >= 1, получено {l}")
    if l == 1:
        return Fraction(1)
    if k == 0:
        return Fraction(0)
    if l > data.MAX_BETA_ORDER:
        raise OutOfTableError(f"beta_{{{k},{l}}} не табулирован (l > {data.MAX_BETA_ORDER})", family="beta", n=n, order=l)
    value = _table_bracket(data.BETA_EVEN[l], k, k_prime)
    if l >= 4:
        value += leading_beta_block("B", l, 2 * l - 2, k, k_prime)
        value += leading_beta_block("B", l, 2 * l - 3, k, k_prime)
    if parity:
        value += _table_bracket(data.BETA_ODD[l], k, k_prime)
        if l >= 4:
            value += leading_beta_block("Bbar", l, 2 * l - 3, k, k_prime)
            value += leading_beta_block("Bbar", l, 2 * l - 4, k, k_prime)
    return value


def exponent_slot_count(m: int) -> int:
    """Число слотов (k,l) с 1 <= k <= l <= m."""
    return m * (m + 1) // 2


# --- ВЫГРУЗКА ---


def _rational(value: Fraction) -> dict[str, str]:
    return {"numerator": str(value.numerator), "denominator": str(value.denominator)}


def _hat(polynomial: HatPolynomial) -> dict[str, dict[str, str]]:
    return {str(power): _rational(polynomial.coefficients[power]) for power in polynomial.powers()}


BetaTable = tuple[int, tuple[tuple[int, ...], ...]]


@dataclass(frozen=True)
class CoefficientTables:
    """Снимок всех точных таблиц; только Fraction и целые, без float."""

    eigenvalue_terms: tuple[HatPolynomial, ...]
    ground_state_extension: Mapping[int, Fraction]
    alpha: Mapping[tuple[int, int], HatPolynomial]
    alpha_ground_state: Mapping[tuple[int, int], Fraction]
    beta_tables: Mapping[int, tuple[BetaTable, BetaTable]]

    @property
    def alpha_extras(self) -> dict[tuple[int, int], HatPolynomial]:
        return {key: self.alpha[key] for key in data.ALPHA_EXTRAS if key in self.alpha}

    def parity_violations(self) -> list[int]:
        """Порядки m, где в lambda^(m) есть степень n^ чётности, отличной от m."""
        return [
            m for m, term in enumerate(self.eigenvalue_terms) if any((power - m) % 2 for power in term.powers())
        ]

    def to_json(self) -> dict:
        return {
            "eigenvalue_terms": {str(m): _hat(term) for m, term in enumerate(self.eigenvalue_terms)},
            "ground_state_extension": {str(m): _rational(v) for m, v in sorted(self.ground_state_extension.items())},
            "alpha": {f"{k},{l}": _hat(p) for (k, l), p in self.alpha.items()},
            "alpha_ground_state": {f"{k},{l}": _rational(v) for (k, l), v in self.alpha_ground_state.items()},
            "beta_tables": {
                str(l): {
                    "even": {"denominator": str(even[0]), "rows": [list(map(str, r)) for r in even[1]]},
                    "odd": {"denominator": str(odd[0]), "rows": [list(map(str, r)) for r in odd[1]]},
                }
                for l, (even, odd) in sorted(self.beta_tables.items())
            },
        }


@lru_cache(maxsize=1)
def coefficient_tables() -> CoefficientTables:
    alpha = {}
    for l in range(1, 10):
        for k in range(1, l + 1):
            try:
                alpha[(k, l)] = alpha_polynomial(k, l)
            except OutOfTableError:
                continue
    return CoefficientTables(
        eigenvalue_terms=tuple(eigenvalue_term(m) for m in range(data.MAX_EIGENVALUE_ORDER + 1)),
        ground_state_extension={m: eigenvalue_coefficient(0, m) for m in sorted(data.GROUND_STATE_TERMS)},
        alpha=alpha,
        alpha_ground_state={(1, 30): Fraction(*data.GROUND_STATE_ALPHA_1_30)},
        beta_tables={l: (data.BETA_EVEN[l], data.BETA_ODD[l]) for l in sorted(data.BETA_EVEN)},
    )


def dump_tables() -> dict:
    return coefficient_tables().to_json()
