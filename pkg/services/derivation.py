"""
Вывод коэффициентов анзаца порядок за порядком в точной арифметике.

Разностное уравнение (psi_{x-1} + psi_{x+1})/2 = psi_x (-lambda + omega^2 x^2/2)
с psi_x = exp(E) P раскладывается по (x, u = sqrt(omega)); уравнения порядка
omega^m лежат в градуировке 2m ряда FormalSeries. Решение каждого порядка
служит самопроверкой таблиц services.exact_core.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Literal, Mapping

from loguru import logger

from services import exact_core
from services.errors import (
    InconsistentSystemError,
    InvalidInputError,
    OutOfTableError,
)
from services.utils.formal_series import Coefficient, FormalSeries, LinearForm, Monomial, XiSeries
from services.utils.linear_system import LinearSystem

__all__ = (
    "Bindings",
    "DerivationStep",
    "DerivationState",
    "IdentityResult",
    "TableMismatch",
    "seed_bindings",
    "table_bindings",
    "expand_difference_residual",
    "order_unknowns",
    "solve_next_order",
    "derive",
    "compare_with_tables",
    "residual_order",
    "recursion_relation",
    "printed_recursion_relation",
    "verify_recursion_identity",
)

Bindings = dict[Coefficient, Fraction]
EigenvalueMode = Literal["solve", "table"]


def _check_state(n: int, order: int) -> None:
    if n < 0:
        raise InvalidInputError(f"n должно быть >= 0, получено {n}")
    if order < 1:
        raise InvalidInputError(f"Порядок должен быть >= 1, получено {order}")


def seed_bindings(n: int) -> Bindings:
    """Решение первого порядка: alpha_{1,1} = -1/2, lambda^(0) = -1, lambda^(1) = n^/2."""
    return {
        Coefficient.alpha(1, 1): Fraction(-1, 2),
        Coefficient.eigenvalue(0): Fraction(-1),
        Coefficient.eigenvalue(1): Fraction(2 * n + 1, 2),
    }


def table_bindings(n: int, max_order: int, include_eigenvalues: bool = True) -> Bindings:
    bindings = seed_bindings(n)
    k_prime = n // 2
    for l in range(1, max_order + 1):
        for k in range(1, l + 1):
            bindings[Coefficient.alpha(k, l)] = exact_core.alpha_coefficient(n, k, l)
        if l >= 2:
            for k in range(1, k_prime + 1):
                bindings[Coefficient.beta(k, l)] = exact_core.beta_coefficient(n, k, l)
        if include_eigenvalues:
            bindings[Coefficient.eigenvalue(l)] = exact_core.eigenvalue_coefficient(n, l)
    return bindings


def _resolver(known: Mapping[Coefficient, Fraction], unknown_orders: frozenset[int]) -> Callable[[Coefficient], LinearForm]:
    def resolve(name: Coefficient) -> LinearForm:
        if name in known:
            return LinearForm(known[name])
        if name.l in unknown_orders:
            return LinearForm.unknown(name)
        raise InvalidInputError(f"Нет значения для {name}: известные порядки не покрывают запрос")

    return resolve


def _binomial_shift(
    target: FormalSeries, power: int, u_pow: int, weight: LinearForm, sign: int, max_grade: int, skip_leading: bool
) -> None:
    # weight * u^u_pow * (x + sign)^power, без x^power при skip_leading
    start = 1 if skip_leading else 0
    for i in range(start, power + 1):
        x_pow = power - i
        if u_pow - x_pow > max_grade:
            continue
        term = weight.scale(comb(power, i))
        target.add_term((x_pow, u_pow), term if sign > 0 or i % 2 == 0 else -term)


def expand_difference_residual(
    n: int,
    target_order: int,
    known: Mapping[Coefficient, Fraction],
    unknown_orders: Iterable[int] = (),
) -> FormalSeries:
    """
    LHS - RHS разностного уравнения до u^(2 target_order) в градуировке.
    Коэффициенты из known подставляются, порядки unknown_orders остаются неизвестными.
    """
    _check_state(n, target_order)
    unknown_orders = frozenset(unknown_orders)
    resolve = _resolver(known, unknown_orders)
    max_grade = 2 * target_order
    k_prime, parity = divmod(n, 2)

    # --- ПОКАЗАТЕЛИ D+- = E(x +- 1) - E(x) ---
    exponent_plus, exponent_minus = FormalSeries(), FormalSeries()
    for l in range(1, target_order + 1):
        for k in range(1, l + 1):
            weight = resolve(Coefficient.alpha(k, l))
            u_pow = 2 * (k + l - 1)
            _binomial_shift(exponent_plus, 2 * k, u_pow, weight, 1, max_grade, True)
            _binomial_shift(exponent_minus, 2 * k, u_pow, weight, -1, max_grade, True)

    # --- ПОЛИНОМИАЛЬНАЯ ЧАСТЬ P(x), P(x +- 1) ---
    shifted_plus, shifted_minus, centre = FormalSeries(), FormalSeries(), FormalSeries()
    for k in range(k_prime + 1):
        hermite = exact_core.hermite_coefficient(n, k)
        power = parity + 2 * k
        for l in range(1, target_order + 2):
            if l > 1 and k == 0:
                continue
            if l == target_order + 1 and l not in unknown_orders:
                continue
            weight = LinearForm(1) if l == 1 else resolve(Coefficient.beta(k, l))
            weight = weight.scale(hermite)
            u_pow = power + 2 * (l - 1)
            centre.add_term((power, u_pow), weight)
            _binomial_shift(shifted_plus, power, u_pow, weight, 1, max_grade, False)
            _binomial_shift(shifted_minus, power, u_pow, weight, -1, max_grade, False)

    potential = FormalSeries.monomial((2, 4), Fraction(1, 2))
    for l in range(target_order + 1):
        potential.add_term((0, 2 * l), -resolve(Coefficient.eigenvalue(l)))

    lhs = exponent_plus.exp(max_grade).multiply(shifted_plus, max_grade)
    lhs = lhs + exponent_minus.exp(max_grade).multiply(shifted_minus, max_grade)
    rhs = potential.multiply(centre, max_grade)
    return (lhs.scale(Fraction(1, 2)) - rhs).truncated(max_grade)


def _first_nonzero_grade(series: FormalSeries) -> int | None:
    grades = [series.grade(m) for m, form in series.terms.items() if not form.is_zero()]
    return min(grades) if grades else None


# --- РЕШЕНИЕ ПО ПОРЯДКАМ ---


@dataclass
class DerivationStep:
    order: int
    equations: list[tuple[Monomial, LinearForm]]
    pinned: tuple[Coefficient, ...]
    values: Bindings

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "equations": [
                {"monomial": {"x": x_pow, "u": u_pow}, **form.to_json()} for (x_pow, u_pow), form in self.equations
            ],
            "pinned": [str(name) for name in self.pinned],
            "values": {
                str(name): {"numerator": str(v.numerator), "denominator": str(v.denominator)}
                for name, v in sorted(self.values.items())
            },
        }


@dataclass
class DerivationState:
    n: int
    order: int = 1
    bindings: Bindings = field(default_factory=dict)
    steps: list[DerivationStep] = field(default_factory=list)

    @classmethod
    def seeded(cls, n: int) -> "DerivationState":
        bindings = seed_bindings(n)
        residual = expand_difference_residual(n, 1, bindings)
        if not residual.is_zero():
            raise InconsistentSystemError(
                f"[n={n}] порядки omega^0, omega^1 не сокращаются", witness=residual.items()[:3]
            )
        return cls(n=n, order=1, bindings=bindings)

    def eigenvalues(self) -> dict[int, Fraction]:
        return {name.l: v for name, v in self.bindings.items() if name.family == "lambda"}

    def certificate(self) -> dict:
        return {
            "n": self.n,
            "max_order": self.order,
            "seed": {
                str(name): {"numerator": str(v.numerator), "denominator": str(v.denominator)}
                for name, v in sorted(seed_bindings(self.n).items())
            },
            "orders": [step.to_json() for step in self.steps],
        }


def order_unknowns(n: int, m: int, eigenvalue: EigenvalueMode = "solve") -> tuple[Coefficient, ...]:
    names = [Coefficient.alpha(k, m) for k in range(1, m + 1)]
    names += [Coefficient.beta(k, m) for k in range(1, n // 2 + 1)]
    if eigenvalue == "solve":
        names.append(Coefficient.eigenvalue(m))
    return tuple(sorted(names))


def solve_next_order(n: int, m: int, state: DerivationState, eigenvalue: EigenvalueMode = "solve") -> Bindings:
    """Закрепляет alpha_{.,m}, beta_{.,m} и lambda^(m); обновляет state."""
    if state.n != n or state.order != m - 1 or m < 2:
        raise InvalidInputError(f"Состояние содержит порядок {state.order} для n={state.n}, запрошен n={n}, m={m}")
    known = dict(state.bindings)
    if eigenvalue == "table":
        known[Coefficient.eigenvalue(m)] = exact_core.eigenvalue_coefficient(n, m)
    residual = expand_difference_residual(n, m, known, unknown_orders={m, m + 1})

    for monomial, form in residual.items():
        if residual.grade(monomial) < 2 * m and not form.is_zero():
            raise InconsistentSystemError(
                f"[n={n} m={m}] ненулевой младший член {monomial}: {form}", witness=(monomial, form)
            )
    equations = [(monomial, form) for monomial, form in residual.items() if residual.grade(monomial) == 2 * m]
    leaked = sorted({name for _, form in equations for name in form.unknowns() if name.l == m + 1})
    if leaked:
        raise InconsistentSystemError(
            f"[n={n} m={m}] коэффициенты следующего порядка вошли в систему: {list(map(str, leaked))}",
            witness=leaked,
        )

    unknowns = order_unknowns(n, m, eigenvalue)
    system = LinearSystem.from_forms([form for _, form in equations], unknowns)
    values = system.solve()

    if not residual.substitute(values).is_zero():
        raise InconsistentSystemError(f"[n={n} m={m}] невязка не обнуляется после подстановки")
    if eigenvalue == "table":
        values[Coefficient.eigenvalue(m)] = known[Coefficient.eigenvalue(m)]

    state.bindings.update(values)
    state.order = m
    state.steps.append(DerivationStep(order=m, equations=equations, pinned=unknowns, values=values))
    logger.debug(f"[n={n} m={m}] решено {len(unknowns)} неизвестных из {len(equations)} уравнений")
    return values


def derive(n: int, max_order: int, eigenvalue: EigenvalueMode = "solve") -> DerivationState:
    _check_state(n, max_order)
    state = DerivationState.seeded(n)
    for m in range(2, max_order + 1):
        solve_next_order(n, m, state, eigenvalue)
    logger.info(f"[n={n}] вывод завершён до порядка {max_order}")
    return state


@dataclass(frozen=True)
class TableMismatch:
    name: Coefficient
    derived: Fraction
    table: Fraction


def _table_value(n: int, name: Coefficient) -> Fraction:
    if name.family == "alpha":
        return exact_core.alpha_coefficient(n, name.k, name.l)
    if name.family == "beta":
        return exact_core.beta_coefficient(n, name.k, name.l)
    return exact_core.eigenvalue_coefficient(n, name.l)


def compare_with_tables(state: DerivationState) -> list[TableMismatch]:
    mismatches = []
    for name, derived in sorted(state.bindings.items()):
        try:
            table = _table_value(state.n, name)
        except OutOfTableError:
            continue
        if table != derived:
            mismatches.append(TableMismatch(name, derived, table))
    return mismatches


# --- ПОРЯДОК НЕВЯЗКИ ---


def _ode_residual(n: int, m: int, top: int, bindings: Mapping[Coefficient, Fraction], symbolic_hermite: bool = False) -> XiSeries:
    """
    Невязка усечённого дифференциального уравнения
    sum_{k<=m} omega^k Q_2k/(2k)! = (-lambda + omega xi^2/2) P, Q_0 = P, Q_{j+1} = Q_j' + E' Q_j.
    """
    max_grade = 2 * top
    k_prime, parity = divmod(n, 2)
    slope = XiSeries()
    for l in range(1, m + 1):
        for k in range(1, l + 1):
            slope.add_term((2 * k - 1, 2 * (l - 1)), LinearForm(2 * k * bindings[Coefficient.alpha(k, l)]))
    polynomial = XiSeries()
    for k in range(k_prime + 1):
        if symbolic_hermite:
            hermite = LinearForm.unknown(Coefficient.hermite(k))
        else:
            hermite = LinearForm(exact_core.hermite_coefficient(n, k))
        for l in range(1, m + 1):
            if l > 1 and k == 0:
                continue
            beta = Fraction(1) if l == 1 else bindings[Coefficient.beta(k, l)]
            polynomial.add_term((parity + 2 * k, 2 * (l - 1)), hermite.scale(beta))

    derivatives = XiSeries(polynomial.terms)
    current = polynomial
    for j in range(1, 2 * m + 1):
        current = current.derivative() + slope.multiply(current, max_grade)
        if j % 2 == 0:
            derivatives = derivatives + current.shift((0, j)).scale(Fraction(1, factorial(j)))

    potential = XiSeries.monomial((2, 2), Fraction(1, 2))
    for l in range(m + 1):
        potential.add_term((0, 2 * l), LinearForm(-bindings[Coefficient.eigenvalue(l)]))
    return (potential.multiply(polynomial, max_grade) - derivatives).truncated(max_grade)


def residual_order(
    n: int,
    m: int,
    equation: Literal["difference", "ode"] = "difference",
    bindings: Mapping[Coefficient, Fraction] | None = None,
    horizon: int = 1,
) -> int:
    """Наибольший порядок M, до которого невязка тождественно равна нулю (проверяется до m + horizon)."""
    _check_state(n, m)
    source = bindings if bindings is not None else table_bindings(n, m)
    truncated = seed_bindings(n)
    truncated.update({name: v for name, v in source.items() if name.l <= m})
    top = m + horizon
    if equation == "difference":
        for l in range(m + 1, top + 1):
            truncated[Coefficient.eigenvalue(l)] = Fraction(0)
            truncated.update({Coefficient.alpha(k, l): Fraction(0) for k in range(1, l + 1)})
            truncated.update({Coefficient.beta(k, l): Fraction(0) for k in range(1, n // 2 + 1)})
        residual = expand_difference_residual(n, top, truncated)
    elif equation == "ode":
        residual = _ode_residual(n, m, top, truncated)
    else:
        raise InvalidInputError(f"Неизвестный тип уравнения: {equation}")
    first = _first_nonzero_grade(residual)
    order = top if first is None else (first - 1) // 2
    logger.debug(f"[n={n} m={m} {equation}] невязка обращается в ноль до порядка {order}")
    return order


# --- РЕКУРСИИ ДЛЯ КОЭФФИЦИЕНТОВ ЭРМИТА ---

Relation = dict[int, Fraction]


def recursion_relation(n: int, order: int) -> dict[int, Relation]:
    """
    Рекурсия на h_k порядка omega^order, выведенная из усечённого уравнения:
    k -> {сдвиг: коэффициент при h_{k+сдвиг}}.
    """
    _check_state(n, order)
    parity = n % 2
    residual = _ode_residual(n, order, order, table_bindings(n, order), symbolic_hermite=True)
    relations: dict[int, Relation] = {}
    for (xi_pow, u_pow), form in residual.items():
        if u_pow != 2 * order:
            continue
        if form.constant != 0:
            raise InconsistentSystemError(f"[n={n}] неоднородный член в рекурсии: {form}")
        k = (xi_pow - parity) // 2
        relations[k] = {name.k - k: w for name, w in form.weights}
    return relations


def printed_recursion_relation(order: int, n: int, k: int) -> Relation:
    """Напечатанные рекурсии: порядок 1 для любого n, порядки 2 и 3 только для чётного n."""
    k_prime = n // 2
    if order == 1:
        sign = 1 if n % 2 else -1
        return {0: Fraction(2 * (k_prime - k)), 1: Fraction(2 * (k + 1) ** 2 + sign * (k + 1))}
    if n % 2:
        raise InvalidInputError(f"Напечатанная рекурсия порядка {order} существует только для чётного n")
    if order == 2:
        return {
            -1: Fraction(6 * (n + 2 - 2 * k)),
            0: Fraction(2 * k**3 + k**2 * (42 - 11 * n) - 6 * n - 3 * n**2 - k * (-6 + 9 * n - 5 * n**2)),
            1: Fraction(-(1 + k) * (1 + 2 * k) * (22 + 31 * k + k**2 - 5 * n - 5 * k * n)),
            2: Fraction(2 * (2 * k + 4) * (2 * k + 3) * (2 * k + 2) * (2 * k + 1)),
        }
    if order == 3:
        return {
            -2: Fraction(180 * (-4 + 2 * k - n)),
            -1: Fraction(
                30
                * (62 - 42 * k - 24 * k**2 + 4 * k**3 + 74 * n - 10 * k * n - 22 * k**2 * n + 17 * n**2 + 10 * k * n**2)
            ),
            0: Fraction(
                -450 * n
                - 450 * n**2
                - 90 * n**3
                - 10 * k**5
                + k**4 * (-452 + 105 * n)
                + k**3 * (-2332 + 2458 * n - 300 * n**2)
                + k**2 * (4230 + 4912 * n - 1204 * n**2 + 125 * n**3)
                + k * (-300 - 585 * n - 1258 * n**2 + 179 * n**3)
            ),
            1: Fraction(
                (1 + k)
                * (1 + 2 * k)
                * (
                    1022
                    + 2705 * k
                    + 3684 * k**2
                    + 326 * k**3
                    + 5 * k**4
                    - 2274 * n
                    - 4430 * k * n
                    - 1726 * k**2 * n
                    - 50 * k**3 * n
                    + 454 * n**2
                    + 579 * k * n**2
                    + 125 * k**2 * n**2
                )
            ),
            2: Fraction(-16 * (1 + k) * (2 + k) * (1 + 2 * k) * (3 + 2 * k) * (110 + 101 * k + 5 * k**2 - 50 * n - 25 * k * n)),
            3: Fraction(256 * (1 + k) * (2 + k) * (3 + k) * (1 + 2 * k) * (3 + 2 * k) * (5 + 2 * k)),
        }
    raise InvalidInputError(f"Рекурсия порядка {order} не напечатана (доступны 1, 2, 3)")


@dataclass(frozen=True)
class IdentityResult:
    order: int
    n: int
    passed: bool
    witness_k: int | None
    source: Literal["printed", "derived"]


def _hermite_or_zero(n: int, k: int) -> Fraction:
    if 0 <= k <= n // 2:
        return exact_core.hermite_coefficient(n, k)
    return Fraction(0)


def _evaluate(relation: Relation, n: int, k: int) -> Fraction:
    return sum((weight * _hermite_or_zero(n, k + offset) for offset, weight in relation.items()), Fraction(0))


def verify_recursion_identity(
    order: int, n: int, source: Literal["auto", "printed", "derived"] = "auto"
) -> IdentityResult:
    """Проверяет рекурсию порядка order на коэффициентах H_n для всех k."""
    if order not in (1, 2, 3):
        raise InvalidInputError(f"Порядок рекурсии должен быть 1, 2 или 3, получено {order}")
    if n < 0:
        raise InvalidInputError(f"n должно быть >= 0, получено {n}")
    if source == "auto":
        source = "printed" if order == 1 or n % 2 == 0 else "derived"
    k_prime = n // 2
    if source == "printed":
        relations = {k: printed_recursion_relation(order, n, k) for k in range(-order, k_prime + order + 1)}
    else:
        relations = recursion_relation(n, order)
    for k in sorted(relations):
        if _evaluate(relations[k], n, k) != 0:
            logger.warning(f"[n={n} порядок {order}] рекурсия нарушена при k={k} ({source})")
            return IdentityResult(order, n, False, k, source)
    return IdentityResult(order, n, True, None, source)
