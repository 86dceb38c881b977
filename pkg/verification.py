"""
Наборы самопроверок: табличные литералы, рекурсии для коэффициентов Эрмита,
порядок невязки.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

from loguru import logger

from services import exact_core
from services.derivation import residual_order, verify_recursion_identity
from services.errors import DhoError, InvalidInputError, VerificationFailureError

Suite = Literal["identities", "residuals", "tables", "all"]

IDENTITY_MAX_N = 12
RESIDUAL_MAX_N = 6
RESIDUAL_MAX_ORDER = 5


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _literal(name: str, compute: Callable[[], Fraction], expected: Fraction) -> CheckResult:
    try:
        value = compute()
    except DhoError as e:
        return CheckResult("tables", name, False, f"{type(e).__name__}: {e}")
    return CheckResult("tables", name, value == expected, f"{value} (ожидалось {expected})")


TABLE_LITERALS: tuple[tuple[str, Callable[[], Fraction], Fraction], ...] = (
    ("alpha(0,1,2)", lambda: exact_core.alpha_coefficient(0, 1, 2), Fraction(-3, 32)),
    ("alpha(0,1,3)", lambda: exact_core.alpha_coefficient(0, 1, 3), Fraction(-53, 1536)),
    ("alpha(0,2,2)", lambda: exact_core.alpha_coefficient(0, 2, 2), Fraction(1, 96)),
    ("alpha(2,1,2)", lambda: exact_core.alpha_coefficient(2, 1, 2), Fraction(-7, 32)),
    ("alpha(2,1,3)", lambda: exact_core.alpha_coefficient(2, 1, 3), Fraction(-275, 1536)),
    ("alpha(2,2,3)", lambda: exact_core.alpha_coefficient(2, 2, 3), Fraction(23, 1024)),
    ("alpha(2,3,3)", lambda: exact_core.alpha_coefficient(2, 3, 3), Fraction(-1, 1280)),
    # поправки по omega нумеруются с l = 2: beta_{1,1} = 1 - ведущий член
    ("beta(2,1,2)", lambda: exact_core.beta_coefficient(2, 1, 2), Fraction(1, 4)),
    ("beta(2,1,3)", lambda: exact_core.beta_coefficient(2, 1, 3), Fraction(37, 256)),
    ("lambda(0,2)", lambda: exact_core.eigenvalue_coefficient(0, 2), Fraction(-1, 32)),
    ("lambda(2,3)", lambda: exact_core.eigenvalue_coefficient(2, 3), Fraction(-35, 512)),
    ("lambda(0,17)", lambda: exact_core.eigenvalue_coefficient(0, 17), Fraction(-363372562420411197, 2**79)),
)


def tables_suite() -> list[CheckResult]:
    results = [_literal(name, compute, expected) for name, compute, expected in TABLE_LITERALS]

    bad_parity = [
        m for m in range(2, 17) if any(power % 2 != m % 2 for power in exact_core.eigenvalue_term(m).powers())
    ]
    results.append(CheckResult("tables", "eigenvalue parity", not bad_parity, f"нарушена для m={bad_parity}"))

    slots = exact_core.exponent_slot_count(31)
    results.append(CheckResult("tables", "exponent slots", slots == 496, f"{slots}"))

    gamma_ok = all(
        exact_core.gamma_half_ratio(k + 1, l) * 2 * (k + l) == exact_core.gamma_half_ratio(k, l) * (2 * k + 1)
        for k in range(1, 51)
        for l in range(1, 51)
    )
    results.append(CheckResult("tables", "gamma recurrence", gamma_ok))

    hermite_ok = True
    for n in range(1, 31):
        current = exact_core.hermite_polynomial(n)
        previous = exact_core.hermite_polynomial(n - 1)
        combined = [Fraction(0)] * (n + 2)
        for power, value in enumerate(current):
            combined[power + 1] += 2 * value
        for power, value in enumerate(previous):
            combined[power] -= 2 * n * value
        if combined != exact_core.hermite_polynomial(n + 1):
            hermite_ok = False
            break
    results.append(CheckResult("tables", "hermite recurrence", hermite_ok))
    return results


def identities_suite(max_n: int = IDENTITY_MAX_N) -> list[CheckResult]:
    results = []
    for n in range(max_n + 1):
        for order in (1, 2, 3):
            outcome = verify_recursion_identity(order, n)
            detail = "" if outcome.passed else f"нарушена при k={outcome.witness_k}"
            results.append(CheckResult("identities", f"order {order}, n={n} ({outcome.source})", outcome.passed, detail))
    return results


def residuals_suite(max_n: int = RESIDUAL_MAX_N, max_order: int = RESIDUAL_MAX_ORDER) -> list[CheckResult]:
    results = []
    for n in range(max_n + 1):
        for m in range(1, max_order + 1):
            for equation in ("difference", "ode"):
                order = residual_order(n, m, equation)
                results.append(
                    CheckResult("residuals", f"{equation}, n={n}, m={m}", order >= m, f"порядок невязки {order}")
                )
    return results


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "tables": tables_suite,
    "identities": identities_suite,
    "residuals": residuals_suite,
}


def run_suite(suite: Suite) -> list[CheckResult]:
    """Запускает набор; при любом провале поднимает VerificationFailureError."""
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise InvalidInputError(f"Неизвестный набор проверок: {suite}")
    results = [result for name in names for result in SUITES[name]()]
    failures = [result for result in results if not result.passed]
    for failure in failures:
        logger.error(f"[{failure.suite}] {failure.name}: {failure.detail}")
    if failures:
        raise VerificationFailureError(
            f"Провалено {len(failures)} из {len(results)} проверок", failures=failures
        )
    logger.info(f"Проверки {names}: пройдено {len(results)}")
    return results
