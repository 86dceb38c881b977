from fractions import Fraction

import pytest

from services import exact_core
from services.errors import InvalidInputError, OutOfTableError


@pytest.mark.parametrize(
    ("k", "l", "expected"),
    [
        (1, 1, Fraction(1, 2)),
        # (2k-1)!!/(2^k (k+l-1)!) = 3/(4*2)
        (2, 1, Fraction(3, 8)),
        (1, 2, Fraction(1, 4)),
    ],
)
def test_gamma_half_ratio_values(k, l, expected):
    assert exact_core.gamma_half_ratio(k, l) == expected


@pytest.mark.parametrize(("k", "l"), [(0, 1), (1, 0), (-1, 3)])
def test_gamma_half_ratio_rejects_outside_domain(k, l):
    with pytest.raises(InvalidInputError):
        exact_core.gamma_half_ratio(k, l)


def test_gamma_half_ratio_recurrence():
    for k in range(1, 51):
        for l in range(1, 51):
            left = exact_core.gamma_half_ratio(k + 1, l) * 2 * (k + l)
            assert left == exact_core.gamma_half_ratio(k, l) * (2 * k + 1)


@pytest.mark.parametrize(
    ("n", "k", "expected"),
    [(2, 0, -2), (2, 1, 4), (3, 0, -12), (3, 1, 8), (4, 1, -48), (4, 0, 12), (4, 2, 16), (0, 0, 1)],
)
def test_hermite_coefficient(n, k, expected):
    assert exact_core.hermite_coefficient(n, k) == expected


def test_hermite_coefficient_rejects_k_out_of_range():
    with pytest.raises(InvalidInputError):
        exact_core.hermite_coefficient(4, 3)


def test_hermite_three_term_recurrence():
    for n in range(1, 31):
        current = exact_core.hermite_polynomial(n)
        previous = exact_core.hermite_polynomial(n - 1)
        combined = [Fraction(0)] * (n + 2)
        for power, value in enumerate(current):
            combined[power + 1] += 2 * value
        for power, value in enumerate(previous):
            combined[power] -= 2 * n * value
        assert combined == exact_core.hermite_polynomial(n + 1)


def test_eigenvalue_coefficient_leading_orders():
    for n in range(6):
        assert exact_core.eigenvalue_coefficient(n, 0) == -1
        assert exact_core.eigenvalue_coefficient(n, 1) == Fraction(2 * n + 1, 2)
    assert exact_core.eigenvalue_coefficient(1, 1) == Fraction(3, 2)


@pytest.mark.parametrize(
    ("n", "m", "expected"),
    [
        (0, 2, Fraction(-1, 32)),
        (0, 3, Fraction(-1, 512)),
        (1, 3, Fraction(-36, 2048)),
        (2, 3, Fraction(-35, 512)),
        (0, 17, Fraction(-363372562420411197, 2**79)),
    ],
)
def test_eigenvalue_coefficient_values(n, m, expected):
    assert exact_core.eigenvalue_coefficient(n, m) == expected


def test_eigenvalue_coefficient_out_of_table():
    with pytest.raises(OutOfTableError) as info:
        exact_core.eigenvalue_coefficient(1, 17)
    assert info.value.exit_code == 2
    with pytest.raises(OutOfTableError):
        exact_core.eigenvalue_coefficient(0, 32)
    assert exact_core.max_eigenvalue_order(0) == 31
    assert exact_core.max_eigenvalue_order(3) == 16


def test_eigenvalue_terms_parity():
    for m in range(2, 17):
        assert all(power % 2 == m % 2 for power in exact_core.eigenvalue_term(m).powers())


def test_eigenvalue_series_value():
    assert exact_core.eigenvalue_series_value(3, 0, 0.7) == -1.0
    assert exact_core.eigenvalue_series_value(0, 3, 0.1) == pytest.approx(-0.950314453125, abs=1e-15)


@pytest.mark.parametrize("omega", [0.0, -0.1, float("nan")])
def test_eigenvalue_series_value_rejects_bad_omega(omega):
    with pytest.raises(InvalidInputError):
        exact_core.eigenvalue_series_value(0, 2, omega)


def test_hat_polynomial_evaluation_is_exact():
    polynomial = exact_core.HatPolynomial.from_terms({3: Fraction(1, 2048), 1: Fraction(3, 2048)})
    assert polynomial.degree == 3
    assert polynomial.at_state(2) == Fraction(125 + 15, 2048)
    assert polynomial.powers() == [1, 3]


@pytest.mark.parametrize(
    ("n", "k", "l", "expected"),
    [
        (0, 1, 2, Fraction(-3, 32)),
        (0, 1, 3, Fraction(-53, 1536)),
        (0, 2, 2, Fraction(1, 96)),
        (2, 1, 2, Fraction(-7, 32)),
        (2, 1, 3, Fraction(-275, 1536)),
        (2, 2, 3, Fraction(23, 1024)),
        (2, 3, 3, Fraction(-1, 1280)),
    ],
)
def test_alpha_literal_values(n, k, l, expected):
    assert exact_core.alpha_coefficient(n, k, l) == expected


def test_alpha_second_order_exponent():
    for n in range(8):
        assert exact_core.alpha_coefficient(n, 1, 1) == Fraction(-1, 2)
        assert exact_core.alpha_coefficient(n, 1, 2) == Fraction(-(3 + 2 * n), 32)


def test_alpha_extras_and_out_of_table():
    for k, l in ((1, 8), (1, 9), (2, 9)):
        assert isinstance(exact_core.alpha_coefficient(1, k, l), Fraction)
    with pytest.raises(OutOfTableError):
        exact_core.alpha_coefficient(1, 1, 10)
    with pytest.raises(OutOfTableError):
        exact_core.alpha_coefficient(0, 2, 10)
    assert exact_core.alpha_coefficient(0, 1, 30) != 0
    with pytest.raises(OutOfTableError):
        exact_core.alpha_coefficient(1, 1, 30)


def test_alpha_diagonal_ratio_limit():
    def ratio(k):
        return exact_core.alpha_coefficient(0, k + 1, k + 1) / exact_core.alpha_coefficient(0, k, k)

    reference = abs(ratio(10) + Fraction(1, 4))
    for k in range(40, 201):
        assert abs(ratio(k) + Fraction(1, 4)) < reference
    assert abs(ratio(200) + Fraction(1, 4)) < Fraction(1, 20)


@pytest.mark.slow
@pytest.mark.parametrize("delta", range(7))
@pytest.mark.parametrize("n", range(6))
def test_alpha_family_ratio_limit(n, delta):
    def ratio(k):
        return exact_core.alpha_coefficient(n, k + 1, k + 1 + delta) / exact_core.alpha_coefficient(n, k, k + delta)

    assert abs(ratio(200) + Fraction(1, 4)) < Fraction(1, 20)


@pytest.mark.parametrize(
    ("n", "k", "l", "expected"),
    [
        (2, 1, 2, Fraction(1, 4)),
        (2, 1, 3, Fraction(37, 256)),
        (3, 1, 2, Fraction(1, 3)),
    ],
)
def test_beta_values(n, k, l, expected):
    assert exact_core.beta_coefficient(n, k, l) == expected


def test_beta_constraints():
    for n in range(10):
        for k in range(n // 2 + 1):
            assert exact_core.beta_coefficient(n, k, 1) == 1
        for l in range(2, 8):
            assert exact_core.beta_coefficient(n, 0, l) == 0
    for l in (8, 12, 31):
        assert exact_core.beta_coefficient(0, 0, l) == 0
        assert exact_core.beta_coefficient(5, 0, l) == 0
    with pytest.raises(OutOfTableError):
        exact_core.beta_coefficient(4, 1, 8)
    with pytest.raises(InvalidInputError):
        exact_core.beta_coefficient(2, 2, 2)


def test_leading_beta_blocks():
    assert exact_core.leading_beta_block("B", 4, 6, 1, 1) == Fraction(9, 8192)
    assert exact_core.leading_beta_block("Bbar", 4, 5, 1, 1) == Fraction(9, 128)
    for l in range(4, 8):
        assert exact_core.leading_beta_block("B", l, 2 * l - 2, 10, 1) == 0


def test_leading_beta_block_rejects_undefined_family():
    with pytest.raises(InvalidInputError):
        exact_core.leading_beta_block("B", 4, 4, 1, 1)


def test_exponent_slot_count():
    assert exact_core.exponent_slot_count(31) == 496
    assert exact_core.exponent_slot_count(1) == 1


def test_dump_tables_uses_string_rationals():
    tables = exact_core.dump_tables()
    assert tables["eigenvalue_terms"]["2"]["2"] == {"numerator": "-1", "denominator": "64"}
    assert tables["ground_state_extension"]["17"]["numerator"] == "-363372562420411197"
    assert "1,1" in tables["alpha"]
    assert set(tables["beta_tables"]) == {str(l) for l in range(2, 8)}


def test_coefficient_tables_snapshot():
    tables = exact_core.coefficient_tables()
    assert isinstance(tables, exact_core.CoefficientTables)
    assert len(tables.eigenvalue_terms) == 17
    assert tables.eigenvalue_terms[0].coefficients == (Fraction(-1),)
    assert tables.eigenvalue_terms[1].coefficients == (Fraction(0), Fraction(1, 2))
    assert sorted(tables.ground_state_extension) == list(range(17, 32))
    assert set(tables.alpha_extras) == {(1, 8), (1, 9), (2, 9)}
    assert tables.alpha_ground_state[(1, 30)] == exact_core.alpha_coefficient(0, 1, 30)
    assert sorted(tables.beta_tables) == list(range(2, 8))
    assert tables.parity_violations() == []


def test_coefficient_tables_hold_only_rationals():
    tables = exact_core.coefficient_tables()
    values = [c for term in tables.eigenvalue_terms for c in term.coefficients]
    values += list(tables.ground_state_extension.values())
    values += [c for polynomial in tables.alpha.values() for c in polynomial.coefficients]
    assert all(isinstance(value, Fraction) for value in values)
    assert exact_core.dump_tables() == tables.to_json()
