from fractions import Fraction

import pytest

from services.errors import InconsistentSystemError, NonlinearTermError, UnderdeterminedSystemError
from services.utils.formal_series import Coefficient, FormalSeries, LinearForm, XiSeries
from services.utils.linear_system import LinearSystem

A = Coefficient.alpha(1, 2)
B = Coefficient.beta(1, 2)
L = Coefficient.eigenvalue(2)


def test_coefficient_names():
    assert str(A) == "alpha[1,2]"
    assert str(L) == "lambda[2]"
    assert str(Coefficient.hermite(3)) == "h[3]"


def test_linear_form_arithmetic():
    form = LinearForm(1, [(A, Fraction(2))]) + LinearForm.unknown(B).scale(3)
    assert form.constant == 1
    assert form.weight(A) == 2
    assert form.weight(B) == 3
    assert form.unknowns() == (A, B)
    assert (form - form).is_zero()
    assert (-form).weight(A) == -2


def test_linear_form_cancellation_drops_unknown():
    form = LinearForm.unknown(A) - LinearForm.unknown(A)
    assert form.is_zero()
    assert form.unknowns() == ()


def test_linear_form_product_with_constant():
    form = LinearForm(Fraction(1, 2)) * (LinearForm(3) + LinearForm.unknown(A))
    assert form.constant == Fraction(3, 2)
    assert form.weight(A) == Fraction(1, 2)


def test_linear_form_product_of_unknowns_is_rejected():
    with pytest.raises(NonlinearTermError):
        LinearForm.unknown(A) * LinearForm.unknown(B)


def test_linear_form_substitute():
    form = LinearForm(1, [(A, Fraction(2)), (B, Fraction(1))])
    result = form.substitute({A: Fraction(1, 4)})
    assert result.constant == Fraction(3, 2)
    assert result.unknowns() == (B,)


def test_grade_is_u_minus_x():
    assert FormalSeries.grade((2, 4)) == 2
    assert XiSeries.grade((2, 4)) == 4


def test_multiply_truncates_by_grade():
    left = FormalSeries.constant(1) + FormalSeries.monomial((0, 1), 2)
    right = FormalSeries.constant(1) + FormalSeries.monomial((1, 2), 1)
    product = left.multiply(right, max_grade=1)
    assert product.coefficient((0, 0)).constant == 1
    assert product.coefficient((0, 1)).constant == 2
    assert product.coefficient((1, 2)).constant == 1
    assert product.coefficient((1, 3)).is_zero()


def test_exp_matches_taylor_series():
    series = FormalSeries.monomial((0, 1), 1).exp(max_grade=4)
    for power in range(5):
        expected = Fraction(1, [1, 1, 2, 6, 24][power])
        assert series.coefficient((0, power)).constant == expected
    assert series.coefficient((0, 5)).is_zero()


def test_exp_with_unknown_coefficient_stays_linear():
    series = FormalSeries.monomial((2, 4), LinearForm.unknown(A)).exp(max_grade=3)
    assert series.coefficient((2, 4)).weight(A) == 1
    assert series.unknowns() == [A]


def test_exp_rejects_non_positive_grade():
    with pytest.raises(ValueError):
        FormalSeries.constant(1).exp(max_grade=2)


def test_derivative_and_shift():
    series = FormalSeries.monomial((3, 5), 2)
    assert series.derivative().coefficient((2, 5)).constant == 6
    assert series.shift((1, 1)).coefficient((4, 6)).constant == 2
    assert FormalSeries.constant(7).derivative().is_zero()


def test_components_group_by_grade():
    series = FormalSeries.monomial((0, 2), 1) + FormalSeries.monomial((2, 4), 1) + FormalSeries.monomial((1, 4), 1)
    components = series.components()
    assert set(components) == {2, 3}
    assert set(components[2]) == {(0, 2), (2, 4)}


def test_linear_system_solves_exactly():
    equations = [
        LinearForm(-1, [(A, Fraction(2)), (B, Fraction(1))]),
        LinearForm(Fraction(-1, 3), [(A, Fraction(1)), (B, Fraction(-1))]),
    ]
    solution = LinearSystem(equations).solve()
    assert solution == {A: Fraction(4, 9), B: Fraction(1, 9)}


def test_linear_system_reports_free_unknown():
    system = LinearSystem.from_forms([LinearForm(-1, [(A, Fraction(1))])], [A, B])
    with pytest.raises(UnderdeterminedSystemError):
        system.solve()


def test_linear_system_reports_inconsistency():
    equations = [LinearForm(-1, [(A, Fraction(1))]), LinearForm(-2, [(A, Fraction(1))])]
    with pytest.raises(InconsistentSystemError) as info:
        LinearSystem(equations).solve()
    assert info.value.exit_code == 4


def test_linear_system_rejects_stray_unknown():
    system = LinearSystem.from_forms([LinearForm(-1, [(A, Fraction(1)), (L, Fraction(1))])], [A])
    with pytest.raises(InconsistentSystemError):
        system.solve()
