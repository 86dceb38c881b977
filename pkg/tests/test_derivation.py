import json
from fractions import Fraction

import pytest

from services import exact_core
from services.derivation import (
    DerivationState,
    compare_with_tables,
    derive,
    expand_difference_residual,
    order_unknowns,
    printed_recursion_relation,
    recursion_relation,
    residual_order,
    seed_bindings,
    solve_next_order,
    table_bindings,
    verify_recursion_identity,
)
from services.errors import InconsistentSystemError, InvalidInputError
from services.utils.formal_series import Coefficient


def test_seed_cancels_first_two_orders():
    for n in range(6):
        assert expand_difference_residual(n, 1, seed_bindings(n)).is_zero()


def test_wrong_seed_is_inconsistent():
    bindings = seed_bindings(1)
    bindings[Coefficient.eigenvalue(1)] = Fraction(1, 2)
    assert not expand_difference_residual(1, 1, bindings).is_zero()


def test_order_two_for_n_two_has_three_unknowns():
    unknowns = order_unknowns(2, 2, eigenvalue="table")
    assert set(unknowns) == {Coefficient.alpha(1, 2), Coefficient.alpha(2, 2), Coefficient.beta(1, 2)}


def test_solve_next_order_for_n_two():
    state = DerivationState.seeded(2)
    values = solve_next_order(2, 2, state)
    assert values[Coefficient.alpha(1, 2)] == Fraction(-7, 32)
    assert values[Coefficient.alpha(2, 2)] == Fraction(1, 96)
    assert values[Coefficient.beta(1, 2)] == Fraction(1, 4)
    assert values[Coefficient.eigenvalue(2)] == exact_core.eigenvalue_coefficient(2, 2)
    assert state.order == 2


def test_solve_next_order_rejects_skipped_order():
    state = DerivationState.seeded(0)
    with pytest.raises(InvalidInputError):
        solve_next_order(0, 3, state)


def test_pinned_eigenvalue_mode_matches_solved_mode():
    solved = derive(2, 3, eigenvalue="solve")
    pinned = derive(2, 3, eigenvalue="table")
    assert solved.bindings == pinned.bindings


@pytest.mark.parametrize("n", range(4))
def test_derivation_reproduces_tables(n):
    state = derive(n, 4)
    assert compare_with_tables(state) == []
    assert state.eigenvalues()[4] == exact_core.eigenvalue_coefficient(n, 4)


def test_ground_state_second_order():
    state = derive(0, 3)
    assert state.bindings[Coefficient.alpha(1, 2)] == Fraction(-3, 32)
    assert state.bindings[Coefficient.alpha(1, 3)] == Fraction(-53, 1536)
    assert state.eigenvalues()[2] == Fraction(-1, 32)


def test_certificate_is_json_serialisable():
    certificate = derive(1, 3).certificate()
    payload = json.loads(json.dumps(certificate))
    assert payload["n"] == 1
    assert [step["order"] for step in payload["orders"]] == [2, 3]
    assert payload["seed"]["lambda[1]"] == {"numerator": "3", "denominator": "2"}


def test_inconsistent_bindings_are_detected():
    state = DerivationState.seeded(0)
    state.bindings[Coefficient.eigenvalue(1)] = Fraction(1)
    with pytest.raises(InconsistentSystemError):
        solve_next_order(0, 2, state)


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("m", range(1, 4))
@pytest.mark.parametrize("equation", ["difference", "ode"])
def test_residual_order_reaches_m(n, m, equation):
    assert residual_order(n, m, equation) >= m


def test_residual_order_detects_perturbed_table():
    bindings = table_bindings(0, 3)
    bindings[Coefficient.alpha(1, 3)] += Fraction(1, 1000)
    assert residual_order(0, 3, "difference", bindings) == 2


@pytest.mark.parametrize("n", range(13))
@pytest.mark.parametrize("order", [1, 2, 3])
def test_recursion_identities(n, order):
    result = verify_recursion_identity(order, n)
    assert result.passed, result.witness_k
    assert result.source == ("printed" if order == 1 or n % 2 == 0 else "derived")


def test_printed_order_one_coefficients():
    relation = printed_recursion_relation(1, 4, 0)
    assert relation[0] == 4
    assert printed_recursion_relation(1, 3, 0)[1] == 3


def test_printed_higher_identities_only_for_even_n():
    with pytest.raises(InvalidInputError):
        printed_recursion_relation(2, 3, 0)
    with pytest.raises(InvalidInputError):
        printed_recursion_relation(4, 2, 0)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_printed_order_two_is_proportional_to_derived(n):
    derived = recursion_relation(n, 2)
    ratios = set()
    for k, relation in derived.items():
        printed = printed_recursion_relation(2, n, k)
        for offset in (-1, 2):
            weight = relation.get(offset, 0)
            if weight != 0:
                ratios.add(printed[offset] / weight)
    assert len(ratios) == 1
    assert abs(ratios.pop()) == 48


@pytest.mark.slow
@pytest.mark.parametrize("n", range(7))
def test_derivation_reproduces_tables_through_order_five(n):
    assert compare_with_tables(derive(n, 5)) == []


@pytest.mark.slow
def test_ground_state_high_order_eigenvalues():
    state = derive(0, 18)
    eigenvalues = state.eigenvalues()
    for m in range(2, 19):
        assert eigenvalues[m] == exact_core.eigenvalue_coefficient(0, m)
    assert eigenvalues[17] == Fraction(-363372562420411197, 2**79)


@pytest.mark.slow
def test_ground_state_order_thirty_one():
    state = derive(0, 31)
    assert state.bindings[Coefficient.alpha(1, 30)] == exact_core.alpha_coefficient(0, 1, 30)
    assert state.eigenvalues()[31] == exact_core.eigenvalue_coefficient(0, 31)
