import math

import numpy as np
import pytest

from services import exact_core
from services.errors import InvalidInputError
from services.reference_solver import (
    ParityMode,
    build_tridiagonal,
    eigenpairs,
    eigenvalues,
    reference_state,
    reflection_parity,
    sector_eigenvalue,
    sector_for_state,
    select_dimension,
    sturm_count,
    x0_splitting,
)


def test_full_operator_entries():
    op = build_tridiagonal(1.0, 0.0, 1)
    assert op.diag.tolist() == [0.5, 0.0, 0.5]
    assert op.offdiag.tolist() == [-0.5, -0.5]
    assert op.grid.tolist() == [-1, 0, 1]


def test_even_sector_entries():
    op = build_tridiagonal(1.0, 0.0, 2, "even")
    assert op.parity_mode is ParityMode.EVEN
    assert op.diag.tolist() == [0.0, 0.5, 2.0]
    assert op.offdiag.tolist() == pytest.approx([-1 / math.sqrt(2), -0.5], abs=1e-16)


def test_odd_sector_starts_at_one():
    op = build_tridiagonal(1.0, 0.0, 3, "odd")
    assert op.grid.tolist() == [1, 2, 3]
    assert op.offdiag.tolist() == [-0.5, -0.5]


def test_displaced_diagonal():
    op = build_tridiagonal(0.5, 0.5, 1)
    assert op.diag.tolist() == [0.28125, 0.03125, 0.03125]


@pytest.mark.parametrize(
    ("kwargs", "error"),
    [
        ({"omega": -0.1, "x0": 0.0, "j0": 3}, "omega"),
        ({"omega": 0.1, "x0": 0.6, "j0": 3}, "x0"),
        ({"omega": 0.1, "x0": 0.25, "j0": 3, "parity_mode": "even"}, "x0"),
        ({"omega": 0.1, "x0": 0.0, "j0": 0, "parity_mode": "odd"}, "j0"),
        ({"omega": 0.1, "x0": 0.0, "j0": -1}, "j0"),
    ],
)
def test_invalid_operator_arguments(kwargs, error):
    with pytest.raises(InvalidInputError, match=error):
        build_tridiagonal(**kwargs)


def test_strict_dimension():
    assert select_dimension(0.5, 0, "strict") == 5
    assert select_dimension(1.0, 0, "strict") == 2
    assert select_dimension(0.5, 0, "strict", x0=0.5) == 6


def test_tail_dimension():
    assert select_dimension(0.01, 0) >= 217


def test_single_row_operator():
    pairs = eigenpairs(build_tridiagonal(0.3, 0.0, 0, "even"), 1)
    assert pairs[0].value == 0.0
    assert pairs[0].vector.tolist() == [1.0]


def test_free_hopping_spectrum():
    pairs = eigenpairs(build_tridiagonal(0.0, 0.0, 1), 3)
    values = [pair.value for pair in pairs]
    assert values == pytest.approx([-math.sqrt(2) / 2, 0.0, math.sqrt(2) / 2], abs=1e-14)


def test_lowest_eigenvalue_matches_series():
    assert sector_eigenvalue(0, 0.1) == pytest.approx(exact_core.eigenvalue_series_value(0, 16, 0.1), abs=1e-11)


def test_eigenpair_quality():
    op = build_tridiagonal(0.2, 0.0, select_dimension(0.2, 6))
    pairs = eigenpairs(op, 6)
    intervals = op.gershgorin_intervals()
    for pair in pairs:
        assert pair.residual <= 1e-12 * max(1.0, abs(pair.value))
        assert np.linalg.norm(pair.vector) == pytest.approx(1.0, abs=1e-14)
        assert np.any((intervals[:, 0] <= pair.value) & (pair.value <= intervals[:, 1]))
    for first in pairs:
        for second in pairs:
            if first.index < second.index:
                assert abs(np.dot(first.vector, second.vector)) <= 1e-10


def test_sturm_count_brackets_spectrum():
    op = build_tridiagonal(0.2, 0.0, select_dimension(0.2, 5))
    values = eigenvalues(op, 6)
    assert sturm_count(op, values[0] - 1.0) == 0
    for i in range(5):
        assert sturm_count(op, 0.5 * (values[i] + values[i + 1])) == i + 1


def test_eigenvalues_rejects_bad_count():
    op = build_tridiagonal(0.2, 0.0, 3)
    with pytest.raises(InvalidInputError):
        eigenvalues(op, 0)
    with pytest.raises(InvalidInputError):
        eigenvalues(op, op.dimension + 1)


@pytest.mark.parametrize("n", [0, 2, 3])
def test_doubling_dimension_keeps_eigenvalue(n):
    omega = 0.05
    j0 = select_dimension(omega, n)
    assert abs(sector_eigenvalue(n, omega, j0=2 * j0) - sector_eigenvalue(n, omega, j0=j0)) < 1e-13


def test_sector_for_state():
    assert sector_for_state(0, 0.0) == (ParityMode.EVEN, 0)
    assert sector_for_state(3, 0.0) == (ParityMode.ODD, 1)
    assert sector_for_state(3, 0.5) == (ParityMode.NONE, 3)
    with pytest.raises(InvalidInputError):
        sector_for_state(-1, 0.0)


@pytest.mark.parametrize("n", range(5))
def test_sector_vector_matches_full_operator(n):
    omega, j0 = 0.3, 40
    state = reference_state(n, omega, 0.0, j0)
    full = eigenpairs(build_tridiagonal(omega, 0.0, j0), n + 1)[n]
    assert state.value == pytest.approx(full.value, abs=1e-13)
    assert np.linalg.norm(state.vector) == pytest.approx(1.0, abs=1e-14)
    assert abs(np.dot(state.vector, full.vector)) == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(state.vector[::-1], (-1) ** n * state.vector, atol=1e-15)


def test_reference_state_follows_seed_sign():
    omega, j0 = 0.3, 40
    seed = -np.exp(-0.5 * omega * np.arange(-j0, j0 + 1) ** 2)
    state = reference_state(0, omega, 0.0, j0, seed)
    assert np.dot(state.vector, seed) > 0


def test_reference_state_rejects_foreign_seed():
    with pytest.raises(InvalidInputError):
        reference_state(0, 0.3, 0.0, 40, np.ones(11))


def test_half_integer_reflection_parity():
    omega = 0.5
    op = build_tridiagonal(omega, 0.5, select_dimension(omega, 2, x0=0.5))
    ground, excited = eigenpairs(op, 2)
    assert reflection_parity(ground.vector, op) == 1
    assert reflection_parity(excited.vector, op) == -1


def test_reflection_needs_full_operator():
    op = build_tridiagonal(0.5, 0.0, 4, "even")
    with pytest.raises(InvalidInputError):
        reflection_parity(np.ones(op.dimension), op)


def test_splitting_decays_faster_than_geometric():
    splittings = [x0_splitting(0, omega) for omega in (0.6, 0.8, 1.0)]
    assert all(value > 0 for value in splittings)
    assert splittings[0] / splittings[1] < splittings[1] / splittings[2]
