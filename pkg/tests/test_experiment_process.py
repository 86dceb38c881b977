import asyncio
import math

import numpy as np
import pytest

import experiment_process
from schemas import ExperimentConfig, ExperimentSettings
from services.errors import InvalidInputError, NumericalFailureError
from worker_limiter import WorkerLimiter, threads_from_env


def square(value):
    return value * value


def fail_on_even(value):
    if value % 2 == 0:
        raise NumericalFailureError(f"ячейка {value}")
    return value


def test_run_cells_keeps_payload_order():
    assert asyncio.run(experiment_process.run_cells([3, 1, 2, 5], square, threads=2)) == [9, 1, 4, 25]


def test_run_cells_with_no_payloads():
    assert asyncio.run(experiment_process.run_cells([], square, threads=3)) == []


def test_run_cells_reraises_first_failure():
    with pytest.raises(NumericalFailureError, match="ячейка 2"):
        asyncio.run(experiment_process.run_cells([1, 2, 3, 4], fail_on_even, threads=4))


def test_worker_limiter_rejects_zero():
    with pytest.raises(InvalidInputError):
        WorkerLimiter(0)


def test_worker_limiter_runs_in_thread():
    limiter = WorkerLimiter(1)
    assert asyncio.run(limiter.run(square, 7)) == 49


def test_threads_from_env(monkeypatch):
    monkeypatch.setenv("DHO_THREADS", "3")
    assert threads_from_env() == 3
    monkeypatch.setenv("DHO_THREADS", "many")
    with pytest.raises(InvalidInputError):
        threads_from_env()
    monkeypatch.setenv("DHO_THREADS", "-2")
    with pytest.raises(InvalidInputError):
        threads_from_env()
    monkeypatch.delenv("DHO_THREADS")
    assert threads_from_env() >= 1
    assert threads_from_env(default=5) == 5


def test_convergence_experiment_records():
    config = ExperimentConfig(
        n_values=(0, 1),
        orders=(1, 2),
        omegas=tuple(np.geomspace(0.02, 0.002, 6)),
        out="converge.csv",
        format="csv",
    )
    records = experiment_process.convergence_experiment(config, threads=2)
    assert len(records) == 2 * 2 * 6
    for record in records:
        assert record.fitted_slope == pytest.approx(record.m, abs=0.15)
        assert not record.censored
        ratio = record.prefactor / record.expected_prefactor
        assert 0.1 <= ratio <= 10.0


def test_convergence_experiment_marks_censored_points():
    settings = ExperimentSettings(precision_floor=1e-6)
    config = ExperimentConfig(
        n_values=(0,),
        orders=(2,),
        omegas=(0.02, 0.01, 0.005, 0.0025, 0.00125),
        out="converge.json",
        format="json",
        settings=settings,
    )
    records = experiment_process.convergence_experiment(config, threads=1)
    censored = [record.omega for record in records if record.censored]
    assert censored
    assert all(record.fitted_slope is None for record in records)


def test_orthonormality_halving_rate():
    for m in (2, 3):
        records = experiment_process.orthonormality_experiment(range(5), m, [0.005, 0.02, 0.01], threads=2)
        assert [record.omega for record in records] == [0.02, 0.01, 0.005]
        assert records[0].halving_ratio is None
        for record in records[1:]:
            assert m - 0.3 <= record.local_rate <= m + 0.3


def test_orthonormality_experiment_rejects_zero_order():
    with pytest.raises(InvalidInputError):
        experiment_process.orthonormality_experiment([0, 1], 0, [0.1, 0.05])


def test_local_rate_is_log_of_ratio():
    records = experiment_process.orthonormality_experiment([0, 2], 2, [0.02, 0.01], threads=1)
    assert records[1].local_rate == pytest.approx(math.log2(records[1].halving_ratio))


# prefactor / (c_m n^(2m)) on geomspace(0.02, 0.002, 5); below 0.1 the model overestimates
PREFACTORS_BELOW_MODEL = {(2, 2): 0.096, (4, 2): 0.054, (1, 3): 0.047, (2, 3): 0.008, (4, 3): 0.003}


def test_norm_convergence_across_levels():
    config = ExperimentConfig(
        n_values=(0, 1, 2, 4),
        orders=(1, 2, 3),
        omegas=tuple(np.geomspace(0.02, 0.002, 5)),
        out="converge.csv",
        format="csv",
    )
    records = experiment_process.convergence_experiment(config, threads=4)
    cells = {(record.n, record.m): record for record in records}
    assert len(cells) == 12
    for (n, m), record in cells.items():
        assert record.fitted_slope == pytest.approx(m, abs=0.15)
        ratio = record.prefactor / record.expected_prefactor
        assert ratio <= 10.0
        if (n, m) in PREFACTORS_BELOW_MODEL:
            assert ratio == pytest.approx(PREFACTORS_BELOW_MODEL[(n, m)], rel=0.5)
        else:
            assert ratio >= 0.1
