import asyncio
import math
from typing import Any, Callable, Sequence

from loguru import logger

from schemas import ConvergenceRecord, ExperimentConfig, ExperimentSettings, OrthonormalityRecord
from services.convergence import convergence_cell, fit_slope, orthonormality_cell
from services.errors import InvalidInputError
from worker_limiter import WorkerLimiter, threads_from_env


async def start_process(
    cells_queue: asyncio.Queue,
    limiter: WorkerLimiter,
    handler: Callable[[Any], Any],
    results: dict[int, Any],
    failures: dict[int, BaseException],
) -> None:
    while True:
        item = None
        index = None
        try:
            item = await cells_queue.get()
            index, payload = item
            results[index] = await limiter.run(handler, payload)

        except asyncio.CancelledError:
            logger.debug("Воркер ячеек остановлен.")
            raise

        except Exception as ex:
            logger.error(f"[ячейка {index}] ошибка расчёта: {ex}", exc_info=True)
            failures[index] = ex
        finally:
            if item is not None:
                cells_queue.task_done()


async def run_cells(payloads: Sequence[Any], handler: Callable[[Any], Any], threads: int | None = None) -> list[Any]:
    """Считает handler(payload) для всех ячеек; результаты в порядке payloads."""
    threads = threads or threads_from_env()
    limiter = WorkerLimiter(threads)
    cells_queue: asyncio.Queue = asyncio.Queue()
    for item in enumerate(payloads):
        cells_queue.put_nowait(item)

    results: dict[int, Any] = {}
    failures: dict[int, BaseException] = {}
    workers = [
        asyncio.create_task(start_process(cells_queue, limiter, handler, results, failures))
        for _ in range(min(threads, max(len(payloads), 1)))
    ]
    try:
        await cells_queue.join()
    finally:
        for worker in workers:
            worker.cancel()
        await asyncio.gather(*workers, return_exceptions=True)

    if failures:
        first = min(failures)
        logger.error(f"Ошибки в {len(failures)} из {len(payloads)} ячеек, первая: {first}")
        raise failures[first]
    logger.debug(f"Посчитано {len(results)} ячеек в {len(workers)} потоках")
    return [results[index] for index in range(len(payloads))]


# --- СХОДИМОСТЬ ПО НОРМЕ ---


def _records_for_order(
    n: int, m: int, omegas: Sequence[float], errors: Sequence[float], settings: ExperimentSettings
) -> list[ConvergenceRecord]:
    fit = fit_slope(omegas, errors, settings.precision_floor, settings.min_fit_points)
    prefactor = None
    if fit.used:
        smallest = min(fit.used)
        prefactor = errors[list(omegas).index(smallest)] / smallest**m
    expected = settings.expected_prefactor(n, m)

    if fit.censored:
        logger.warning(f"[n={n} m={m}] ниже порога {settings.precision_floor:g} отброшено {len(fit.censored)} точек")
    if fit.slope is None:
        logger.warning(f"[n={n} m={m}] мало точек для наклона: {len(fit.used)} < {settings.min_fit_points}")
    elif prefactor is not None and expected is not None:
        ratio = prefactor / expected
        message = f"[n={n} m={m}] наклон {fit.slope:.3f}, префактор {prefactor:.3e} (оценка {expected:.3e}, x{ratio:.2f})"
        if m <= 4 and ratio > 10.0:
            logger.warning(message)
        elif ratio < 0.1:
            # c_m n^(2m) при n >= 1 завышает ошибку
            logger.info(f"{message}: ниже оценки")
        else:
            logger.info(message)

    censored = set(fit.censored)
    return [
        ConvergenceRecord(
            n=n,
            m=m,
            omega=omega,
            norm_error=error,
            censored=omega in censored,
            fitted_slope=fit.slope,
            prefactor=prefactor,
            expected_prefactor=expected,
        )
        for omega, error in zip(omegas, errors)
    ]


async def convergence_experiment_async(config: ExperimentConfig, threads: int | None = None) -> list[ConvergenceRecord]:
    cells = [(n, omega) for n in config.n_values for omega in config.omegas]
    logger.info(f"Сходимость: {len(cells)} ячеек, порядки {list(config.orders)}")

    def handler(cell: tuple[int, float]) -> dict[int, float]:
        n, omega = cell
        return convergence_cell(n, omega, config.orders, config.x0)

    errors = dict(zip(cells, await run_cells(cells, handler, threads)))
    records: list[ConvergenceRecord] = []
    for n in config.n_values:
        for m in config.orders:
            per_omega = [errors[(n, omega)][m] for omega in config.omegas]
            records.extend(_records_for_order(n, m, config.omegas, per_omega, config.settings))
    return records


def convergence_experiment(config: ExperimentConfig, threads: int | None = None) -> list[ConvergenceRecord]:
    return asyncio.run(convergence_experiment_async(config, threads))


# --- ОРТОНОРМИРОВАННОСТЬ ---


async def orthonormality_experiment_async(
    n_values: Sequence[int], m: int, omegas: Sequence[float], x0: float = 0.0, threads: int | None = None
) -> list[OrthonormalityRecord]:
    if m < 1:
        raise InvalidInputError(f"Порядок m должен быть >= 1, получено {m}")
    omegas = sorted(omegas, reverse=True)

    def handler(omega: float):
        return orthonormality_cell(n_values, m, omega, x0)

    cells = await run_cells(omegas, handler, threads)
    records = []
    previous = None
    for cell in cells:
        ratio = rate = None
        if previous is not None and cell.max_deviation > 0:
            ratio = previous.max_deviation / cell.max_deviation
            rate = math.log(ratio) / math.log(previous.omega / cell.omega)
        records.append(
            OrthonormalityRecord(
                m=m,
                omega=cell.omega,
                max_deviation=cell.max_deviation,
                worst_n=cell.worst_pair[0],
                worst_n_prime=cell.worst_pair[1],
                diagonal_deviation=cell.diagonal_deviation,
                halving_ratio=ratio,
                local_rate=rate,
            )
        )
        previous = cell
    logger.info(f"[m={m}] ортонормированность посчитана на {len(records)} значениях omega")
    return records


def orthonormality_experiment(
    n_values: Sequence[int], m: int, omegas: Sequence[float], x0: float = 0.0, threads: int | None = None
) -> list[OrthonormalityRecord]:
    return asyncio.run(orthonormality_experiment_async(n_values, m, omegas, x0, threads))
