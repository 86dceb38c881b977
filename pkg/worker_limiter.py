import asyncio
import os
from typing import Any, Callable

from loguru import logger

from services.errors import InvalidInputError

THREADS_ENV = "DHO_THREADS"
DEFAULT_MAX_THREADS = 8


class WorkerLimiter:
    """
    Асинхронный ограничитель числа одновременно считаемых ячеек.
    Расчёт уходит в пул потоков через asyncio.to_thread.
    """

    def __init__(self, max_workers: int):
        if max_workers <= 0:
            raise InvalidInputError("Количество потоков должно быть больше нуля")

        self.max_workers = max_workers
        self._semaphore = asyncio.Semaphore(max_workers)
        logger.debug(f"WorkerLimiter инициализирован: не более {max_workers} ячеек одновременно.")

    async def run(self, func: Callable[..., Any], *args, **kwargs) -> Any:
        async with self._semaphore:
            return await asyncio.to_thread(func, *args, **kwargs)


def threads_from_env(default: int | None = None) -> int:
    raw = os.getenv(THREADS_ENV, "").strip()
    if not raw:
        return default or min(os.cpu_count() or 1, DEFAULT_MAX_THREADS)
    try:
        value = int(raw)
    except ValueError as e:
        raise InvalidInputError(f"{THREADS_ENV} должно быть целым числом, получено {raw!r}") from e
    if value <= 0:
        raise InvalidInputError(f"{THREADS_ENV} должно быть больше нуля, получено {value}")
    return value
