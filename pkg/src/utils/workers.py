# src/utils/workers.py
"""
Пул рабочих потоков для параллельных проходов по орбитам и направлениям.

Результаты всегда возвращаются в порядке входных данных, поэтому итоговые
суммы не зависят от числа потоков.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from threading import Lock
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV_VAR = "PRESSURELAB_WORKERS"


def default_workers() -> int:
    """
    Возвращает число потоков по умолчанию.

    Переменная окружения PRESSURELAB_WORKERS имеет приоритет над числом процессоров.
    """
    value = os.environ.get(WORKERS_ENV_VAR)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logging.getLogger("WorkerPool").warning(
                f"Некорректное значение {WORKERS_ENV_VAR}={value!r}, используется число процессоров")
    return os.cpu_count() or 1


class WorkerPool:
    """
    Обертка над ThreadPoolExecutor с упорядоченной выдачей результатов.
    """

    def __init__(self, workers: Optional[int] = None, logger=None):
        """
        Инициализирует пул.

        Args:
            workers: Число потоков (None - значение по умолчанию, 1 - без потоков).
            logger: Объект логгера.
        """
        self.workers = workers if workers is not None else default_workers()
        self.workers = max(1, int(self.workers))
        self.logger = logger or logging.getLogger("WorkerPool")
        self.lock = Lock()
        self._executor: Optional[ThreadPoolExecutor] = None

    def _get_executor(self) -> ThreadPoolExecutor:
        with self.lock:
            if self._executor is None:
                self._executor = ThreadPoolExecutor(max_workers=self.workers)
            return self._executor

    def map_ordered(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        Применяет функцию к каждому элементу и возвращает результаты в исходном порядке.

        Args:
            fn: Чистая функция от одного элемента.
            items: Входные элементы.

        Returns:
            Список результатов в порядке items.
        """
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]

        executor = self._get_executor()
        return list(executor.map(fn, items))

    def shutdown(self):
        """Останавливает пул потоков."""
        with self.lock:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, exc_type, exc, tb):
        self.shutdown()


_shared_pool: Optional[WorkerPool] = None
_shared_lock = Lock()


def get_pool(workers: Optional[int] = None) -> WorkerPool:
    """
    Возвращает общий пул процесса; при смене числа потоков пул пересоздается.
    """
    global _shared_pool
    wanted = workers if workers is not None else default_workers()
    if int(wanted) <= 1:
        return WorkerPool(1)
    with _shared_lock:
        if _shared_pool is None or _shared_pool.workers != max(1, int(wanted)):
            if _shared_pool is not None:
                _shared_pool.shutdown()
            _shared_pool = WorkerPool(wanted)
        return _shared_pool
