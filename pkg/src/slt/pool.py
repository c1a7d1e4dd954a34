"""Thread pool for independent characteristic-function evaluations."""

from typing import Any, Callable, Iterable, List, Optional, Tuple
import queue
import threading

from .logging_config import get_logger

logger = get_logger(__name__)

_STOP = object()


class EvaluationWorker(threading.Thread):
    """Single worker thread pulling (index, callable, args, reply queue) jobs."""

    def __init__(self, jobs: "queue.Queue", name: str):
        super().__init__(name=name, daemon=True)
        self._jobs = jobs

    def run(self):
        while True:
            job = self._jobs.get()
            if job is _STOP:
                self._jobs.task_done()
                return
            index, func, args, reply = job
            try:
                reply.put((index, True, func(*args)))
            except Exception as exc:  # re-raised in the submitting thread
                reply.put((index, False, exc))
            finally:
                self._jobs.task_done()


class EvaluationPool:
    """Ordered parallel map over independent evaluations.

    With ``workers <= 1`` everything runs inline in the calling thread.
    Results always come back in submission order.
    """

    def __init__(self, workers: int = 1, timeout: Optional[float] = None):
        """Initialize the pool.

        Args:
            workers: Number of worker threads
            timeout: Seconds to wait for any single result; None waits forever
        """
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self._workers = workers
        self._timeout = timeout
        self._lock = threading.Lock()
        self._jobs: "queue.Queue" = queue.Queue()
        self._threads: List[EvaluationWorker] = []
        self._closed = False

    @property
    def workers(self) -> int:
        return self._workers

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def _start(self):
        with self._lock:
            if self._closed:
                raise RuntimeError("EvaluationPool is closed")
            if not self._threads and self._workers > 1:
                logger.debug("starting %d evaluation workers", self._workers)
                for i in range(self._workers):
                    worker = EvaluationWorker(self._jobs, f"slt-eval-{i}")
                    worker.start()
                    self._threads.append(worker)

    def execute(self, func: Callable[..., Any], *args) -> Any:
        """Run one evaluation in the calling thread."""
        return func(*args)

    def map(self, func: Callable[..., Any], items: Iterable[Any]) -> List[Any]:
        """Apply ``func`` to every item and return results in order.

        Raises:
            The first exception raised by any evaluation, after all finish
            queue.Empty: If a result does not arrive within the timeout
        """
        items = list(items)
        if self._workers <= 1 or len(items) <= 1:
            return [func(item) for item in items]
        self._start()
        # one reply queue per call; late results of a timed-out call land there
        reply: "queue.Queue" = queue.Queue()
        for index, item in enumerate(items):
            self._jobs.put((index, func, (item,), reply))
        collected: List[Tuple[int, bool, Any]] = [reply.get(timeout=self._timeout) for _ in items]
        collected.sort(key=lambda entry: entry[0])
        for _, ok, value in collected:
            if not ok:
                raise value
        return [value for _, _, value in collected]

    def close(self):
        """Stop worker threads."""
        with self._lock:
            if self._closed:
                return
            self._closed = True
            for _ in self._threads:
                self._jobs.put(_STOP)
            threads, self._threads = self._threads, []
        for worker in threads:
            worker.join(timeout=self._timeout)
