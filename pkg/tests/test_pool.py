import queue
import threading
import time

import pytest

from slt.pool import EvaluationPool


def test_inline_map():
    """Test that a single-worker pool runs in the calling thread."""
    seen = []
    with EvaluationPool() as pool:
        out = pool.map(lambda x: seen.append(threading.current_thread().name) or x * x, [1, 2, 3])
    assert out == [1, 4, 9]
    assert set(seen) == {threading.current_thread().name}


def test_threaded_map_keeps_order():
    """Test that results come back in submission order even when jobs finish out of order."""
    def slow_square(x):
        time.sleep(0.01 * (5 - x))
        return x * x

    with EvaluationPool(workers=4) as pool:
        assert pool.map(slow_square, range(5)) == [0, 1, 4, 9, 16]
        assert pool.workers == 4


def test_threaded_map_uses_workers():
    """Test that jobs run on the worker threads."""
    names = set()
    lock = threading.Lock()

    def record(x):
        with lock:
            names.add(threading.current_thread().name)
        time.sleep(0.01)
        return x

    with EvaluationPool(workers=3) as pool:
        pool.map(record, range(9))
    assert names and all(name.startswith("slt-eval-") for name in names)


def test_error_propagates():
    """Test that the first failing evaluation is re-raised in the caller."""
    def fail_on_three(x):
        if x == 3:
            raise ArithmeticError("three")
        return x

    with EvaluationPool(workers=2) as pool:
        with pytest.raises(ArithmeticError, match="three"):
            pool.map(fail_on_three, range(6))
        # the pool is still usable afterwards
        assert pool.map(lambda x: x + 1, [1, 2]) == [2, 3]


def test_execute_and_empty_map():
    """Test that execute runs inline and an empty map returns an empty list."""
    with EvaluationPool(workers=2) as pool:
        assert pool.execute(max, 3, 7) == 7
        assert pool.map(abs, []) == []


def test_closed_pool():
    """Test that a closed pool refuses new threaded work and closing twice is harmless."""
    pool = EvaluationPool(workers=2)
    pool.map(abs, [-1, -2])
    pool.close()
    pool.close()
    with pytest.raises(RuntimeError):
        pool.map(abs, [-1, -2, -3])


def test_bad_worker_count():
    """Test that at least one worker is required."""
    with pytest.raises(ValueError):
        EvaluationPool(workers=0)


def test_timed_out_results_do_not_leak():
    """Test that results arriving after a timeout never reach a later call."""
    def slow(x):
        time.sleep(0.3)
        return ("slow", x)

    with EvaluationPool(workers=2, timeout=0.1) as pool:
        with pytest.raises(queue.Empty):
            pool.map(slow, [1, 2])
        time.sleep(0.4)
        assert pool.map(lambda x: ("fast", x), [1, 2, 3]) == [("fast", 1), ("fast", 2), ("fast", 3)]


def test_concurrent_maps():
    """Test that two threads can map through one pool at the same time."""
    out = {}

    def run(tag):
        out[tag] = pool.map(lambda x: (tag, x), range(20))

    with EvaluationPool(workers=3) as pool:
        threads = [threading.Thread(target=run, args=(tag,)) for tag in ("a", "b")]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
    assert out["a"] == [("a", x) for x in range(20)]
    assert out["b"] == [("b", x) for x in range(20)]
