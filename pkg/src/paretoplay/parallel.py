"""Leaf parallelization: independent per-world solves on a thread pool.

Workers claim the next pending world under a lock as soon as they free
up (dynamic assignment, no pre-partitioning).  Results merge by world
index, so output is bit-identical for any thread count.  The solver core
releases the GIL, so threads give real concurrency where cores allow.
"""

from __future__ import annotations

import threading


class WorkQueue:
    """Pending world indices with a mutex-guarded claim cursor."""

    def __init__(self, indices):
        self._indices = list(indices)
        self._next = 0
        self._lock = threading.Lock()
        self.dispatched = 0

    def claim(self):
        """Next unclaimed index, or None when drained."""
        with self._lock:
            if self._next >= len(self._indices):
                return None
            idx = self._indices[self._next]
            self._next += 1
            self.dispatched += 1
            return idx


def solve_worlds(indices, solve_one, threads: int):
    """Run ``solve_one(w)`` for every index; returns {index: result}.

    With ``threads <= 1`` this is a plain loop.  Any worker error aborts
    the whole evaluation and is re-raised with the failing world noted.
    """
    indices = list(indices)
    results: dict = {}
    if threads <= 1 or len(indices) <= 1:
        for w in indices:
            results[w] = solve_one(w)
        return results

    queue = WorkQueue(indices)
    errors = []
    lock = threading.Lock()

    def worker():
        while True:
            w = queue.claim()
            if w is None:
                return
            try:
                r = solve_one(w)
            except Exception as exc:  # noqa: BLE001 - reported to the caller
                with lock:
                    errors.append((w, exc))
                return
            with lock:
                results[w] = r

    pool = [threading.Thread(target=worker) for _ in range(min(threads, len(indices)))]
    for t in pool:
        t.start()
    for t in pool:
        t.join()
    if errors:
        w, exc = errors[0]
        raise RuntimeError("leaf solve failed for world %d: %r" % (w, exc)) from exc
    if len(results) != len(indices):
        raise RuntimeError("leaf solve dropped worlds (got %d of %d)"
                           % (len(results), len(indices)))
    return results


def parallel_dds_vector(worlds, state, contract, marks, threads: int,
                        solvers=None, solve_fn=None):
    """Parallel counterpart of ``dds.dds_vector``; identical output."""
    from .dds import DoubleDummySolver, world_state
    from .worldvec import WorldMarks  # noqa: F401  (signature documentation)

    if solve_fn is not None:
        def one(w):
            return bool(solve_fn(state, w))
    else:
        local = list(solvers) if solvers is not None else [None] * len(worlds)

        def one(w):
            solver = local[w]
            if solver is None:
                solver = local[w] = DoubleDummySolver(contract, state.layout)
            return solver.solve(world_state(state, worlds[w]))

    results = solve_worlds(list(marks.live_indices()), one, threads)
    win_mask = 0
    for w, won in results.items():
        if won:
            win_mask |= 1 << w
    return marks.outcome_vector(win_mask)
