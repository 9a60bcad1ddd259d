"""Small shared helpers: capped parallel map and deterministic CSV writing."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "KERRFORGE_THREADS"


def thread_cap():
    """Parallelism cap from the environment (default 1 = serial)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Ordered map over items, parallel when the env cap allows it.

    Results are returned in input order regardless of scheduling, so
    outputs stay byte-identical across thread counts.
    """
    items = list(items)
    cap = thread_cap()
    if cap == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


def format_float(x):
    """Shortest round-trip decimal for a float (repr of binary64)."""
    return repr(float(x))


def write_csv(path, header, rows):
    """Write rows of floats/strings with round-trip float formatting."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(c if isinstance(c, str) else format_float(c) for c in row) + "\n")
