"""Deterministic fan-out of kernel chunks.

Work is cut into fixed-size chunks whose seeds depend only on the chunk
index, so results are identical for any worker count.  Compiled kernels
release the GIL, which is what makes threads useful here.
"""

import os
from concurrent.futures import ThreadPoolExecutor

from .rng import derive_seed

RR_CHUNK = 1 << 15
TRIAL_CHUNK = 1 << 11
ROOT_CHUNK = 1 << 12


def default_threads():
    return os.cpu_count() or 1


def chunk_plan(total, size, base_seed, offset=0):
    """``[(count, seed)]`` covering ``total`` items; chunk ids start at ``offset``."""
    plan = []
    idx = offset
    while total > 0:
        c = min(size, total)
        plan.append((c, derive_seed(base_seed, idx)))
        total -= c
        idx += 1
    return plan


def run_chunks(fn, jobs, threads=1):
    """Apply ``fn(*job)`` to every job; results keep job order."""
    jobs = list(jobs)
    if threads is None:
        threads = default_threads()
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda job: fn(*job), jobs))
