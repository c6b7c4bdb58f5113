"""Work caps and seeded random streams shared by all modules."""

import os

import numpy as np

MAX_FIELD_ORDER = 2 ** 20
ENUM_CAP = 2_000_000  # largest q^d enumerated point by point
DEFAULT_WORK_CAP = 10 ** 9


def work_cap() -> int:
    """Tuple-test budget; the FFS_CAP environment variable overrides the default."""
    value = os.environ.get('FFS_CAP')
    return int(float(value)) if value else DEFAULT_WORK_CAP


def rng(seed: int, *stream) -> np.random.Generator:
    """Philox (counter-based, 64-bit) generator keyed by seed and an optional substream id.

    The key is SeedSequence([seed, *stream]) so worker substreams are
    independent and reproducible.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def pmap(fn, items, workers: int = 1):
    """Ordered map, on a process pool when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
