"""Deterministic partition-and-merge over integer index spaces."""

from concurrent.futures import ProcessPoolExecutor


def chunk_ranges(total: int, workers: int, per_worker: int = 4):
    """Split [0, total) into contiguous ranges, in order."""
    if workers <= 1 or total < 2:
        return [(0, total)]
    nchunks = min(total, workers * per_worker)
    step, extra = divmod(total, nchunks)
    out, lo = [], 0
    for i in range(nchunks):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def ordered_map(fn, items, workers: int = 1):
    """map(fn, items) with results in input order; a pool only when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
