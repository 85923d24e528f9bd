import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional

import numpy as np

from .settings import MMM_CHUNK_SIZE, max_workers as default_max_workers

logger = logging.getLogger(__name__)


def chunk_bounds(n_rows: int, chunk_size: int = MMM_CHUNK_SIZE) -> List[tuple]:
    """Splits ``range(n_rows)`` into consecutive (start, stop) pairs."""
    chunk_size = max(1, chunk_size)
    return [(start, min(start + chunk_size, n_rows)) for start in range(0, n_rows, chunk_size)]


def map_chunks(work: Callable[[int, int], np.ndarray], n_rows: int,
               chunk_size: int = MMM_CHUNK_SIZE, max_workers: Optional[int] = None) -> np.ndarray:
    """Runs ``work(start, stop)`` over row chunks in a thread pool and concatenates results.

    Results are reassembled by chunk position, so the output never depends on
    scheduling order.

    Args:
        work (Callable): computes the rows ``start:stop``; returns an array whose
            first axis has ``stop - start`` entries.
        n_rows (int): total number of rows.
        chunk_size (int, optional): rows per work unit. Defaults to MMM_CHUNK_SIZE.
        max_workers (int, optional): thread cap. Defaults to ``settings.max_workers()``.

    Returns:
        np.ndarray: concatenation of the chunk results along axis 0.
    """
    bounds = chunk_bounds(n_rows, chunk_size)
    if not bounds:
        return work(0, 0)
    if len(bounds) == 1:
        return work(*bounds[0])

    workers = min(max_workers or default_max_workers(), len(bounds))
    logger.debug(f"map_chunks: {n_rows} rows in {len(bounds)} chunks on {workers} threads")
    results: List[Optional[np.ndarray]] = [None] * len(bounds)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(work, start, stop): position
                   for position, (start, stop) in enumerate(bounds)}
        for future in as_completed(futures):
            position = futures[future]
            try:
                results[position] = future.result()
            except Exception as error:
                start, stop = bounds[position]
                logger.error(f"Chunk {start}:{stop} failed: {error}")
                error.add_note(f"in rows {start}:{stop} of {n_rows}")
                raise
    return np.concatenate(results, axis=0)
