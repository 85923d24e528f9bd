import numpy as np
import pytest

from monotone_markov_models import NonFiniteStateError
from monotone_markov_models.parallel import chunk_bounds, map_chunks


def test_chunk_bounds_cover_every_row():
    assert chunk_bounds(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert chunk_bounds(0, 4) == []


def test_results_come_back_in_row_order():
    rows = map_chunks(lambda start, stop: np.arange(start, stop, dtype=np.float64), 1000,
                      chunk_size=7, max_workers=4)
    np.testing.assert_array_equal(rows, np.arange(1000.0))


def test_failed_chunk_is_named_and_keeps_its_class():
    def work(start, stop):
        if start == 4:
            raise NonFiniteStateError(3)
        return np.zeros(stop - start)

    with pytest.raises(NonFiniteStateError) as raised:
        map_chunks(work, 8, chunk_size=2, max_workers=4)
    assert raised.value.index == 3
    assert "in rows 4:6 of 8" in raised.value.__notes__
