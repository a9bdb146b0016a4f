import numpy as np
import pytest

from src.utils.workers import chunk_generators, ordered_map, worker_count

def test_worker_count_reads_environment(monkeypatch):
    monkeypatch.setenv("HEINZ_THREADS", "3")
    assert worker_count() == 3

@pytest.mark.parametrize("raw", ["zero", "0", "-4"])
def test_worker_count_falls_back_to_one(monkeypatch, raw):
    monkeypatch.setenv("HEINZ_THREADS", raw)
    assert worker_count() == 1

def test_worker_count_default_is_capped(monkeypatch):
    monkeypatch.delenv("HEINZ_THREADS", raising=False)
    assert 1 <= worker_count() <= 8

def test_chunk_generators_are_reproducible():
    first = [g.standard_normal(4) for g in chunk_generators(11, 3)]
    second = [g.standard_normal(4) for g in chunk_generators(11, 3)]
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)
    assert not np.array_equal(first[0], first[1])

def test_ordered_map_keeps_order():
    items = list(range(50))
    assert ordered_map(lambda v: v * v, items, threads=4) == [v * v for v in items]
    assert ordered_map(lambda v: v + 1, items, threads=1) == [v + 1 for v in items]
