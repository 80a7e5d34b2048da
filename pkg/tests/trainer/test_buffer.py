import numpy as np
import pytest
from pilepilot.errors import DomainError, Underfull
from pilepilot.trainer import ReplayBuffer, sample_minibatch


def test_fifo_eviction():
    buffer: ReplayBuffer[int] = ReplayBuffer(3)
    buffer.extend(range(5))
    assert len(buffer) == 3
    assert list(buffer) == [2, 3, 4]
    assert buffer[0] == 2
    assert buffer[-1] == 4
    assert buffer.cursor == 2


def test_partial_buffer_keeps_order():
    buffer: ReplayBuffer[str] = ReplayBuffer(10)
    buffer.extend("abc")
    assert list(buffer) == ["a", "b", "c"]
    with pytest.raises(IndexError):
        buffer[3]


def test_capacity_must_be_positive():
    with pytest.raises(DomainError, match="at least 1"):
        ReplayBuffer(0)


def test_sample_underfull():
    buffer: ReplayBuffer[int] = ReplayBuffer(10)
    buffer.extend(range(4))
    with pytest.raises(Underfull, match="Can't sample 5 entries from a buffer holding 4"):
        sample_minibatch(buffer, 5, np.random.default_rng(0))


def test_full_sample_is_a_permutation():
    buffer: ReplayBuffer[int] = ReplayBuffer(20)
    buffer.extend(range(20))
    batch = sample_minibatch(buffer, 20, np.random.default_rng(0))
    assert sorted(batch) == list(range(20))


def test_samples_are_distinct_and_seeded():
    buffer: ReplayBuffer[int] = ReplayBuffer(100)
    buffer.extend(range(250))
    a = sample_minibatch(buffer, 30, np.random.default_rng(4))
    b = sample_minibatch(buffer, 30, np.random.default_rng(4))
    assert a == b
    assert len(set(a)) == 30
    assert all(150 <= x < 250 for x in a)
