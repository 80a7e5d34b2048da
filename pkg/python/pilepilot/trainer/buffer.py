"""Fixed-capacity FIFO replay."""

import typing as tp

import numpy as np

from ..errors import DomainError, Underfull

T = tp.TypeVar("T")


class ReplayBuffer(tp.Generic[T]):
    """A ring of the most recent `capacity` transitions."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise DomainError("Replay capacity must be at least 1, got {}.".format(capacity))
        self.capacity = capacity
        self._entries: tp.List[T] = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, index: int) -> T:
        """Entries in insertion order, oldest first."""
        if not -len(self) <= index < len(self):
            raise IndexError(index)
        index %= len(self)
        if len(self._entries) < self.capacity:
            return self._entries[index]
        return self._entries[(self._cursor + index) % self.capacity]

    def __iter__(self) -> tp.Iterator[T]:
        for index in range(len(self)):
            yield self[index]

    @property
    def cursor(self) -> int:
        """Slot the next insertion overwrites once full."""
        return self._cursor

    def add(self, entry: T) -> None:
        if len(self._entries) < self.capacity:
            self._entries.append(entry)
        else:
            self._entries[self._cursor] = entry
        self._cursor = (self._cursor + 1) % self.capacity

    def extend(self, entries: tp.Iterable[T]) -> None:
        for entry in entries:
            self.add(entry)


def sample_minibatch(
    buffer: ReplayBuffer[T], batch_size: int, rng: np.random.Generator
) -> tp.List[T]:
    """`batch_size` distinct entries drawn uniformly, in random order.

    Raises:
        Underfull: the buffer holds fewer than `batch_size` entries.
    """
    if batch_size > len(buffer):
        raise Underfull(
            "Can't sample {} entries from a buffer holding {}.".format(batch_size, len(buffer))
        )
    indices = rng.choice(len(buffer), size=batch_size, replace=False)
    return [buffer[int(i)] for i in indices]
