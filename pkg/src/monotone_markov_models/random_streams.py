"""
Counter-based randomness.

Every uniform is a pure function of (master seed, stream id, step, channel,
slot), evaluated with Philox4x32-10 over numpy ``uint64`` arrays that hold
32-bit words. Any number of streams and steps can therefore be evaluated in
one vectorized call, in any order, on any worker.

Counter layout::

    word 0  step index (< 2**32)
    word 1  channel << 28 | slot
    word 2  stream id, low 32 bits
    word 3  stream id, high 32 bits
    key     master seed, low / high 32 bits
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .const import DrawChannel
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

MASK32 = np.uint64(0xFFFFFFFF)
SHIFT32 = np.uint64(32)
PHILOX_M0 = np.uint64(0xD2511F53)
PHILOX_M1 = np.uint64(0xCD9E8D57)
PHILOX_W0 = np.uint64(0x9E3779B9)
PHILOX_W1 = np.uint64(0xBB67AE85)
PHILOX_ROUNDS = 10

SLOT_BITS = 28
MAX_SLOT = (1 << SLOT_BITS) - 1
MAX_STEP = 0xFFFFFFFF
MAX_U64 = (1 << 64) - 1

_UNIT = 2.0 ** -52


def philox4x32(counter: Tuple, key: Tuple) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Philox4x32-10 block function on broadcastable arrays of 32-bit words.

    Args:
        counter (Tuple): four arrays (or scalars) of counter words.
        key (Tuple): two arrays (or scalars) of key words.

    Returns:
        Tuple of four ``uint64`` arrays, each holding a 32-bit output word.
    """
    c0, c1, c2, c3 = np.broadcast_arrays(*(np.asarray(w, dtype=np.uint64) for w in counter))
    k0 = np.asarray(key[0], dtype=np.uint64) & MASK32
    k1 = np.asarray(key[1], dtype=np.uint64) & MASK32
    for _ in range(PHILOX_ROUNDS):
        prod0 = c0 * PHILOX_M0
        prod1 = c2 * PHILOX_M1
        hi0 = prod0 >> SHIFT32
        lo0 = prod0 & MASK32
        hi1 = prod1 >> SHIFT32
        lo1 = prod1 & MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + PHILOX_W0) & MASK32
        k1 = (k1 + PHILOX_W1) & MASK32
    return c0, c1, c2, c3


def _seed_key(master_seed: int) -> Tuple[np.uint64, np.uint64]:
    return np.uint64(master_seed & 0xFFFFFFFF), np.uint64(master_seed >> 32)


def _check_u64(value: int, name: str):
    if not 0 <= int(value) <= MAX_U64:
        raise ConfigurationError(f"{name} must be a 64-bit unsigned integer, got {value}")


def derive_ids(master_seed: int, stream_ids, index) -> np.ndarray:
    """Stream ids of child ``index`` of each stream in ``stream_ids``."""
    ids = np.asarray(stream_ids, dtype=np.uint64)
    index = np.asarray(index, dtype=np.uint64)
    word1 = (np.uint64(int(DrawChannel.DERIVE) << SLOT_BITS)
             | ((index >> SHIFT32) & np.uint64(MAX_SLOT)))
    o0, o1, _, _ = philox4x32(
        (index & MASK32, word1, ids & MASK32, ids >> SHIFT32),
        _seed_key(master_seed),
    )
    return o0 | (o1 << SHIFT32)


def counter_uniforms(master_seed: int, stream_ids, steps, channel: DrawChannel, slot: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1), one per broadcast (stream id, step) pair."""
    if not 0 <= slot <= MAX_SLOT:
        raise ConfigurationError(f"slot {slot} out of range")
    ids = np.asarray(stream_ids, dtype=np.uint64)
    steps = np.asarray(steps, dtype=np.uint64)
    word1 = np.uint64((int(channel) << SLOT_BITS) | slot)
    o0, o1, _, _ = philox4x32(
        (steps & MASK32, word1, ids & MASK32, ids >> SHIFT32),
        _seed_key(master_seed),
    )
    # 26 + 26 bits, shifted by half an ulp so neither 0 nor 1 can occur
    mantissa = ((o0 >> np.uint64(6)) << np.uint64(26)) | (o1 >> np.uint64(6))
    return (mantissa.astype(np.float64) + 0.5) * _UNIT


class Draws(ABC):
    """Uniforms available to one kernel step for a batch of rows.

    The ``clock`` channel drives event times and event types, the ``marks``
    channel drives shock values. Couplings differ only in which channel ids
    two chains share.
    """

    @property
    @abstractmethod
    def size(self) -> int:
        pass

    @abstractmethod
    def clock(self, slot: int) -> np.ndarray:
        pass

    @abstractmethod
    def marks(self, slot: int) -> np.ndarray:
        pass

    @abstractmethod
    def child(self, index: int) -> "Draws":
        """Sub-draws for nested randomness (inner events, injected kernels)."""

    def uniform(self, channel: DrawChannel, slot: int) -> np.ndarray:
        if channel == DrawChannel.CLOCK:
            return self.clock(slot)
        elif channel == DrawChannel.MARKS:
            return self.marks(slot)
        else:
            raise ConfigurationError(f"Channel {channel} does not carry draws")


class CounterDraws(Draws):
    """Draws for rows identified by (clock id, marks id, step), evaluated lazily and cached."""

    def __init__(self, master_seed: int, clock_ids, marks_ids, steps):
        clock_ids, marks_ids, steps = np.broadcast_arrays(
            np.asarray(clock_ids, dtype=np.uint64),
            np.asarray(marks_ids, dtype=np.uint64),
            np.asarray(steps, dtype=np.uint64),
        )
        if clock_ids.ndim != 1:
            clock_ids, marks_ids, steps = (a.reshape(-1) for a in (clock_ids, marks_ids, steps))
        if steps.size and int(steps.max()) > MAX_STEP:
            raise ConfigurationError("step counter exceeds 2**32; use a child stream")
        self.master_seed = master_seed
        self.clock_ids = clock_ids
        self.marks_ids = marks_ids
        self.steps = steps
        self._shared = bool(np.array_equal(clock_ids, marks_ids))
        self._cache: Dict[Tuple[int, int], np.ndarray] = {}
        self._children: Dict[int, "CounterDraws"] = {}

    @property
    def size(self) -> int:
        return int(self.steps.shape[0])

    def _column(self, channel: DrawChannel, slot: int) -> np.ndarray:
        cache_key = (int(channel), slot)
        column = self._cache.get(cache_key)
        if column is None:
            ids = self.clock_ids if channel == DrawChannel.CLOCK else self.marks_ids
            column = counter_uniforms(self.master_seed, ids, self.steps, channel, slot)
            column.setflags(write=False)
            self._cache[cache_key] = column
        return column

    def clock(self, slot: int) -> np.ndarray:
        return self._column(DrawChannel.CLOCK, slot)

    def marks(self, slot: int) -> np.ndarray:
        return self._column(DrawChannel.MARKS, slot)

    def child(self, index: int) -> "CounterDraws":
        child = self._children.get(index)
        if child is None:
            clock_ids = derive_ids(self.master_seed, self.clock_ids, index)
            if self._shared:
                marks_ids = clock_ids
            else:
                marks_ids = derive_ids(self.master_seed, self.marks_ids, index)
            child = CounterDraws(self.master_seed, clock_ids, marks_ids, self.steps)
            self._children[index] = child
        return child

    def row(self, i: int) -> "RowDraws":
        return RowDraws(self, i)

    def take(self, rows: np.ndarray) -> "CounterDraws":
        """Draws restricted to a subset of rows; values are unchanged."""
        return CounterDraws(self.master_seed, self.clock_ids[rows], self.marks_ids[rows], self.steps[rows])


class RowDraws(Draws):
    """A one-row view on a block of precomputed draws."""

    def __init__(self, block: CounterDraws, i: int):
        self.block = block
        self.i = i

    @property
    def size(self) -> int:
        return 1

    def clock(self, slot: int) -> np.ndarray:
        return self.block.clock(slot)[self.i:self.i + 1]

    def marks(self, slot: int) -> np.ndarray:
        return self.block.marks(slot)[self.i:self.i + 1]

    def child(self, index: int) -> "RowDraws":
        return RowDraws(self.block.child(index), self.i)


@dataclass(frozen=True)
class RandomnessStream:
    """A reproducible stream: (master_seed, stream_id) fixes every draw, counter is the next step."""
    master_seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self):
        _check_u64(self.master_seed, "master_seed")
        _check_u64(self.stream_id, "stream_id")
        if not 0 <= self.counter <= MAX_STEP:
            raise ConfigurationError(f"counter must lie in [0, 2**32), got {self.counter}")

    def child(self, index: int) -> "RandomnessStream":
        child_id = derive_ids(self.master_seed, np.uint64(self.stream_id), index)
        return RandomnessStream(self.master_seed, int(child_id))

    def children(self, count: int) -> np.ndarray:
        """Stream ids of children 0..count-1 as a ``uint64`` array."""
        return derive_ids(self.master_seed, np.uint64(self.stream_id), np.arange(count, dtype=np.uint64))

    def advanced(self, steps: int) -> "RandomnessStream":
        return RandomnessStream(self.master_seed, self.stream_id, self.counter + steps)

    def block(self, first: int, count: int) -> CounterDraws:
        """Draws for steps counter+first .. counter+first+count-1 of this single stream."""
        steps = np.arange(self.counter + first, self.counter + first + count, dtype=np.uint64)
        return CounterDraws(self.master_seed, np.uint64(self.stream_id), np.uint64(self.stream_id), steps)

    def step_draws(self, stream_ids: np.ndarray, step: int) -> CounterDraws:
        """Draws at one step for many streams sharing this stream's seed."""
        return CounterDraws(self.master_seed, stream_ids, stream_ids, np.uint64(self.counter + step))

    def uniforms(self, count: int, slot: int = 0) -> np.ndarray:
        return self.block(0, count).marks(slot)

    def generator(self) -> np.random.Generator:
        """numpy Generator seeded from this stream, for resampling tasks."""
        return np.random.default_rng([self.master_seed, self.stream_id, self.counter])
