"""Counter-based keyed random substreams.

Every stochastic operation draws from ``substream(seed, stream, *indices)``:
a Philox generator seeded by ``SeedSequence(seed, spawn_key=...)``. Keys
identify the purpose (``Stream``) and the community pair or replicate, so
resizing one block never perturbs the draws of another.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Purpose keys for substreams."""
    PSI = 1
    EPSILON = 2
    RETENTION = 3
    EXTERNAL_NOISE = 4
    SPURIOUS = 5
    BOOTSTRAP = 6
    SPECTRAL = 7
    EMBEDDING = 8
    SAMPLE = 9


def _keyed_sequence(seed: int, keys: tuple[int, ...]) -> np.random.SeedSequence:
    if int(seed) < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(_keyed_sequence(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """A 31-bit integer seed for libraries that only accept ints (scikit-learn)."""
    return int(_keyed_sequence(seed, keys).generate_state(1)[0] & 0x7FFFFFFF)


def as_generator(rng: int | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(int(rng), Stream.SAMPLE)
