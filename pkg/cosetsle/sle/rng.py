"""
Counter-based random streams.

Stream i of seed s is an independent Philox generator keyed by (s, i), so a
stream's draws do not depend on how many streams run or in what order.
"""

import numpy as np

from .models import SEED_MASK


def stream_key(seed: int, stream: int) -> int:
    """128-bit Philox key with the seed in the low word and the stream index in the high word."""
    if stream < 0 or stream > SEED_MASK:
        raise ValueError(f"stream index out of range: {stream}")
    return ((stream & SEED_MASK) << 64) | (seed & SEED_MASK)


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """numpy Generator for one stream."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, stream)))
