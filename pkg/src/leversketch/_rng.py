"""Seed handling.

All randomness in the package flows through ``numpy.random.Generator``
instances created here.  A stream is keyed by a tuple of unsigned 64-bit
integers fed to ``numpy.random.SeedSequence``, so identical keys always
reproduce identical draws and derived sub-streams never collide with the
parent stream.
"""

from __future__ import annotations

import numpy as np

_U64 = (1 << 64) - 1


def stream(*keys: int) -> np.random.Generator:
    """Deterministic generator for the given key tuple."""
    entropy = [int(k) & _U64 for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(base_seed: int, index: int) -> int:
    """Mix (base_seed, index) into a fresh unsigned 64-bit seed.

    This is the documented mixing function used for per-trial and per-retry
    streams: ``SeedSequence([base_seed, index])`` hashed to one u64 word.
    """
    ss = np.random.SeedSequence([int(base_seed) & _U64, int(index) & _U64])
    return int(ss.generate_state(1, np.uint64)[0])
