"""Derived, reproducible RNG streams.

Every stochastic routine in the package takes an explicit seed or Generator;
nothing touches numpy's global state. Independent sub-streams are derived
from a base seed plus string/int tags, so concurrent or reordered work still
reproduces bit-for-bit.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xFFFFFFFF
    # stable across processes, unlike hash()
    digest = hashlib.sha256(str(tag).encode()).digest()
    return int.from_bytes(digest[:4], "big")


def derive_rng(seed: int, *tags) -> np.random.Generator:
    """Generator for the sub-stream identified by (seed, *tags)."""
    entropy = [int(seed) & 0xFFFFFFFF] + [_tag_to_int(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(entropy))
