"""
Reproducible random streams.

Every stream is a `numpy.random.Generator` over the counter-based Philox
bit generator keyed directly by an integer seed, so a (seed, algorithm)
pair fully determines the draws on every platform. Streams for individual
tags are keyed by a sub-seed hashed from (seed, tag), which makes
per-tag generation independent of the order in which tags are processed.
"""

import hashlib

import numpy as np

from spikelv import constants as const

KEY_MASK = (1 << 128) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed & KEY_MASK))


def derive_subseed(seed: int, tag: str) -> int:
    """First 8 bytes (big endian) of SHA-256 over "<seed>\\x1f<tag>" """
    payload = f"{seed}{const.SUBSEED_SEP}{tag}".encode("utf-8")
    digest = hashlib.new(const.SUBSEED_HASH, payload).digest()

    return int.from_bytes(digest[:8], "big")


def tag_rng(seed: int, tag: str) -> np.random.Generator:
    return make_rng(derive_subseed(seed, tag))
