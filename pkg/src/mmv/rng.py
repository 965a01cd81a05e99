"""Deterministic splittable random streams.

Every stochastic component receives an :class:`RngStream` rather than a bare
generator. A stream is identified by a root seed plus a path of string tags
and nonnegative integers (for example ``("data", 3)`` for repetition 3's
dataset). Identical (seed, path) pairs reproduce identical draw sequences on
any machine and under any thread schedule, because the underlying bit
generator is the counter-based Philox keyed through ``SeedSequence``.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np


def _encode(part: str | int) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    value = int(part)
    if value < 0:
        raise ValueError("stream path integers must be nonnegative")
    if value >= 2**32:
        raise ValueError("stream path integers must fit in 32 bits")
    return value


@dataclass(frozen=True)
class RngStream:
    """Key for an independent, reproducible random stream."""

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *parts: str | int) -> "RngStream":
        """Derive a sub-stream keyed by additional path components."""
        return RngStream(self.seed, self.path + tuple(_encode(p) for p in parts))

    def generator(self) -> np.random.Generator:
        """Instantiate the generator for this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(ss))
