"""Seedable, stream-addressable random number handles.

Within one build of the package, the same (seed, stream_id) pair replays the
identical sample sequence. Parallel consumers must use distinct stream ids.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngHandle:
    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RngHandle":
        """Derive a child handle; children with distinct indices are independent."""
        return RngHandle(seed=self.seed, stream_id=(self.stream_id << 20) ^ (index + 1))
