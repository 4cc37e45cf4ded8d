"""Named, independent random streams derived from one scenario seed.

Each concern (mobility per node, flow selection, channel loss, timer jitter)
draws from its own stream, so changing the protocol under test never shifts
the node trajectories or the traffic pattern.
"""

import zlib

import numpy as np


def stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    tag = zlib.crc32(name.encode())
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1),
                                spawn_key=(tag, *[int(k) for k in keys]))
    return np.random.Generator(np.random.PCG64(ss))
