"""Named, seeded random streams.

All randomness in the package comes from :func:`stream`. A stream is a numpy
``Generator`` over the counter-based Philox4x64 bit generator, keyed by a
``SeedSequence`` built from ``(seed, crc32(name), *indices)``. Streams for
different names or indices are statistically independent, and a stage can be
rerun on its own because its stream depends only on the top level seed.
"""

import zlib

import numpy as np

STREAMS = ("split", "forest", "mlp", "importance", "synth", "kernel")


def stream(seed, name, *indices):
    """Return a fresh generator for ``(seed, name, *indices)``."""
    if int(seed) < 0:
        raise ValueError("seed must be non-negative")
    entropy = [int(seed), zlib.crc32(name.encode("utf-8"))]
    entropy.extend(int(i) for i in indices)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
