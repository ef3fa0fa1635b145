"""Seed derivation shared by the data generators and models."""
import numpy as np

# Stream tags for derive_seed
PACKET = 1
CHANNEL = 2
NONLINEARITY = 3
NOISE = 4
FADING = 5
INIT = 6
SWEEP = 7

# File ID used for system parts shared by all records.
SHARED = 0xFFFF


def derive_seed(*keys):
    """Return a 63-bit seed determined by a tuple of nonnegative integers.

    Each distinct key tuple yields an independent stream, so per-record
    seeds can be derived in any order or in parallel.
    """
    sequence = np.random.SeedSequence([int(key) for key in keys])
    return int(sequence.generate_state(1, np.uint64)[0] >> np.uint64(1))


def complex_normal(rng, shape, std=1.0):
    """Draw circularly-symmetric complex Gaussian values with given std."""
    scale = std / np.sqrt(2.0)
    return scale * (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    )
