"""Counter-based random substreams.

Every random quantity is drawn from ``derive_rng(root_seed, stream, *counters)``,
which feeds the integer tuple to ``numpy.random.SeedSequence``. A drop, a Monte
Carlo batch or a grouping draw is therefore reproducible on its own, whatever the
order or process it runs in.
"""

import numpy as np

# Stream tags (first counter after the root seed)
STREAM_DROP = 0
STREAM_CHANNEL = 1
STREAM_MU = 2
STREAM_ORACLE = 3
STREAM_GROUPING = 4
STREAM_NORMALIZER = 5


def derive_rng(seed: int, *counters: int) -> np.random.Generator:
    """Return an independent generator for the given (seed, counters) key."""
    if seed < 0 or any(c < 0 for c in counters):
        raise ValueError("seed and counters must be non-negative integers")
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, counters)]))


def complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """CN(0, 1) samples: real and imaginary parts each N(0, 1/2)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def child_seed(seed: int, *counters: int) -> int:
    """A 32-bit seed for a child experiment (e.g. one drop of a run)."""
    if seed < 0 or any(c < 0 for c in counters):
        raise ValueError("seed and counters must be non-negative integers")
    return int(np.random.SeedSequence([int(seed), *map(int, counters)]).generate_state(1)[0])
