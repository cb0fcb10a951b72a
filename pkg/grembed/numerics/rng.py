import numpy as np

_MASK64 = (1 << 64) - 1


def seeded_rng(seed: int) -> np.random.Generator:
    """Returns a PCG64 stream for ``seed``.

    PCG64 (O'Neill's permuted congruential generator, 128-bit state, XSL-RR output) is the
    numpy reference bit generator, so identical seeds give identical streams on every platform.
    Uniform reals, integer ranges, shuffles and unit Gaussians all come from the returned
    ``numpy.random.Generator``.
    """
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Returns an independent stream keyed by ``(seed, index)``.

    Used for per-node walk streams so results do not depend on thread scheduling.
    """
    sequence = np.random.SeedSequence([int(seed) & _MASK64, int(index) & _MASK64])
    return np.random.Generator(np.random.PCG64(sequence))
