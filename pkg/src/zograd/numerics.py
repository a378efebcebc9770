"""Vector helpers and reproducible random streams.

Vectors are plain float64 numpy arrays.  Randomness goes through
:class:`RngStream`, a thin wrapper over numpy's PCG64 generator seeded via
``SeedSequence`` so that child streams for parallel trials can be derived
deterministically from ``(master_seed, index)``.
"""

from __future__ import annotations

import numpy as np

Vector = np.ndarray


class InvalidDimensionError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class RngStream:
    """Deterministic random stream with splittable children.

    Two streams built from the same ``(seed, spawn_key)`` produce identical
    output sequences; children derived with distinct indices are pairwise
    independent streams.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def child(self, index: int) -> "RngStream":
        """Derive the stream for trial ``index`` of this master stream."""
        return RngStream(self.seed, self.spawn_key + (int(index),))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, spawn_key={self.spawn_key})"


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit child seed for trial ``index``, stable across platforms."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    lo, hi = seq.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def as_vector(x, dim: int | None = None) -> Vector:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidDimensionError(f"expected a 1-d vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def gaussian_vector(d: int, rng: RngStream) -> Vector:
    """Draw a d-dimensional standard normal direction, advancing ``rng``."""
    if d < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {d}")
    return rng.generator.standard_normal(d)


def dot(a: Vector, b: Vector) -> float:
    a = as_vector(a)
    b = as_vector(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"dot: dimensions {a.shape[0]} != {b.shape[0]}")
    return float(a @ b)


def norm_sq(a: Vector) -> float:
    a = as_vector(a)
    return float(a @ a)
