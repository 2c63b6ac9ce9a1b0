"""Deterministic random-number streams derived from a single 64-bit seed.

Every source of randomness in the package is a named stream split off a
single root seed, so that runs are bit-reproducible: the same (seed,
labels) pair always yields the same generator, and distinct labels yield
statistically independent streams.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["stream"]


def _label_key(label: str) -> int:
    """Stable 64-bit key for a stream label (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def stream(seed: int, *labels: str) -> np.random.Generator:
    """Return the named random stream for ``labels`` under the root ``seed``.

    Parameters
    ----------
    seed:
        Root seed (any Python int; canonical runs use a u64).
    labels:
        Path of stream names, e.g. ``stream(seed, "corpus", "field-17")``.
    """
    key = tuple(_label_key(lab) for lab in labels)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))
