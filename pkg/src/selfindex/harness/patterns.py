"""Pattern sampling for benchmarks and validation."""

from __future__ import annotations

import numpy as np


def sample_patterns(text: bytes, m: int, count: int, seed: int = 0) -> list[bytes]:
    """``count`` substrings of length m starting at uniformly random positions."""
    n = len(text)
    if m < 1:
        raise ValueError("pattern length must be >= 1")
    if m >= n:
        raise ValueError(f"pattern length {m} must be shorter than the text ({n})")
    rng = np.random.default_rng(seed)
    starts = rng.integers(0, n - m + 1, count)
    return [text[s:s + m] for s in starts.tolist()]


def random_patterns(alphabet: bytes, m: int, count: int, seed: int = 0) -> list[bytes]:
    """Patterns drawn symbol by symbol from ``alphabet`` (may be absent from the text)."""
    rng = np.random.default_rng(seed)
    alpha = np.frombuffer(alphabet, dtype=np.uint8)
    return [alpha[rng.integers(0, len(alpha), m)].tobytes() for _ in range(count)]
