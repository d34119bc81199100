"""Synthetic text generators."""

from __future__ import annotations

import numpy as np


def symbols(sigma: int) -> bytes:
    """sigma distinct printable bytes: lowercase letters when they suffice."""
    if not 1 <= sigma <= 200:
        raise ValueError("sigma must be in 1..200")
    if sigma <= 26:
        return bytes(range(ord("a"), ord("a") + sigma))
    return bytes(range(33, 33 + sigma))


def uniform_text(n: int, sigma: int, seed: int = 0) -> bytes:
    rng = np.random.default_rng(seed)
    alpha = np.frombuffer(symbols(sigma), dtype=np.uint8)
    return alpha[rng.integers(0, sigma, n)].tobytes()


def markov2_text(n: int, sigma: int, seed: int = 0, branch: int = 2) -> bytes:
    """Order-2 Markov source in which every context has ``branch`` equally
    likely successors, so H2 tends to log2(branch) bits."""
    if n == 0:
        return b""
    rng = np.random.default_rng(seed)
    branch = max(1, min(branch, sigma))
    succ = np.stack([rng.permutation(sigma)[:branch] for _ in range(sigma * sigma)]).tolist()
    picks = rng.integers(0, branch, n).tolist()
    a, b = (int(x) for x in rng.integers(0, sigma, 2))
    out = bytearray(n)
    alpha = symbols(sigma)
    for i in range(n):
        c = succ[a * sigma + b][picks[i]]
        out[i] = alpha[c]
        a, b = b, c
    return bytes(out)
