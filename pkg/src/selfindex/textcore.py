"""Text remapping, suffix arrays, the BWT, LF-stepping and empirical entropy.

Codes are dense and 0-based: the terminator is code 0 (smaller than every
other symbol) and the input bytes present in the text get codes 1..sigma-1
in byte order. Text positions, suffix-array ranks and rows are 1-based at
every public entry point; the arrays themselves are plain 0-based numpy
arrays, so ``sa[i - 1]`` is A[i].
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

TERMINATOR = 0


class IntegrityError(ValueError):
    """A structure failed a consistency check."""


@dataclass(frozen=True)
class MappedText:
    codes: np.ndarray          # uint8/uint16, length n, codes[-1] == TERMINATOR
    alphabet: bytes            # alphabet[c - 1] is the byte with code c

    @property
    def n(self) -> int:
        return int(self.codes.size)

    @property
    def sigma(self) -> int:
        return len(self.alphabet) + 1

    @property
    def original_sigma(self) -> int:
        return len(self.alphabet)

    def byte_table(self) -> np.ndarray:
        """256-entry byte -> code table, -1 for bytes absent from the text."""
        table = np.full(256, -1, dtype=np.int16)
        for c, b in enumerate(self.alphabet, start=1):
            table[b] = c
        return table

    def raw(self) -> bytes:
        return unmap_codes(self.codes[:-1], self.alphabet)


def map_text(raw: bytes) -> MappedText:
    data = np.frombuffer(bytes(raw), dtype=np.uint8)
    counts = np.bincount(data, minlength=256)
    if counts[0]:
        raise ValueError("byte 0x00 is reserved for the terminator")
    present = np.flatnonzero(counts)
    if present.size > 255:
        raise ValueError("more than 255 distinct byte values")
    table = np.zeros(256, dtype=np.uint8)
    table[present] = np.arange(1, present.size + 1, dtype=np.uint8)
    codes = np.empty(data.size + 1, dtype=np.uint8)
    codes[:-1] = table[data]
    codes[-1] = TERMINATOR
    return MappedText(codes, bytes(present.astype(np.uint8).tolist()))


def unmap_codes(codes, alphabet: bytes) -> bytes:
    lut = np.frombuffer(b"\x00" + alphabet, dtype=np.uint8)
    return lut[np.asarray(codes, dtype=np.int64)].tobytes()


def map_pattern(pattern: bytes, table: np.ndarray) -> list[int] | None:
    """Pattern bytes -> codes, or None when a byte is absent from the text."""
    codes = table[np.frombuffer(bytes(pattern), dtype=np.uint8)]
    if (codes < 0).any():
        return None
    return codes.tolist()


# -- suffix array -------------------------------------------------------------

def build_suffix_array(t) -> np.ndarray:
    """A[1..n] as a 0-based int64 array of 1-based positions.

    Prefix doubling over integer ranks. The input must end with a unique
    smallest symbol (true for every MappedText).
    """
    codes = t.codes if isinstance(t, MappedText) else np.asarray(t)
    n = int(codes.size)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.unique(codes, return_inverse=True)[1].astype(np.int64).ravel()
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        nxt = np.zeros(n, dtype=np.int64)
        nxt[: n - k] = rank[k:] + 1
        key = rank * (n + 2) + nxt
        sa = np.argsort(key)
        ks = key[sa]
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate([[0], np.cumsum(ks[1:] != ks[:-1])])
        rank = new
        if rank.max() == n - 1:
            break
        k *= 2
    return sa.astype(np.int64) + 1


def inverse_sa(sa: np.ndarray) -> np.ndarray:
    """inv[p] = row of position p (index 0 unused)."""
    inv = np.zeros(sa.size + 1, dtype=np.int64)
    inv[sa] = np.arange(1, sa.size + 1, dtype=np.int64)
    return inv


# -- BWT ----------------------------------------------------------------------

@dataclass(frozen=True)
class BwtText:
    bwt: np.ndarray
    c_array: list[int] = field(repr=False)   # sigma + 1 entries, C[sigma] = n

    @property
    def n(self) -> int:
        return int(self.bwt.size)


def c_array_of(codes, sigma: int) -> list[int]:
    counts = np.bincount(np.asarray(codes, dtype=np.int64), minlength=sigma)
    c = np.zeros(sigma + 1, dtype=np.int64)
    np.cumsum(counts, out=c[1:])
    return c.tolist()


def bwt_from_sa(t: MappedText, sa: np.ndarray, sigma: int | None = None) -> BwtText:
    codes = t.codes if isinstance(t, MappedText) else np.asarray(t)
    if sigma is None:
        sigma = t.sigma if isinstance(t, MappedText) else int(codes.max()) + 1
    bwt = codes[sa - 2]  # A[i] - 1 with t_0 = t_n via negative indexing
    return BwtText(np.ascontiguousarray(bwt), c_array_of(codes, sigma))


def lf_step(b: BwtText, rank_provider, i: int) -> int:
    """C[c] + rank_c(bwt, i) with c = bwt[i]; rank_provider(c, i) answers rank."""
    if i < 1 or i > b.n:
        raise IndexError(f"row {i} outside 1..{b.n}")
    c = int(b.bwt[i - 1])
    return b.c_array[c] + rank_provider(c, i)


def lf_array(b: BwtText) -> np.ndarray:
    """LF for every row at once (0-based array of 1-based rows)."""
    order = np.argsort(b.bwt, kind="stable")
    lf = np.empty(b.n, dtype=np.int64)
    lf[order] = np.arange(1, b.n + 1, dtype=np.int64)
    return lf


def invert_bwt(b: BwtText, alphabet: bytes = b"") -> MappedText:
    n = b.n
    if n == 0 or int(np.count_nonzero(b.bwt == TERMINATOR)) != 1:
        raise IntegrityError("BWT must contain exactly one terminator")
    lf = lf_array(b).tolist()
    bwt = b.bwt.tolist()
    out = [0] * n
    i = 1
    for k in range(n - 2, -1, -1):
        out[k] = bwt[i - 1]
        i = lf[i - 1]
    if bwt[i - 1] != TERMINATOR:
        raise IntegrityError("LF walk did not close the cycle")
    if out[:-1].count(TERMINATOR):
        raise IntegrityError("terminator found inside the text")
    out[-1] = TERMINATOR
    codes = np.asarray(out, dtype=b.bwt.dtype)
    return MappedText(codes, alphabet)


# -- entropy ------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyReport:
    n: int
    sigma: int
    h: list[tuple[int, float, int]]    # (k, H_k bits/symbol, distinct contexts)
    inv_match_prob: float

    def hk(self, k: int) -> float:
        return self.h[k][1]


def _h0_counts(counts: np.ndarray) -> float:
    """sum n_c log(N / n_c) in bits (not normalized)."""
    counts = counts[counts > 0].astype(np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    return float(np.sum(counts * np.log2(total / counts)))


def entropy(t, k_max: int) -> EntropyReport:
    """Empirical H_0..H_k_max of the raw text (terminator excluded).

    ``t`` may be a MappedText or any integer sequence without terminator.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    seq = np.asarray(t.codes[:-1] if isinstance(t, MappedText) else t, dtype=np.int64)
    n = int(seq.size)
    counts = np.bincount(seq) if n else np.zeros(0, dtype=np.int64)
    sigma = int(np.count_nonzero(counts))
    h: list[tuple[int, float, int]] = [(0, _h0_counts(counts) / n if n else 0.0, 1 if n else 0)]
    if n:
        p = counts[counts > 0] / n
        inv = float(1.0 / np.sum(p * p))
    else:
        inv = 0.0
    base = int(seq.max()) + 1 if n else 1
    ctx = np.zeros(n, dtype=np.int64)  # ctx[j]: id of the k symbols ending at j
    for k in range(1, k_max + 1):
        if k > n:
            h.append((k, 0.0, 0))
            continue
        # re-densify ids each round so they never overflow
        prev = np.concatenate([[0], ctx[:-1]])
        key = prev * base + seq
        _, dense = np.unique(key[k - 1:], return_inverse=True)
        ctx = np.zeros(n, dtype=np.int64)
        ctx[k - 1:] = dense.ravel()
        n_ctx = int(dense.max()) + 1
        # symbol at j+1 follows the context ending at j
        c_ids = ctx[k - 1: n - 1]
        nxt = seq[k:]
        total = 0.0
        if c_ids.size:
            pair = c_ids * base + nxt
            upair, pair_counts = np.unique(pair, return_counts=True)
            owner = upair // base
            ctx_tot = np.bincount(owner, weights=pair_counts)
            total = float(np.sum(pair_counts * np.log2(ctx_tot[owner] / pair_counts)))
        h.append((k, total / n, n_ctx))
    return EntropyReport(n, sigma, h, inv)


# -- plain suffix array ---------------------------------------------------------

def _suffix_keys(codes: bytes, sa: list[int], m: int):
    return lambda r: codes[sa[r] - 1: sa[r] - 1 + m]


def plain_sa_count(t: MappedText, sa, pattern) -> tuple[int, int]:
    """(sp, ep), 1-based; empty when sp > ep. ``pattern`` is a code sequence."""
    p = bytes(pattern)
    m = len(p)
    if m == 0:
        raise ValueError("empty pattern")
    sa_l = sa if isinstance(sa, list) else np.asarray(sa).tolist()
    text = t.codes.tobytes()
    key = _suffix_keys(text, sa_l, m)
    lo = bisect_left(range(len(sa_l)), p, key=key)
    hi = bisect_right(range(len(sa_l)), p, lo=lo, key=key)
    return lo + 1, hi


def plain_sa_locate(t: MappedText, sa, pattern) -> set[int]:
    sp, ep = plain_sa_count(t, sa, pattern)
    return {int(x) for x in np.asarray(sa)[sp - 1: ep]}


def log2_ceil(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1
