"""Alphabet-Friendly FM-index: the BWT cut into context blocks, one
Huffman-shaped wavelet tree per block, per-block rank tables and a bitmap
marking block starts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binio import Reader, Writer
from .bitseq import BitSeq
from .contract import SpaceReport
from .fm_ssa import DEFAULT_SA_RATE, FMIndexBase, prepare
from .sampling import ASampling
from .textcore import bwt_from_sa, log2_ceil
from .wavelet import WaveletTree

DEFAULT_K_MAX = 4
MIN_BLOCK = 16


@dataclass(frozen=True)
class Partition:
    k: int
    starts: list[int]          # 1-based first row of every block
    cost: float                # bits under the block cost model
    costs: dict[int, float]    # cost of every candidate order


def context_starts(codes: np.ndarray, sa: np.ndarray, k: int) -> list[int]:
    """Rows where the first k symbols of the suffix change."""
    n = int(sa.size)
    if k == 0 or n == 0:
        return [1] if n else []
    ext = np.concatenate([np.asarray(codes, dtype=np.int64), np.full(k, -1, dtype=np.int64)])
    change = np.zeros(max(n - 1, 0), dtype=bool)
    for j in range(k):
        col = ext[sa - 1 + j]
        change |= col[1:] != col[:-1]
    return [1] + (np.flatnonzero(change) + 2).tolist()


def merge_short(starts: list[int], n: int, min_block: int) -> list[int]:
    """Fold blocks shorter than min_block into their successor (the last
    one into its predecessor)."""
    if min_block <= 1 or not starts:
        return list(starts)
    out = [starts[0]]
    for s in starts[1:]:
        if s - out[-1] >= min_block:
            out.append(s)
    if len(out) > 1 and n + 1 - out[-1] < min_block:
        out.pop()
    return out


def block_cost(bwt: np.ndarray, starts: list[int], sigma: int, n: int) -> float:
    """sum_j |s_j| H0(s_j) + f(|s_j|), with f(l) = 2 l + 2 sigma log n."""
    if n == 0:
        return 0.0
    bounds = np.asarray(starts + [n + 1], dtype=np.int64) - 1
    lens = np.diff(bounds)
    block_id = np.repeat(np.arange(len(starts)), lens)
    counts = np.bincount(block_id * sigma + bwt.astype(np.int64),
                         minlength=len(starts) * sigma).reshape(len(starts), sigma)
    cnt = counts.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(cnt > 0, cnt * np.log2(lens[:, None] / cnt), 0.0)
    log_n = math.log2(n) if n > 1 else 0.0
    return float(terms.sum() + 2 * n + len(starts) * 2 * sigma * log_n)


def af_partition(codes, sa, bwt, sigma: int, k_max: int = DEFAULT_K_MAX,
                 min_block: int = MIN_BLOCK, k: int | None = None) -> Partition:
    """Cheapest context-order partition over k in 0..k_max (or exactly ``k``)."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    n = int(sa.size)
    candidates = [k] if k is not None else range(k_max + 1)
    best = None
    costs = {}
    for kk in candidates:
        starts = merge_short(context_starts(codes, sa, kk), n, min_block)
        cost = block_cost(bwt, starts, sigma, n)
        costs[kk] = cost
        if best is None or cost < best[0]:
            best = (cost, kk, starts)
    cost, kk, starts = best
    return Partition(kk, starts, cost, costs)


class AfIndex(FMIndexBase):
    kind = "af"

    def __init__(self, n, alphabet, blocks, cj, r_map: BitSeq, c_array, samples, chosen_k):
        self.n = n
        self._init_alphabet(alphabet)
        self.blocks = blocks
        self.cj = cj
        self.r_map = r_map
        self.c_array = c_array
        self.samples = samples
        self.chosen_k = chosen_k

    @classmethod
    def build(cls, text, s_a: int = DEFAULT_SA_RATE, k_max: int = DEFAULT_K_MAX, sa=None,
              min_block: int = MIN_BLOCK, k: int | None = None) -> "AfIndex":
        t, sa = prepare(text, sa)
        b = bwt_from_sa(t, sa)
        part = af_partition(t.codes, sa, b.bwt, t.sigma, k_max, min_block, k)
        n, sigma = t.n, t.sigma
        blocks = []
        cj = []
        running = np.zeros(sigma, dtype=np.int64)
        bounds = part.starts + [n + 1]
        for s, e in zip(bounds[:-1], bounds[1:]):
            seg = b.bwt[s - 1:e - 1]
            blocks.append(WaveletTree.build(seg, sigma, "huffman"))
            cj.append(running.tolist())
            running += np.bincount(seg, minlength=sigma)
        r_bits = np.zeros(n, dtype=np.uint8)
        r_bits[np.asarray(part.starts, dtype=np.int64) - 1] = 1
        return cls(n, t.alphabet, blocks, cj, BitSeq.build(r_bits), b.c_array,
                   ASampling.build(sa, s_a), part.k)

    @property
    def s_a(self) -> int:
        return self.samples.rate

    def block_of(self, i: int) -> tuple[int, int]:
        """(block number j, first row of block j) for row i >= 1."""
        j = self.r_map.rank1(i)
        return j, self.r_map.select1(j)

    def rank(self, c: int, i: int) -> int:
        if i == 0:
            return 0
        j, start = self.block_of(i)
        wt = self.blocks[j - 1]
        base = self.cj[j - 1][c]
        if c in wt.paths:
            return base + wt.rank(c, i - start + 1)
        return base

    def lf(self, i: int) -> tuple[int, int]:
        j, start = self.block_of(i)
        c, r = self.blocks[j - 1].access_rank(i - start + 1)
        return c, self.c_array[c] + self.cj[j - 1][c] + r

    def block_lengths(self) -> list[int]:
        return [wt.n for wt in self.blocks]

    def r_bits_chunked(self) -> int:
        """Size of R under the sqrt(n t) chunked layout, for comparison."""
        return int(2 * math.ceil(math.sqrt(self.n * len(self.blocks))))

    def size_bits(self) -> SpaceReport:
        width = log2_ceil(self.n + 1)
        payload = sum(sum(wt.size_bits()) for wt in self.blocks)
        payload += len(self.cj) * self.sigma * width
        payload += sum(self.r_map.size_bits()) + self._c_bits()
        sampling = self.samples.size_bits()
        return SpaceReport(payload, sampling, payload + sampling)

    def params(self) -> dict[str, int]:
        return {"s_a": self.s_a, "k": self.chosen_k}

    def write_payload(self, w: Writer) -> None:
        w.array(self.c_array, "<u8")
        w.u64(len(self.blocks))
        for wt, row in zip(self.blocks, self.cj):
            w.array(row, "<u8")
            wt.write(w)
        self.r_map.write(w)
        self.samples.write(w)

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        c_array = r.array("<u8").tolist()
        t = r.u64()
        blocks, cj = [], []
        for _ in range(t):
            cj.append(r.array("<u8").tolist())
            blocks.append(WaveletTree.read(r))
        r_map = BitSeq.read(r)
        samples = ASampling.read(r)
        if (r_map.n != n or r_map.ones != t or sum(wt.n for wt in blocks) != n
                or any(len(row) != len(alphabet) + 1 for row in cj)):
            raise r.corrupt("AF-index components disagree on sizes")
        return cls(n, alphabet, blocks, cj, r_map, c_array, samples, params.get("k", 0))
