"""Wavelet trees over integer alphabets 0..sigma-1, balanced or Huffman-shaped.

Nodes are kept in preorder. A child reference is either a node index
(>= 0) or a leaf, encoded as ``-(symbol + 1)``.
"""

from __future__ import annotations

import numpy as np

from . import huffman
from .binio import Reader, Writer
from .bitseq import DEFAULT_BLOCK, BitSeq

BALANCED = 0
HUFFMAN = 1
_SHAPES = {"balanced": BALANCED, "huffman": HUFFMAN}


class WaveletTree:
    __slots__ = ("shape", "sigma", "n", "lengths", "solo", "bits", "left", "right", "paths", "raw_paths")

    def __init__(self, shape, sigma, n, lengths, solo, bits, left, right):
        self.shape = shape
        self.sigma = sigma
        self.n = n
        self.lengths = lengths
        self.solo = solo
        self.bits = bits
        self.left = left
        self.right = right
        self.paths = self._paths()
        self.raw_paths = {c: tuple((bs.word_ranks, bs.words, b) for bs, b in p) for c, p in self.paths.items()}

    # -- construction ---------------------------------------------------
    @classmethod
    def build(cls, seq, sigma: int, shape="huffman", block_size: int = DEFAULT_BLOCK):
        if isinstance(shape, str):
            shape = _SHAPES[shape]
        if sigma < 1:
            raise ValueError("sigma must be >= 1")
        seq = np.asarray(seq, dtype=np.int64).ravel()
        if seq.size and (seq.min() < 0 or seq.max() >= sigma):
            raise ValueError("symbol out of range 0..sigma-1")
        counts = np.bincount(seq, minlength=sigma).tolist()
        bits: list[BitSeq] = []
        left: list[int] = []
        right: list[int] = []
        present = [c for c in range(sigma) if counts[c]]

        if shape == HUFFMAN:
            lengths = huffman.code_lengths(counts)
            solo = present[0] if len(present) == 1 else -1
            codes = huffman.canonical_codes(lengths)
            maxlen = max(lengths) if lengths else 0
            # bit_at[d][c]: d-th code bit of symbol c
            bit_at = np.zeros((max(maxlen, 1), sigma), dtype=np.uint8)
            for c, (code, L) in codes.items():
                for d in range(L):
                    bit_at[d, c] = (code >> (L - 1 - d)) & 1

            def grow(sub: np.ndarray, syms: list[int], depth: int) -> int:
                if len(syms) == 1:
                    return -(syms[0] + 1)
                b = bit_at[depth][sub]
                idx = len(bits)
                bits.append(BitSeq.build(b, block_size))
                left.append(0)
                right.append(0)
                zs = [c for c in syms if bit_at[depth, c] == 0]
                os_ = [c for c in syms if bit_at[depth, c] == 1]
                left[idx] = grow(sub[b == 0], zs, depth + 1)
                right[idx] = grow(sub[b == 1], os_, depth + 1)
                return idx

            if len(present) >= 2:
                grow(seq, present, 0)
        else:
            lengths = []
            solo = -1
            if sigma == 1:
                solo = 0

            def grow_range(sub: np.ndarray, lo: int, hi: int) -> int:
                if lo == hi:
                    return -(lo + 1)
                mid = (lo + hi) // 2
                b = (sub > mid).astype(np.uint8)
                idx = len(bits)
                bits.append(BitSeq.build(b, block_size))
                left.append(0)
                right.append(0)
                left[idx] = grow_range(sub[b == 0], lo, mid)
                right[idx] = grow_range(sub[b == 1], mid + 1, hi)
                return idx

            if sigma >= 2:
                grow_range(seq, 0, sigma - 1)
        return cls(shape, sigma, int(seq.size), lengths, solo, bits, left, right)

    def _paths(self) -> dict[int, tuple]:
        paths: dict[int, tuple] = {}
        if not self.bits:
            if self.solo >= 0:
                paths[self.solo] = ()
            return paths
        stack = [(0, ())]
        while stack:
            v, path = stack.pop()
            for b, child in ((0, self.left[v]), (1, self.right[v])):
                p = path + ((self.bits[v], b),)
                if child < 0:
                    paths[-child - 1] = p
                else:
                    stack.append((child, p))
        return paths

    # -- queries ----------------------------------------------------------
    def __contains__(self, c: int) -> bool:
        if self.shape == HUFFMAN:
            return c in self.paths
        return 0 <= c < self.sigma

    def rank(self, c: int, i: int) -> int:
        """Occurrences of c in positions 1..i."""
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside 0..{self.n}")
        path = self.paths.get(c)
        if path is None:
            raise ValueError(f"symbol {c} not in the wavelet tree alphabet")
        for bs, b in path:
            if i == 0:
                return 0
            r = bs._rank_from(i)
            i = r if b else i - r
        return i

    def rank_pair(self, c: int, i: int, j: int) -> tuple[int, int]:
        """(rank(c, i), rank(c, j)) in one descent; c must be present."""
        for wr, words, b in self.raw_paths[c]:
            ri = wr[i >> 6] + (words[i >> 6] & ((1 << (i & 63)) - 1)).bit_count()
            rj = wr[j >> 6] + (words[j >> 6] & ((1 << (j & 63)) - 1)).bit_count()
            if b:
                i, j = ri, rj
            else:
                i, j = i - ri, j - rj
        return i, j

    def access(self, i: int) -> int:
        return self.access_rank(i)[0]

    def access_rank(self, i: int) -> tuple[int, int]:
        """(S[i], rank_{S[i]}(S, i)) in a single descent."""
        if i < 1 or i > self.n:
            raise IndexError(f"position {i} outside 1..{self.n}")
        if not self.bits:
            return self.solo, i
        bits, left, right = self.bits, self.left, self.right
        v = 0
        while True:
            bs = bits[v]
            j = i - 1
            b = (bs.words[j >> 6] >> (j & 63)) & 1
            r = bs._rank_from(i)
            if b:
                i = r
                v = right[v]
            else:
                i -= r
                v = left[v]
            if v < 0:
                return -v - 1, i

    def height(self) -> int:
        return max((len(p) for p in self.paths.values()), default=0)

    def payload_bits(self) -> int:
        return sum(bs.n for bs in self.bits)

    def size_bits(self) -> tuple[int, int]:
        """(payload bits, structural overhead bits: rank directories,
        child links and the stored code lengths)."""
        payload = self.payload_bits()
        overhead = sum(bs.size_bits()[1] for bs in self.bits)
        overhead += 64 * 2 * len(self.bits)
        if self.shape == HUFFMAN:
            overhead += 8 * self.sigma
        return payload, overhead

    # -- serialization ------------------------------------------------------
    def write(self, w: Writer) -> None:
        w.u8(self.shape)
        w.u32(self.sigma)
        w.u64(self.n)
        w.i64(self.solo)
        if self.shape == HUFFMAN:
            w.raw(bytes(self.lengths))
        w.u32(len(self.bits))
        for v, bs in enumerate(self.bits):
            w.i64(self.left[v])
            w.i64(self.right[v])
            bs.write(w)

    @classmethod
    def read(cls, r: Reader) -> "WaveletTree":
        shape = r.u8()
        if shape not in (BALANCED, HUFFMAN):
            raise r.corrupt("bad wavelet shape tag")
        sigma = r.u32()
        n = r.u64()
        solo = r.i64()
        lengths = list(r.take(sigma)) if shape == HUFFMAN else []
        count = r.u32()
        bits, left, right = [], [], []
        for _ in range(count):
            left.append(r.i64())
            right.append(r.i64())
            bits.append(BitSeq.read(r))
        for child in left + right:
            if child >= count or child < -sigma:
                raise r.corrupt("bad wavelet child link")
        return cls(shape, sigma, n, lengths, solo, bits, left, right)
