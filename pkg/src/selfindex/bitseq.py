"""Static bit sequences with rank/select, packed integer arrays, and a
little-endian bit-field packer shared by the variable-length codes."""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .binio import Reader, Writer

DEFAULT_BLOCK = 512


def _words_from_bits(bits: np.ndarray) -> list[int]:
    packed = np.packbits(bits.astype(np.uint8, copy=False), bitorder="little")
    pad = (-len(packed)) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return packed.view("<u8").tolist()


def pack_fields(fields: np.ndarray, widths: np.ndarray) -> tuple[list[int], np.ndarray]:
    """Concatenate bit fields (bit j of a field lands at offset + j).

    Returns the 64-bit words and the starting offset of every field.
    Widths must be in 0..64.
    """
    fields = np.asarray(fields, dtype=np.uint64)
    widths = np.asarray(widths, dtype=np.int64)
    offsets = np.zeros(len(widths), dtype=np.int64)
    if len(widths) > 1:
        np.cumsum(widths[:-1], out=offsets[1:])
    total = int(offsets[-1] + widths[-1]) if len(widths) else 0
    nwords = total // 64 + 2
    words = np.zeros(nwords, dtype=np.uint64)
    if len(widths):
        keep = widths > 0
        f, off, wd = fields[keep], offsets[keep], widths[keep]
        wi = off >> 6
        sh = (off & 63).astype(np.uint64)
        np.bitwise_or.at(words, wi, f << sh)
        spill = (off & 63) + wd > 64
        if spill.any():
            hi = f[spill] >> (np.uint64(64) - sh[spill])
            np.bitwise_or.at(words, wi[spill] + 1, hi)
    return words.tolist(), offsets


class BitSeq:
    """Immutable bit vector with a two-level rank directory: absolute counts
    every ``block_size`` bits and, per 64-bit word, the count relative to
    the block holding the word's first bit. In memory the two levels are
    folded into one absolute count per word. Positions are 1-based."""

    __slots__ = ("n", "block_size", "words", "super_ranks", "word_ranks", "ones")

    def __init__(self, n: int, block_size: int, words: list[int], super_ranks: list[int]):
        self.n = n
        self.block_size = block_size
        self.words = words
        self.super_ranks = super_ranks
        counts = np.bitwise_count(np.asarray(words, dtype=np.uint64)).astype(np.int64)
        wr = np.zeros(len(words) + 1, dtype=np.int64)
        np.cumsum(counts, out=wr[1:])
        self.word_ranks = wr.tolist()
        self.ones = self._rank_from(n)

    @classmethod
    def build(cls, bits, block_size: int = DEFAULT_BLOCK) -> "BitSeq":
        if block_size < 8:
            raise ValueError(f"block_size must be >= 8, got {block_size}")
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        n = int(arr.size)
        words = _words_from_bits(arr) + [0, 0]
        prefix = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(arr, out=prefix[1:])
        super_ranks = prefix[::block_size].tolist()
        return cls(n, block_size, words, super_ranks)

    def __len__(self) -> int:
        return self.n

    def _rank_from(self, i: int) -> int:
        w = i >> 6
        return self.word_ranks[w] + (self.words[w] & ((1 << (i & 63)) - 1)).bit_count()

    def rank1(self, i: int) -> int:
        if i < 0 or i > self.n:
            raise IndexError(f"rank position {i} outside 0..{self.n}")
        return self._rank_from(i)

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def access(self, i: int) -> int:
        if i < 1 or i > self.n:
            raise IndexError(f"position {i} outside 1..{self.n}")
        i -= 1
        return (self.words[i >> 6] >> (i & 63)) & 1

    def access_rank(self, i: int) -> tuple[int, int]:
        """Bit at i and the rank of that bit value over 1..i."""
        b = self.access(i)
        r = self._rank_from(i)
        return b, (r if b else i - r)

    def select1(self, j: int) -> int:
        if j < 1 or j > self.ones:
            raise IndexError(f"select rank {j} outside 1..{self.ones}")
        sr = self.super_ranks
        k = bisect_left(sr, j) - 1
        need = j - sr[k]
        a = k * self.block_size
        words = self.words
        w = a >> 6
        x = words[w] >> (a & 63) << (a & 63)
        while True:
            c = x.bit_count()
            if c >= need:
                break
            need -= c
            w += 1
            x = words[w]
        for _ in range(need - 1):
            x &= x - 1
        return (w << 6) + (x & -x).bit_length()

    def to_list(self) -> list[int]:
        return [self.access(i) for i in range(1, self.n + 1)]

    def size_bits(self) -> tuple[int, int]:
        """(payload bits, rank-directory bits)."""
        nwords = (self.n + 63) // 64
        return self.n, 64 * len(self.super_ranks) + nwords * bits_needed(self.block_size + 63)

    def write(self, w: Writer) -> None:
        w.u64(self.n)
        w.u32(self.block_size)
        nwords = (self.n + 63) // 64
        w.u64_array(self.words[:nwords])
        w.u64_array(self.super_ranks)

    @classmethod
    def read(cls, r: Reader) -> "BitSeq":
        n = r.u64()
        block_size = r.u32()
        if block_size < 8:
            raise r.corrupt("bad block size")
        nwords = (n + 63) // 64
        words = r.u64_array(nwords) + [0, 0]
        if n & 63 and words[nwords - 1] >> (n & 63):
            raise r.corrupt("bits set past the end of the sequence")
        super_ranks = r.u64_array(n // block_size + 1)
        bs = cls(n, block_size, words, super_ranks)
        if super_ranks != [bs._rank_from(j * block_size) for j in range(len(super_ranks))]:
            raise r.corrupt("rank directory disagrees with the bits")
        return bs


class PackedInts:
    """Fixed-width unsigned integers packed into 64-bit words (0-based)."""

    __slots__ = ("width", "size", "words", "_mask")

    def __init__(self, width: int, size: int, words: list[int]):
        self.width = width
        self.size = size
        self.words = words
        self._mask = (1 << width) - 1

    @classmethod
    def build(cls, values, width: int | None = None) -> "PackedInts":
        vals = np.asarray(values, dtype=np.uint64).ravel()
        if width is None:
            width = max(1, int(vals.max()).bit_length()) if vals.size else 1
        if not 1 <= width <= 64:
            raise ValueError(f"width {width} outside 1..64")
        words, _ = pack_fields(vals, np.full(vals.size, width, dtype=np.int64))
        return cls(width, int(vals.size), words)

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> int:
        if i < 0 or i >= self.size:
            raise IndexError(i)
        pos = i * self.width
        wi, sh = pos >> 6, pos & 63
        x = self.words[wi] >> sh
        if sh + self.width > 64:
            x |= self.words[wi + 1] << (64 - sh)
        return x & self._mask

    def tolist(self) -> list[int]:
        return [self[i] for i in range(self.size)]

    def size_bits(self) -> int:
        return self.width * self.size

    def write(self, w: Writer) -> None:
        w.u8(self.width)
        w.u64(self.size)
        w.u64_array(self.words[: (self.width * self.size + 63) // 64])

    @classmethod
    def read(cls, r: Reader) -> "PackedInts":
        width = r.u8()
        size = r.u64()
        if not 1 <= width <= 64:
            raise r.corrupt("bad packed width")
        words = r.u64_array((width * size + 63) // 64) + [0, 0]
        return cls(width, size, words)


def bits_needed(n: int) -> int:
    """ceil(log2(n + 1)): width able to hold values 0..n."""
    return max(1, int(n).bit_length())
