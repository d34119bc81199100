"""Deterministic Huffman code lengths and canonical codes."""

from __future__ import annotations

import heapq


def code_lengths(freqs) -> list[int]:
    """Huffman code length per symbol; zero-frequency symbols get 0.

    Ties merge the two lightest subtrees, breaking equal weights by the
    smallest symbol they contain. A lone symbol gets length 0.
    """
    heap = [(f, s, (s,)) for s, f in enumerate(freqs) if f > 0]
    lengths = [0] * len(freqs)
    if len(heap) < 2:
        return lengths
    heapq.heapify(heap)
    while len(heap) > 1:
        fa, sa, ma = heapq.heappop(heap)
        fb, sb, mb = heapq.heappop(heap)
        for s in ma:
            lengths[s] += 1
        for s in mb:
            lengths[s] += 1
        heapq.heappush(heap, (fa + fb, min(sa, sb), ma + mb))
    return lengths


def canonical_codes(lengths) -> dict[int, tuple[int, int]]:
    """symbol -> (code, length), codes read most significant bit first."""
    order = sorted((L, s) for s, L in enumerate(lengths) if L > 0)
    codes: dict[int, tuple[int, int]] = {}
    code = 0
    prev = 0
    for L, s in order:
        code <<= L - prev
        codes[s] = (code, L)
        code += 1
        prev = L
    return codes


class CanonicalDecoder:
    """Bit-serial canonical decoder (first-code / count per length)."""

    __slots__ = ("first", "count", "offset", "symbols", "max_len")

    def __init__(self, lengths) -> None:
        order = sorted((L, s) for s, L in enumerate(lengths) if L > 0)
        self.symbols = [s for _, s in order]
        self.max_len = order[-1][0] if order else 0
        self.count = [0] * (self.max_len + 1)
        for L, _ in order:
            self.count[L] += 1
        self.first = [0] * (self.max_len + 1)
        self.offset = [0] * (self.max_len + 1)
        code = 0
        off = 0
        for L in range(1, self.max_len + 1):
            code <<= 1
            self.first[L] = code
            self.offset[L] = off
            code += self.count[L]
            off += self.count[L]

    def decode(self, bits: list[int], pos: int) -> tuple[int, int]:
        """Decode one symbol from ``bits`` starting at ``pos``; returns (symbol, new pos)."""
        code = 0
        first, count = self.first, self.count
        for L in range(1, self.max_len + 1):
            code = (code << 1) | bits[pos]
            pos += 1
            idx = code - first[L]
            if idx < count[L]:
                return self.symbols[self.offset[L] + idx], pos
        raise ValueError("invalid Huffman code")
