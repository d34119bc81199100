"""Regular suffix-array sampling shared by the SSA, AF-index and CSA."""

from __future__ import annotations

import numpy as np

from .binio import Reader, Writer
from .bitseq import BitSeq, PackedInts, bits_needed


class ASampling:
    """Rows with A[i] a multiple of ``rate`` are marked in ``mark``; their A
    values sit in ``sa_samples`` in row order. ``text_samples[j - 1]`` is the
    row whose A value is j * rate. The row holding A[i] = n is always
    marked, so every walk terminates within ``rate`` steps."""

    __slots__ = ("rate", "n", "mark", "sa_samples", "text_samples")

    def __init__(self, rate, n, mark, sa_samples, text_samples):
        self.rate = rate
        self.n = n
        self.mark = mark
        self.sa_samples = sa_samples
        self.text_samples = text_samples

    @classmethod
    def build(cls, sa: np.ndarray, rate: int) -> "ASampling":
        if rate < 1:
            raise ValueError("sampling rate must be >= 1")
        n = int(sa.size)
        marked = (sa % rate == 0) | (sa == n)
        mark = BitSeq.build(marked)
        width = bits_needed(n)
        sa_samples = PackedInts.build(sa[marked], width)
        rows = np.flatnonzero(sa % rate == 0) + 1
        order = np.argsort(sa[rows - 1])
        text_samples = PackedInts.build(rows[order], width)
        return cls(rate, n, mark, sa_samples, text_samples)

    def sample_at(self, i: int) -> int | None:
        """A[i] if row i is marked, else None."""
        j = i - 1
        m = self.mark
        if (m.words[j >> 6] >> (j & 63)) & 1:
            return self.sa_samples[m._rank_from(i) - 1]
        return None

    def row_of_sample(self, d: int) -> int:
        """Row whose A value is d * rate (d >= 1)."""
        return self.text_samples[d - 1]

    def size_bits(self) -> int:
        return sum(self.mark.size_bits()) + self.sa_samples.size_bits() + self.text_samples.size_bits()

    def write(self, w: Writer) -> None:
        w.u64(self.rate)
        w.u64(self.n)
        self.mark.write(w)
        self.sa_samples.write(w)
        self.text_samples.write(w)

    @classmethod
    def read(cls, r: Reader) -> "ASampling":
        rate = r.u64()
        n = r.u64()
        mark = BitSeq.read(r)
        sa_samples = PackedInts.read(r)
        text_samples = PackedInts.read(r)
        if rate < 1 or mark.n != n or mark.ones != len(sa_samples):
            raise r.corrupt("inconsistent sampling")
        return cls(rate, n, mark, sa_samples, text_samples)
