"""Succinct Suffix Array: Huffman-shaped wavelet tree over the BWT."""

from __future__ import annotations

import numpy as np

from .binio import Reader, Writer
from .contract import SelfIndex, SpaceReport
from .sampling import ASampling
from .textcore import MappedText, build_suffix_array, bwt_from_sa, log2_ceil, map_text
from .wavelet import WaveletTree

DEFAULT_SA_RATE = 64


def prepare(text, sa: np.ndarray | None = None) -> tuple[MappedText, np.ndarray]:
    t = text if isinstance(text, MappedText) else map_text(text)
    if sa is None:
        sa = build_suffix_array(t)
    return t, sa


class FMIndexBase(SelfIndex):
    """Backward search, LF-walk locate and sample-driven extraction on top of
    ``rank(c, i)`` and ``lf(i) -> (bwt[i], LF(i))``."""

    c_array: list[int]
    samples: ASampling

    def rank(self, c: int, i: int) -> int:
        raise NotImplementedError

    def lf(self, i: int) -> tuple[int, int]:
        raise NotImplementedError

    def interval(self, pattern: bytes) -> tuple[int, int]:
        """Rows [sp, ep] prefixed by the pattern; sp > ep when absent."""
        codes = self.pattern_codes(pattern)
        if codes is None:
            return 1, 0
        return self.interval_codes(codes)

    def interval_codes(self, codes) -> tuple[int, int]:
        C = self.c_array
        sp, ep = 1, self.n
        for c in reversed(codes):
            if C[c + 1] == C[c]:
                return 1, 0
            sp = C[c] + self.rank(c, sp - 1) + 1
            ep = C[c] + self.rank(c, ep)
            if sp > ep:
                return 1, 0
        return sp, ep

    def count(self, pattern: bytes) -> int:
        sp, ep = self.interval(pattern)
        return max(0, ep - sp + 1)

    def locate_row(self, i: int) -> tuple[int, int]:
        """(A[i], LF-steps taken)."""
        sample_at = self.samples.sample_at
        steps = 0
        a = sample_at(i)
        while a is None:
            i = self.lf(i)[1]
            steps += 1
            a = sample_at(i)
        return (a + steps - 1) % self.n + 1, steps

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        sp, ep = self.interval(pattern)
        out = []
        for i in range(sp, ep + 1):
            pos, steps = self.locate_row(i)
            out.append(pos)
            if stats is not None:
                stats.append(steps)
        out.sort()
        return out

    def extract_codes(self, l: int, r: int) -> list[int]:
        rate = self.samples.rate
        d = -(-(r + 1) // rate)
        q = d * rate
        if q >= self.n:
            q, i = self.n, 1
        else:
            i = self.samples.row_of_sample(d)
        out = []
        while q > l:
            c, i = self.lf(i)
            q -= 1
            if q <= r:
                out.append(c)
        out.reverse()
        return out

    def extract(self, l: int, r: int) -> bytes:
        l, r = self.extract_range(l, r)
        return self.unmap(self.extract_codes(l, r))

    def _c_bits(self) -> int:
        return len(self.c_array) * log2_ceil(self.n + 1)


class SsaIndex(FMIndexBase):
    kind = "ssa"

    def __init__(self, n, alphabet, wt: WaveletTree, c_array, samples: ASampling):
        self.n = n
        self._init_alphabet(alphabet)
        self.wt = wt
        self.c_array = c_array
        self.samples = samples

    @classmethod
    def build(cls, text, s_a: int = DEFAULT_SA_RATE, sa=None) -> "SsaIndex":
        t, sa = prepare(text, sa)
        b = bwt_from_sa(t, sa)
        wt = WaveletTree.build(b.bwt, t.sigma, "huffman")
        return cls(t.n, t.alphabet, wt, b.c_array, ASampling.build(sa, s_a))

    @property
    def s_a(self) -> int:
        return self.samples.rate

    def rank(self, c: int, i: int) -> int:
        return self.wt.rank(c, i)

    def interval_codes(self, codes) -> tuple[int, int]:
        C = self.c_array
        wt = self.wt
        sp, ep = 1, self.n
        for c in reversed(codes):
            if c not in wt.paths:
                return 1, 0
            a, b = wt.rank_pair(c, sp - 1, ep)
            sp, ep = C[c] + a + 1, C[c] + b
            if sp > ep:
                return 1, 0
        return sp, ep

    def lf(self, i: int) -> tuple[int, int]:
        c, r = self.wt.access_rank(i)
        return c, self.c_array[c] + r

    def size_bits(self) -> SpaceReport:
        payload = sum(self.wt.size_bits()) + self._c_bits()
        sampling = self.samples.size_bits()
        return SpaceReport(payload, sampling, payload + sampling)

    def params(self) -> dict[str, int]:
        return {"s_a": self.s_a}

    def write_payload(self, w: Writer) -> None:
        w.array(self.c_array, "<u8")
        self.wt.write(w)
        self.samples.write(w)

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        c_array = r.array("<u8").tolist()
        wt = WaveletTree.read(r)
        samples = ASampling.read(r)
        if len(c_array) != len(alphabet) + 2 or wt.n != n or samples.n != n:
            raise r.corrupt("SSA components disagree on sizes")
        return cls(n, alphabet, wt, c_array, samples)
