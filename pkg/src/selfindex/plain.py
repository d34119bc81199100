"""Plain suffix array baseline: text plus A, binary-search counting."""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

from .binio import Reader, Writer
from .bitseq import bits_needed
from .contract import SelfIndex, SpaceReport
from .fm_ssa import prepare


class PlainSaIndex(SelfIndex):
    kind = "plain_sa"

    def __init__(self, n, alphabet, codes: bytes, sa: list[int]):
        self.n = n
        self._init_alphabet(alphabet)
        self.codes = codes
        self.sa = sa

    @classmethod
    def build(cls, text, sa=None) -> "PlainSaIndex":
        t, sa = prepare(text, sa)
        return cls(t.n, t.alphabet, t.codes.tobytes(), sa.tolist())

    def interval_codes(self, codes) -> tuple[int, int]:
        p = bytes(codes)
        m = len(p)
        text, sa = self.codes, self.sa

        def key(r):
            a = sa[r] - 1
            return text[a:a + m]

        rows = range(self.n)
        lo = bisect_left(rows, p, key=key)
        hi = bisect_right(rows, p, lo=lo, key=key)
        return lo + 1, hi

    def interval(self, pattern: bytes) -> tuple[int, int]:
        codes = self.pattern_codes(pattern)
        if codes is None:
            return 1, 0
        return self.interval_codes(codes)

    def count(self, pattern: bytes) -> int:
        sp, ep = self.interval(pattern)
        return max(0, ep - sp + 1)

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        sp, ep = self.interval(pattern)
        if stats is not None:
            stats.extend([0] * max(0, ep - sp + 1))
        return sorted(self.sa[sp - 1:ep])

    def extract(self, l: int, r: int) -> bytes:
        l, r = self.extract_range(l, r)
        return self.unmap(self.codes[l - 1:r])

    def size_bits(self) -> SpaceReport:
        payload = 8 * len(self.codes) + self.n * bits_needed(self.n)
        return SpaceReport(payload, 0, payload)

    def write_payload(self, w: Writer) -> None:
        w.blob(self.codes)
        w.array(self.sa, "<u4" if self.n < 2**32 else "<u8")

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        codes = r.blob()
        dt = "<u4" if n < 2**32 else "<u8"
        sa = r.array(dt).astype(np.int64).tolist()
        if len(codes) != n or len(sa) != n:
            raise r.corrupt("plain SA sizes disagree")
        return cls(n, alphabet, codes, sa)
