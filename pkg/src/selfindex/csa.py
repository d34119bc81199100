"""Compressed suffix array: sampled, differentially encoded psi,
backward search by binary search on psi, forward-walk locate and
extraction through the first-symbol bitmap D.

Psi stream, one code group per non-sampled row (all codes Elias-gamma,
stored low bit first: z zeros, a one, then the z low bits of the value):

    1, r      run: the next r rows each add +1
    2, v      restart: psi = v (only where psi decreases)
    x >= 3    psi grows by x - 1

Runs never cross a sample boundary.
"""

from __future__ import annotations

import numpy as np

from .binio import Reader, Writer
from .bitseq import BitSeq, PackedInts, bits_needed, pack_fields
from .contract import SelfIndex, SpaceReport
from .fm_ssa import DEFAULT_SA_RATE, prepare
from .sampling import ASampling
from .textcore import c_array_of, inverse_sa, log2_ceil

DEFAULT_PSI_RATE = 128
CODE_VERSION = 1


def psi_values(sa: np.ndarray) -> np.ndarray:
    """psi[i-1] = A^{-1}[A[i] + 1], wrapping to A^{-1}[1] where A[i] = n."""
    n = int(sa.size)
    inv = inverse_sa(sa)
    return inv[sa % n + 1]


def _gamma_fields(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = x.astype(np.uint64)
    L = np.zeros(x.size, dtype=np.int64)
    v = x.copy()
    while True:
        nz = v > 0
        if not nz.any():
            break
        L += nz
        v >>= np.uint64(1)
    z = (L - 1).astype(np.uint64)
    low = x & ((np.uint64(1) << z) - np.uint64(1))
    fields = (np.uint64(1) << z) | (low << (z + np.uint64(1)))
    return fields, 2 * L - 1


class PsiArray:
    __slots__ = ("n", "rate", "samples", "pointers", "words", "nbits")

    def __init__(self, n, rate, samples: PackedInts, pointers: PackedInts, words: list[int], nbits: int):
        self.n = n
        self.rate = rate
        self.samples = samples
        self.pointers = pointers
        self.words = words
        self.nbits = nbits

    @classmethod
    def build(cls, psi: np.ndarray, rate: int = DEFAULT_PSI_RATE) -> "PsiArray":
        if rate < 1:
            raise ValueError("psi sampling rate must be >= 1")
        psi = np.asarray(psi, dtype=np.int64)
        n = int(psi.size)
        idx = np.arange(n)
        is_sample = idx % rate == 0
        delta = np.zeros(n, dtype=np.int64)
        delta[1:] = psi[1:] - psi[:-1]
        coded = ~is_sample
        one = coded & (delta == 1)
        prev_one = np.zeros(n, dtype=bool)
        prev_one[1:] = one[:-1]
        run_start = one & ~prev_one
        run_end = one & ~np.append(one[1:], False)
        starts = np.flatnonzero(run_start)
        run_len = np.flatnonzero(run_end) - starts + 1
        big = np.flatnonzero(coded & (delta >= 2))
        back = np.flatnonzero(coded & (delta <= 0))
        # (row, order within row, value)
        rows = np.concatenate([starts, starts, big, back, back])
        sub = np.concatenate([np.zeros_like(starts), np.ones_like(starts),
                              np.zeros_like(big), np.zeros_like(back), np.ones_like(back)])
        vals = np.concatenate([np.ones_like(starts), run_len, delta[big] + 1,
                               np.full(back.size, 2), psi[back]])
        order = np.lexsort((sub, rows))
        rows, vals = rows[order], vals[order]
        fields, widths = _gamma_fields(vals)
        words, offsets = pack_fields(fields, widths)
        nbits = int(widths.sum())
        # stream offset of the first code after each sample
        block_first = np.searchsorted(rows, idx[is_sample], side="left")
        ptr = np.append(offsets, nbits)[block_first] if rows.size else np.zeros(int(is_sample.sum()), np.int64)
        width = bits_needed(n)
        return cls(n, rate, PackedInts.build(psi[is_sample], width),
                   PackedInts.build(ptr, bits_needed(nbits)), words, nbits)

    def _gamma(self, pos: int) -> tuple[int, int]:
        words = self.words
        wi, sh = pos >> 6, pos & 63
        win = (words[wi] | (words[wi + 1] << 64)) >> sh
        z = (win & -win).bit_length() - 1
        x = (1 << z) | ((win >> (z + 1)) & ((1 << z) - 1))
        return x, pos + 2 * z + 1

    def decode_block(self, k: int) -> list[int]:
        """psi values of rows k*rate+1 .. min((k+1)*rate, n)."""
        first = k * self.rate
        count = min(self.rate, self.n - first)
        v = self.samples[k]
        out = [v]
        pos = self.pointers[k]
        gamma = self._gamma
        while len(out) < count:
            x, pos = gamma(pos)
            if x == 1:
                r, pos = gamma(pos)
                out.extend(range(v + 1, v + r + 1))
                v += r
            elif x == 2:
                v, pos = gamma(pos)
                out.append(v)
            else:
                v += x - 1
                out.append(v)
        return out

    def scan(self, k: int, s: int, e: int, target: int) -> int:
        """First offset j in [s, e) of block k with psi >= target, else e.
        Values must be increasing over [s, e)."""
        v = self.samples[k]
        if s == 0 and v >= target:
            return 0
        pos = self.pointers[k]
        gamma = self._gamma
        j = 0
        while j + 1 < e:
            x, pos = gamma(pos)
            if x == 1:
                r, pos = gamma(pos)
                d = max(1, target - v, s - j)
                if d <= r:
                    return min(j + d, e)
                v += r
                j += r
            else:
                if x == 2:
                    v, pos = gamma(pos)
                else:
                    v += x - 1
                j += 1
                if j >= s and v >= target:
                    return j
        return e

    def __getitem__(self, i: int) -> int:
        """psi(i), 1-based."""
        if i < 1 or i > self.n:
            raise IndexError(f"row {i} outside 1..{self.n}")
        k, off = divmod(i - 1, self.rate)
        if off == 0:
            return self.samples[k]
        v = self.samples[k]
        pos = self.pointers[k]
        gamma = self._gamma
        j = 0
        while True:
            x, pos = gamma(pos)
            if x == 1:
                r, pos = gamma(pos)
                if j + r >= off:
                    return v + off - j
                v += r
                j += r
            else:
                if x == 2:
                    v, pos = gamma(pos)
                else:
                    v += x - 1
                j += 1
                if j == off:
                    return v

    def tolist(self) -> list[int]:
        out = []
        for k in range(len(self.samples)):
            out.extend(self.decode_block(k))
        return out

    def size_bits(self) -> int:
        return self.nbits + self.samples.size_bits() + self.pointers.size_bits()

    def write(self, w: Writer) -> None:
        w.u64(self.n)
        w.u64(self.rate)
        self.samples.write(w)
        self.pointers.write(w)
        w.u64(self.nbits)
        w.u64_array(self.words[: (self.nbits + 63) // 64])

    @classmethod
    def read(cls, r: Reader) -> "PsiArray":
        n = r.u64()
        rate = r.u64()
        samples = PackedInts.read(r)
        pointers = PackedInts.read(r)
        nbits = r.u64()
        words = r.u64_array((nbits + 63) // 64) + [0, 0, 0]
        if rate < 1 or len(samples) != -(-n // rate) or len(pointers) != len(samples):
            raise r.corrupt("psi header inconsistent")
        return cls(n, rate, samples, pointers, words, nbits)


class CsaIndex(SelfIndex):
    kind = "csa"

    def __init__(self, n, alphabet, psi: PsiArray, d_map: BitSeq, c_array, samples: ASampling):
        self.n = n
        self._init_alphabet(alphabet)
        self.psi = psi
        self.d_map = d_map
        self.c_array = c_array
        self.samples = samples

    @classmethod
    def build(cls, text, s_a: int = DEFAULT_SA_RATE, s_psi: int = DEFAULT_PSI_RATE, sa=None) -> "CsaIndex":
        t, sa = prepare(text, sa)
        c_array = c_array_of(t.codes, t.sigma)
        d = np.zeros(t.n, dtype=np.uint8)
        firsts = np.asarray(c_array[:-1], dtype=np.int64)
        d[firsts[firsts < t.n]] = 1   # row C[c] + 1, 0-based index C[c]
        return cls(t.n, t.alphabet, PsiArray.build(psi_values(sa), s_psi), BitSeq.build(d),
                   c_array, ASampling.build(sa, s_a))

    @property
    def s_a(self) -> int:
        return self.samples.rate

    @property
    def s_psi(self) -> int:
        return self.psi.rate

    def symbol_at_row(self, i: int) -> int:
        """First symbol of the suffix at row i (0-based code)."""
        return self.d_map.rank1(i) - 1

    def _first_at_least(self, lo: int, hi: int, target: int) -> int:
        """Smallest j in [lo, hi] with psi(j) >= target (hi + 1 if none);
        psi is increasing on [lo, hi]."""
        psi = self.psi
        rate = psi.rate
        k_lo = (lo - 1) // rate
        k_hi = (hi - 1) // rate
        # last sampled row in the range whose value is < target
        a, b = k_lo + 1, k_hi
        while a <= b:
            mid = (a + b) // 2
            if psi.samples[mid] < target:
                a = mid + 1
            else:
                b = mid - 1
        k = max(k_lo, b)
        while k <= k_hi:
            first = k * rate + 1
            s = max(lo, first) - first
            e = min(hi, first + rate - 1, psi.n) - first + 1
            j = psi.scan(k, s, e, target)
            if j < e:
                return first + j
            k += 1
        return hi + 1

    def interval_codes(self, codes) -> tuple[int, int]:
        C = self.c_array
        sp, ep = 1, self.n
        for c in reversed(codes):
            lo, hi = C[c] + 1, C[c + 1]
            if lo > hi:
                return 1, 0
            nsp = self._first_at_least(lo, hi, sp)
            nep = self._first_at_least(nsp, hi, ep + 1) - 1 if nsp <= hi else hi
            sp, ep = nsp, nep
            if sp > ep:
                return 1, 0
        return sp, ep

    def interval(self, pattern: bytes) -> tuple[int, int]:
        codes = self.pattern_codes(pattern)
        if codes is None:
            return 1, 0
        return self.interval_codes(codes)

    def count(self, pattern: bytes) -> int:
        sp, ep = self.interval(pattern)
        return max(0, ep - sp + 1)

    def psi_at(self, i: int, scratch: dict) -> int:
        """psi(i) through a per-query cache of decoded blocks."""
        k, off = divmod(i - 1, self.psi.rate)
        block = scratch.get(k)
        if block is None:
            block = scratch[k] = self.psi.decode_block(k)
        return block[off]

    def locate_row(self, i: int, scratch: dict | None = None) -> tuple[int, int]:
        if scratch is None:
            scratch = {}
        sample_at = self.samples.sample_at
        steps = 0
        a = sample_at(i)
        while a is None:
            i = self.psi_at(i, scratch)
            steps += 1
            a = sample_at(i)
        return a - steps, steps

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        sp, ep = self.interval(pattern)
        out = []
        scratch: dict = {}
        for i in range(sp, ep + 1):
            pos, steps = self.locate_row(i, scratch)
            out.append(pos)
            if stats is not None:
                stats.append(steps)
        out.sort()
        return out

    def extract_codes(self, l: int, r: int) -> list[int]:
        rate = self.samples.rate
        d = l // rate
        row = self.samples.row_of_sample(d) if d else 1   # row 1 holds A = n, just before position 1
        pos = d * rate
        scratch: dict = {}
        while pos < l:
            row = self.psi_at(row, scratch)
            pos += 1
        out = [self.symbol_at_row(row)]
        while pos < r:
            row = self.psi_at(row, scratch)
            pos += 1
            out.append(self.symbol_at_row(row))
        return out

    def extract(self, l: int, r: int) -> bytes:
        l, r = self.extract_range(l, r)
        return self.unmap(self.extract_codes(l, r))

    def size_bits(self) -> SpaceReport:
        payload = self.psi.size_bits() + sum(self.d_map.size_bits())
        payload += len(self.c_array) * log2_ceil(self.n + 1)
        sampling = self.samples.size_bits()
        return SpaceReport(payload, sampling, payload + sampling)

    def params(self) -> dict[str, int]:
        return {"s_a": self.s_a, "s_psi": self.s_psi, "code_version": CODE_VERSION}

    def write_payload(self, w: Writer) -> None:
        w.array(self.c_array, "<u8")
        self.psi.write(w)
        self.d_map.write(w)
        self.samples.write(w)

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        if params.get("code_version", CODE_VERSION) != CODE_VERSION:
            raise r.corrupt("unsupported psi code version")
        c_array = r.array("<u8").tolist()
        psi = PsiArray.read(r)
        d_map = BitSeq.read(r)
        samples = ASampling.read(r)
        if psi.n != n or d_map.n != n or samples.n != n or len(c_array) != len(alphabet) + 2:
            raise r.corrupt("CSA components disagree on sizes")
        return cls(n, alphabet, psi, d_map, c_array, samples)
