"""Bucketed FM-index over a marked text.

A special symbol is inserted after every s_a-th text symbol; locating walks
backwards until a row that starts with a special symbol (whose text position
is stored) or the text start. The BWT is cut into buckets of ``lb``
symbols, each compressed with move-to-front, zero-run coding and a
per-bucket canonical Huffman code. Rank tables are kept per superbucket
(absolute) and per bucket (relative to the superbucket).

Code layout of the marked text: 0 terminator, 1 special, c + 1 for the
original code c.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .binio import Reader, Writer
from .bitseq import bits_needed
from .contract import SelfIndex, SpaceReport
from .huffman import CanonicalDecoder, canonical_codes, code_lengths
from .textcore import MappedText, build_suffix_array, bwt_from_sa, log2_ceil, map_text

SPECIAL = 1
DEFAULT_LB = 1024
DEFAULT_LSB = 32
DEFAULT_MARK_RATE = 64
RUNA, RUNB = 0, 1


def fmi2_mark(text, s_a: int) -> np.ndarray:
    """Marked code sequence (terminator last). ``text`` is bytes or a MappedText."""
    if s_a < 2:
        raise ValueError("marking period must be >= 2")
    t = text if isinstance(text, MappedText) else map_text(text)
    body = t.codes[:-1].astype(np.uint16)
    if (body == 0).any():
        raise ValueError("text contains the reserved terminator code")
    body = body + 1
    n0 = body.size
    at = np.arange(s_a, n0 + 1, s_a)
    marked = np.insert(body, at, SPECIAL)
    return np.append(marked, np.uint16(0)).astype(np.uint16)


def to_marked(x: int, s_a: int) -> int:
    return x + (x - 1) // s_a


def to_original(q: int, s_a: int) -> int:
    return q - (q - 1) // (s_a + 1)


# -- bucket codec ---------------------------------------------------------------

def _zero_run(length: int, out: list[int]) -> None:
    # bijective base 2: RUNA adds 2^i, RUNB adds 2^(i+1)
    while length > 0:
        if length & 1:
            out.append(RUNA)
            length = (length - 1) >> 1
        else:
            out.append(RUNB)
            length = (length - 2) >> 1


def mtf_rle(seq) -> tuple[list[int], list[int]]:
    """(bucket alphabet, token stream)."""
    local = sorted(set(seq))
    where = {c: j for j, c in enumerate(local)}
    order = list(range(len(local)))
    tokens: list[int] = []
    run = 0
    for c in seq:
        j = order.index(where[c])
        if j == 0:
            run += 1
            continue
        _zero_run(run, tokens)
        run = 0
        tokens.append(j + 1)
        order.insert(0, order.pop(j))
    _zero_run(run, tokens)
    return local, tokens


def unmtf_rle(local, tokens, count: int) -> list[int]:
    order = list(local)
    out: list[int] = []
    run = 0
    weight = 1
    for tok in tokens:
        if tok <= RUNB:
            run += weight << tok
            weight <<= 1
            continue
        if run:
            out.extend([order[0]] * run)
            run, weight = 0, 1
        c = order.pop(tok - 1)
        order.insert(0, c)
        out.append(c)
    if run:
        out.extend([order[0]] * run)
    if len(out) != count:
        raise ValueError("bucket decodes to the wrong length")
    return out


def bucket_encode(seq) -> bytes:
    """u16 z | z * u16 symbols | u32 count | (z + 1) code lengths | bits."""
    seq = [int(c) for c in seq]
    local, tokens = mtf_rle(seq)
    z = len(local)
    freqs = [0] * (z + 1)
    for tok in tokens:
        freqs[tok] += 1
    lengths = code_lengths(freqs)
    used = [s for s, f in enumerate(freqs) if f]
    if len(used) == 1:
        lengths[used[0]] = 1
    codes = canonical_codes(lengths)
    bits: list[int] = []
    for tok in tokens:
        code, L = codes[tok]
        bits.extend((code >> (L - 1 - b)) & 1 for b in range(L))
    w = Writer()
    w.u16(z)
    for c in local:
        w.u16(c)
    w.u32(len(seq))
    w.raw(bytes(lengths))
    w.raw(np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes())
    return w.getvalue()


def bucket_decode(data: bytes) -> list[int]:
    r = Reader(data)
    z = r.u16()
    local = [r.u16() for _ in range(z)]
    count = r.u32()
    lengths = list(r.take(z + 1))
    bits = np.unpackbits(np.frombuffer(bytes(r.take(len(data) - r.pos)), dtype=np.uint8)).tolist()
    dec = CanonicalDecoder(lengths)
    tokens = []
    produced = 0
    weight = 1
    pos = 0
    # decode until the token stream accounts for ``count`` symbols
    while produced < count:
        tok, pos = dec.decode(bits, pos)
        tokens.append(tok)
        if tok <= RUNB:
            produced += weight << tok
            weight <<= 1
        else:
            produced += 1
            weight = 1
    return unmtf_rle(local, tokens, count)


# -- index ----------------------------------------------------------------------

class Fmi2Index(SelfIndex):
    kind = "fmi2"

    def __init__(self, n, alphabet, s_a, lb, lsb, n_marked, c_array, t_sb, t_b, offsets, blob, marked_positions):
        self.n = n                  # original length including terminator
        self._init_alphabet(alphabet)
        self.s_a = s_a
        self.lb = lb
        self.lsb = lsb
        self.n_marked = n_marked
        self.c_array = c_array      # over the marked alphabet, sigma + 2 entries
        self.t_sb = t_sb            # (superbuckets + 1) x (sigma + 1)
        self.t_b = t_b              # (buckets + 1) x (sigma + 1)
        self.offsets = offsets
        self.blob = blob
        self.marked_positions = marked_positions
        self.special_lo = c_array[SPECIAL] + 1
        self.special_hi = c_array[SPECIAL + 1]
        mark_rows = np.empty(len(marked_positions), dtype=np.int64)
        idx = np.asarray(marked_positions, dtype=np.int64) // (s_a + 1) - 1
        mark_rows[idx] = np.arange(self.special_lo, self.special_hi + 1)
        self.mark_rows = mark_rows.tolist()

    @classmethod
    def build(cls, text, s_a: int = DEFAULT_MARK_RATE, lb: int = DEFAULT_LB, lsb: int = DEFAULT_LSB) -> "Fmi2Index":
        if lb < 1 or lsb < 1:
            raise ValueError("bucket sizes must be >= 1")
        t = text if isinstance(text, MappedText) else map_text(text)
        marked = fmi2_mark(t, s_a)
        N = int(marked.size)
        sigma = t.sigma + 1
        sa = build_suffix_array(marked)
        b = bwt_from_sa(marked, sa, sigma)
        bwt = b.bwt.astype(np.int64)
        nb = -(-N // lb)
        onehot_counts = np.zeros((nb + 1, sigma), dtype=np.int64)
        for k in range(nb):
            onehot_counts[k + 1] = np.bincount(bwt[k * lb:(k + 1) * lb], minlength=sigma)
        prefix = np.cumsum(onehot_counts, axis=0)       # counts before bucket k
        sb_rows = np.arange(0, nb + 1, lsb)
        t_sb = prefix[sb_rows]
        t_b = prefix - t_sb[np.arange(nb + 1) // lsb]
        blobs = [bucket_encode(bwt[k * lb:(k + 1) * lb]) for k in range(nb)]
        offsets = np.concatenate([[0], np.cumsum([len(x) for x in blobs])]).astype(np.int64)
        rows = np.flatnonzero(marked[sa - 1] == SPECIAL)
        marked_positions = sa[rows].tolist()
        return cls(t.n, t.alphabet, s_a, lb, lsb, N, b.c_array, t_sb, t_b,
                   offsets.tolist(), b"".join(blobs), marked_positions)

    # -- rank machinery -----------------------------------------------------------

    def bucket(self, k: int, scratch: dict | None = None) -> list[int]:
        if scratch is not None and k in scratch:
            return scratch[k]
        seq = bucket_decode(self.blob[self.offsets[k]:self.offsets[k + 1]])
        if scratch is not None:
            scratch[k] = seq
        return seq

    def rank(self, c: int, i: int, scratch: dict | None = None) -> int:
        """Occurrences of marked code c in bwt[1..i]."""
        if i < 0 or i > self.n_marked:
            raise IndexError(f"rank position {i} outside 0..{self.n_marked}")
        k, off = divmod(i, self.lb)
        base = int(self.t_sb[k // self.lsb][c] + self.t_b[k][c])
        if off == 0:
            return base
        return base + self.bucket(k, scratch)[:off].count(c)

    def lf(self, i: int, scratch: dict | None = None) -> tuple[int, int]:
        k, off = divmod(i - 1, self.lb)
        seq = self.bucket(k, scratch)
        c = seq[off]
        base = int(self.t_sb[k // self.lsb][c] + self.t_b[k][c])
        return c, self.c_array[c] + base + seq[:off + 1].count(c)

    def symbols_in(self, a: int, b: int, scratch: dict | None = None) -> list[int]:
        out: list[int] = []
        for k in range((a - 1) // self.lb, (b - 1) // self.lb + 1):
            seq = self.bucket(k, scratch)
            first = k * self.lb + 1
            out.extend(seq[max(a, first) - first:min(b, first + len(seq) - 1) - first + 1])
        return out

    # -- queries --------------------------------------------------------------------

    def variants(self, codes: list[int]) -> list[tuple[list[int], int]]:
        """(marked pattern, q) with a special after every q + j*s_a-th symbol;
        q = 0 stands for the unmarked pattern."""
        m = len(codes)
        shifted = [c + 1 for c in codes]
        out = []
        if m <= self.s_a:
            out.append((shifted, 0))
        for q in range(1, min(m - 1, self.s_a) + 1):
            v = []
            for j, c in enumerate(shifted, start=1):
                v.append(c)
                if j < m and j % self.s_a == q % self.s_a:
                    v.append(SPECIAL)
            out.append((v, q))
        return out

    def _search(self, marked_codes, scratch) -> tuple[int, int]:
        C = self.c_array
        sp, ep = 1, self.n_marked
        for c in reversed(marked_codes):
            if C[c + 1] == C[c]:
                return 1, 0
            sp = C[c] + self.rank(c, sp - 1, scratch) + 1
            ep = C[c] + self.rank(c, ep, scratch)
            if sp > ep:
                return 1, 0
        return sp, ep

    def ranges(self, pattern: bytes, scratch: dict | None = None) -> list[tuple[int, int]]:
        """Non-empty row ranges, one per matching pattern variant."""
        codes = self.pattern_codes(pattern)
        if codes is None:
            return []
        if scratch is None:
            scratch = {}
        out = []
        for v, _ in self.variants(codes):
            sp, ep = self._search(v, scratch)
            if sp <= ep:
                out.append((sp, ep))
        return out

    def count(self, pattern: bytes) -> int:
        return sum(ep - sp + 1 for sp, ep in self.ranges(pattern))

    def locate_ranges(self, ranges, scratch: dict | None = None, stats: list | None = None) -> list[int]:
        """Original-text positions of every row in ``ranges``.

        Each phase replaces every live range by the LF-images of its distinct
        symbols; rows reached through a special symbol or the terminator are
        resolved and dropped.
        """
        if scratch is None:
            scratch = {}
        C = self.c_array
        mp = self.marked_positions
        found: list[int] = []
        live = [(sp, ep) for sp, ep in ranges]
        phase = 0
        while live:
            phase += 1
            nxt = []
            for a, b in live:
                for c in sorted(Counter(self.symbols_in(a, b, scratch))):
                    lo = C[c] + self.rank(c, a - 1, scratch) + 1
                    hi = C[c] + self.rank(c, b, scratch)
                    if c == SPECIAL:
                        for row in range(lo, hi + 1):
                            found.append(mp[row - self.special_lo] + phase)
                    elif c == 0:
                        found.append(phase)
                    else:
                        nxt.append((lo, hi))
                    if c in (SPECIAL, 0) and stats is not None:
                        stats.extend([phase] * (hi - lo + 1))
            live = nxt
            if phase > self.s_a and live:
                raise AssertionError("locate exceeded the marking period")
        s = self.s_a
        return sorted({to_original(q, s) for q in found})

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        scratch: dict = {}
        return self.locate_ranges(self.ranges(pattern, scratch), scratch, stats)

    def extract(self, l: int, r: int) -> bytes:
        l, r = self.extract_range(l, r)
        s = self.s_a
        L, R = to_marked(l, s), to_marked(r, s)
        j = -(-(R + 1) // (s + 1))
        if j <= len(self.mark_rows):
            pos, row = j * (s + 1), self.mark_rows[j - 1]
        else:
            pos, row = self.n_marked, 1
        scratch: dict = {}
        out = []
        while pos > L:
            c, row = self.lf(row, scratch)
            pos -= 1
            if pos <= R and c != SPECIAL:
                out.append(c - 1)
        out.reverse()
        return self.unmap(out)

    def size_bits(self) -> SpaceReport:
        width = log2_ceil(self.n_marked + 1)
        sb_width = log2_ceil(self.lsb * self.lb + 1)
        payload = 8 * len(self.blob) + len(self.offsets) * bits_needed(8 * len(self.blob))
        payload += self.t_sb.size * width + self.t_b.size * sb_width
        payload += len(self.c_array) * width
        sampling = len(self.marked_positions) * width
        return SpaceReport(payload, sampling, payload + sampling)

    def params(self) -> dict[str, int]:
        return {"s_a": self.s_a, "lb": self.lb, "lsb": self.lsb, "special": SPECIAL}

    def write_payload(self, w: Writer) -> None:
        w.u64(self.n_marked)
        w.array(self.c_array, "<u8")
        w.u64(self.t_sb.shape[0])
        w.array(self.t_sb.ravel(), "<u8")
        w.u64(self.t_b.shape[0])
        w.array(self.t_b.ravel(), "<u8")
        w.array(self.offsets, "<u8")
        w.blob(self.blob)
        w.array(self.marked_positions, "<u8")

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        try:
            s_a, lb, lsb = params["s_a"], params["lb"], params["lsb"]
        except KeyError as e:
            raise r.corrupt(f"missing parameter {e}") from None
        if params.get("special", SPECIAL) != SPECIAL or s_a < 2 or lb < 1 or lsb < 1:
            raise r.corrupt("bad FMI-2 parameters")
        width = len(alphabet) + 2
        n_marked = r.u64()
        c_array = r.array("<u8").tolist()
        rows = r.u64()
        t_sb = r.array("<u8").astype(np.int64)
        rows_b = r.u64()
        t_b = r.array("<u8").astype(np.int64)
        offsets = r.array("<u8").tolist()
        blob = r.blob()
        marked_positions = r.array("<u8").tolist()
        n0 = n - 1
        if (len(c_array) != width + 1 or t_sb.size != rows * width or t_b.size != rows_b * width
                or n_marked != n0 + n0 // s_a + 1 or len(marked_positions) != n0 // s_a
                or rows_b != -(-n_marked // lb) + 1 or len(offsets) != rows_b
                or (offsets and offsets[-1] != len(blob))):
            raise r.corrupt("FMI-2 components disagree on sizes")
        return cls(n, alphabet, s_a, lb, lsb, n_marked, c_array, t_sb.reshape(rows, width),
                   t_b.reshape(rows_b, width), offsets, blob, marked_positions)
