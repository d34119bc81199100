"""LZ78 self-index: phrase parse, forward trie, reverse trie and three-way
occurrence search (inside one phrase, across two, across three or more).

Both tries are node-linked with sorted child arrays. The reverse trie is
path-compacted: unary chains of nodes that are not phrases collapse into
one labelled edge, so it has at most 2n' nodes. Each reverse-trie node
holds the range [lo, hi) of phrase ranks below it, where the rank of a
phrase is its position among reversed phrases in lexicographic order
(equivalently, among phrase nodes in preorder).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .binio import Reader, Writer
from .bitseq import bits_needed
from .contract import SelfIndex, SpaceReport
from .textcore import MappedText, map_text


@dataclass
class Lz78Parse:
    parent: list[int]                 # parent[id], id 0 is the empty phrase
    sym: list[int]
    depth: list[int]
    start: list[int]                  # 1-based text position of each phrase
    tail: int = 0                     # repeated phrase closing the input, 0 if none
    n_phrases: int = field(init=False)

    def __post_init__(self):
        self.n_phrases = len(self.parent) - 1

    def phrase(self, i: int) -> list[int]:
        out = []
        while i:
            out.append(self.sym[i])
            i = self.parent[i]
        out.reverse()
        return out


def lz78_parse(codes) -> Lz78Parse:
    """Greedy LZ78 parse of a code sequence (values < 256)."""
    child: dict[int, int] = {}
    parent, sym, depth, start = [0], [0], [0], [0]
    node = 0
    for pos, c in enumerate(bytes(np.asarray(codes, dtype=np.uint8)), start=1):
        nxt = child.get(node << 8 | c)
        if nxt is None:
            nid = len(parent)
            child[node << 8 | c] = nid
            parent.append(node)
            sym.append(c)
            d = depth[node]
            depth.append(d + 1)
            start.append(pos - d)
            node = 0
        else:
            node = nxt
    return Lz78Parse(parent, sym, depth, start, node)


class LzIndex(SelfIndex):
    kind = "lz"

    def __init__(self, n, alphabet, parse: Lz78Parse, eps_inv: int = 1):
        self.n = n
        self._init_alphabet(alphabet)
        self.parse = parse
        self.eps_inv = eps_inv
        self._build_tries()

    @classmethod
    def build(cls, text, eps_inv: int = 1) -> "LzIndex":
        t = text if isinstance(text, MappedText) else map_text(text)
        if eps_inv < 1:
            raise ValueError("eps_inv must be >= 1")
        return cls(t.n, t.alphabet, lz78_parse(t.codes), eps_inv)

    # -- tries ----------------------------------------------------------------------

    def _build_tries(self) -> None:
        p = self.parse
        k = p.n_phrases
        parent = np.asarray(p.parent, dtype=np.int64)
        sym = np.asarray(p.sym, dtype=np.int64)
        ids = np.arange(1, k + 1)
        order = ids[np.lexsort((sym[1:], parent[1:]))]
        self.child_ptr = np.searchsorted(parent[order], np.arange(k + 2)).tolist()
        self.child_sym = sym[order].tolist()
        self.child_id = order.tolist()
        # forward preorder
        fwd_order = []
        fwd_pre = [0] * (k + 1)
        fwd_end = [0] * (k + 1)
        ptr, cid = self.child_ptr, self.child_id
        stack = [(0, False)]
        while stack:
            u, done = stack.pop()
            if done:
                fwd_end[u] = len(fwd_order) - 1
                continue
            fwd_pre[u] = len(fwd_order)
            fwd_order.append(u)
            stack.append((u, True))
            for v in reversed(cid[ptr[u]:ptr[u + 1]]):
                stack.append((v, False))
        self.fwd_order, self.fwd_pre, self.fwd_end = fwd_order, fwd_pre, fwd_end
        # reverse trie as sorted reversed phrases
        keys = [b""] * (k + 1)
        for i in range(1, k + 1):
            keys[i] = bytes((p.sym[i],)) + keys[p.parent[i]]
        rev_order = sorted(range(1, k + 1), key=keys.__getitem__)
        rev_pre = [0] * (k + 1)
        for r, i in enumerate(rev_order):
            rev_pre[i] = r
        self.rev_order, self.rev_pre = rev_order, rev_pre
        self.rev_keys = [keys[i] for i in rev_order]
        self._build_reverse()

    def _build_reverse(self) -> None:
        """Compacted trie over the sorted reversed phrases, built from the
        longest common prefixes of neighbours."""
        K = self.rev_keys
        depth, lo, hi = [0], [0], [len(K)]
        kids: list[list[int]] = [[]]
        stack = [0]

        def new(d, l):
            depth.append(d)
            lo.append(l)
            hi.append(l)
            kids.append([])
            return len(depth) - 1

        prev = b""
        for i, key in enumerate(K):
            d = 0
            lim = min(len(prev), len(key))
            while d < lim and prev[d] == key[d]:
                d += 1
            while depth[stack[-1]] > d:
                last = stack.pop()
                hi[last] = i
                if depth[stack[-1]] < d:
                    mid = new(d, lo[last])
                    kids[mid].append(last)
                    stack.append(mid)
                    break
                kids[stack[-1]].append(last)
            stack.append(new(len(key), i))
            prev = key
        while len(stack) > 1:
            last = stack.pop()
            hi[last] = len(K)
            kids[stack[-1]].append(last)
        ptr = [0]
        csym, cid = [], []
        for u, ch in enumerate(kids):
            for v in ch:
                csym.append(K[lo[v]][depth[u]])
                cid.append(v)
            ptr.append(len(cid))
        self.rt_depth, self.rt_lo, self.rt_hi = depth, lo, hi
        self.rt_ptr, self.rt_sym, self.rt_id = ptr, csym, cid

    def child(self, u: int, c: int) -> int:
        lo, hi = self.child_ptr[u], self.child_ptr[u + 1]
        j = bisect_left(self.child_sym, c, lo, hi)
        if j < hi and self.child_sym[j] == c:
            return self.child_id[j]
        return -1

    def rev_range(self, s: bytes) -> tuple[int, int]:
        """Rank range [lo, hi) of phrases whose reversal starts with s."""
        keys = self.rev_keys
        depth, ptr, sym, cid = self.rt_depth, self.rt_ptr, self.rt_sym, self.rt_id
        u, d, m = 0, 0, len(s)
        while d < m:
            a, b = ptr[u], ptr[u + 1]
            j = bisect_left(sym, s[d], a, b)
            if j == b or sym[j] != s[d]:
                return 0, 0
            u = cid[j]
            end = min(depth[u], m)
            if keys[self.rt_lo[u]][d + 1:end] != s[d + 1:end]:
                return 0, 0
            d = end
        return self.rt_lo[u], self.rt_hi[u]

    def _forward_table(self, P: bytes) -> list[list[int]]:
        """F[a][b - a] = phrase id spelling P[a..b], for as long as it exists."""
        out = []
        for a in range(len(P)):
            row = []
            u = 0
            for c in P[a:]:
                u = self.child(u, c)
                if u < 0:
                    break
                row.append(u)
            out.append(row)
        return out

    # -- search cases ---------------------------------------------------------------

    def search_inside(self, P: bytes) -> list[int]:
        """Occurrences lying inside a single phrase."""
        m = len(P)
        start, depth = self.parse.start, self.parse.depth
        lo, hi = self.rev_range(P[::-1])
        out = []
        for x in self.rev_order[lo:hi]:
            off = depth[x] - m
            for y in self.fwd_order[self.fwd_pre[x]:self.fwd_end[x] + 1]:
                out.append(start[y] + off)
        return out

    def search_two(self, P: bytes, F=None) -> list[int]:
        """Occurrences spanning exactly two consecutive phrases."""
        m = len(P)
        if F is None:
            F = self._forward_table(P)
        k = self.parse.n_phrases
        start = self.parse.start
        fwd_pre, fwd_end, rev_pre = self.fwd_pre, self.fwd_end, self.rev_pre
        out = []
        for j in range(1, m):
            row = F[j]
            if len(row) < m - j:
                continue
            y = row[m - j - 1]
            flo, fhi = fwd_pre[y], fwd_end[y]
            rlo, rhi = self.rev_range(P[:j][::-1])
            if rlo == rhi:
                continue
            if rhi - rlo <= fhi - flo + 1:
                for i in self.rev_order[rlo:rhi]:
                    if i < k and flo <= fwd_pre[i + 1] <= fhi:
                        out.append(start[i + 1] - j)
            else:
                for i1 in self.fwd_order[flo:fhi + 1]:
                    if i1 > 1 and rlo <= rev_pre[i1 - 1] < rhi:
                        out.append(start[i1] - j)
        return out

    def search_many(self, P: bytes, F=None) -> list[int]:
        """Occurrences spanning three or more phrases: some P[a..b] is a whole
        phrase, extended right through whole phrases and checked at both ends."""
        m = len(P)
        if F is None:
            F = self._forward_table(P)
        p = self.parse
        k = p.n_phrases
        fwd_pre, fwd_end = self.fwd_pre, self.fwd_end
        left_ranges = {}
        out = []
        for a in range(1, m - 1):
            for b in range(a, m - 1):
                if b - a >= len(F[a]):
                    break
                x = F[a][b - a]
                if x < 2:
                    continue
                if a not in left_ranges:
                    left_ranges[a] = self.rev_range(P[:a][::-1])
                rlo, rhi = left_ranges[a]
                if not rlo <= self.rev_pre[x - 1] < rhi:
                    continue
                q, i = b + 1, x + 1
                ok = False
                while i <= k:
                    L = p.depth[i]
                    if q + L - 1 < m - 1:
                        if len(F[q]) < L or F[q][L - 1] != i:
                            break
                        q += L
                        i += 1
                        continue
                    need = m - q
                    if len(F[q]) >= need:
                        y = F[q][need - 1]
                        ok = fwd_pre[y] <= fwd_pre[i] <= fwd_end[y]
                    break
                if ok:
                    out.append(p.start[x] - a)
        return out

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        codes = self.pattern_codes(pattern)
        if codes is None:
            return []
        P = bytes(codes)
        F = self._forward_table(P)
        found = self.search_inside(P) + self.search_two(P, F) + self.search_many(P, F)
        if stats is not None:
            stats.extend([0] * len(found))
        return sorted(set(found))

    def count(self, pattern: bytes) -> int:
        return len(self.locate(pattern))

    def extract(self, l: int, r: int) -> bytes:
        l, r = self.extract_range(l, r)
        p = self.parse
        i = bisect_right(p.start, l, 1) - 1
        out: list[int] = []
        while True:
            s = p.start[i]
            z = p.phrase(i)
            out.extend(z[max(0, l - s):r - s + 1])
            if s + len(z) - 1 >= r:
                break
            i += 1
        return self.unmap(out)

    # -- space & persistence --------------------------------------------------------

    def size_bits(self) -> SpaceReport:
        k = self.parse.n_phrases
        idw = bits_needed(k + 1)
        payload = k * (8 + 7 * idw + bits_needed(self.n))
        payload += 8 * sum(len(x) for x in self.rev_keys)
        payload += len(self.rt_depth) * (4 * idw + 8)
        return SpaceReport(payload, 0, payload)

    def params(self) -> dict[str, int]:
        return {"eps_inv": self.eps_inv}

    def write_payload(self, w: Writer) -> None:
        p = self.parse
        w.array(p.parent[1:], "<u4")
        w.array(p.sym[1:], "<u1")
        w.array(self.fwd_order, "<u4")
        w.array(self.rev_order, "<u4")

    @classmethod
    def read_payload(cls, r: Reader, n, alphabet, params):
        parent = [0] + r.array("<u4").astype(np.int64).tolist()
        sym = [0] + r.array("<u1").astype(np.int64).tolist()
        fwd_order = r.array("<u4").tolist()
        rev_order = r.array("<u4").tolist()
        k = len(parent) - 1
        if len(sym) != k + 1 or any(parent[i] >= i for i in range(1, k + 1)):
            raise r.corrupt("phrase table malformed")
        depth = [0] * (k + 1)
        start = [0] * (k + 1)
        pos = 1
        for i in range(1, k + 1):
            depth[i] = depth[parent[i]] + 1
            start[i] = pos
            pos += depth[i]
        if pos - 1 != n:
            raise r.corrupt("phrases do not cover the text")
        ix = cls(n, alphabet, Lz78Parse(parent, sym, depth, start), params.get("eps_inv", 1))
        if ix.fwd_order != fwd_order or ix.rev_order != rev_order:
            raise r.corrupt("stored trie order disagrees with the phrase table")
        return ix
