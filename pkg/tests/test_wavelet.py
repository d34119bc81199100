import math
import random
from collections import Counter

import numpy as np
import pytest

from oracles import h0, rank
from selfindex.binio import Reader, Writer
from selfindex.huffman import CanonicalDecoder, canonical_codes, code_lengths
from selfindex.wavelet import WaveletTree


def codes_of(s: str):
    alpha = sorted(set(s))
    return np.array([alpha.index(ch) for ch in s]), alpha


def test_unary_alphabet():
    wt = WaveletTree.build(np.zeros(4, dtype=int), 1, "huffman")
    assert wt.payload_bits() == 0 and wt.height() == 0
    assert wt.access(3) == 0 and wt.rank(0, 4) == 4
    z = WaveletTree.build(np.array([0]), 1, "balanced")
    assert z.access(1) == 0


def test_balanced_root_bitmap():
    seq, alpha = codes_of("abracadabra")
    wt = WaveletTree.build(seq, len(alpha), "balanced")
    assert "".join(map(str, wt.bits[0].to_list())) == "00100010010"
    assert wt.height() == math.ceil(math.log2(len(alpha)))
    # every symbol descends through ceil(log2 5) = 3 or 2 levels; 11 bits at the root
    assert wt.payload_bits() == sum(len(path) * cnt for path, cnt in
                                    ((wt.paths[c], k) for c, k in Counter(seq.tolist()).items()))


def test_aabb_huffman_payload():
    seq, alpha = codes_of("aabb")
    wt = WaveletTree.build(seq, 2, "huffman")
    assert wt.payload_bits() == 4 and len(wt.bits) == 1


def test_rank_access_examples():
    seq, alpha = codes_of("abracadabra")
    for shape in ("balanced", "huffman"):
        wt = WaveletTree.build(seq, len(alpha), shape)
        a, r = alpha.index("a"), alpha.index("r")
        assert wt.rank(a, 11) == 5 and wt.rank(r, 3) == 1 and wt.rank(a, 0) == 0
        assert alpha[wt.access(1)] == "a" and alpha[wt.access(3)] == "r"
    one = WaveletTree.build(np.array([0]), 1)
    assert one.access(1) == 0


def test_errors():
    wt = WaveletTree.build(np.array([0, 1, 1]), 3, "huffman")
    with pytest.raises(ValueError):
        wt.rank(2, 1)            # symbol absent from the sequence
    with pytest.raises(IndexError):
        wt.rank(0, 4)
    with pytest.raises(IndexError):
        wt.access(0)
    with pytest.raises(ValueError):
        WaveletTree.build(np.array([0, 5]), 3)


def test_random_shapes_agree_with_scan():
    rng = random.Random(11)
    for _ in range(300):
        sigma = rng.choice([1, 2, 3, 5, 16, 40])
        n = rng.randint(1, 300)
        skew = rng.random() * 3
        w = [1 / (1 + i) ** skew for i in range(sigma)]
        seq = np.array(rng.choices(range(sigma), w, k=n))
        bal = WaveletTree.build(seq, sigma, "balanced")
        huf = WaveletTree.build(seq, sigma, "huffman")
        s = seq.tolist()
        for i in range(1, n + 1):
            c = s[i - 1]
            assert bal.access(i) == huf.access(i) == c
            assert huf.access_rank(i) == (c, rank(s, c, i))
        for c in set(s):
            for i in rng.sample(range(n + 1), min(n + 1, 10)):
                assert bal.rank(c, i) == huf.rank(c, i) == rank(s, c, i)
        assert sum(huf.rank(c, n) for c in set(s)) == n
        counts = Counter(s)
        lengths = code_lengths([counts.get(c, 0) for c in range(sigma)])
        assert huf.payload_bits() == sum(counts[c] * lengths[c] for c in counts)
        assert huf.payload_bits() <= n * (h0(s) + 1) + 1e-9
        assert huf.payload_bits() <= bal.payload_bits()


def test_serialization_roundtrip():
    rng = random.Random(2)
    seq = np.array([rng.randrange(7) for _ in range(500)])
    for shape in ("balanced", "huffman"):
        wt = WaveletTree.build(seq, 7, shape)
        w = Writer()
        wt.write(w)
        back = WaveletTree.read(Reader(w.getvalue()))
        assert [back.access(i) for i in range(1, 501)] == seq.tolist()


def test_huffman_codes_prefix_free_and_deterministic():
    freqs = [5, 0, 5, 3, 3, 1, 1]
    lengths = code_lengths(freqs)
    assert lengths == code_lengths(freqs)
    assert lengths[1] == 0
    assert sum(2.0 ** -L for L in lengths if L) == pytest.approx(1.0)
    codes = canonical_codes(lengths)
    words = [format(c, f"0{L}b") for c, L in codes.values()]
    assert not any(a != b and b.startswith(a) for a in words for b in words)
    dec = CanonicalDecoder(lengths)
    bits = [int(ch) for s in (0, 3, 6, 2) for ch in format(codes[s][0], f"0{codes[s][1]}b")]
    pos, out = 0, []
    while pos < len(bits):
        sym, pos = dec.decode(bits, pos)
        out.append(sym)
    assert out == [0, 3, 6, 2]
