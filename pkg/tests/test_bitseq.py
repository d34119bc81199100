import random

import numpy as np
import pytest

from oracles import rank, select
from selfindex.binio import IndexFormatError, Reader, Writer
from selfindex.bitseq import BitSeq, PackedInts, pack_fields

B = [0, 1, 0, 1, 1, 0]


def test_examples():
    e = BitSeq.build([])
    assert e.n == 0 and e.rank1(0) == 0
    b = BitSeq.build(B, 8)
    assert b.n == 6
    assert [b.rank1(i) for i in (0, 4, 6)] == [0, 2, 3]
    assert [b.select1(j) for j in (1, 2)] == [2, 4]
    assert [b.access(i) for i in (1, 2)] == [0, 1]
    assert BitSeq.build([1]).select1(1) == 1
    assert BitSeq.build([0]).access(1) == 0
    assert BitSeq.build([1] * 64 + [0] * 64, 64).super_ranks == [0, 64, 64]


def test_errors():
    b = BitSeq.build(B)
    with pytest.raises(ValueError):
        BitSeq.build(B, 4)
    with pytest.raises(IndexError):
        b.rank1(7)
    with pytest.raises(IndexError):
        b.select1(0)
    with pytest.raises(IndexError):
        b.select1(4)
    with pytest.raises(IndexError):
        b.access(0)
    with pytest.raises(ValueError):
        BitSeq.build([0, 2])


def test_random_against_scan():
    rng = random.Random(5)
    for trial in range(10_000):
        n = rng.randint(0, 4096) if trial < 200 else rng.randint(0, 200)
        p = rng.random()
        bits = [1 if rng.random() < p else 0 for _ in range(n)]
        bs = rng.choice([8, 64, 100, 512])
        b = BitSeq.build(bits, bs)
        pref = np.concatenate([[0], np.cumsum(bits)]).tolist()
        if trial < 200:
            assert [b.rank1(i) for i in range(n + 1)] == pref
            ones = [i + 1 for i, x in enumerate(bits) if x]
            assert [b.select1(j) for j in range(1, len(ones) + 1)] == ones
        else:
            for _ in range(5):
                i = rng.randint(0, n)
                assert b.rank1(i) == rank(bits, 1, i)
                assert b.rank0(i) == i - b.rank1(i)
            if b.ones:
                j = rng.randint(1, b.ones)
                assert b.select1(j) == select(bits, 1, j)
        assert b.rank1(n) + b.rank0(n) == n
        assert b.super_ranks == [pref[k * bs] for k in range(n // bs + 1)]


def test_block_size_independence():
    rng = random.Random(9)
    bits = [rng.random() < 0.3 for _ in range(3000)]
    a, b = BitSeq.build(bits, 8), BitSeq.build(bits, 512)
    assert all(a.rank1(i) == b.rank1(i) for i in range(3001))
    for i in range(1, 3001):
        r = a.rank1(i)
        if r:
            assert a.rank1(a.select1(r)) == r
        if a.access(i):
            assert a.select1(r) == i


def test_roundtrip_and_corruption():
    rng = random.Random(3)
    bits = [rng.random() < 0.5 for _ in range(777)]
    b = BitSeq.build(bits, 128)
    w = Writer()
    b.write(w)
    data = w.getvalue()
    c = BitSeq.read(Reader(data))
    assert c.to_list() == b.to_list() and c.super_ranks == b.super_ranks
    bad = bytearray(data)
    bad[-1] ^= 1   # damage the last rank counter
    with pytest.raises(IndexFormatError):
        BitSeq.read(Reader(bytes(bad)))
    with pytest.raises(IndexFormatError):
        BitSeq.read(Reader(data[:20]))


def test_packed_ints_and_fields():
    rng = random.Random(1)
    vals = [rng.randrange(1000) for _ in range(500)]
    p = PackedInts.build(vals)
    assert p.tolist() == vals and p.width == 10
    widths = np.array([rng.randint(1, 64) for _ in range(300)])
    fields = np.array([rng.getrandbits(int(w)) for w in widths], dtype=np.uint64)
    words, offsets = pack_fields(fields, widths)
    stream = sum(w << (64 * i) for i, w in enumerate(words))
    for f, w, o in zip(fields.tolist(), widths.tolist(), offsets.tolist()):
        assert (stream >> o) & ((1 << w) - 1) == f
