"""SSA and AF-index: examples, rank routing, sampling and oracle agreement."""

import random

import numpy as np
import pytest

from oracles import h0, occurrences, rank
from selfindex.fm_af import AfIndex, af_partition, block_cost, context_starts
from selfindex.fm_ssa import SsaIndex
from selfindex.harness.synth import markov2_text, uniform_text
from selfindex.huffman import code_lengths
from selfindex.textcore import build_suffix_array, bwt_from_sa, map_text

ABRA = b"abracadabra"


def test_ssa_sampling_examples():
    ix = SsaIndex.build(ABRA, s_a=4)
    marked = [i for i in range(1, 13) if ix.samples.sample_at(i) is not None]
    assert marked == [1, 3, 5]
    full = SsaIndex.build(ABRA, s_a=1)
    steps = []
    full.locate(b"a", steps)
    assert steps and max(steps) == 0
    sparse = SsaIndex.build(ABRA, s_a=12)
    assert sum(sparse.samples.sample_at(i) is not None for i in range(1, 13)) <= 2


def test_ssa_queries():
    ix = SsaIndex.build(ABRA, s_a=4)
    assert ix.interval(b"abra") == (3, 4) and ix.count(b"abra") == 2
    assert SsaIndex.build(b"mississippi").count(b"ssi") == 2
    assert ix.count(b"q") == 0 and ix.locate(b"q") == []
    assert ix.locate(b"abra") == [1, 8]
    assert ix.locate(b"a") == [1, 4, 6, 8, 11]
    assert ix.extract(1, 4) == b"abra" and ix.extract(8, 11) == b"abra"
    assert ix.extract(1, 11) == ABRA and ix.extract(5, 99) == ABRA[4:]
    with pytest.raises(IndexError):
        ix.extract(5, 4)
    with pytest.raises(IndexError):
        ix.extract(0, 3)
    with pytest.raises(ValueError):
        ix.count(b"")


def test_af_mississippi_blocks():
    t = map_text(b"mississippi")
    sa = build_suffix_array(t)
    assert context_starts(t.codes, sa, 1) == [1, 2, 6, 7, 9]
    assert context_starts(t.codes, sa, 0) == [1]
    ix = AfIndex.build(b"mississippi", s_a=4, k=1, min_block=1)
    assert ix.block_lengths() == [1, 4, 1, 2, 4]
    one = AfIndex.build(b"mississippi", s_a=4, k_max=0)
    assert one.block_lengths() == [12]
    aaaa = AfIndex.build(b"aaaa", k=1, min_block=1)
    assert aaaa.block_lengths() == [1, 4]


def test_af_global_rank():
    ix = AfIndex.build(b"mississippi", s_a=4, k=1, min_block=1)
    s = ix._table[ord("s")]
    assert ix.rank(s, 4) == 2 and ix.rank(s, 0) == 0
    rng = random.Random(3)
    for trial in range(100):
        raw = (uniform_text if trial % 2 else markov2_text)(rng.randint(1, 400), rng.choice((2, 4, 16)), trial)
        t = map_text(raw)
        b = bwt_from_sa(t, build_suffix_array(t)).bwt.tolist()
        af = AfIndex.build(raw, k_max=3, min_block=rng.choice((1, 4, 16)))
        assert sum(af.block_lengths()) == t.n
        for c in range(t.sigma):
            for i in rng.sample(range(t.n + 1), min(8, t.n + 1)):
                assert af.rank(c, i) == rank(b, c, i)
        for j in range(len(af.blocks) - 1):
            start = af.r_map.select1(j + 1)
            nxt = af.r_map.select1(j + 2)
            seg = b[start - 1:nxt - 1]
            assert [af.cj[j + 1][c] - af.cj[j][c] for c in range(t.sigma)] == [seg.count(c) for c in range(t.sigma)]


def test_af_partition_never_worse_than_one_block():
    rng = random.Random(21)
    for trial in range(50):
        raw = markov2_text(rng.randint(2, 2000), 2, trial)
        t = map_text(raw)
        sa = build_suffix_array(t)
        b = bwt_from_sa(t, sa).bwt
        part = af_partition(t.codes, sa, b, t.sigma, k_max=2)
        assert part.cost <= block_cost(b, [1], t.sigma, t.n) + 1e-9
        assert part.cost == min(part.costs.values())


def test_af_block_payload_bound():
    rng = random.Random(8)
    for trial in range(30):
        raw = markov2_text(rng.randint(50, 3000), rng.choice((4, 16)), trial)
        af = AfIndex.build(raw, k_max=3)
        for wt in af.blocks:
            seq = [wt.access(i) for i in range(1, wt.n + 1)]
            assert wt.payload_bits() <= wt.n * (h0(seq) + 1) + 1e-9


@pytest.mark.parametrize("s_a", [4, 16, 64])
def test_fm_indexes_match_scan_and_each_other(s_a):
    rng = random.Random(s_a)
    for trial in range(25):
        sigma = (2, 4, 16, 96)[trial % 4]
        raw = (uniform_text if trial % 2 else markov2_text)(rng.randint(1, 1500), sigma, trial)
        ssa = SsaIndex.build(raw, s_a=s_a)
        af = AfIndex.build(raw, s_a=s_a, k_max=2, min_block=8)
        n = len(raw)
        for _ in range(20):
            m = rng.randint(1, 6)
            s = rng.randrange(n)
            p = raw[s:s + m]
            want = occurrences(raw, p)
            for ix in (ssa, af):
                steps = []
                assert ix.count(p) == len(want)
                assert ix.locate(p, steps) == want
                assert all(x <= s_a for x in steps)
            assert ssa.interval(p) == af.interval(p)
        assert ssa.extract(1, n) == raw == af.extract(1, n)


def test_ssa_payload_bound():
    rng = random.Random(14)
    for trial in range(100):
        raw = (uniform_text if trial % 2 else markov2_text)(rng.randint(1, 3000), (2, 4, 16, 96)[trial % 4], trial)
        ix = SsaIndex.build(raw)
        t = map_text(raw)
        b = bwt_from_sa(t, build_suffix_array(t)).bwt.tolist()
        assert ix.wt.payload_bits() <= t.n * (h0(b) + 1) + 1e-9
        counts = np.bincount(b, minlength=t.sigma)
        lengths = code_lengths(counts.tolist())
        assert ix.wt.payload_bits() == int((counts * np.array(lengths)).sum())
