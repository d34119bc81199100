"""Answer checking against the plain suffix array and naive scans."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from ..fileformat import index_class
from ..plain import PlainSaIndex
from .patterns import random_patterns
from .synth import markov2_text, uniform_text

SEED_ENV = "SELFINDEX_SEED"
ABSENT = b"\xfe"   # never produced by the generators
ALL_KINDS = ("ssa", "af", "fmi2", "csa", "lz")
# small sampling so the short trial texts still exercise every walk
TRIAL_PARAMS = {
    "ssa": {"s_a": 8},
    "af": {"s_a": 8, "min_block": 4},
    "fmi2": {"s_a": 8, "lb": 64, "lsb": 4},
    "csa": {"s_a": 8, "s_psi": 16},
    "lz": {},
}


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def naive_occurrences(text: bytes, pattern: bytes) -> list[int]:
    out = []
    i = text.find(pattern)
    while i >= 0:
        out.append(i + 1)
        i = text.find(pattern, i + 1)
    return out


@dataclass
class Mismatch:
    kind: str
    op: str
    arg: object
    expected: object
    got: object


@dataclass
class CheckResult:
    queries: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_index(index, text: bytes, patterns, ranges, oracle=None, result=None) -> CheckResult:
    """Compare count/locate/extract of ``index`` with ``oracle`` (a plain
    suffix array over the same text when omitted)."""
    if oracle is None:
        oracle = PlainSaIndex.build(text)
    res = result if result is not None else CheckResult()
    for p in patterns:
        exp = oracle.locate(p)
        got = index.locate(p)
        cnt = index.count(p)
        res.queries += 2
        if got != exp:
            res.mismatches.append(Mismatch(index.kind, "locate", p, exp, got))
        if cnt != len(exp):
            res.mismatches.append(Mismatch(index.kind, "count", p, len(exp), cnt))
    for l, r in ranges:
        res.queries += 1
        got = index.extract(l, r)
        if got != text[l - 1:r]:
            res.mismatches.append(Mismatch(index.kind, "extract", (l, r), text[l - 1:r], got))
    return res


def trial_text(rng: random.Random) -> bytes:
    sigma = rng.choice((2, 4, 16, 96))
    n = rng.randint(1, 5000)
    seed = rng.randrange(2**32)
    if rng.random() < 0.5:
        return uniform_text(n, sigma, seed)
    return markov2_text(n, sigma, seed)


def trial_queries(rng: random.Random, text: bytes, n_patterns: int = 50, n_extract: int = 10):
    n = len(text)
    pats = []
    alpha = bytes(sorted(set(text))) + ABSENT
    for j in range(n_patterns):
        m = rng.randint(1, 12)
        if j % 2 == 0 and m < n:
            s = rng.randrange(n - m + 1)
            pats.append(text[s:s + m])
        else:
            pats.extend(random_patterns(alpha, m, 1, rng.randrange(2**32)))
    ranges = []
    for _ in range(n_extract):
        l = rng.randint(1, n)
        ranges.append((l, rng.randint(l, n)))
    ranges.append((1, n))
    return pats, ranges


def selftest(trials: int = 20, seed: int | None = None, kinds=ALL_KINDS, log=None) -> CheckResult:
    """Randomized cross-validation of every index kind against naive scans."""
    rng = random.Random(default_seed() if seed is None else seed)
    total = CheckResult()
    for t in range(trials):
        text = trial_text(rng)
        pats, ranges = trial_queries(rng, text)
        oracle = PlainSaIndex.build(text)
        for p in pats:
            if oracle.locate(p) != naive_occurrences(text, p):
                total.mismatches.append(Mismatch("plain_sa", "locate", p, naive_occurrences(text, p), oracle.locate(p)))
        for kind in kinds:
            ix = index_class(kind).build(text, **TRIAL_PARAMS.get(kind, {}))
            check_index(ix, text, pats, ranges, oracle, total)
        if log:
            log(f"trial {t + 1}/{trials}: n={len(text)} sigma={len(set(text))} mismatches={len(total.mismatches)}")
    return total
