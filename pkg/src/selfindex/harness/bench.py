"""Timing and space benchmark runner.

Configuration is a plain ``key = value`` file (``#`` starts a comment)::

    text = corpus/english.50MB     # or: synth = markov2 | uniform
    n = 1000000                    # synthetic length
    sigma = 16
    seed = 1
    kinds = ssa,csa,lz
    ssa = s_a=64                   # build parameters per kind
    index.csa = csa.idx            # optional prebuilt index file
    count_m = 20
    count_patterns = 200
    locate_m = 5
    locate_patterns = 50
    extract_len = 512
    extract_count = 50
    reps = 5
    workers = 1
    validate = yes
    measure_memory = yes
    out = report                   # writes report.txt and report.tsv
"""

from __future__ import annotations

import math
import statistics
import time
import tracemalloc
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from ..fileformat import index_class, load_index
from ..plain import PlainSaIndex
from .patterns import sample_patterns
from .synth import markov2_text, uniform_text
from .validate import default_seed


class IndexTextMismatch(ValueError):
    """A prebuilt index does not belong to the benchmark text."""


def parse_params(source: str) -> dict[str, int]:
    """``"s_a=64,k_max=4"`` -> ``{"s_a": 64, "k_max": 4}``."""
    out = {}
    for item in filter(None, (x.strip() for x in source.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"parameter {item!r} is not key=value")
        out[key.strip()] = int(value)
    return out


@dataclass
class BenchConfig:
    text: str | None = None
    synth: str = "markov2"
    n: int = 1_000_000
    sigma: int = 16
    seed: int = field(default_factory=default_seed)
    kinds: list[str] = field(default_factory=lambda: ["ssa", "csa", "lz"])
    params: dict[str, dict[str, int]] = field(default_factory=dict)
    index_files: dict[str, str] = field(default_factory=dict)
    count_m: int = 20
    count_patterns: int = 200
    locate_m: int = 5
    locate_patterns: int = 50
    extract_len: int = 512
    extract_count: int = 50
    reps: int = 5
    workers: int = 1
    validate: bool = False
    measure_memory: bool = True
    out: str | None = None

    @classmethod
    def parse(cls, source: str, base: Path | None = None) -> "BenchConfig":
        cfg = cls()
        ints = {f.name for f in fields(cls) if f.type in ("int", int)}
        for lineno, line in enumerate(source.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (x.strip() for x in line.partition("="))
            if not sep:
                raise ValueError(f"line {lineno}: expected key = value")
            if key in ints:
                setattr(cfg, key, int(value))
            elif key in ("validate", "measure_memory"):
                setattr(cfg, key, value.lower() in ("1", "yes", "true", "on"))
            elif key == "kinds":
                cfg.kinds = [k.strip() for k in value.split(",") if k.strip()]
            elif key in ("text", "out"):
                p = Path(value)
                setattr(cfg, key, str(base / p if base and not p.is_absolute() else p))
            elif key == "synth":
                cfg.synth = value
            elif key.startswith("index."):
                p = Path(value)
                cfg.index_files[key[6:]] = str(base / p if base and not p.is_absolute() else p)
            else:
                index_class(key)  # rejects unknown keys with the list of kinds
                cfg.params[key] = parse_params(value)
        for k in cfg.kinds:
            index_class(k)
        return cfg

    @classmethod
    def load(cls, path) -> "BenchConfig":
        path = Path(path)
        return cls.parse(path.read_text(), path.parent)

    def load_text(self) -> tuple[str, bytes]:
        if self.text:
            return Path(self.text).name, Path(self.text).read_bytes()
        gen = {"markov2": markov2_text, "uniform": uniform_text}.get(self.synth)
        if gen is None:
            raise ValueError(f"unknown generator {self.synth!r}")
        return f"{self.synth}-{self.n}-s{self.sigma}", gen(self.n, self.sigma, self.seed)


@dataclass
class BenchRow:
    kind: str
    text: str
    build_seconds: float
    peak_build_bytes: int
    space_fraction: float
    count_microsec_per_symbol: float
    locate_microsec_per_occurrence: float
    extract_microsec_per_char: float
    pattern_count: int
    occ_total: int
    locate_steps_max: int
    mismatches: int


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def table(self) -> str:
        head = ["index", "text", "build s", "peak MB", "space", "count us/sym",
                "locate us/occ", "extract us/chr", "patterns", "occ", "steps", "bad"]
        body = [[r.kind, r.text, f"{r.build_seconds:.2f}", f"{r.peak_build_bytes / 2**20:.1f}",
                 f"{r.space_fraction:.3f}", f"{r.count_microsec_per_symbol:.3f}",
                 f"{r.locate_microsec_per_occurrence:.3f}", f"{r.extract_microsec_per_char:.3f}",
                 str(r.pattern_count), str(r.occ_total), str(r.locate_steps_max), str(r.mismatches)]
                for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        lines = ["  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in [head] + body]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines)

    def tsv(self) -> str:
        names = [f.name for f in fields(BenchRow)]
        out = ["\t".join(names)]
        for r in self.rows:
            d = asdict(r)
            out.append("\t".join(str(d[k]) for k in names))
        return "\n".join(out) + "\n"


def median_time(fn, reps: int) -> float:
    times = []
    for _ in range(max(reps, 1)):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _fan_out(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def check_matches_text(index, text: bytes, seed: int = 0, windows: int = 8, width: int = 64) -> None:
    if index.n - 1 != len(text):
        raise IndexTextMismatch(f"index covers {index.n - 1} bytes, text has {len(text)}")
    if not text:
        return
    rng = np.random.default_rng(seed)
    for l in rng.integers(1, len(text) + 1, windows).tolist():
        r = min(len(text), l + width - 1)
        if index.extract(l, r) != text[l - 1:r]:
            raise IndexTextMismatch(f"index disagrees with the text at {l}..{r}")


def build_measured(kind: str, text: bytes, params: dict, measure_memory: bool = True):
    """(index, build seconds, peak traced bytes or 0)."""
    cls = index_class(kind)
    t0 = time.perf_counter()
    index = cls.build(text, **params)
    seconds = time.perf_counter() - t0
    peak = 0
    if measure_memory:
        del index
        tracemalloc.start()
        try:
            index = cls.build(text, **params)
            peak = tracemalloc.get_traced_memory()[1]
        finally:
            tracemalloc.stop()
    return index, seconds, peak


def bench_index(index, kind: str, name: str, text: bytes, cfg: BenchConfig,
                build_seconds=0.0, peak=0, oracle=None) -> BenchRow:
    n = len(text)
    seed = cfg.seed
    cpats = sample_patterns(text, cfg.count_m, cfg.count_patterns, seed) if cfg.count_m < n else []
    lpats = sample_patterns(text, cfg.locate_m, cfg.locate_patterns, seed + 1) if cfg.locate_m < n else []
    rng = np.random.default_rng(seed + 2)
    width = max(1, min(cfg.extract_len, n))
    starts = rng.integers(1, n - width + 2, cfg.extract_count).tolist() if n else []
    windows = [(l, l + width - 1) for l in starts]
    w = cfg.workers

    counts = _fan_out(index.count, cpats, w)
    t_count = median_time(lambda: _fan_out(index.count, cpats, w), cfg.reps)
    steps: list[int] = []
    located = [index.locate(p, steps) for p in lpats]
    t_locate = median_time(lambda: _fan_out(index.locate, lpats, w), cfg.reps)
    t_extract = median_time(lambda: _fan_out(lambda lr: index.extract(*lr), windows, w), cfg.reps)

    occ_locate = sum(len(x) for x in located)
    bad = 0
    if cfg.validate:
        if oracle is None:
            oracle = PlainSaIndex.build(text)
        bad += sum(c != oracle.count(p) for p, c in zip(cpats, counts))
        bad += sum(x != oracle.locate(p) for p, x in zip(lpats, located))
        bad += sum(index.extract(l, r) != text[l - 1:r] for l, r in windows)
    nan = float("nan")
    return BenchRow(
        kind=kind, text=name, build_seconds=build_seconds, peak_build_bytes=peak,
        space_fraction=index.size_bits().total / (8 * max(n, 1)),
        count_microsec_per_symbol=1e6 * t_count / (len(cpats) * cfg.count_m) if cpats else nan,
        locate_microsec_per_occurrence=1e6 * t_locate / occ_locate if occ_locate else nan,
        extract_microsec_per_char=1e6 * t_extract / (len(windows) * width) if windows else nan,
        pattern_count=len(cpats), occ_total=sum(counts), locate_steps_max=max(steps, default=0),
        mismatches=bad,
    )


def run_bench(cfg: BenchConfig, log=None) -> BenchReport:
    name, text = cfg.load_text()
    oracle = PlainSaIndex.build(text) if cfg.validate else None
    rows = []
    for kind in cfg.kinds:
        params = cfg.params.get(kind, {})
        if kind in cfg.index_files:
            index = load_index(cfg.index_files[kind], expect=kind)
            check_matches_text(index, text, cfg.seed)
            secs, peak = math.nan, 0
        else:
            index, secs, peak = build_measured(kind, text, params, cfg.measure_memory)
        if log:
            log(f"{kind}: built, benchmarking")
        rows.append(bench_index(index, kind, name, text, cfg, secs, peak, oracle))
    report = BenchReport(rows)
    if cfg.out:
        Path(cfg.out + ".txt").write_text(report.table() + "\n")
        Path(cfg.out + ".tsv").write_text(report.tsv())
    return report
