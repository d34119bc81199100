"""Command line front end.

    selfindex build -i ssa -p s_a=64 text.txt text.ssa
    selfindex query count text.ssa abra cad
    selfindex query locate text.ssa abra
    selfindex query extract text.ssa 1 100
    selfindex stats text.txt -k 4
    selfindex bench bench.cfg
    selfindex selftest -n 20
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..binio import IndexFormatError
from ..fileformat import KIND_TAGS, index_class, load_index
from ..textcore import entropy, map_text
from .bench import BenchConfig, parse_params, run_bench
from .validate import SEED_ENV, default_seed, selftest


def _pattern(arg: str) -> bytes:
    return os.fsencode(arg)


def cmd_build(args) -> int:
    text = Path(args.text).read_bytes()
    params = parse_params(args.params or "")
    index = index_class(args.index).build(text, **params)
    index.save(args.out)
    rep = index.size_bits()
    print(f"{args.index}: n={index.n - 1} sigma={index.sigma - 1} bits={rep.total} "
          f"({rep.total / (8 * max(len(text), 1)):.3f} of the text)")
    return 0


def cmd_query(args) -> int:
    index = load_index(args.index)
    out = sys.stdout
    if args.op == "count":
        for p in args.args:
            print(f"{p}\t{index.count(_pattern(p))}", file=out)
    elif args.op == "locate":
        for p in args.args:
            for pos in index.locate(_pattern(p)):
                print(pos, file=out)
    else:
        if len(args.args) != 2:
            raise SystemExit("extract needs two positions: l r")
        l, r = (int(x) for x in args.args)
        sys.stdout.buffer.write(index.extract(l, r) + b"\n")
    return 0


def cmd_stats(args) -> int:
    t = map_text(Path(args.text).read_bytes())
    rep = entropy(t, args.k)
    print(f"n\t{t.n - 1}")
    print(f"alphabet\t{t.original_sigma}")
    for k, h, ctx in rep.h:
        print(f"H{k}\t{h:.6f}\tcontexts\t{ctx}")
    print(f"inverse_match_probability\t{rep.inv_match_prob:.4f}")
    return 0


def cmd_bench(args) -> int:
    cfg = BenchConfig.load(args.config)
    if args.out:
        cfg.out = args.out
    report = run_bench(cfg, log=lambda s: print(s, file=sys.stderr))
    print(report.table())
    return 1 if any(r.mismatches for r in report.rows) else 0


def cmd_selftest(args) -> int:
    res = selftest(args.n, args.seed, log=lambda s: print(s, file=sys.stderr))
    for mm in res.mismatches[:20]:
        print(f"MISMATCH {mm.kind} {mm.op} {mm.arg!r}: expected {mm.expected!r}, got {mm.got!r}")
    print(f"{res.queries} queries, {len(res.mismatches)} mismatches")
    return 0 if res.ok else 1


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfindex", description="Compressed self-index workbench")
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="build an index file from a text")
    b.add_argument("-i", "--index", required=True, choices=sorted(KIND_TAGS))
    b.add_argument("-p", "--params", help="comma-separated key=value build parameters")
    b.add_argument("text")
    b.add_argument("out")
    b.set_defaults(fn=cmd_build)

    q = sub.add_parser("query", help="count, locate or extract on an index file")
    q.add_argument("op", choices=("count", "locate", "extract"))
    q.add_argument("index")
    q.add_argument("args", nargs="+", help="patterns, or l r for extract")
    q.set_defaults(fn=cmd_query)

    s = sub.add_parser("stats", help="empirical entropy report for a text")
    s.add_argument("text")
    s.add_argument("-k", type=int, default=4, help="highest context order")
    s.set_defaults(fn=cmd_stats)

    be = sub.add_parser("bench", help="run a benchmark configuration")
    be.add_argument("config")
    be.add_argument("--out", help="report prefix (overrides the config)")
    be.set_defaults(fn=cmd_bench)

    st = sub.add_parser("selftest", help="randomized cross-validation against naive search")
    st.add_argument("-n", type=int, default=20, help="number of random texts")
    st.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or {default_seed()}")
    st.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (IndexFormatError, ValueError, OSError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
