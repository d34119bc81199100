import math

import pytest

from selfindex.harness.bench import BenchConfig, IndexTextMismatch, parse_params, run_bench
from selfindex.harness.cli import main
from selfindex.harness.patterns import sample_patterns
from selfindex.harness.synth import markov2_text, symbols, uniform_text
from selfindex.harness.validate import selftest
from selfindex.textcore import entropy, map_text


def test_sample_patterns():
    text = b"abracadabra"
    pats = sample_patterns(text, 5, 10, seed=3)
    assert len(pats) == 10 and all(p in text for p in pats)
    assert pats == sample_patterns(text, 5, 10, seed=3)
    edge = sample_patterns(text, 10, 50, seed=1)
    assert set(edge) <= {text[:10], text[1:]}
    with pytest.raises(ValueError):
        sample_patterns(text, 11, 1)
    with pytest.raises(ValueError):
        sample_patterns(text, 0, 1)


def test_generators():
    assert symbols(4) == b"abcd" and len(set(symbols(96))) == 96
    u = uniform_text(1000, 4, 1)
    assert len(u) == 1000 and set(u) <= set(b"abcd")
    assert u == uniform_text(1000, 4, 1)
    m = markov2_text(200_000, 16, 2)
    h = entropy(map_text(m), 2)
    assert abs(h.hk(2) - 1.0) < 0.05


def test_parse_params():
    assert parse_params("s_a=64, k_max=4") == {"s_a": 64, "k_max": 4}
    assert parse_params("") == {}
    with pytest.raises(ValueError):
        parse_params("s_a")


def small_config(tmp_path, extra=""):
    src = f"""
    synth = markov2   # generator
    n = 4000
    sigma = 8
    seed = 4
    kinds = ssa,csa,lz,fmi2
    ssa = s_a=16
    csa = s_a=16,s_psi=32
    fmi2 = s_a=16,lb=64
    count_m = 8
    count_patterns = 20
    locate_m = 3
    locate_patterns = 5
    extract_len = 64
    extract_count = 5
    reps = 5
    validate = yes
    measure_memory = yes
    {extra}
    """
    cfg = tmp_path / "bench.cfg"
    cfg.write_text(src)
    return cfg


def test_run_bench_validation_and_determinism(tmp_path):
    cfg = BenchConfig.load(small_config(tmp_path, "out = rep\nworkers = 2"))
    r1 = run_bench(cfg)
    r2 = run_bench(cfg)
    assert [r.occ_total for r in r1.rows] == [r.occ_total for r in r2.rows]
    for row in r1.rows:
        assert row.mismatches == 0 and row.space_fraction > 0
        assert row.peak_build_bytes > 0 and row.build_seconds > 0
        assert not math.isnan(row.count_microsec_per_symbol)
        if row.kind in ("ssa", "csa"):
            assert row.locate_steps_max <= 16
    assert (tmp_path / "rep.txt").read_text().splitlines()[0].split()[0] == "index"
    tsv = (tmp_path / "rep.tsv").read_text().splitlines()
    assert tsv[0].startswith("kind\ttext\tbuild_seconds") and len(tsv) == 5


def test_bench_rejects_foreign_index(tmp_path):
    other = tmp_path / "other.ssa"
    from selfindex.fm_ssa import SsaIndex
    SsaIndex.build(markov2_text(4000, 8, 99)).save(other)
    cfg = BenchConfig.load(small_config(tmp_path, f"index.ssa = {other}"))
    with pytest.raises(IndexTextMismatch):
        run_bench(cfg)


def test_config_errors(tmp_path):
    with pytest.raises(ValueError):
        BenchConfig.parse("kinds = ssa,nope")
    with pytest.raises(ValueError):
        BenchConfig.parse("no equals sign")


def test_selftest_clean():
    res = selftest(trials=3, seed=11)
    assert res.ok and res.queries > 0


def test_cli_end_to_end(tmp_path, capsys):
    text = tmp_path / "t.txt"
    text.write_bytes(b"abracadabra")
    for kind in ("ssa", "af", "fmi2", "csa", "lz", "plain_sa"):
        out = tmp_path / f"t.{kind}"
        assert main(["build", "-i", kind, "-p", "s_a=4" if kind in ("ssa", "csa", "fmi2") else "", str(text), str(out)]) == 0
        capsys.readouterr()
        assert main(["query", "locate", str(out), "abra"]) == 0
        assert capsys.readouterr().out == "1\n8\n"
        assert main(["query", "count", str(out), "a", "zz"]) == 0
        assert capsys.readouterr().out == "a\t5\nzz\t0\n"
    assert main(["stats", str(text), "-k", "1"]) == 0
    out = capsys.readouterr().out
    assert "alphabet\t5" in out and "H0\t2.040" in out
    bad = tmp_path / "bad.idx"
    bad.write_bytes(b"PCIX" + b"\0" * 30)
    assert main(["query", "count", str(bad), "a"]) == 2
    assert main(["selftest", "-n", "1", "--seed", "3"]) == 0
    cfg = small_config(tmp_path)
    assert main(["bench", str(cfg)]) == 0


def test_cli_extract(tmp_path, capsysbinary):
    text = tmp_path / "t.txt"
    text.write_bytes(b"mississippi")
    idx = tmp_path / "t.csa"
    main(["build", "-i", "csa", str(text), str(idx)])
    capsysbinary.readouterr()
    assert main(["query", "extract", str(idx), "3", "7"]) == 0
    assert capsysbinary.readouterr().out == b"ssiss\n"


def test_space_fraction_below_one_on_compressible_text(tmp_path):
    cfg = BenchConfig.load(small_config(tmp_path, "n = 300000\nsigma = 16\nkinds = ssa,af,csa\n"
                                        "ssa = s_a=64\naf = s_a=64\ncsa = s_a=64,s_psi=128\nvalidate = no"))
    rows = run_bench(cfg).rows
    assert [r.kind for r in rows] == ["ssa", "af", "csa"]
    assert all(0 < r.space_fraction < 1.0 for r in rows), [r.space_fraction for r in rows]
