import pytest

from selfindex import IndexFormatError, KindMismatchError, build_index, load_index
from selfindex.csa import CsaIndex
from selfindex.fileformat import KIND_TAGS, MAGIC, dumps, loads
from selfindex.fm_ssa import SsaIndex
from selfindex.harness.synth import markov2_text

TEXT = markov2_text(3000, 16, 5)
PARAMS = {"ssa": {"s_a": 8}, "af": {"s_a": 8, "min_block": 4}, "fmi2": {"s_a": 8, "lb": 64},
          "csa": {"s_a": 8, "s_psi": 16}, "lz": {}, "plain_sa": {}}
QUERIES = [TEXT[100:104], TEXT[7:9], TEXT[:1], b"\x01\x02", TEXT[2000:2012]]


@pytest.fixture(scope="module", params=sorted(KIND_TAGS))
def built(request):
    return build_index(request.param, TEXT, **PARAMS[request.param])


def answers(ix):
    return ([ix.count(p) for p in QUERIES], [ix.locate(p) for p in QUERIES],
            ix.extract(1, len(TEXT)), ix.extract(1234, 1300))


def test_roundtrip_preserves_answers(built, tmp_path):
    path = tmp_path / f"x.{built.kind}"
    built.save(path)
    back = load_index(path)
    assert type(back) is type(built)
    assert answers(back) == answers(built)
    assert back.params() == built.params()
    assert dumps(back) == dumps(built)
    assert type(built).load(path).kind == built.kind


def test_header_layout(built):
    data = dumps(built)
    assert data[:4] == MAGIC
    assert int.from_bytes(data[4:8], "little") == 1
    assert data[8] == KIND_TAGS[built.kind]
    assert int.from_bytes(data[9:17], "little") == len(TEXT) + 1


def test_truncation_and_corruption_rejected(built):
    data = dumps(built)
    for cut in (0, 3, 10, len(data) // 2, len(data) - 1):
        with pytest.raises(IndexFormatError):
            loads(data[:cut])
    for pos in (5, 9, 30, len(data) // 2, len(data) - 12):
        bad = bytearray(data)
        bad[pos] ^= 0x40
        with pytest.raises(IndexFormatError):
            loads(bytes(bad))


def test_cross_kind_load(tmp_path):
    path = tmp_path / "a.ssa"
    SsaIndex.build(b"abracadabra").save(path)
    with pytest.raises(KindMismatchError):
        CsaIndex.load(path)
    with pytest.raises(KindMismatchError):
        load_index(path, expect="lz")


def test_failed_save_leaves_no_partial_file(tmp_path):
    path = tmp_path / "missing-dir" / "x.idx"
    with pytest.raises(OSError):
        SsaIndex.build(b"abc").save(path)
    assert not path.exists()
