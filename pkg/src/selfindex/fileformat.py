"""Index file format.

    magic "PCIX" | u32 version | u8 kind | u64 n | u32 sigma
    | u16 alphabet length + alphabet bytes
    | u16 parameter count + (u8 key length, key, i64 value)*
    | u64 payload length + payload
    | u64 checksum (first 8 bytes of BLAKE2b over everything before it)

All integers little-endian.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .binio import IndexFormatError, Reader, Writer

MAGIC = b"PCIX"
VERSION = 1
KIND_TAGS = {"plain_sa": 0, "ssa": 1, "af": 2, "fmi2": 3, "csa": 4, "lz": 5}
TAG_KINDS = {v: k for k, v in KIND_TAGS.items()}


class KindMismatchError(IndexFormatError):
    """The file holds a different index kind than the one requested."""


def index_class(kind: str):
    from .csa import CsaIndex
    from .fm_af import AfIndex
    from .fm_ssa import SsaIndex
    from .fmi2 import Fmi2Index
    from .lz_index import LzIndex
    from .plain import PlainSaIndex

    classes = {c.kind: c for c in (PlainSaIndex, SsaIndex, AfIndex, Fmi2Index, CsaIndex, LzIndex)}
    try:
        return classes[kind]
    except KeyError:
        raise ValueError(f"unknown index kind {kind!r}; choose from {sorted(classes)}") from None


def _checksum(data: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def dumps(index) -> bytes:
    w = Writer()
    w.raw(MAGIC)
    w.u32(VERSION)
    w.u8(KIND_TAGS[index.kind])
    w.u64(index.n)
    w.u32(index.sigma)
    w.u16(len(index.alphabet))
    w.raw(index.alphabet)
    params = index.params()
    w.u16(len(params))
    for key, value in sorted(params.items()):
        k = key.encode("ascii")
        w.u8(len(k))
        w.raw(k)
        w.i64(int(value))
    body = Writer()
    index.write_payload(body)
    w.blob(body.getvalue())
    head = w.getvalue()
    return head + _checksum(head).to_bytes(8, "little")


def loads(data: bytes, expect: str | None = None):
    if len(data) < 8 + len(MAGIC):
        raise IndexFormatError("truncated index file")
    head, tail = data[:-8], data[-8:]
    if data[:4] != MAGIC:
        raise IndexFormatError("bad magic; not an index file")
    if _checksum(head) != int.from_bytes(tail, "little"):
        raise IndexFormatError("checksum mismatch; file is corrupted or truncated")
    r = Reader(head, 4)
    version = r.u32()
    if version != VERSION:
        raise IndexFormatError(f"unsupported format version {version}")
    tag = r.u8()
    kind = TAG_KINDS.get(tag)
    if kind is None:
        raise IndexFormatError(f"unknown index kind tag {tag}")
    if expect is not None and kind != expect:
        raise KindMismatchError(f"file holds a {kind!r} index, expected {expect!r}")
    n = r.u64()
    sigma = r.u32()
    alphabet = bytes(r.take(r.u16()))
    if sigma != len(alphabet) + 1:
        raise r.corrupt("sigma does not match the alphabet")
    params = {}
    for _ in range(r.u16()):
        key = bytes(r.take(r.u8())).decode("ascii")
        params[key] = r.i64()
    payload = r.blob()
    if not r.at_end():
        raise r.corrupt("trailing bytes after payload")
    pr = Reader(payload)
    index = index_class(kind).read_payload(pr, n, alphabet, params)
    if not pr.at_end():
        raise pr.corrupt("trailing bytes inside payload")
    return index


def save_index(index, path) -> None:
    data = dumps(index)
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def load_index(path, expect: str | None = None):
    return loads(Path(path).read_bytes(), expect)
