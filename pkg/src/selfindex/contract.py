"""The common self-index surface shared by every index kind."""

from __future__ import annotations

from typing import ClassVar, NamedTuple

import numpy as np

from .binio import Reader, Writer


class SpaceReport(NamedTuple):
    payload: int     # bits for the searchable representation
    sampling: int    # bits for locate/extract samples
    total: int


class SelfIndex:
    """count / locate / extract over a byte text.

    Subclasses set ``n`` (text length including the terminator) and
    ``alphabet`` (sorted distinct bytes, code c <-> alphabet[c - 1]).
    Patterns are bytes; positions are 1-based.
    """

    kind: ClassVar[str] = ""
    n: int
    alphabet: bytes

    def _init_alphabet(self, alphabet: bytes) -> None:
        self.alphabet = alphabet
        table = np.full(256, -1, dtype=np.int16)
        for c, b in enumerate(alphabet, start=1):
            table[b] = c
        self._table = table
        self._translate = bytes(int(x) & 0xFF for x in table)

    @property
    def sigma(self) -> int:
        return len(self.alphabet) + 1

    @property
    def text_length(self) -> int:
        return self.n - 1

    def pattern_codes(self, pattern: bytes) -> list[int] | None:
        if not pattern:
            raise ValueError("empty pattern")
        pattern = bytes(pattern)
        if pattern.translate(None, self.alphabet):
            return None
        return list(pattern.translate(self._translate))

    def extract_range(self, l: int, r: int) -> tuple[int, int]:
        """Validate 1 <= l <= r and clamp r to the text length."""
        if l < 1 or r < l or l > self.n - 1:
            raise IndexError(f"extract range [{l}, {r}] outside 1..{self.n - 1}")
        return l, min(r, self.n - 1)

    def unmap(self, codes) -> bytes:
        lut = b"\x00" + self.alphabet
        return bytes(lut[c] for c in codes)

    # -- to implement ---------------------------------------------------------
    def count(self, pattern: bytes) -> int:
        raise NotImplementedError

    def locate(self, pattern: bytes, stats: list | None = None) -> list[int]:
        """Sorted occurrence positions. When ``stats`` is given, the number of
        walk steps (or phases) spent per located row is appended to it."""
        raise NotImplementedError

    def extract(self, l: int, r: int) -> bytes:
        raise NotImplementedError

    def size_bits(self) -> SpaceReport:
        raise NotImplementedError

    def params(self) -> dict[str, int]:
        return {}

    def write_payload(self, w: Writer) -> None:
        raise NotImplementedError

    @classmethod
    def read_payload(cls, r: Reader, n: int, alphabet: bytes, params: dict[str, int]):
        raise NotImplementedError

    # -- persistence ----------------------------------------------------------
    def save(self, path) -> None:
        from .fileformat import save_index
        save_index(self, path)

    @classmethod
    def load(cls, path):
        from .fileformat import load_index
        return load_index(path, expect=cls.kind or None)
