"""Little-endian binary writer/reader used by every serialized structure."""

from __future__ import annotations

import struct

import numpy as np


class IndexFormatError(ValueError):
    """Malformed, truncated or corrupted index data."""


class Writer:
    def __init__(self) -> None:
        self._parts: list[bytes] = []

    def raw(self, b: bytes) -> None:
        self._parts.append(bytes(b))

    def u8(self, x: int) -> None:
        self._parts.append(struct.pack("<B", x))

    def u16(self, x: int) -> None:
        self._parts.append(struct.pack("<H", x))

    def u32(self, x: int) -> None:
        self._parts.append(struct.pack("<I", x))

    def u64(self, x: int) -> None:
        self._parts.append(struct.pack("<Q", x))

    def i64(self, x: int) -> None:
        self._parts.append(struct.pack("<q", x))

    def f64(self, x: float) -> None:
        self._parts.append(struct.pack("<d", x))

    def blob(self, b: bytes) -> None:
        self.u64(len(b))
        self.raw(b)

    def u64_array(self, values) -> None:
        self._parts.append(np.asarray(values, dtype="<u8").tobytes())

    def array(self, values, dtype: str) -> None:
        """Length-prefixed numpy array of the given little-endian dtype."""
        arr = np.asarray(values, dtype=dtype)
        self.u64(arr.size)
        self._parts.append(arr.tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes, pos: int = 0) -> None:
        self.data = memoryview(data)
        self.pos = pos

    def corrupt(self, msg: str) -> IndexFormatError:
        return IndexFormatError(f"{msg} (at byte {self.pos})")

    def take(self, k: int) -> memoryview:
        if k < 0 or self.pos + k > len(self.data):
            raise self.corrupt(f"truncated: wanted {k} bytes")
        v = self.data[self.pos:self.pos + k]
        self.pos += k
        return v

    def _unpack(self, fmt: str, size: int):
        return struct.unpack(fmt, self.take(size))[0]

    def u8(self) -> int:
        return self._unpack("<B", 1)

    def u16(self) -> int:
        return self._unpack("<H", 2)

    def u32(self) -> int:
        return self._unpack("<I", 4)

    def u64(self) -> int:
        return self._unpack("<Q", 8)

    def i64(self) -> int:
        return self._unpack("<q", 8)

    def f64(self) -> float:
        return self._unpack("<d", 8)

    def blob(self) -> bytes:
        return bytes(self.take(self.u64()))

    def u64_array(self, count: int) -> list[int]:
        return np.frombuffer(self.take(8 * count), dtype="<u8").tolist()

    def array(self, dtype: str) -> np.ndarray:
        count = self.u64()
        dt = np.dtype(dtype)
        return np.frombuffer(self.take(count * dt.itemsize), dtype=dt).copy()

    def at_end(self) -> bool:
        return self.pos == len(self.data)
