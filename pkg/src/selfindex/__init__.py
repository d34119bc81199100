"""Compressed self-indexes over byte texts: FM-index variants, a compressed
suffix array and an LZ78 index, with a common query surface, a file format
and a benchmark harness."""

from .contract import SelfIndex, SpaceReport
from .fileformat import KIND_TAGS, KindMismatchError, index_class, load_index, save_index
from .binio import IndexFormatError
from .textcore import IntegrityError

__all__ = [
    "SelfIndex", "SpaceReport", "KIND_TAGS", "KindMismatchError", "IndexFormatError",
    "IntegrityError", "index_class", "load_index", "save_index", "build_index",
]


def build_index(kind: str, text: bytes, **params) -> SelfIndex:
    """Build an index of the given kind (see ``KIND_TAGS``)."""
    return index_class(kind).build(text, **params)
