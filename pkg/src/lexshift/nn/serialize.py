"""Versioned flat model container shared by both classifiers.

Byte layout (little-endian throughout):

    offset  size          content
    0       4             magic b"LXNN"
    4       4             format version, uint32 (currently 1)
    8       8             header length H, uint64
    16      H             header: UTF-8 JSON with sorted keys
    16+H    ...           raw array data, concatenated

The header object holds:

    {"kind": str,                       # model identifier
     "config": {...},                   # TrainConfig fields
     "meta": {...},                     # vocabularies and sizes
     "arrays": [{"name": str, "shape": [int, ...]}, ...]}

Arrays are stored in header order (names sorted), each as row-major
(C-order) float64, concatenated with no padding.
"""

import json
import struct

import numpy as np

from ..errors import ParseError
from ..fileio import atomic_write

MAGIC = b"LXNN"
VERSION = 1


def save_model(path, kind: str, config: dict, meta: dict, arrays: dict):
    names = sorted(arrays)
    header = {
        "kind": kind,
        "config": config,
        "meta": meta,
        "arrays": [{"name": n, "shape": list(arrays[n].shape)} for n in names],
    }
    header_bytes = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with atomic_write(path, mode="wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<Q", len(header_bytes)))
        fh.write(header_bytes)
        for name in names:
            fh.write(np.ascontiguousarray(arrays[name], dtype=np.float64).tobytes())


def load_model(path):
    """Returns (kind, config dict, meta dict, arrays dict)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ParseError("not a model container (bad magic)", path)
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != VERSION:
        raise ParseError(f"unsupported container version {version}", path)
    (header_len,) = struct.unpack_from("<Q", blob, 8)
    try:
        header = json.loads(blob[16 : 16 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"corrupt model header: {exc}", path) from None
    offset = 16 + header_len
    arrays = {}
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 8
        if offset + nbytes > len(blob):
            raise ParseError(f"truncated array data for {entry['name']!r}", path)
        arrays[entry["name"]] = (
            np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
            .reshape(shape)
            .copy()
        )
        offset += nbytes
    if offset != len(blob):
        raise ParseError("trailing bytes after last array", path)
    return header["kind"], header["config"], header["meta"], arrays
