"""Typed message buffers: numpy arrays framed with 8-byte length prefixes."""

import struct
from typing import List, Sequence

import numpy as np

_LENGTH = struct.Struct("<q")


def pack_arrays(*arrays: np.ndarray) -> bytes:
    """Concatenate raw array buffers, each preceded by its byte length."""
    frames = []
    for array in arrays:
        raw = np.ascontiguousarray(array).tobytes()
        frames.append(_LENGTH.pack(len(raw)))
        frames.append(raw)
    return b"".join(frames)


def unpack_arrays(payload: bytes, dtypes: Sequence[np.dtype]) -> List[np.ndarray]:
    """Inverse of pack_arrays; receivers know the dtypes, as with typed MPI buffers."""
    arrays = []
    offset = 0
    for dtype in dtypes:
        (length,) = _LENGTH.unpack_from(payload, offset)
        offset += _LENGTH.size
        arrays.append(np.frombuffer(payload[offset : offset + length], dtype=dtype).copy())
        offset += length
    return arrays
