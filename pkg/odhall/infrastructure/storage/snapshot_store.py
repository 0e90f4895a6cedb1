"""Binary snapshots of spectral states.

Layout (little endian): a fixed header

    magic "ODHL" | version u32 | model tag u8 | n u32 | L f64 | t f64 |
    gamma f64 | b f64 | field count u8

followed by every component's n x n coefficient array as interleaved
(re, im) f64 pairs, row-major, in canonical field order.
"""

import struct
from pathlib import Path
from typing import (
    Tuple,
    Union,
)

import numpy as np

from odhall.core.logging import logger
from odhall.domain.entities import (
    Grid,
    HallMhdParams,
    ModelKind,
    ModelState,
    OldroydParams,
    state_type,
)
from odhall.shared.constants import (
    MODEL_TAGS,
    SNAPSHOT_DTYPE,
    SNAPSHOT_FORMAT_VERSION,
    SNAPSHOT_HEADER_FORMAT,
    SNAPSHOT_MAGIC,
)
from odhall.shared.exceptions import (
    OutputWriteError,
    SnapshotFormatError,
    SnapshotVersionError,
    StorageError,
    TruncatedPayloadError,
)

HEADER_SIZE = struct.calcsize(SNAPSHOT_HEADER_FORMAT)
_KINDS_BY_TAG = {tag: ModelKind(name) for name, tag in MODEL_TAGS.items()}

PathLike = Union[str, Path]


def encode_snapshot(state: ModelState, t: float) -> bytes:
    """Serialise a state taken at time t."""
    grid = state.grid
    array = state.to_array()
    b = getattr(state.params, "b", 0.0)
    header = struct.pack(
        SNAPSHOT_HEADER_FORMAT,
        SNAPSHOT_MAGIC,
        SNAPSHOT_FORMAT_VERSION,
        MODEL_TAGS[state.kind.value],
        grid.n,
        float(grid.box_length),
        float(t),
        float(state.params.gamma),
        float(b),
        array.shape[0],
    )
    return header + np.ascontiguousarray(array, dtype=SNAPSHOT_DTYPE).tobytes()


def decode_snapshot(data: bytes, path: PathLike = None) -> Tuple[ModelState, float]:
    """Rebuild (state, t) from snapshot bytes.

    Raises:
        SnapshotFormatError: If the magic, model tag or field count is wrong
        SnapshotVersionError: If the format version is not supported
        TruncatedPayloadError: If the payload length does not match the header
    """
    if len(data) < len(SNAPSHOT_MAGIC) or data[: len(SNAPSHOT_MAGIC)] != SNAPSHOT_MAGIC:
        raise SnapshotFormatError("Not a snapshot file (bad magic)", path)
    if len(data) < HEADER_SIZE:
        raise TruncatedPayloadError(HEADER_SIZE, len(data), path)

    magic, version, tag, n, box_length, t, gamma, b, field_count = struct.unpack(
        SNAPSHOT_HEADER_FORMAT, data[:HEADER_SIZE]
    )
    if version != SNAPSHOT_FORMAT_VERSION:
        raise SnapshotVersionError(version, SNAPSHOT_FORMAT_VERSION, path)
    if tag not in _KINDS_BY_TAG:
        raise SnapshotFormatError(f"Unknown model tag {tag}", path)
    kind = _KINDS_BY_TAG[tag]
    cls = state_type(kind)
    if field_count != len(cls.FIELD_NAMES):
        raise SnapshotFormatError(
            f"Model {kind.value} has {len(cls.FIELD_NAMES)} fields, header says {field_count}", path
        )

    expected = field_count * n * n * np.dtype(SNAPSHOT_DTYPE).itemsize
    payload = data[HEADER_SIZE:]
    if len(payload) != expected:
        raise TruncatedPayloadError(expected, len(payload), path)

    grid = Grid(int(n), box_length)
    array = np.frombuffer(payload, dtype=SNAPSHOT_DTYPE).reshape(field_count, n, n)
    array = array.astype(np.complex128)
    if kind == ModelKind.OLDROYD:
        params = OldroydParams(gamma=gamma, b=b)
    else:
        params = HallMhdParams(gamma=gamma)
    return cls.from_array(grid, array, params), t


def write_snapshot(path: PathLike, state: ModelState, t: float) -> Path:
    """Write a snapshot file.

    Raises:
        OutputWriteError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.write_bytes(encode_snapshot(state, t))
    except OSError as e:
        raise OutputWriteError(f"Cannot write snapshot: {e}", path)
    logger.info("snapshot_written", path=str(path), t=t, model=state.kind.value)
    return path


def read_snapshot(path: PathLike) -> Tuple[ModelState, float]:
    """Read a snapshot file written by ``write_snapshot``."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise StorageError(f"Cannot read snapshot: {e}", path)
    return decode_snapshot(data, path)
