"""File storage for configs, snapshots and diagnostics series."""

from .config_loader import (
    load_config,
    parse_config,
    render_config,
)
from .series_store import (
    SeriesWriter,
    parse_series,
    read_series,
    uniform_spacing,
    write_series,
)
from .snapshot_store import (
    decode_snapshot,
    encode_snapshot,
    read_snapshot,
    write_snapshot,
)

__all__ = [
    "SeriesWriter",
    "decode_snapshot",
    "encode_snapshot",
    "load_config",
    "parse_config",
    "parse_series",
    "read_series",
    "read_snapshot",
    "render_config",
    "uniform_spacing",
    "write_series",
    "write_snapshot",
]
