"""Small parsers for command-line and config values."""

from typing import (
    List,
    Tuple,
)


def parse_window(text: str) -> Tuple[float, float]:
    """Parse a time window written as ``t0:t1``.

    Args:
        text: Window text, e.g. ``"5:150"``.

    Returns:
        Tuple[float, float]: The window bounds.

    Raises:
        ValueError: If the text is malformed or t1 <= t0.
    """
    parts = text.strip().split(":")
    if len(parts) != 2:
        raise ValueError(f"window must be written t0:t1, got {text!r}")
    t0, t1 = float(parts[0]), float(parts[1])
    if not t1 > t0:
        raise ValueError(f"window end must exceed its start, got {text!r}")
    return t0, t1


def parse_window_list(text: str) -> List[Tuple[float, float]]:
    """Parse a comma-separated list of ``t0:t1`` windows."""
    return [parse_window(item) for item in split_list(text)]


def parse_float_list(text: str) -> List[float]:
    """Parse a comma-separated list of floats."""
    return [float(item) for item in split_list(text)]


def split_list(text: str) -> List[str]:
    """Split a comma-separated list, dropping blanks."""
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_switch(text: str) -> bool:
    """Parse an on/off switch."""
    value = text.strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on or off, got {text!r}")
