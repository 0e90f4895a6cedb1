"""Shared helpers."""

from .parsing import (
    parse_float_list,
    parse_switch,
    parse_window,
    parse_window_list,
    split_list,
)

__all__ = [
    "parse_float_list",
    "parse_switch",
    "parse_window",
    "parse_window_list",
    "split_list",
]
