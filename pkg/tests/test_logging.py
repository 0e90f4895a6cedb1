"""Tests for the logging setup."""

import json
import logging

import pytest
import structlog

from odhall.core.logging import (
    JsonlFileHandler,
    add_environment,
    get_structlog_processors,
    run_context,
)

pytestmark = pytest.mark.unit


class TestJsonlFileHandler:
    """Daily JSONL file handler."""

    def test_appends_one_object_per_record(self, tmp_path):
        path = tmp_path / "odhall.jsonl"
        handler = JsonlFileHandler(path)
        for message in ("run_started", "run_finished"):
            record = logging.LogRecord("odhall", logging.INFO, __file__, 1, message, None, None)
            handler.emit(record)
        entries = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
        assert [entry["event"] for entry in entries] == ["run_started", "run_finished"]
        assert all(entry["level"] == "INFO" and "process" in entry for entry in entries)
        assert entries[0]["environment"] == "test"


class TestProcessors:
    """structlog processor chain."""

    def test_environment_is_added(self):
        assert add_environment(None, None, {"event": "x"}) == {"event": "x", "environment": "test"}

    def test_context_merge_comes_first(self):
        processors = get_structlog_processors(include_file_info=False)
        assert processors[0] is structlog.contextvars.merge_contextvars
        assert add_environment in processors

    def test_run_context_binds_and_clears(self):
        with run_context(model="oldroyd", n=16):
            bound = structlog.contextvars.get_contextvars()
            assert bound["model"] == "oldroyd" and bound["n"] == 16
        assert "model" not in structlog.contextvars.get_contextvars()
