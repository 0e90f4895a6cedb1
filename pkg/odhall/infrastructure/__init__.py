"""Persistence: run configuration files, snapshots and diagnostics series."""
