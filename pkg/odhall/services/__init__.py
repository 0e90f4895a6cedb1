"""Application services: time stepping, initial data, diagnostics and runs."""
