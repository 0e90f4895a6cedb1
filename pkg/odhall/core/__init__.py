"""Process-level settings and logging."""
