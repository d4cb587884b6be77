"""Integration tests for heydecheck."""
