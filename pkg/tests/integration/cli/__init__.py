"""Command-line integration tests."""
