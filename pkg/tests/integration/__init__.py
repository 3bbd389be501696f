"""Integration tests for treeloc."""
