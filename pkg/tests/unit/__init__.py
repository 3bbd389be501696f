"""Unit tests for treeloc."""
