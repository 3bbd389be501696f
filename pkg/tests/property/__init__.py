"""Property-based tests for treeloc."""
