"""treeloc - tree-structured sensor network localization packages."""
