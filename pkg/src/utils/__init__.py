"""Worker pools and output helpers."""
