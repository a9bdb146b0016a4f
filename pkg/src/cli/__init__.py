"""Command-line configuration and commands."""
