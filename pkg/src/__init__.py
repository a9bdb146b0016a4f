"""Heinz constants toolkit package."""
