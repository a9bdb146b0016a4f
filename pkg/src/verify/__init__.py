"""Test boundary maps and numerical checks of the theorems."""
