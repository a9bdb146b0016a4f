"""Verification reports and output formatting."""
