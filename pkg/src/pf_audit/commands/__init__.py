"""Audit commands."""
