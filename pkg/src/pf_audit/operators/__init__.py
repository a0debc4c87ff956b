"""Differential operators over QQ(t) and their local analysis."""
