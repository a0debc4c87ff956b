"""Exact arithmetic over QQ(t): rationals, polynomials, parsing and linear algebra."""
