"""Numeric periods and normal functions of the Legendre family."""
