"""Classification, exponents and counting for pairs of ternary quadratic forms."""

__version__ = "0.1.0"
