from __future__ import annotations

import numpy as np

from ..errors import DegenerateInput


def fit_exponent(samples):
    """Least-squares slope of log(count) against log(N), and the largest absolute log residual."""
    samples = list(samples)
    if len(samples) < 3:
        raise DegenerateInput("need at least 3 samples")
    n = np.array([float(a) for a, _ in samples])
    c = np.array([float(b) for _, b in samples])
    if np.any(n <= 0) or np.any(c <= 0):
        raise DegenerateInput("N and counts must be positive")
    if np.any(np.diff(n) <= 0):
        raise DegenerateInput("N must be strictly increasing")
    x, y = np.log(n), np.log(c)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), residual
