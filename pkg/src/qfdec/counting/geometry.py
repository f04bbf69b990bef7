"""Finite checks on the surface (r, t, r^2, r t).

``strip_energy`` counts additive quadruples on a thin strip of the lattice
surface; ``transversality_overlap`` checks that near-coincident sums of caps
from two separated strips come from nearby caps.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ScaleTooLarge
from .energy import energy_from_vectors
from .records import CountRecord, Method

OVERLAP_LIMIT = 10**8


def strip_points(N: int) -> np.ndarray:
    """Rows (n1, n2, n1^2, n1 n2) for n1 <= isqrt(N), n2 <= N."""
    m = math.isqrt(N)
    n1, n2 = (a.ravel() for a in np.meshgrid(np.arange(m + 1, dtype=np.int64),
                                            np.arange(N + 1, dtype=np.int64), indexing="ij"))
    return np.stack([n1, n2, n1 * n1, n1 * n2], axis=1)


def strip_energy(N: int) -> CountRecord:
    if N < 0:
        raise ValueError("N must be >= 0")
    t0 = time.perf_counter()
    count = energy_from_vectors(strip_points(N), 2)
    return CountRecord(N, 2, count, Method.STRIP_ENERGY, time.perf_counter() - t0)


def strip_energy_formula(N: int) -> int:
    """Closed form from splitting on the n1-multiset: diagonal rows plus matched pairs."""
    m = math.isqrt(N)
    line = (N + 1) * (2 * N * N + 4 * N + 3) // 3  # additive quadruples in [0, N]
    return (m + 1) * line + 2 * m * (m + 1) * (N + 1) ** 2


@dataclass(frozen=True)
class OverlapReport:
    K: int
    grid_inverse: int
    strips: tuple       # the j' values examined (j = 0 throughout)
    near_pairs: int     # matched 4-tuples, identical ones included
    max_ratio: float
    max_r_ratio: float  # max |r1 - r3| / (K delta) and |r2 - r4| / (K delta)
    max_t_ratio: float  # same for t with K^2 delta

    @property
    def bounded(self) -> bool:
        return self.max_ratio <= 16


def _strip_grid(j: int, K: int, G: int) -> np.ndarray:
    width = G // K
    R, T = np.meshgrid(np.arange(j * width, (j + 1) * width, dtype=np.int64),
                       np.arange(G, dtype=np.int64), indexing="ij")
    return np.stack([R.ravel(), T.ravel()], axis=1)


def transversality_overlap(K: int, grid_inverse: int, j_prime=None) -> OverlapReport:
    """Largest displacement, in units K*delta (r) and K^2*delta (t), between caps whose sums agree to delta.

    Coordinates are integers on the delta-grid (r = R/G, t = T/G with G = 1/delta);
    the surface map scaled by G^2 is (R G, T G, R^2, R T), so agreement to delta
    becomes agreement to G in every component, checked exactly.
    """
    G = grid_inverse
    if K < 4 or G < 4 * K or G % K:
        raise ValueError("need K >= 4 and grid_inverse a multiple of K with grid_inverse >= 4K")
    strips = tuple(range(2, K)) if j_prime is None else (int(j_prime),)
    if any(jp < 2 or jp >= K for jp in strips):
        raise ValueError("j' must satisfy 2 <= j' < K")
    first = _strip_grid(0, K, G)
    n_pairs = len(first) * len(first)
    if n_pairs > OVERLAP_LIMIT:
        raise ScaleTooLarge(f"{n_pairs} cap pairs per strip exceeds {OVERLAP_LIMIT}")
    near = 0
    r_ratio = t_ratio = 0.0
    for jp in strips:
        second = _strip_grid(jp, K, G)
        i1, i2 = (a.ravel() for a in np.meshgrid(np.arange(len(first)), np.arange(len(second)),
                                                 indexing="ij"))
        p1, p2 = first[i1], second[i2]
        phi = (np.stack([p1[:, 0] * G, p1[:, 1] * G, p1[:, 0] ** 2, p1[:, 0] * p1[:, 1]], 1)
               + np.stack([p2[:, 0] * G, p2[:, 1] * G, p2[:, 0] ** 2, p2[:, 0] * p2[:, 1]], 1))
        tree = cKDTree(phi.astype(float))
        pairs = tree.query_pairs(r=G + 0.5, p=np.inf, output_type="ndarray")
        if len(pairs):
            a, b = pairs[:, 0], pairs[:, 1]
            close = np.all(np.abs(phi[a] - phi[b]) <= G, axis=1)
            a, b = a[close], b[close]
            near += 2 * len(a)
            if len(a):
                dr = np.maximum(np.abs(p1[a, 0] - p1[b, 0]), np.abs(p2[a, 0] - p2[b, 0]))
                dt = np.maximum(np.abs(p1[a, 1] - p1[b, 1]), np.abs(p2[a, 1] - p2[b, 1]))
                r_ratio = max(r_ratio, float(dr.max()) / K)
                t_ratio = max(t_ratio, float(dt.max()) / K ** 2)
        near += len(phi)  # each tuple matches itself
    return OverlapReport(K, G, strips, near, max(r_ratio, t_ratio), r_ratio, t_ratio)
