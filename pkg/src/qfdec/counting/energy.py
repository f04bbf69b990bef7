"""Exact additive energy of integer surface points.

J_{S,s}(N) = sum_v r_s(v)^2 where r_s(v) counts s-tuples of points of
{(x, y, z, P, Q)} summing to v. Sums are packed into one int64 key and
counted per block of equal x-sum: keys from different blocks never collide,
so each block is counted on its own and the totals just add.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import MemoryBudgetExceeded, NonIntegerCoefficients, PackingOverflow, ScaleTooLarge
from ..formalg.forms import FormPair
from .records import CountRecord, Method

DEFAULT_MEMORY_BUDGET = 8 * 2**30
BRUTE_FORCE_LIMIT = 10**9
# Bytes per candidate key while a block is counted (keys, weights, sort scratch).
_BYTES_PER_KEY = 40


@dataclass(frozen=True)
class SurfacePoint:
    x: int
    y: int
    z: int
    p_val: int
    q_val: int


def _integer_coeffs(pair: FormPair):
    out = []
    for form in pair.forms():
        if not form.is_integral():
            raise NonIntegerCoefficients(f"form {form} has non-integer coefficients")
        out.append([int(c) for c in form.coeffs()])
    return out


def point_array(pair: FormPair, N: int) -> np.ndarray:
    """All (N+1)^3 rows (x, y, z, P, Q) as int64, x slowest."""
    if N < 0:
        raise ValueError("N must be >= 0")
    cp, cq = _integer_coeffs(pair)
    g = np.arange(N + 1, dtype=np.int64)
    x, y, z = (a.ravel() for a in np.meshgrid(g, g, g, indexing="ij"))
    monos = (x * x, y * y, z * z, x * y, x * z, y * z)
    p = sum(c * m for c, m in zip(cp, monos))
    q = sum(c * m for c, m in zip(cq, monos))
    return np.stack([x, y, z, p, q], axis=1)


def surface_points(pair: FormPair, N: int) -> list:
    return [SurfacePoint(*map(int, row)) for row in point_array(pair, N)]


def as_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return points.astype(np.int64, copy=False)
    return np.array([[p.x, p.y, p.z, p.p_val, p.q_val] for p in points], dtype=np.int64)


@dataclass(frozen=True)
class PackedLayout:
    """Bit layout packing a sum of s points into one nonnegative int64.

    Each coordinate is shifted by its minimum over the point set, so a sum of
    s shifted points lies in [0, s * span]; the field is wide enough for that.
    """

    offsets: tuple
    widths: tuple
    s: int

    @classmethod
    def for_points(cls, vecs: np.ndarray, s: int) -> "PackedLayout":
        lo = vecs.min(axis=0)
        span = vecs.max(axis=0) - lo
        widths = tuple(max(1, int(s * int(w)).bit_length()) for w in span)
        if sum(widths) > 62:
            raise PackingOverflow(f"{sum(widths)} bits needed for s={s}; at most 62 fit in a key")
        return cls(tuple(int(v) for v in lo), widths, s)

    @property
    def shifts(self) -> tuple:
        out, acc = [], 0
        for w in reversed(self.widths):
            out.append(acc)
            acc += w
        return tuple(reversed(out))

    def encode(self, vecs: np.ndarray) -> np.ndarray:
        """Keys of single points; sums of s keys are keys of sums."""
        shifted = vecs - np.array(self.offsets, dtype=np.int64)
        key = np.zeros(len(vecs), dtype=np.int64)
        for c, sh in enumerate(self.shifts):
            key |= shifted[:, c] << sh
        return key

    def decode(self, keys, count: int = None) -> np.ndarray:
        """Coordinate sums for keys that are sums of ``count`` points (default s)."""
        count = self.s if count is None else count
        keys = np.asarray(keys, dtype=np.int64)
        cols = [((keys >> sh) & ((1 << w) - 1)) + count * off
                for sh, w, off in zip(self.shifts, self.widths, self.offsets)]
        return np.stack(cols, axis=-1)


def _square_sum(w: np.ndarray) -> int:
    if len(w) and int(w.max()) ** 2 * len(w) < 2**62:
        return int(np.dot(w, w))
    return sum(int(v) ** 2 for v in w)


def _count_block(parts, strategy):
    keys = np.concatenate([k for k, _ in parts])
    weights = np.concatenate([w for _, w in parts])
    if strategy == "table" and _all_ones(weights):
        base = int(keys.min())
        counts = np.bincount(keys - base)
        nz = np.flatnonzero(counts)
        return nz + base, counts[nz].astype(np.int64)
    order = np.argsort(keys, kind="stable")
    keys, weights = keys[order], weights[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    return keys[starts], np.add.reduceat(weights, starts)


def _all_ones(w) -> bool:
    return bool(np.all(w == 1))


def energy_from_vectors(vecs: np.ndarray, s: int, memory_budget=DEFAULT_MEMORY_BUDGET,
                        strategy="auto", threads=1) -> int:
    """Exact sum over v of r_s(v)^2 for integer vectors; column 0 drives the partition."""
    if s < 1:
        raise ValueError("s must be >= 1")
    vecs = np.asarray(vecs, dtype=np.int64)
    layout = PackedLayout.for_points(vecs, s)
    keys = layout.encode(vecs)
    first = vecs[:, 0] - vecs[:, 0].min()
    singles = {}
    for a in np.unique(first):
        sel = keys[first == a]
        singles[int(a)] = (sel, np.ones(len(sel), dtype=np.int64))
    cur = singles
    top = int(first.max())
    for k in range(1, s):
        def block(X, cur=cur, k=k):
            parts = []
            for a in range(max(0, X - top), min(X, k * top) + 1):
                if a in cur and X - a in singles:
                    k1, w1 = cur[a]
                    k2, _ = singles[X - a]
                    parts.append(((k1[:, None] + k2[None, :]).ravel(),
                                  np.repeat(w1, len(k2))))
            if not parts:
                return X, None
            return X, _count_block(parts, _pick(strategy, parts, memory_budget))

        sizes = {X: sum(len(cur[a][0]) * len(singles[X - a])
                        for a in range(max(0, X - top), min(X, k * top) + 1)
                        if a in cur and X - a in singles)
                 for X in range(0, (k + 1) * top + 1)}
        need = max(sizes.values()) * _BYTES_PER_KEY * max(1, threads)
        if need > memory_budget:
            raise MemoryBudgetExceeded(
                f"largest block needs ~{need} bytes; budget is {memory_budget} bytes")
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            done = dict(pool.map(block, range(0, (k + 1) * top + 1)))
        cur = {X: v for X, v in done.items() if v is not None}
    return sum(_square_sum(w) for _, w in cur.values())


def _pick(strategy, parts, budget):
    if strategy != "auto":
        return strategy
    lo = min(int(k.min()) for k, _ in parts)
    hi = max(int(k.max()) for k, _ in parts)
    return "table" if (hi - lo + 1) * 8 <= min(budget, 2**28) else "sort"


def energy_count(points, s: int, memory_budget=DEFAULT_MEMORY_BUDGET, strategy="auto",
                 threads=1) -> CountRecord:
    """J_{S,s}(N) by counting representations of packed sums."""
    if s not in (1, 2, 3):
        raise ValueError("s must be 1, 2 or 3")
    vecs = as_array(points)
    t0 = time.perf_counter()
    count = energy_from_vectors(vecs, s, memory_budget, strategy, threads)
    return CountRecord(int(vecs[:, :3].max()), s, count, Method.HASH_ENERGY,
                       time.perf_counter() - t0)


def brute_force_energy(points, s: int) -> CountRecord:
    """Ground truth: compare every s-tuple sum with every other, all five coordinates."""
    vecs = as_array(points)
    m = len(vecs)
    if m ** (2 * s) > BRUTE_FORCE_LIMIT:
        raise ScaleTooLarge(f"{m}^{2 * s} tuples exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    t0 = time.perf_counter()
    sums = np.zeros((1, vecs.shape[1]), dtype=np.int64)
    for _ in range(s):
        sums = (sums[:, None, :] + vecs[None, :, :]).reshape(-1, vecs.shape[1])
    count = 0
    chunk = max(1, 2_000_000 // len(sums))
    for i in range(0, len(sums), chunk):
        left = sums[i:i + chunk]
        eq = np.ones((len(left), len(sums)), dtype=bool)
        for c in range(vecs.shape[1]):
            eq &= left[:, None, c] == sums[None, :, c]
        count += int(eq.sum())
    return CountRecord(int(vecs[:, :3].max()), s, count, Method.BRUTE_FORCE,
                       time.perf_counter() - t0)
