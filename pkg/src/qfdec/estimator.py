"""L^p norms of the periodic exponential sum E(x) = sum_n e(x . Phi(n)) on the 5-torus.

Phi(n) = (n1, n2, n3, P(n), Q(n)) for n in [0, N]^3. At p = 2s the norm is
exactly J_{S,s}(N)^{1/(2s)}; other p are estimated by sampling.

The normalised ratio R(N, p) = ||E||_p / (N+1)^{3/p} compares the sum against
one unit-size exponential per cap; its growth exponent in N is the quantity
compared with the sharp decoupling exponent.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import exponents
from .counting import energy_count, fast_count_parabolic, fit_exponent, point_array
from .errors import BadSampleCount, InputError, PrecisionLoss
from .formalg import FormClass, canonical_pair, classify
from .formalg.forms import FormPair

MIN_SAMPLES = 10**4
MC_MAX_N = 64
BATCH = 4096
MAX_DENOMINATOR = 8
UNIFORM_SHARE = 0.5


class EstimateMethod(str, enum.Enum):
    EXACT_EVEN_P = "ExactEvenP"
    MONTE_CARLO = "MonteCarlo"
    STRATIFIED = "Stratified"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EstimateRecord:
    N: int
    p: float
    estimate: float
    std_error: float
    samples: int
    method: EstimateMethod
    seed: Optional[int] = None
    exact_count: Optional[int] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        return d


def _even_s(p) -> Optional[int]:
    try:
        q = Fraction(p)
    except (TypeError, ValueError):
        return None
    if q.denominator == 1 and q.numerator % 2 == 0 and q.numerator >= 2:
        return q.numerator // 2
    return None


def exact_count(pair: FormPair, N: int, s: int, threads: int = 1) -> int:
    if s == 2 and pair == canonical_pair(FormClass.SQUARE_PARABOLIC):
        return fast_count_parabolic(N).count
    return energy_count(point_array(pair, N), s, threads=threads).count


def _farey(q_max: int) -> np.ndarray:
    return np.array(sorted({Fraction(a, q) for q in range(1, q_max + 1) for a in range(q)}),
                    dtype=float)


def _torus_dist(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = np.abs(x[:, None] - centers[None, :])
    return np.minimum(d, 1 - d)


class _Sampler:
    """Uniform draws, or a defensive mixture that also aims boxes at the low-denominator
    rationals in the two quadratic frequencies. Returns points and 1/density weights."""

    def __init__(self, N: int, stratified: bool):
        self.stratified = stratified
        self.centers = _farey(MAX_DENOMINATOR)
        self.h = min(0.5 / len(self.centers), 1.0 / (N + 1) ** 2)

    def draw(self, rng: np.random.Generator, n: int):
        x = rng.random((n, 5))
        if not self.stratified:
            return x, np.ones(n)
        aimed = rng.random(n) >= UNIFORM_SHARE
        k = int(aimed.sum())
        picks = rng.integers(len(self.centers), size=(k, 2))
        x[aimed, 3:] = (self.centers[picks] + rng.uniform(-self.h, self.h, size=(k, 2))) % 1.0
        hits = [(_torus_dist(x[:, c], self.centers) <= self.h).sum(axis=1) for c in (3, 4)]
        box = (hits[0] * hits[1]) / (len(self.centers) ** 2 * (2 * self.h) ** 2)
        density = UNIFORM_SHARE + (1 - UNIFORM_SHARE) * box
        return x, 1.0 / density


def _precision_bound(phi: np.ndarray) -> float:
    """Relative error bound for E: phase rounding plus pairwise summation."""
    eps = np.finfo(float).eps
    phase = 2 * math.pi * 5 * eps * float(np.abs(phi).sum(axis=1).max())
    summation = eps * math.ceil(math.log2(max(2, len(phi))))
    return phase + summation


def exponential_sum(phi: np.ndarray, x: np.ndarray) -> np.ndarray:
    """E at each row of x; pairwise summation over the frequencies."""
    phase = (x @ phi.T.astype(float)) % 1.0
    return np.exp(2j * np.pi * phase).sum(axis=1)


def _run_batch(phi, sampler, p, seed_seq, n):
    rng = np.random.default_rng(seed_seq)
    x, weight = sampler.draw(rng, n)
    vals = np.abs(exponential_sum(phi, x)) ** p * weight
    return float(vals.sum()), n


def _jackknife(sums, counts, p) -> tuple:
    """Grouped jackknife of mean^(1/p) over the batch partition."""
    sums, counts = np.asarray(sums), np.asarray(counts, dtype=float)
    total, n = sums.sum(), counts.sum()
    est = (total / n) ** (1 / p)
    g = len(sums)
    if g < 2:
        return est, float("nan")
    loo = ((total - sums) / (n - counts)) ** (1 / p)
    se = math.sqrt((g - 1) / g * float(((loo - loo.mean()) ** 2).sum()))
    return float(est), se


def torus_norm(pair: FormPair, N: int, p, method="auto", samples: int = 10**6,
               seed: int = 0, threads: int = 1) -> EstimateRecord:
    if N < 0:
        raise InputError("N must be >= 0")
    pf = float(Fraction(p)) if not isinstance(p, float) else p
    if pf < 2:
        raise InputError("p must be >= 2")
    method = _resolve_method(method, p)
    if method is EstimateMethod.EXACT_EVEN_P:
        s = _even_s(p)
        if s is None or s > 3:
            raise InputError(f"exact evaluation needs p in {{2, 4, 6}}, got {p}")
        J = exact_count(pair, N, s, threads)
        return EstimateRecord(N, pf, J ** (1 / (2 * s)), 0.0, 0, method, None, J)
    if samples < MIN_SAMPLES:
        raise BadSampleCount(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if N == 0:
        return EstimateRecord(N, pf, 1.0, 0.0, samples, method, seed)  # |E| = 1 identically
    if N > MC_MAX_N:
        raise PrecisionLoss(f"sampling is supported for N <= {MC_MAX_N}")
    phi = point_array(pair, N)
    bound = _precision_bound(phi)
    if bound > 1e-6:
        raise PrecisionLoss(f"relative error bound {bound:.2e} exceeds 1e-6")
    sampler = _Sampler(N, method is EstimateMethod.STRATIFIED)
    sizes = [BATCH] * (samples // BATCH) + ([samples % BATCH] if samples % BATCH else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda a: _run_batch(phi, sampler, pf, *a), zip(seeds, sizes)))
    sums, counts = _group([s for s, _ in parts], [c for _, c in parts], groups=20)
    est, se = _jackknife(sums, counts, pf)
    return EstimateRecord(N, pf, est, se, samples, method, seed)


def _group(sums, counts, groups):
    """Merge consecutive batches into at most ``groups`` jackknife groups."""
    k = max(1, math.ceil(len(sums) / groups))
    return ([sum(sums[i:i + k]) for i in range(0, len(sums), k)],
            [sum(counts[i:i + k]) for i in range(0, len(counts), k)])


def _resolve_method(method, p) -> EstimateMethod:
    if isinstance(method, EstimateMethod):
        return method
    if method == "auto":
        s = _even_s(p)
        return EstimateMethod.EXACT_EVEN_P if s is not None and s <= 3 else EstimateMethod.STRATIFIED
    for m in EstimateMethod:
        if method.lower() in (m.value.lower(), m.name.lower(), m.name.lower().replace("_", "")):
            return m
    raise InputError(f"unknown estimation method {method!r}")


def dec_ratio(pair: FormPair, N: int, p, method="auto", **kw) -> EstimateRecord:
    rec = torus_norm(pair, N, p, method, **kw)
    norm = (N + 1) ** (3 / rec.p)
    return EstimateRecord(rec.N, rec.p, rec.estimate / norm, rec.std_error / norm,
                          rec.samples, rec.method, rec.seed, rec.exact_count)


@dataclass(frozen=True)
class ScanRow:
    p: float
    slope: float
    residual: float
    target: Optional[float]
    method: EstimateMethod
    heuristic: bool


def regime_scan(pair: FormPair, p_list, N_list, method="auto", **kw) -> dict:
    """Fitted growth exponent of R(N, p) in N for each p, checked against the class profile."""
    cls = classify(pair).cls
    profile = exponents.profile_of_class(cls) if cls in exponents.SUPPORTED else None
    rows = []
    for p in p_list:
        recs = [dec_ratio(pair, N, p, method, **kw) for N in N_list]
        slope, res = fit_exponent([(r.N, r.estimate) for r in recs])
        target = float(profile(Fraction(p))) if profile is not None else None
        m = recs[0].method
        rows.append(ScanRow(float(Fraction(p)), slope, res, target, m,
                            heuristic=m is not EstimateMethod.EXACT_EVEN_P))
    ordered = sorted(rows, key=lambda r: r.p)
    consistent = all(a.slope <= b.slope for a, b in zip(ordered, ordered[1:]))
    return {"class": cls.value, "rows": rows, "ordering_consistent": consistent}
