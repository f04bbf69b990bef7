"""Sharp decoupling exponents per class and the lower-bound exponent formulas.

Exponents are piecewise affine in u = 1/p. Everything is exact: p is a
Fraction and p = infinity is u = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import InputError, UnsupportedClass
from .formalg.classify import FormClass

HALF = Fraction(1, 2)
SQUARE_CLASSES = (FormClass.SQUARE_ELLIPTIC, FormClass.SQUARE_HYPERBOLIC,
                  FormClass.SQUARE_PARABOLIC)
SUPPORTED = (FormClass.NON_DEGENERATE, FormClass.COMMON_FACTOR,
             FormClass.OMITS_VARIABLE) + SQUARE_CLASSES


def inverse_p(p) -> Fraction:
    """u = 1/p as a Fraction; accepts Fraction/int/str, with 'inf' or math.inf for infinity."""
    if isinstance(p, str):
        text = p.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return Fraction(0)
        p = Fraction(text)
    elif isinstance(p, float):
        if p == float("inf"):
            return Fraction(0)
        p = Fraction(p)
    p = Fraction(p)
    if p < 2:
        raise InputError(f"p must be >= 2, got {p}")
    return 1 / p


class Segment(NamedTuple):
    """gamma = alpha - beta * u on [lo, hi] (u-values)."""
    lo: Fraction
    hi: Fraction
    alpha: Fraction
    beta: Fraction

    def __call__(self, u) -> Fraction:
        return self.alpha - self.beta * u


@dataclass(frozen=True)
class ExponentProfile:
    label: str
    segments: tuple  # ordered by increasing u, covering [0, 1/2]

    @property
    def breakpoints(self) -> tuple:
        return tuple(seg.hi for seg in self.segments[:-1])

    def at_inverse(self, u) -> Fraction:
        u = Fraction(u)
        if not 0 <= u <= HALF:
            raise InputError(f"1/p = {u} outside [0, 1/2]")
        for seg in self.segments:
            if seg.lo <= u <= seg.hi:
                return seg(u)
        raise AssertionError("segments do not cover [0, 1/2]")

    def __call__(self, p) -> Fraction:
        return self.at_inverse(inverse_p(p))

    def is_continuous(self) -> bool:
        return all(a(a.hi) == b(b.lo) and a.hi == b.lo
                   for a, b in zip(self.segments, self.segments[1:]))

    def is_convex(self) -> bool:
        # slope in u is -beta; convexity means slopes increase with u.
        slopes = [-seg.beta for seg in self.segments]
        return all(x <= y for x, y in zip(slopes, slopes[1:]))

    def to_dict(self) -> dict:
        def fr(q):
            return [q.numerator, q.denominator]
        return {
            "class": self.label,
            "breakpoints_inv_p": [fr(b) for b in self.breakpoints],
            "segments": [{"alpha": fr(s.alpha), "beta": fr(s.beta)} for s in self.segments],
        }


def _profile(label, pieces) -> ExponentProfile:
    """pieces: [(upper u, alpha, beta)] in increasing u, last upper being 1/2."""
    segs = []
    lo = Fraction(0)
    for hi, alpha, beta in pieces:
        segs.append(Segment(lo, Fraction(hi), Fraction(alpha), Fraction(beta)))
        lo = Fraction(hi)
    return ExponentProfile(label, tuple(segs))


def profile_of_class(cls: FormClass) -> ExponentProfile:
    cls = FormClass(cls)
    if cls is FormClass.NON_DEGENERATE:
        pieces = [(Fraction(3, 14), 3, 10), (HALF, Fraction(3, 2), 3)]
    elif cls in (FormClass.COMMON_FACTOR, FormClass.OMITS_VARIABLE):
        pieces = [(Fraction(1, 6), 3, 10), (HALF, 2, 4)]
    elif cls in SQUARE_CLASSES:
        pieces = [(Fraction(1, 6), 3, 10), (Fraction(1, 4), Fraction(5, 2), 7),
                  (HALF, Fraction(3, 2), 3)]
    else:
        raise UnsupportedClass(f"no exponent profile for {cls.value}")
    return _profile(cls.value, pieces)


def gamma_of_class(cls: FormClass, p) -> Fraction:
    return profile_of_class(cls)(p)


# --- lower bounds -----------------------------------------------------------

class SkewParams(NamedTuple):
    d_prime: int
    d_double_prime: int
    n_prime: int
    n_double_prime: int


def skew_lower_exponent(params: SkewParams, p) -> Fraction:
    """Exponent of the tensor-product example with d'' free directions and n'' forms."""
    u = inverse_p(p)
    d1, d2, _, n2 = params
    return d1 * (HALF - u) + d2 * (1 - u) - (d2 + 2 * n2) * u


def subspace_lower_exponent(d_tilde: int, k_tilde: int, p) -> Fraction:
    u = inverse_p(p)
    return max(d_tilde * (HALF - u), d_tilde * (1 - u) - k_tilde * u)


# P = r^2 depends on r alone: one form in one variable split off.
SQUARE_SKEW = SkewParams(d_prime=1, d_double_prime=2, n_prime=1, n_double_prime=1)
SHARPNESS_GRID = tuple(Fraction(k, 2) for k in range(4, 41))  # p = 2, 5/2, ..., 20


def lower_bound(cls: FormClass, p) -> Fraction:
    """Best applicable lower-bound exponent for the class at p."""
    cls = FormClass(cls)
    if cls not in SUPPORTED:
        raise UnsupportedClass(f"no lower bounds for {cls.value}")
    bounds = [subspace_lower_exponent(3, 7, p)]
    if cls in (FormClass.COMMON_FACTOR, FormClass.OMITS_VARIABLE):
        bounds.append(subspace_lower_exponent(2, 2, p))
    elif cls in SQUARE_CLASSES:
        bounds.append(skew_lower_exponent(SQUARE_SKEW, p))
    return max(bounds)


def sharpness_check(cls: FormClass, grid=SHARPNESS_GRID) -> bool:
    return all(lower_bound(cls, p) == gamma_of_class(cls, p) for p in grid)


def count_exponent_prediction(cls: FormClass, s: int) -> Fraction:
    """Predicted growth exponent of J_{S,s}(N): 3 + 2s * gamma(2s)."""
    if s < 1:
        raise InputError("s must be >= 1")
    return 3 + 2 * s * gamma_of_class(cls, 2 * s)
