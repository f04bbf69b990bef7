"""Self-check suites run by ``qfdec verify``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import exponents
from .counting import (
    brute_force_energy,
    divisor_table,
    energy_count,
    fast_count_parabolic,
    point_array,
    strip_energy,
    strip_energy_formula,
    transversality_overlap,
)
from .estimator import EstimateMethod, dec_ratio, torus_norm
from .formalg import FormClass, canonical_pair, classify, square_combination
from .formalg.pencil import det_condition
from .randompairs import random_transform, screened_integer_pair, transformed

SUITES = ("classify", "exponents", "counting", "estimator")
DEGENERATE = (FormClass.COMMON_FACTOR, FormClass.SQUARE_ELLIPTIC,
              FormClass.SQUARE_HYPERBOLIC, FormClass.SQUARE_PARABOLIC)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _classify_suite(seed=0):
    rng = random.Random(seed)
    out = []
    for cls in FormClass:
        got = classify(canonical_pair(cls)).cls
        out.append(Check("classify", f"canonical {cls.value}", got is cls, f"got {got.value}"))
    bad = 0
    for cls in DEGENERATE + (FormClass.NON_DEGENERATE,):
        pair = canonical_pair(cls)
        for _ in range(10):
            moved = transformed(pair, random_transform(rng))
            bad += classify(moved).cls is not cls or classify(moved.swapped()).cls is not cls
    out.append(Check("classify", "invariance under rational transforms", bad == 0,
                     f"{bad} class changes in 50 transforms"))
    bad = 0
    for k in range(100):
        pair = screened_integer_pair(rng, plant_square=k % 2 == 0)
        bad += det_condition(pair) == (square_combination(pair) is not None)
    out.append(Check("classify", "determinant condition vs rank-one member", bad == 0,
                     f"{bad} mismatches in 100 screened pairs"))
    return out


def _exponents_suite():
    out = []
    for cls in exponents.SUPPORTED:
        prof = exponents.profile_of_class(cls)
        out.append(Check("exponents", f"{cls.value} continuous", prof.is_continuous()))
        out.append(Check("exponents", f"{cls.value} convex in 1/p", prof.is_convex()))
        out.append(Check("exponents", f"{cls.value} gamma(2) = 0", prof(2) == 0))
        out.append(Check("exponents", f"{cls.value} sharp", exponents.sharpness_check(cls)))
    values = [(FormClass.NON_DEGENERATE, Fraction(14, 3), Fraction(6, 7)),
              (FormClass.COMMON_FACTOR, 6, Fraction(4, 3)),
              (FormClass.SQUARE_PARABOLIC, 4, Fraction(3, 4)),
              (FormClass.NON_DEGENERATE, "inf", 3)]
    for cls, p, want in values:
        got = exponents.gamma_of_class(cls, p)
        out.append(Check("exponents", f"gamma {cls.value} at p={p}", got == want, f"got {got}"))
    return out


def _counting_suite():
    out = []
    for cls in DEGENERATE + (FormClass.NON_DEGENERATE,):
        pts = point_array(canonical_pair(cls), 3)
        a, b = energy_count(pts, 2).count, brute_force_energy(pts, 2).count
        out.append(Check("counting", f"hash = brute, {cls.value}, N=3", a == b, f"{a} vs {b}"))
    parabolic = canonical_pair(FormClass.SQUARE_PARABOLIC)
    bad = [N for N in range(13)
           if fast_count_parabolic(N).count != energy_count(point_array(parabolic, N), 2).count]
    out.append(Check("counting", "divisor method = hash, N <= 12", not bad, f"mismatch at {bad}"))
    out.append(Check("counting", "divisor counts up to 6", divisor_table(6)[1] == 14))
    bad = [N for N in (1, 4, 9, 16) if strip_energy(N).count != strip_energy_formula(N)]
    out.append(Check("counting", "strip energy closed form", not bad, f"mismatch at {bad}"))
    rep = transversality_overlap(4, 16)
    out.append(Check("counting", "transversality (4, 16)", rep.bounded, f"max ratio {rep.max_ratio}"))
    return out


def _estimator_suite():
    out = []
    bad = []
    for cls in (FormClass.SQUARE_PARABOLIC, FormClass.COMMON_FACTOR):
        pair = canonical_pair(cls)
        for s in (1, 2, 3):
            for N in range(4):
                rec = torus_norm(pair, N, 2 * s, EstimateMethod.EXACT_EVEN_P)
                J = energy_count(point_array(pair, N), s).count
                if rec.exact_count != J or abs(rec.estimate ** (2 * s) / J - 1) > 1e-9:
                    bad.append((cls.value, s, N))
    out.append(Check("estimator", "even-p identity", not bad, f"mismatch at {bad}"))
    pair = canonical_pair(FormClass.SQUARE_PARABOLIC)
    ok = all(torus_norm(pair, N, 2).exact_count == (N + 1) ** 3 for N in range(6))
    out.append(Check("estimator", "p = 2 orthogonality", ok))
    ratios = [dec_ratio(pair, 5, p).estimate for p in (2, 4, 6)]
    out.append(Check("estimator", "ratio non-decreasing in p", ratios == sorted(ratios),
                     f"{ratios}"))
    a = torus_norm(pair, 3, 3, EstimateMethod.MONTE_CARLO, samples=20000, seed=7)
    b = torus_norm(pair, 3, 3, EstimateMethod.MONTE_CARLO, samples=20000, seed=7, threads=2)
    out.append(Check("estimator", "seeded sampling reproducible", a.estimate == b.estimate))
    return out


_RUNNERS = {"classify": _classify_suite, "exponents": _exponents_suite,
            "counting": _counting_suite, "estimator": _estimator_suite}


def run_suite(name: str) -> list:
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        checks.extend(_RUNNERS[n]())
    return checks
