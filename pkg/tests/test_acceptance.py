"""Acceptance criteria. Each test prints one PASS/FAIL line and then asserts."""
import math
import random
import time
from fractions import Fraction

import pytest
import sympy as sp

from qfdec import exponents as ex
from qfdec.counting import (
    brute_force_energy,
    energy_count,
    fast_count_parabolic,
    fit_exponent,
    point_array,
    strip_energy,
    transversality_overlap,
)
from qfdec.estimator import EstimateMethod, dec_ratio, torus_norm
from qfdec.formalg import FormClass, canonical_pair, classify, det_condition, parse_pair
from qfdec.randompairs import random_pair, random_transform, screened_integer_pair, transformed

C = FormClass


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail, seconds, limit):
        timed = seconds < limit
        line = (f"criterion {k:>2}: {'PASS' if ok and timed else 'FAIL'}  {detail}  "
                f"[{seconds:.1f}s, limit {limit:g}s]")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert timed, line
    return emit


# --- independent oracles -------------------------------------------------------------

R, S, T, U1, U2, U3 = sp.symbols("r s t u1 u2 u3")


def _sym(form):
    v = (R, S, T)
    return sp.expand(sum(sp.Rational(form.matrix[i][j].numerator, form.matrix[i][j].denominator)
                         * v[i] * v[j] for i in range(3) for j in range(3)))


def certified_nondegenerate(pair) -> bool:
    """Both conditions from scratch: the gradient determinant in u, and a gcd over Q."""
    P, Q = _sym(pair.first), _sym(pair.second)
    grad = lambda f: [sp.diff(f, x) for x in (R, S, T)]  # noqa: E731
    det = sp.expand(sp.Matrix([grad(P), grad(Q), [U1, U2, U3]]).det())
    # coefficients of the r,s,t-monomials are linear in u; a common nonzero u kills det
    coeffs = sp.Poly(det, R, S, T).coeffs()
    M = sp.Matrix([[sp.diff(c, u) for u in (U1, U2, U3)] for c in coeffs])
    no_common_u = M.rank() == 3
    g = sp.gcd(sp.Poly(P, R, S, T), sp.Poly(Q, R, S, T))
    return no_common_u and g.total_degree() == 0


def _minor_quadratic(A, B, rows, cols):
    """Coefficients (lam^2, lam mu, mu^2) of the 2x2 minor of lam A + mu B."""
    (a, b), (c, d) = rows, cols

    def mul(x, y):
        return (x[0] * y[0], x[0] * y[1] + x[1] * y[0], x[1] * y[1])

    e = lambda i, j: (A[i][j], B[i][j])  # noqa: E731
    p, q = mul(e(a, c), e(b, d)), mul(e(a, d), e(b, c))
    return tuple(x - y for x, y in zip(p, q))


def _rank_at_most_one(m) -> bool:
    return all(m[a][c] * m[b][d] - m[a][d] * m[b][c] == 0
               for a in range(3) for b in range(3) for c in range(3) for d in range(3))


def _projective_rational_roots(q):
    a, b, c = q
    den = math.lcm(*(Fraction(x).denominator for x in q))
    a, b, c = (int(Fraction(x) * den) for x in q)
    roots = []
    coeffs = [a, b, c]
    while coeffs and coeffs[0] == 0:
        roots.append((Fraction(1), Fraction(0)))
        coeffs = coeffs[1:]
    while coeffs and coeffs[-1] == 0:
        roots.append((Fraction(0), Fraction(1)))
        coeffs = coeffs[:-1]
    if len(coeffs) > 1:
        lead, const = abs(coeffs[0]), abs(coeffs[-1])
        for p in range(1, const + 1):
            if const % p:
                continue
            for d in range(1, lead + 1):
                if lead % d:
                    continue
                for x in (Fraction(p, d), Fraction(-p, d)):
                    if sum(k * x ** (len(coeffs) - 1 - i) for i, k in enumerate(coeffs)) == 0:
                        roots.append((x, Fraction(1)))
    return roots


def brute_rank_one_exists(pair) -> bool:
    A, B = pair.first.matrix, pair.second.matrix
    cands = None
    for rows in ((0, 1), (0, 2), (1, 2)):
        for cols in ((0, 1), (0, 2), (1, 2)):
            q = _minor_quadratic(A, B, rows, cols)
            if any(q):
                cands = _projective_rational_roots(q)
                break
        if cands is not None:
            break
    if cands is None:  # every minor vanishes identically
        cands = [(Fraction(1), Fraction(0))]
    for lam, mu in cands:
        m = [[lam * A[i][j] + mu * B[i][j] for j in range(3)] for i in range(3)]
        if any(any(row) for row in m) and _rank_at_most_one(m):
            return True
    return False


# --- criteria ------------------------------------------------------------------------

def test_criterion_01_classification_table(report):
    want = {C.COMMON_FACTOR: ("r*s", "r*t"), C.SQUARE_ELLIPTIC: ("r^2", "s^2+t^2"),
            C.SQUARE_HYPERBOLIC: ("r^2", "s^2-t^2"), C.SQUARE_PARABOLIC: ("r^2", "s^2+r*t")}
    rng = random.Random(2024)
    certified = []
    while len(certified) < 5:
        pair = random_pair(rng, bound=5)
        if certified_nondegenerate(pair):
            certified.append(pair)
    t0 = time.perf_counter()
    got = {cls: classify(parse_pair(*txt)).cls for cls, txt in want.items()}
    random_classes = [classify(p).cls for p in certified]
    elapsed = time.perf_counter() - t0
    ok = all(got[c] is c for c in want) and all(c is C.NON_DEGENERATE for c in random_classes)
    report(1, ok, f"canonical {[c.value for c in got.values()]}; "
                  f"random certified pairs {[c.value for c in random_classes]}", elapsed, 1)


def test_criterion_02_equivalence_invariance(report):
    rng = random.Random(7)
    t0 = time.perf_counter()
    changes = 0
    for cls in C:
        pair = canonical_pair(cls)
        for _ in range(200):
            changes += classify(transformed(pair, random_transform(rng))).cls is not cls
    elapsed = time.perf_counter() - t0
    report(2, changes == 0, f"{changes} class changes over {200 * len(C)} transforms",
           elapsed, 30)


def test_criterion_03_determinant_condition_equivalence(report):
    rng = random.Random(11)
    pairs = [screened_integer_pair(rng, bound=4, plant_square=k % 2 == 0) for k in range(500)]
    t0 = time.perf_counter()
    mismatches = sum((not det_condition(p)) != brute_rank_one_exists(p) for p in pairs)
    failing = sum(not det_condition(p) for p in pairs)
    elapsed = time.perf_counter() - t0
    report(3, mismatches == 0,
           f"{mismatches} mismatches in 500 screened pairs ({failing} fail the condition)",
           elapsed, 60)


def test_criterion_04_exponent_consistency(report):
    t0 = time.perf_counter()
    checks = {
        "6/7 at p=14/3": ex.gamma_of_class(C.NON_DEGENERATE, Fraction(14, 3)) == Fraction(6, 7),
        "4/3 at p=6": ex.gamma_of_class(C.COMMON_FACTOR, 6) == Fraction(4, 3)
        and ex.gamma_of_class(C.SQUARE_PARABOLIC, 6) == Fraction(4, 3),
        "3/4 at p=4": ex.gamma_of_class(C.SQUARE_PARABOLIC, 4) == Fraction(3, 4),
    }
    for cls in ex.SUPPORTED:
        prof = ex.profile_of_class(cls)
        checks[f"{cls.value} shape"] = (prof.is_continuous() and prof.is_convex()
                                         and prof(2) == 0 and ex.sharpness_check(cls))
    elapsed = time.perf_counter() - t0
    bad = [k for k, v in checks.items() if not v]
    report(4, not bad, f"{len(checks) - len(bad)}/{len(checks)} exact checks", elapsed, 1)


def test_criterion_05_counting_oracles(report):
    t0 = time.perf_counter()
    bad = []
    for cls in C:
        for N in range(5):
            pts = point_array(canonical_pair(cls), N)
            if energy_count(pts, 2).count != brute_force_energy(pts, 2).count:
                bad.append((cls.value, N))
    pair = canonical_pair(C.SQUARE_PARABOLIC)
    bad += [("divisor", N) for N in range(13)
            if fast_count_parabolic(N).count != energy_count(point_array(pair, N), 2).count]
    elapsed = time.perf_counter() - t0
    report(5, not bad, f"hash = brute on {len(C)} pairs, N <= 4; divisor = hash, N <= 12; "
                       f"mismatches {bad}", elapsed, 600)


def test_criterion_06_diagonal_behavior(report):
    t0 = time.perf_counter()
    Ns = (8, 12, 16, 20, 24, 28)
    counts = {N: fast_count_parabolic(N).count for N in Ns}
    pair = canonical_pair(C.SQUARE_PARABOLIC)
    cross = all(energy_count(point_array(pair, N), 2).count == counts[N] for N in Ns if N <= 20)
    diagonal = all(counts[N] >= (N + 1) ** 6 for N in Ns)
    slope, _ = fit_exponent(sorted(counts.items()))
    elapsed = time.perf_counter() - t0
    report(6, cross and diagonal and 5.7 <= slope <= 6.3,
           f"slope {slope:.3f} in [5.7, 6.3]; J >= (N+1)^6: {diagonal}; hash cross-check: {cross}",
           elapsed, 1800)


def test_criterion_07_transversality(report):
    t0 = time.perf_counter()
    ratios = {(K, G): transversality_overlap(K, G).max_ratio for K, G in ((4, 16), (4, 32), (8, 64))}
    elapsed = time.perf_counter() - t0
    report(7, all(r <= 16 for r in ratios.values()),
           "max ratios " + ", ".join(f"{k}: {v:.4g}" for k, v in ratios.items()), elapsed, 120)


def test_criterion_08_strip_energy_slope(report):
    t0 = time.perf_counter()
    samples = [(N, strip_energy(N).count) for N in (16, 64, 256)]
    slope, _ = fit_exponent(samples)
    elapsed = time.perf_counter() - t0
    report(8, abs(slope - 3.5) <= 0.2, f"slope {slope:.3f}, target 3.5 +/- 0.2", elapsed, 300)


def test_criterion_09_even_p_ratio_slopes(report):
    t0 = time.perf_counter()
    Ns = range(4, 21)
    targets = {("r^2", "s^2+r*t"): 0.75, ("r*s", "r*t"): 1.0}
    slopes = {}
    for txt in targets:
        pair = parse_pair(*txt)
        recs = [dec_ratio(pair, N, 4, EstimateMethod.EXACT_EVEN_P) for N in Ns]
        slopes[txt] = fit_exponent([(r.N, r.estimate) for r in recs])[0]
    elapsed = time.perf_counter() - t0
    ok = all(abs(slopes[k] - targets[k]) <= 0.25 for k in targets)
    report(9, ok, "; ".join(f"({P}, {Q}) slope {slopes[(P, Q)]:.3f} vs {targets[(P, Q)]}"
                            for P, Q in targets), elapsed, 300)


def test_criterion_10_estimator_calibration(report):
    pair = canonical_pair(C.SQUARE_PARABOLIC)
    t0 = time.perf_counter()
    exact = torus_norm(pair, 6, 4, EstimateMethod.EXACT_EVEN_P).estimate
    mc = torus_norm(pair, 6, 4, EstimateMethod.MONTE_CARLO, samples=10**6, seed=0)
    rel = abs(mc.estimate - exact) / exact
    p2 = [(N, dec_ratio(pair, N, 2, EstimateMethod.MONTE_CARLO, samples=10**5, seed=N).estimate)
          for N in (2, 4, 6, 8)]
    slope2, _ = fit_exponent(p2)
    elapsed = time.perf_counter() - t0
    report(10, rel <= 0.15 and abs(slope2) <= 0.1,
           f"MonteCarlo {mc.estimate:.3f} +/- {mc.std_error:.3f} vs exact {exact:.3f} "
           f"({100 * rel:.1f}%); p=2 slope {slope2:+.4f}", elapsed, 300)
