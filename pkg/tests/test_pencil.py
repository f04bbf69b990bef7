import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qfdec.errors import BothZero, PreconditionViolated
from qfdec.formalg import (
    FormPair,
    LinearForm,
    QuadForm,
    common_kernel,
    common_linear_factor,
    det_condition,
    linear_dependence,
    parse_pair,
    square_combination,
)
from qfdec.randompairs import screened, screened_integer_pair

r, s, t = sp.symbols("r s t")
VARS = (r, s, t)


def poly_of(form: QuadForm):
    return sp.expand(sum(sp.Rational(form.matrix[i][j].numerator, form.matrix[i][j].denominator)
                         * VARS[i] * VARS[j] for i in range(3) for j in range(3)))


def sym_matrix(form: QuadForm):
    return sp.Matrix(3, 3, lambda i, j: sp.Rational(form.matrix[i][j].numerator,
                                                    form.matrix[i][j].denominator))


# --- examples ---------------------------------------------------------------------

def test_linear_dependence_examples():
    assert linear_dependence(parse_pair("r^2", "3r^2")) == (3, -1)
    assert linear_dependence(parse_pair("r^2", "s^2")) is None
    assert linear_dependence(parse_pair("r*s+t^2", "2r*s+2t^2")) == (2, -1)


def test_linear_dependence_zero_forms():
    with pytest.raises(BothZero):
        linear_dependence(parse_pair("0", "0"))
    assert linear_dependence(parse_pair("0", "r*s")) == (1, 0)
    assert linear_dependence(parse_pair("r*s", "0")) == (0, 1)


def test_common_kernel_examples():
    assert common_kernel(parse_pair("r^2", "s^2")) == (0, 0, 1)
    assert common_kernel(parse_pair("r^2", "s^2+r*t")) is None
    assert common_kernel(parse_pair("r*s", "r*t")) is None


@pytest.mark.parametrize("P, Q, want", [
    ("r^2", "s^2+r*t", False),
    ("r*s", "r*t", True),
    ("r^2", "s^2+t^2", False),
    ("r^2", "s^2-t^2", False),
    ("r^2+s^2+t^2", "r*s+s*t", True),
])
def test_det_condition_examples(P, Q, want):
    assert det_condition(parse_pair(P, Q)) is want


def test_square_combination_examples():
    sq = square_combination(parse_pair("r^2", "s^2+r*t"))
    assert (sq.direction, sq.root.coeffs, sq.scale) == ((1, 0), (1, 0, 0), 1)
    assert square_combination(parse_pair("r*s", "r*t")) is None
    sq = square_combination(parse_pair("r^2+2r*s+s^2", "s^2+r*t"))
    assert (sq.direction, sq.root.coeffs, sq.scale) == ((1, 0), (1, 1, 0), 1)


def test_square_combination_mixed_direction():
    # P + Q = (r + t)^2, neither form alone is a square
    pair = parse_pair("r^2 + r*t + t^2 - s^2", "s^2 + r*t")
    sq = square_combination(pair)
    assert sq.direction == (1, 1)
    lam, mu = sq.direction
    m = QuadForm(tuple(tuple(lam * a + mu * b for a, b in zip(ra, rb))
                       for ra, rb in zip(pair.first.matrix, pair.second.matrix)))
    assert m == sq.root.square().scale(sq.scale)


def test_square_combination_screens():
    with pytest.raises(PreconditionViolated):
        square_combination(parse_pair("r^2", "2r^2"))
    with pytest.raises(PreconditionViolated):
        square_combination(parse_pair("r^2", "s^2"))


def test_common_linear_factor_examples():
    assert common_linear_factor(parse_pair("r*s", "r*t")).coeffs == (1, 0, 0)
    assert common_linear_factor(parse_pair("r^2", "s^2+r*t")) is None
    assert common_linear_factor(parse_pair("r*s+r^2", "r*t")).coeffs == (1, 0, 0)


# --- independent oracles ------------------------------------------------------------

def _divisors(n):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _rational_roots(a, b, c):
    """Projective rational roots (lam : mu) of a lam^2 + b lam mu + c mu^2, by the rational root test."""
    a, b, c = (sp.Rational(x) for x in (a, b, c))
    den = sp.ilcm(a.q, b.q, c.q)
    a, b, c = int(a * den), int(b * den), int(c * den)
    if a == b == c == 0:
        return None  # every direction
    roots = []
    coeffs = [a, b, c]  # in x = lam/mu, highest degree first
    while coeffs[0] == 0:  # a missing lam^2 term means mu divides: root (1 : 0)
        roots.append((1, 0))
        coeffs = coeffs[1:]
    while coeffs[-1] == 0:  # a missing mu^2 term means lam divides: root (0 : 1)
        roots.append((0, 1))
        coeffs = coeffs[:-1]
    lead, const = coeffs[0], coeffs[-1]
    for p_ in _divisors(const):
        for q_ in _divisors(lead):
            for sign in (1, -1):
                x = sp.Rational(sign * p_, q_)
                if sum(c_ * x ** (len(coeffs) - 1 - k) for k, c_ in enumerate(coeffs)) == 0:
                    roots.append((x, 1))
    return roots


def brute_rank_one_member(pair: FormPair) -> bool:
    A, B = sym_matrix(pair.first), sym_matrix(pair.second)
    lam, mu = sp.symbols("lam mu")
    M = lam * A + mu * B
    cands = None
    for i, j in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]:
        minor = sp.Poly(sp.expand(M.adjugate()[i, j]), lam, mu)
        coeff = [minor.coeff_monomial(lam ** 2), minor.coeff_monomial(lam * mu),
                 minor.coeff_monomial(mu ** 2)]
        roots = _rational_roots(*coeff)
        if roots is not None:
            cands = roots if cands is None else cands
            break
    if cands is None:
        cands = [(1, 0), (0, 1), (1, 1)]
    for a, b in cands:
        m = a * A + b * B
        if not m.is_zero_matrix and m.rank() <= 1:
            return True
    return False


def _planted_or_random(seed):
    rng = random.Random(seed)
    return screened_integer_pair(rng, bound=4, plant_square=seed % 3 == 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_det_condition_iff_square_member(seed):
    pair = _planted_or_random(seed)
    found = square_combination(pair)
    assert (not det_condition(pair)) == (found is not None)
    assert brute_rank_one_member(pair) == (found is not None)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_square_combination_is_rank_one(seed):
    pair = _planted_or_random(seed)
    sq = square_combination(pair)
    assume(sq is not None)
    lam, mu = sq.direction
    m = QuadForm(tuple(tuple(lam * a + mu * b for a, b in zip(ra, rb))
                       for ra, rb in zip(pair.first.matrix, pair.second.matrix)))
    assert m == sq.root.square().scale(sq.scale)


def _sympy_common_factor(pair):
    p, q = poly_of(pair.first), poly_of(pair.second)
    g = sp.gcd(sp.Poly(p, *VARS), sp.Poly(q, *VARS))
    return g.total_degree() >= 1


lin = st.tuples(*[st.integers(-3, 3)] * 3).filter(any)


@settings(max_examples=100, deadline=None)
@given(lin, lin, lin)
def test_planted_common_factor_found(ell, m1, m2):
    pair = FormPair(_product(ell, m1), _product(ell, m2))
    assume(linear_dependence(pair) is None)
    f = common_linear_factor(pair)
    assert f is not None
    # f is a rational multiple of ell
    ratio = [Fraction(a, b) for a, b in zip(f.coeffs, ell) if b != 0]
    assert len(set(ratio)) == 1 and all(a == 0 for a, b in zip(f.coeffs, ell) if b == 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_common_factor_matches_sympy(seed):
    rng = random.Random(seed)
    pair = screened_integer_pair(rng, bound=2)
    assert (common_linear_factor(pair) is not None) == _sympy_common_factor(pair)


def _product(a, b) -> QuadForm:
    h = Fraction(1, 2)
    return QuadForm(tuple(tuple(h * (a[i] * b[j] + a[j] * b[i]) for j in range(3))
                          for i in range(3)))


def test_screened_helper():
    assert not screened(parse_pair("r^2", "s^2"))
    assert screened(parse_pair("r^2", "s^2+r*t"))


def test_linear_form_square():
    assert LinearForm((1, 1, 0)).square() == parse_pair("r^2+2rs+s^2", "0").first
