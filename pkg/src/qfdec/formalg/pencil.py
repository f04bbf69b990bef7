"""Exact pencil algebra for a pair of ternary quadratic forms.

All decisions here are made in rational arithmetic. Two facts keep the
search rational once dependent and variable-omitting pairs are screened out:

* a rank <= 1 element of the pencil is unique up to scaling, so its
  direction is fixed by Galois conjugation and is rational;
* an irrational common linear factor would come with its conjugate, forcing
  both forms to be multiples of one rational form.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional

from ..errors import BothZero, PreconditionViolated
from . import ratlinalg as rl
from .forms import MONOMIALS, FormPair, LinearForm, QuadForm

_LEVI = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
         (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


class SquareCombination(NamedTuple):
    direction: tuple  # (lam, mu): lam*A + mu*B has rank one
    root: LinearForm
    scale: Fraction   # lam*A + mu*B == scale * root^2


def combine(pair: FormPair, lam, mu) -> QuadForm:
    return pair.first.scale(lam) + pair.second.scale(mu)


def _primitive_direction(lam, mu) -> tuple:
    return tuple(rl.primitive([lam, mu]))


def linear_dependence(pair: FormPair) -> Optional[tuple]:
    """Projective (lam : mu) with lam*A + mu*B = 0, or None if independent."""
    a, b = pair.first.coeffs(), pair.second.coeffs()
    if not any(a) and not any(b):
        raise BothZero("both forms are identically zero")
    if not any(a):
        return (Fraction(1), Fraction(0))
    if not any(b):
        return (Fraction(0), Fraction(1))
    i = next(k for k in range(6) if a[k])
    ratio = b[i] / a[i]
    if all(bk == ratio * ak for ak, bk in zip(a, b)):
        return (Fraction(ratio.numerator), Fraction(-ratio.denominator))
    return None


def stacked(pair: FormPair) -> list:
    return [list(row) for row in pair.first.matrix] + [list(row) for row in pair.second.matrix]


def common_kernel(pair: FormPair) -> Optional[tuple]:
    """Nonzero v with A v = B v = 0, normalised to coprime integers."""
    basis = rl.nullspace(stacked(pair))
    if not basis:
        return None
    return tuple(rl.primitive(basis[0]))


def det_condition_matrix(pair: FormPair) -> list:
    """6x3 matrix sending u to the coefficients of det(grad P, grad Q, u) / 4.

    The determinant equals 4 u . ((A x) x (B x)); row order is rr, ss, tt, rs, rt, st.
    """
    A, B = pair.first.matrix, pair.second.matrix
    cols = []
    for k in range(3):
        c = [[Fraction(0)] * 3 for _ in range(3)]
        for (kk, i, j), eps in _LEVI.items():
            if kk != k:
                continue
            for l in range(3):
                for m in range(3):
                    c[l][m] += eps * (A[i][l] * B[j][m] + A[i][m] * B[j][l]) / 2
        cols.append([c[l][m] * (1 if l == m else 2) for l, m in MONOMIALS])
    return rl.transpose(cols)


def det_condition(pair: FormPair) -> bool:
    """True when det(grad P, grad Q, u) vanishes identically only for u = 0."""
    return rl.rank(det_condition_matrix(pair)) == 3


def _screen(pair: FormPair) -> None:
    if linear_dependence(pair) is not None:
        raise PreconditionViolated("pair is linearly dependent")
    if common_kernel(pair) is not None:
        raise PreconditionViolated("pair omits a variable after a linear change")


def _minor(m, rows, cols):
    (a, b), (c, d) = rows, cols
    return m[a][c] * m[b][d] - m[a][d] * m[b][c]


def adjugate_quadratics(pair: FormPair) -> list:
    """Each adjugate entry of lam*A + mu*B as (x, y, z) meaning x lam^2 + y lam mu + z mu^2."""
    out = []
    samples = [combine(pair, 1, 0).matrix, combine(pair, 0, 1).matrix, combine(pair, 1, 1).matrix]
    for i in range(3):
        for j in range(i, 3):
            rows = [k for k in range(3) if k != i]
            cols = [k for k in range(3) if k != j]
            at10, at01, at11 = (_minor(s, rows, cols) for s in samples)
            out.append((at10, at11 - at10 - at01, at01))
    return out


def rank_at_most_one(form: QuadForm) -> bool:
    return rl.rank(form.matrix) <= 1


def _quadratic_roots(x, y, z) -> list:
    """Rational projective roots of x lam^2 + y lam mu + z mu^2."""
    roots = []
    if x == 0:
        roots.append((Fraction(1), Fraction(0)))
        if y != 0:
            roots.append((-z / y, Fraction(1)))
        return roots
    disc = rl.rational_sqrt(y * y - 4 * x * z)
    if disc is None:
        return roots
    for sign in (1, -1):
        roots.append(((-y + sign * disc) / (2 * x), Fraction(1)))
    return roots


def rank_one_decomposition(form: QuadForm) -> tuple:
    """For a nonzero rank-one form, return (root, scale) with form = scale * root^2."""
    m = form.matrix
    i = next(k for k in range(3) if m[k][k] != 0)
    w = list(m[i])
    v = rl.primitive(w)
    j = next(k for k in range(3) if v[k] != 0)
    k = w[j] / v[j]
    return LinearForm(v), k * k / m[i][i]


def square_combination(pair: FormPair) -> Optional[SquareCombination]:
    _screen(pair)
    quads = [q for q in adjugate_quadratics(pair) if any(q)]
    if not quads:
        candidates = [(Fraction(1), Fraction(0))]
    else:
        candidates = _quadratic_roots(*quads[0])
    for lam, mu in candidates:
        if all(x * lam * lam + y * lam * mu + z * mu * mu == 0 for x, y, z in quads):
            lam, mu = _primitive_direction(lam, mu)
            root, scale = rank_one_decomposition(combine(pair, lam, mu))
            return SquareCombination((lam, mu), root, scale)
    return None


# --- factoring over Q ------------------------------------------------------

def divide_by_linear(form: QuadForm, factor: LinearForm) -> Optional[LinearForm]:
    """m with form == factor * m, or None when factor does not divide form."""
    l = factor.coeffs
    rows, rhs = [], []
    for i in range(3):
        for j in range(i, 3):
            rows.append([(l[i] * (j == k) + l[j] * (i == k)) / 2 for k in range(3)])
            rhs.append(form.matrix[i][j])
    m = rl.solve(rows, rhs)
    return None if m is None else LinearForm(m)


def _binary_factors(g11, g12, g22) -> Optional[list]:
    """Rational linear factors (alpha, beta) of g11 x^2 + 2 g12 x y + g22 y^2."""
    if g11 == 0:
        return [(Fraction(0), Fraction(1)), (2 * g12, g22)]
    disc = rl.rational_sqrt(g12 * g12 - g11 * g22)
    if disc is None:
        return None
    return [(Fraction(1), -(-g12 + sign * disc) / g11) for sign in (1, -1)]


def linear_factors(form: QuadForm) -> Optional[list]:
    """Rational linear factors of a nonzero form (two, possibly equal), or None if irreducible over Q."""
    m = form.matrix
    rk = rl.rank(m)
    if rk == 0:
        raise ValueError("zero form has no factorisation")
    if rk == 1:
        root, _ = rank_one_decomposition(form)
        return [root, root]
    if rk == 3:
        return None
    kernel = rl.nullspace(m)[0]
    a, b = next((a, b) for a in range(3) for b in range(a + 1, 3)
                if rl.det([_unit(a), _unit(b), kernel]) != 0)
    pairs = _binary_factors(m[a][a], m[a][b], m[b][b])
    if pairs is None:
        return None
    basis = [_unit(a), _unit(b), kernel]
    out = []
    for alpha, beta in pairs:
        w = rl.solve(basis, [alpha, beta, Fraction(0)])
        out.append(LinearForm(rl.primitive(w)))
    return out


def _unit(k):
    return [Fraction(int(i == k)) for i in range(3)]


def common_linear_factor(pair: FormPair) -> Optional[LinearForm]:
    if linear_dependence(pair) is not None:
        raise PreconditionViolated("pair is linearly dependent")
    factors = linear_factors(pair.first)
    if factors is None:
        return None
    for f in factors:
        if divide_by_linear(pair.second, f) is not None:
            return f
    return None
