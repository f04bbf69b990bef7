"""Decision procedure sorting a pair of ternary quadratic forms into seven classes.

The class is decided in exact arithmetic. For the four degenerate canonical
classes a change of variables (L1, L2) onto the canonical pair is also
produced; it may need real square roots and is then floating point.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..errors import InputError, InternalInconsistency, SingularTransform
from . import pencil
from . import ratlinalg as rl
from .forms import FormPair, LinearForm, QuadForm, parse_pair

RESIDUAL_TOL = 1e-9


class FormClass(str, enum.Enum):
    LINEARLY_DEPENDENT = "LinearlyDependent"
    OMITS_VARIABLE = "OmitsVariable"
    NON_DEGENERATE = "NonDegenerate"
    COMMON_FACTOR = "CommonFactor"
    SQUARE_ELLIPTIC = "SquareElliptic"
    SQUARE_HYPERBOLIC = "SquareHyperbolic"
    SQUARE_PARABOLIC = "SquareParabolic"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "FormClass":
        for c in cls:
            if c.value.lower() == name.lower() or c.name.lower() == name.lower():
                return c
        raise InputError(f"unknown class {name!r}")


# Representatives; the first four are the targets of witness transforms.
CANONICAL_TEXT = {
    FormClass.COMMON_FACTOR: ("r*s", "r*t"),
    FormClass.SQUARE_ELLIPTIC: ("r^2", "s^2+t^2"),
    FormClass.SQUARE_HYPERBOLIC: ("r^2", "s^2-t^2"),
    FormClass.SQUARE_PARABOLIC: ("r^2", "s^2+r*t"),
    FormClass.LINEARLY_DEPENDENT: ("r^2", "r^2"),
    FormClass.OMITS_VARIABLE: ("r^2", "s^2"),
    FormClass.NON_DEGENERATE: ("r^2+s^2+t^2", "r*s+s*t"),
}


def canonical_pair(cls: FormClass) -> FormPair:
    return parse_pair(*CANONICAL_TEXT[cls])


@dataclass(frozen=True)
class PairTransform:
    """(P', Q') = L2 . (P(L1 x), Q(L1 x))."""

    L1: tuple
    L2: tuple
    exact: bool = False

    def __post_init__(self):
        conv = Fraction if self.exact else float
        L1 = tuple(tuple(conv(x) for x in row) for row in self.L1)
        L2 = tuple(tuple(conv(x) for x in row) for row in self.L2)
        object.__setattr__(self, "L1", L1)
        object.__setattr__(self, "L2", L2)
        if self.exact:
            singular = rl.det(L1) == 0 or rl.det(L2) == 0
        else:
            singular = (abs(np.linalg.det(np.array(L1))) <= 1e-9
                        or abs(np.linalg.det(np.array(L2))) <= 1e-9)
        if singular:
            raise SingularTransform("transform matrices must be invertible")

    @classmethod
    def identity(cls) -> "PairTransform":
        return cls(tuple(tuple(int(i == j) for j in range(3)) for i in range(3)),
                   ((1, 0), (0, 1)), exact=True)


@dataclass(frozen=True)
class ClassReport:
    cls: FormClass
    square_direction: Optional[tuple] = None
    square_root: Optional[LinearForm] = None
    square_scale: Optional[Fraction] = None
    common_factor: Optional[LinearForm] = None
    common_kernel: Optional[tuple] = None
    dependence: Optional[tuple] = None
    witness: Optional[PairTransform] = field(default=None, compare=False)
    residual: Optional[float] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        def frac_pair(q):
            return [q.numerator, q.denominator]

        def mat(m):
            if m is None:
                return None
            flat = [x for row in m for x in row]
            if self.witness.exact:
                return [str(x) for x in flat]
            return [float(x) for x in flat]

        return {
            "class": self.cls.value,
            "square_direction": None if self.square_direction is None
            else [frac_pair(q) for q in self.square_direction],
            "square_root": None if self.square_root is None else str(self.square_root),
            "square_scale": None if self.square_scale is None else str(self.square_scale),
            "common_factor": None if self.common_factor is None else str(self.common_factor),
            "common_kernel": None if self.common_kernel is None
            else [str(x) for x in self.common_kernel],
            "dependence": None if self.dependence is None
            else [frac_pair(q) for q in self.dependence],
            "witness_L1": None if self.witness is None else mat(self.witness.L1),
            "witness_L2": None if self.witness is None else mat(self.witness.L2),
            "witness_exact": None if self.witness is None else self.witness.exact,
            "residual": self.residual,
        }


# --- transforms ---------------------------------------------------------------

def _as_float(m) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def apply_transform(pair: FormPair, t: PairTransform):
    """Transformed pair: a FormPair for exact transforms, else a pair of float Gram matrices.

    Float transforms are applied in exact arithmetic on the binary values of
    their entries and rounded once at the end.
    """
    L1 = [[Fraction(x) for x in row] for row in t.L1]
    mats = [rl.matmul(rl.matmul(rl.transpose(L1), [list(r) for r in q.matrix]), L1)
            for q in pair.forms()]
    out = []
    for row in t.L2:
        a, b = Fraction(row[0]), Fraction(row[1])
        out.append([[a * x + b * y for x, y in zip(ra, rb)] for ra, rb in zip(*mats)])
    if t.exact:
        return FormPair(*(QuadForm(tuple(map(tuple, m))) for m in out))
    return tuple(_as_float(m) for m in out)


def _coeff_vector(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return np.array([m[0, 0], m[1, 1], m[2, 2], 2 * m[0, 1], 2 * m[0, 2], 2 * m[1, 2]])


def transform_residual(pair: FormPair, t: PairTransform, target: FormPair) -> float:
    """Max coefficient error of the transformed pair against target."""
    out = apply_transform(pair, t)
    if isinstance(out, FormPair):
        out = tuple(_as_float(q.matrix) for q in out.forms())
    return max(float(np.max(np.abs(_coeff_vector(m) - _coeff_vector(_as_float(q.matrix)))))
               for m, q in zip(out, target.forms()))


def _float_witness(coords, scales, L2) -> PairTransform:
    """Witness for new coordinates z = diag(scales) . coords . x, coords rational."""
    base_inv = _as_float(rl.inverse(coords))
    L1 = base_inv / np.asarray(scales, dtype=float)[None, :]
    return PairTransform(tuple(map(tuple, L1)), tuple(tuple(float(x) for x in row) for row in L2))


def _common_factor_witness(pair: FormPair, factor: LinearForm) -> PairTransform:
    m1 = pencil.divide_by_linear(pair.first, factor)
    m2 = pencil.divide_by_linear(pair.second, factor)
    coords = [list(factor.coeffs), list(m1.coeffs), list(m2.coeffs)]
    if rl.det(coords) == 0:
        raise InternalInconsistency("common factor and cofactors are linearly dependent")
    return PairTransform(tuple(map(tuple, rl.inverse(coords))), ((1, 0), (0, 1)), exact=True)


def _completion_basis(v) -> list:
    """Rows v, e_a, e_b forming an invertible matrix."""
    units = [[Fraction(int(i == k)) for i in range(3)] for k in range(3)]
    for a in range(3):
        for b in range(a + 1, 3):
            rows = [list(v), units[a], units[b]]
            if rl.det(rows) != 0:
                return rows
    raise InternalInconsistency("zero square root")


def _complement(pair: FormPair, direction) -> QuadForm:
    lam, mu = direction
    return pair.first if mu != 0 else pair.second


def _plane_restriction(pair: FormPair, sq: pencil.SquareCombination):
    """Complement form written in coordinates u = T x with u_r the square root."""
    T = _completion_basis(sq.root.coeffs)
    Tinv = rl.inverse(T)
    X = [list(r) for r in _complement(pair, sq.direction).matrix]
    Xu = rl.matmul(rl.matmul(rl.transpose(Tinv), X), Tinv)
    return T, Xu


def _diagonalise2(Y):
    """Rows M and diagonal d with Y = M^T diag(d) M, for a nonsingular 2x2 Y."""
    y00, y01, y11 = Y[0][0], Y[0][1], Y[1][1]
    if y00 != 0:
        return [[Fraction(1), y01 / y00], [Fraction(0), Fraction(1)]], [y00, y11 - y01 * y01 / y00]
    if y11 != 0:
        return [[y01 / y11, Fraction(1)], [Fraction(1), Fraction(0)]], [y11, -y01 * y01 / y11]
    return [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]], [y01 / 2, -y01 / 2]


def _square_witness(pair, sq, cls, T, Xu) -> PairTransform:
    h = [Xu[0][1], Xu[0][2]]
    Y = [[Xu[1][1], Xu[1][2]], [Xu[2][1], Xu[2][2]]]
    one, zero = Fraction(1), Fraction(0)
    if cls is not FormClass.SQUARE_PARABOLIC:
        shift = rl.solve(Y, h)
        # w_hat = w + u_r * Y^{-1} h, written as rows acting on u.
        what = [[shift[0], one, zero], [shift[1], zero, one]]
        M, d = _diagonalise2(Y)
        rows = [rl.matmul([M[i]], what)[0] for i in range(2)]
        order = [0, 1]
        if cls is FormClass.SQUARE_HYPERBOLIC and d[0] < 0:
            order = [1, 0]
        coords_u = [[one, zero, zero]] + [rows[i] for i in order]
        scales = [1.0] + [math.sqrt(abs(d[i])) for i in order]
        sign = 1 if d[order[0]] > 0 else -1
    else:
        i = 0 if Y[0][0] != 0 else 1
        m = Y[i]
        d = 1 / Y[i][i]
        n = [zero, one] if rl.det([m, [zero, one]]) != 0 else [one, zero]
        h1, h2 = rl.solve(rl.transpose([m, n]), h)
        if h2 == 0:
            raise InternalInconsistency("parabolic pair without a surviving mixed term")
        sign = 1 if d > 0 else -1
        coords_u = [[one, zero, zero],
                    [h1 / d, m[0], m[1]],
                    [zero, sign * 2 * h2 * n[0], sign * 2 * h2 * n[1]]]
        scales = [1.0, math.sqrt(abs(d)), 1.0]
    coords = rl.matmul(coords_u, T)
    # In the new coordinates: lam*P + mu*Q = c r^2, and the complement X equals
    # sign * (canonical second form) + x00 r^2.
    lam, mu = sq.direction
    c = sq.scale
    inv = rl.inverse(coords)
    X = [list(r) for r in _complement(pair, sq.direction).matrix]
    x00 = rl.matmul(rl.matmul(rl.transpose(inv), X), inv)[0][0]
    basis = (one, zero) if mu != 0 else (zero, one)
    L2 = [[lam / c, mu / c],
          [sign * (basis[0] - x00 * lam / c), sign * (basis[1] - x00 * mu / c)]]
    return _float_witness(coords, scales, L2)


def classify(pair: FormPair) -> ClassReport:
    dep = pencil.linear_dependence(pair) if not _both_zero(pair) else (Fraction(1), Fraction(0))
    if dep is not None:
        return ClassReport(FormClass.LINEARLY_DEPENDENT, dependence=dep)
    kernel = pencil.common_kernel(pair)
    if kernel is not None:
        return ClassReport(FormClass.OMITS_VARIABLE, common_kernel=kernel)
    factor = pencil.common_linear_factor(pair)
    if factor is not None:
        w = _common_factor_witness(pair, factor)
        res = transform_residual(pair, w, canonical_pair(FormClass.COMMON_FACTOR))
        return _checked(ClassReport(FormClass.COMMON_FACTOR, common_factor=factor,
                                    witness=w, residual=res))
    sq = pencil.square_combination(pair)
    if sq is None:
        return ClassReport(FormClass.NON_DEGENERATE)
    T, Xu = _plane_restriction(pair, sq)
    Y = [[Xu[1][1], Xu[1][2]], [Xu[2][1], Xu[2][2]]]
    rk = rl.rank(Y)
    if rk == 2:
        cls = FormClass.SQUARE_ELLIPTIC if rl.det(Y) > 0 else FormClass.SQUARE_HYPERBOLIC
    elif rk == 1:
        cls = FormClass.SQUARE_PARABOLIC
    else:
        raise InternalInconsistency("complement vanishes on the square's zero plane")
    w = _square_witness(pair, sq, cls, T, Xu)
    res = transform_residual(pair, w, canonical_pair(cls))
    return _checked(ClassReport(cls, square_direction=sq.direction, square_root=sq.root,
                                square_scale=sq.scale, witness=w, residual=res))


def _both_zero(pair: FormPair) -> bool:
    return pair.first.is_zero() and pair.second.is_zero()


def _checked(report: ClassReport) -> ClassReport:
    if report.residual is not None and not report.residual < RESIDUAL_TOL:
        raise InternalInconsistency(
            f"witness residual {report.residual:.3e} for {report.cls} exceeds {RESIDUAL_TOL}")
    return report
