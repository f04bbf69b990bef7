"""Ternary quadratic forms with exact rational coefficients, and their parser.

A form Q(r, s, t) is stored as its symmetric Gram matrix A with
Q(v) = v^T A v, so the diagonal holds the square coefficients and each
off-diagonal entry holds half of the corresponding mixed coefficient.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DegreeError, FormSyntaxError, UnknownVariable

VARIABLES = ("r", "s", "t")
# Polynomial coefficient order used throughout: rr, ss, tt, rs, rt, st.
MONOMIALS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def _frac_rows(matrix) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in matrix)


@dataclass(frozen=True)
class QuadForm:
    matrix: tuple

    def __post_init__(self):
        m = _frac_rows(self.matrix)
        if len(m) != 3 or any(len(row) != 3 for row in m):
            raise ValueError("quadratic form matrix must be 3x3")
        if any(m[i][j] != m[j][i] for i in range(3) for j in range(3)):
            raise ValueError("quadratic form matrix must be symmetric")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_coeffs(cls, rr=0, ss=0, tt=0, rs=0, rt=0, st=0) -> "QuadForm":
        h = Fraction(1, 2)
        rr, ss, tt, rs, rt, st = (Fraction(x) for x in (rr, ss, tt, rs, rt, st))
        return cls(((rr, h * rs, h * rt), (h * rs, ss, h * st), (h * rt, h * st, tt)))

    @classmethod
    def zero(cls) -> "QuadForm":
        return cls(((0, 0, 0), (0, 0, 0), (0, 0, 0)))

    def coeffs(self) -> tuple:
        """Polynomial coefficients (rr, ss, tt, rs, rt, st)."""
        return tuple(self.matrix[i][j] * (1 if i == j else 2) for i, j in MONOMIALS)

    def is_zero(self) -> bool:
        return not any(self.coeffs())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs())

    def __add__(self, other: "QuadForm") -> "QuadForm":
        return QuadForm(tuple(tuple(a + b for a, b in zip(ra, rb))
                              for ra, rb in zip(self.matrix, other.matrix)))

    def scale(self, c) -> "QuadForm":
        c = Fraction(c)
        return QuadForm(tuple(tuple(c * a for a in row) for row in self.matrix))

    def __str__(self) -> str:
        names = ("r^2", "s^2", "t^2", "r*s", "r*t", "s*t")
        return _render(zip(self.coeffs(), names))


@dataclass(frozen=True)
class FormPair:
    first: QuadForm
    second: QuadForm

    def swapped(self) -> "FormPair":
        return FormPair(self.second, self.first)

    def forms(self) -> tuple:
        return (self.first, self.second)

    def is_integral(self) -> bool:
        return self.first.is_integral() and self.second.is_integral()

    def content_hash(self) -> str:
        """Stable hash of the exact matrices; equal forms hash equally however written."""
        text = ";".join(",".join(f"{c.numerator}/{c.denominator}" for c in q.coeffs())
                        for q in self.forms())
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(x) for x in self.coeffs))

    def __str__(self) -> str:
        return _render(zip(self.coeffs, VARIABLES))

    def square(self) -> QuadForm:
        v = self.coeffs
        return QuadForm(tuple(tuple(v[i] * v[j] for j in range(3)) for i in range(3)))


def _render(terms) -> str:
    out = []
    for c, name in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if a == 1:
            body = name
        elif a.denominator == 1:
            body = f"{a.numerator}*{name}"
        else:
            body = f"({a.numerator}/{a.denominator})*{name}"
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def evaluate(form: QuadForm, point: Sequence) -> Fraction:
    v = [Fraction(x) for x in point]
    m = form.matrix
    return sum((v[i] * m[i][j] * v[j] for i in range(3) for j in range(3)), Fraction(0))


# --- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_])|(\S))")  # letters one at a time: "rs" is r*s


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("var", name))
        else:
            if op not in "+-*/^()":
                raise FormSyntaxError(f"unexpected character {op!r} at {m.start(3)}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise FormSyntaxError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> QuadForm:
        if not self.tokens:
            raise FormSyntaxError("empty expression")
        acc = [Fraction(0)] * 6
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            coef, degrees = self.term()
            total = sum(degrees)
            if total != 2 and coef != 0:  # a zero term has no degree, so "0" is the zero form
                raise DegreeError(f"monomial of degree {total} in {self.text!r}")
            if coef != 0:
                i, j = [k for k in range(3) for _ in range(degrees[k])]
                acc[MONOMIALS.index((i, j))] += sign * coef
            kind, val = self.peek()
            if kind is None:
                break
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            raise FormSyntaxError(f"unexpected token {val!r} in {self.text!r}")
        return QuadForm.from_coeffs(*acc)

    def term(self):
        coef_box = [Fraction(1)]
        degrees = [0, 0, 0]
        self.factor(degrees, coef_box)
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                self.factor(degrees, coef_box)
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                self.factor(degrees, coef_box)
            else:
                break
        return coef_box[0], degrees

    def factor(self, degrees, coef_box):
        kind, val = self.take()
        if kind == "num":
            value = Fraction(val)
            if self.peek() == ("op", "/"):
                self.take()
                k2, den = self.take()
                if k2 != "num" or den == 0:
                    raise FormSyntaxError(f"bad rational coefficient in {self.text!r}")
                value /= den
            coef_box[0] *= self.power(value)
        elif kind == "op" and val == "(":
            coef_box[0] *= self.power(self.rational())
        elif kind == "var":
            if val not in VARIABLES:
                raise UnknownVariable(f"unknown variable {val!r}; expected r, s or t")
            degrees[VARIABLES.index(val)] += self.exponent()
        else:
            raise FormSyntaxError(f"unexpected token {val!r} in {self.text!r}")

    def rational(self):
        sign = 1
        kind, val = self.take()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            kind, val = self.take()
        if kind != "num":
            raise FormSyntaxError(f"parentheses must hold a rational number in {self.text!r}")
        value = Fraction(val)
        if self.peek() == ("op", "/"):
            self.take()
            k2, den = self.take()
            if k2 != "num" or den == 0:
                raise FormSyntaxError(f"bad rational coefficient in {self.text!r}")
            value /= den
        self.expect_op(")")
        return sign * value

    def exponent(self) -> int:
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise FormSyntaxError(f"exponent must be a nonnegative integer in {self.text!r}")
            return val
        return 1

    def power(self, value):
        return value ** self.exponent()


def parse_form(text: str) -> QuadForm:
    return _Parser(text).parse()


def parse_pair(text_p: str, text_q: str) -> FormPair:
    return FormPair(parse_form(text_p), parse_form(text_q))
