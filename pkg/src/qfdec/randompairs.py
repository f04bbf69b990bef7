"""Random integer pairs and rational changes of variables, for property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .formalg import FormPair, LinearForm, PairTransform, QuadForm, apply_transform
from .formalg import ratlinalg as rl
from .formalg.pencil import common_kernel, linear_dependence


def random_form(rng: random.Random, bound: int = 3) -> QuadForm:
    return QuadForm.from_coeffs(*[rng.randint(-bound, bound) for _ in range(6)])


def random_pair(rng: random.Random, bound: int = 3) -> FormPair:
    return FormPair(random_form(rng, bound), random_form(rng, bound))


def _random_invertible(rng, n, bound):
    while True:
        m = [[Fraction(rng.randint(-bound, bound), rng.randint(1, 2)) for _ in range(n)]
             for _ in range(n)]
        if rl.det(m) != 0:
            return m


def random_transform(rng: random.Random, bound: int = 5) -> PairTransform:
    return PairTransform(tuple(map(tuple, _random_invertible(rng, 3, bound))),
                         tuple(map(tuple, _random_invertible(rng, 2, bound))), exact=True)


def transformed(pair: FormPair, t: PairTransform) -> FormPair:
    return apply_transform(pair, t)


def screened(pair: FormPair) -> bool:
    return linear_dependence(pair) is None and common_kernel(pair) is None


def screened_integer_pair(rng: random.Random, bound: int = 3, plant_square: bool = False) -> FormPair:
    """A screened pair; with plant_square, some pencil member is c * l^2 by construction."""
    while True:
        if plant_square:
            q = random_form(rng, bound)
            ell = LinearForm([rng.randint(-2, 2) for _ in range(3)])
            if all(c == 0 for c in ell.coeffs):
                continue
            p = ell.square().scale(rng.choice([-2, -1, 1, 2])) + q.scale(rng.randint(-2, 2))
            pair = FormPair(p, q) if rng.random() < 0.5 else FormPair(q, p)
        else:
            pair = random_pair(rng, bound)
        if screened(pair):
            return pair
