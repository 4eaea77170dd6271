"""Shared test helpers: seeded random polynomials and exact scalars."""

from __future__ import annotations

import random
from fractions import Fraction

from tansec.poly import GaussianRational, Polynomial


def random_fraction(rng: random.Random, bound: int = 10, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_gaussian(rng: random.Random, bound: int = 10, imag_prob: float = 0.3) -> GaussianRational:
    re = random_fraction(rng, bound)
    im = random_fraction(rng, bound) if rng.random() < imag_prob else Fraction(0)
    return GaussianRational(re, im)


def random_polynomial(
    rng: random.Random,
    num_vars: int,
    max_degree: int = 3,
    max_terms: int = 5,
    bound: int = 10,
) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_degree) for _ in range(num_vars))
        terms[exps] = random_gaussian(rng, bound)
    return Polynomial(num_vars, terms)
