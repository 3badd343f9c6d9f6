"""Seeded random elements of D_2, D_2[D] and k_+{x}.

Elements of D_2 are drawn uniformly over supports of alpha_2 monomials with
degree 1..3 and weight <= 4, coefficients in {-2, -1, 1, 2}.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .diffop import DiffOperator
from .diffpoly import DiffMonomial, DiffPolynomial, enumerate_alpha, enumerate_monomials

COEFFICIENTS = (-2, -1, 1, 2)


@lru_cache(maxsize=None)
def _alpha_pool(m: int, max_degree: int, max_weight: int) -> tuple[DiffMonomial, ...]:
    return tuple(
        mono
        for d in range(1, max_degree + 1)
        for w in range(max_weight + 1)
        for mono in enumerate_alpha(m, d, w)
    )


def random_element(
    rng: random.Random, m: int = 2, max_degree: int = 3, max_weight: int = 4, max_terms: int = 3
) -> DiffPolynomial:
    """A nonzero alpha_m combination (hence nonzero in D_m)."""
    pool = _alpha_pool(m, max_degree, max_weight)
    k = rng.randint(1, min(max_terms, len(pool)))
    support = rng.sample(pool, k)
    return DiffPolynomial({mono: rng.choice(COEFFICIENTS) for mono in support})


def random_operator(
    rng: random.Random, max_order: int = 3, max_degree: int = 3, max_weight: int = 4
) -> DiffOperator:
    """A nonzero operator in D_2[D]; every lower order is present with probability 1/2."""
    top = rng.randint(0, max_order)
    coeffs = {top: random_element(rng, 2, max_degree, max_weight)}
    for n in range(top):
        if rng.random() < 0.5:
            coeffs[n] = random_element(rng, 2, max_degree, max_weight)
    return DiffOperator(coeffs)


def random_polynomial(
    rng: random.Random, max_degree: int = 4, max_weight: int = 8, max_terms: int = 4
) -> DiffPolynomial:
    """An arbitrary element of k_+{x} (not reduced), possibly zero after cancellation."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(1, max_degree)
        w = rng.randint(0, max_weight)
        monos = enumerate_monomials(d, w)
        if monos:
            mono = rng.choice(monos)
            terms[mono] = terms.get(mono, 0) + rng.choice(COEFFICIENTS)
    return DiffPolynomial(terms)
