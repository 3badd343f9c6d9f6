"""The differential embedding of D_m = k_+{x}/[x^m] into Lambda_0(V_m).

``x`` goes to ``sum_k xi[k,0] ^ eta[k,0]`` over the levels ``k = 0 .. m-2``;
the image of ``x_i`` is the i-th derivative of that sum.  Because generator
images are even they commute, and ``x^m`` maps to zero, so the map factors
through the quotient.  Injectivity on the alpha_m basis is witnessed by the
monomials built in :func:`mu_witness`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from . import linalg
from .diffpoly import DiffMonomial, DiffPolynomial, _is_alpha, enumerate_alpha
from .errors import EmptyInput, InvalidInput, InvariantViolation, require_m
from .grassmann import GrassmannElement, _wedge_mono, canonicalize, eta, wedge, xi


@lru_cache(maxsize=None)
def _generator_terms(m: int, i: int) -> dict:
    terms = {}
    for level in range(m - 1):
        for j in range(i + 1):
            sign, mono = canonicalize((xi(level, j), eta(level, i - j)))
            terms[mono] = Fraction(sign * comb(i, j))
    return terms


def phi_generator(m: int, i: int) -> GrassmannElement:
    """Image of ``x_i``: ``sum_l sum_j C(i, j) xi[l, j] ^ eta[l, i - j]``."""
    require_m(m)
    if i < 0:
        raise InvalidInput("derivative order must be a natural number")
    return GrassmannElement._wrap(m, dict(_generator_terms(m, i)))


@lru_cache(maxsize=65536)
def _phi_monomial_terms(m: int, mono: DiffMonomial) -> dict:
    acc: dict | None = None
    for i, p in enumerate(mono):
        gen = _generator_terms(m, i)
        for _ in range(p):
            if acc is None:
                acc = dict(gen)
                continue
            out: dict = {}
            for a, ca in acc.items():
                for b, cb in gen.items():
                    sign, new = _wedge_mono(a, b)
                    if sign:
                        out[new] = out.get(new, 0) + (ca * cb if sign > 0 else -ca * cb)
            acc = {k: c for k, c in out.items() if c}
            if not acc:
                return {}
    return acc or {}


def phi_monomial(m: int, mono: DiffMonomial) -> GrassmannElement:
    require_m(m)
    if not mono:
        raise InvalidInput("phi is defined on k_+{x}: the unit monomial has no image")
    return GrassmannElement._wrap(m, dict(_phi_monomial_terms(m, DiffMonomial(mono))))


def phi(m: int, f: DiffPolynomial) -> GrassmannElement:
    """Image of a differential polynomial with zero constant term."""
    require_m(m)
    if f.constant_term:
        raise InvalidInput("phi is defined on k_+{x}: nonzero constant term")
    out: dict = {}
    for mono, c in f.items():
        for g, v in _phi_monomial_terms(m, mono).items():
            out[g] = out.get(g, 0) + c * v
    return GrassmannElement._wrap(m, {k: v for k, v in out.items() if v})


def phi_coefficient(m: int, mono: DiffMonomial, target: tuple) -> int:
    """Coefficient of the canonical monomial ``target`` in the image of ``mono``.

    Each factor ``x_i`` picks one pair ``xi[l, j] ^ eta[l, i - j]`` of unused
    target vectors; a DP over the used-vector bitmask sums the signed choices
    without expanding the image.
    """
    require_m(m)
    position = {v: n for n, v in enumerate(target)}
    if len(position) != len(target) or len(target) != 2 * sum(mono):
        return 0
    states = {0: 1}
    for i, p in enumerate(mono):
        choices = []
        for level in range(m - 1):
            for j in range(i + 1):
                a, b = position.get(xi(level, j)), position.get(eta(level, i - j))
                if a is not None and b is not None:
                    choices.append((a, b, comb(i, j) * (-1 if a > b else 1)))
        for _ in range(p):
            out: dict = {}
            for mask, c in states.items():
                for a, b, v in choices:
                    if mask >> a & 1 or mask >> b & 1:
                        continue
                    # vectors already placed after a (then after b) are jumped over
                    flips = (mask >> (a + 1)).bit_count() + (mask >> (b + 1)).bit_count()
                    new = mask | 1 << a | 1 << b
                    out[new] = out.get(new, 0) + (-c * v if flips & 1 else c * v)
            states = {k: c for k, c in out.items() if c}
            if not states:
                return 0
    return states.get((1 << len(target)) - 1, 0)


def witness_pairs(m: int, mono: DiffMonomial) -> list[tuple]:
    """Per-position assignment ``(j, q, r, xi[r, k_j - q], eta[r, q])``.

    Positions count from the smallest derivative order; ``q, r = divmod(j, m-1)``.
    """
    out = []
    for j, k in enumerate(DiffMonomial(mono).orders()):
        q, r = divmod(j, m - 1)
        if k - q < 0:
            raise InvariantViolation(f"negative xi order at position {j} of {mono}")
        out.append((j, q, r, xi(r, k - q), eta(r, q)))
    return out


def mu_witness(m: int, mono: DiffMonomial) -> tuple:
    """The Grassmann monomial that certifies ``mono`` survives in phi's image."""
    require_m(m)
    mono = DiffMonomial(mono)
    if not mono:
        raise EmptyInput("the unit monomial has no witness")
    if not _is_alpha(mono, m):
        raise InvalidInput(f"{mono} is not an alpha_{m} monomial")
    vectors = []
    for _, _, _, a, b in witness_pairs(m, mono):
        vectors += (a, b)
    sign, word = canonicalize(vectors)
    if not sign:
        raise InvariantViolation(f"witness vectors for {mono} are not distinct")
    return word


def coefficient_of(u: GrassmannElement, mu) -> Fraction:
    return u.coefficient(mu)


def witness_matrix(m: int, d: int, w: int) -> tuple[list[DiffMonomial], list[list[Fraction]]]:
    """Rows and columns are alpha monomials sorted ascending (smallest first).

    Entry ``[r][c]`` is the coefficient of ``mu_witness(row r)`` in
    ``phi(column c)``; it vanishes for ``c < r`` and is nonzero on the diagonal.
    """
    basis = list(reversed(enumerate_alpha(m, d, w)))
    witnesses = [mu_witness(m, mono) for mono in basis]
    images = [_phi_monomial_terms(m, mono) for mono in basis]
    matrix = [[img.get(mu, Fraction(0)) for img in images] for mu in witnesses]
    return basis, matrix


def is_upper_triangular(matrix: list[list[Fraction]]) -> bool:
    n = len(matrix)
    return all(matrix[r][r] != 0 for r in range(n)) and all(
        matrix[r][c] == 0 for r in range(n) for c in range(r)
    )


def injectivity_rank(m: int, d: int, w: int) -> tuple[int, int]:
    """``(rank of phi on the alpha_m basis of slice (d, w), basis size)``."""
    require_m(m)
    basis = enumerate_alpha(m, d, w)
    if d == 0:
        # the unit is not in k_+{x}
        basis = []
    r = linalg.rank(_phi_monomial_terms(m, mono) for mono in basis)
    return r, len(basis)
