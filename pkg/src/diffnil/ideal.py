"""Exact oracles for the differential ideal [x^m] in k{x}.

Every slice of fixed (degree d, weight w) of the ideal is spanned by the
products ``M * (x^m)^{(k)}`` with ``deg M = d - m`` and ``weight M = w - k``.
Two reduction methods are provided:

``"leading"``
    Reduce by the spanning element whose leading monomial is the largest
    remaining non-alpha monomial.  Every non-alpha monomial is such a leading
    monomial: ``(x^m)^{(am + r)}`` leads with ``x_a^{m-r} x_{a+1}^r``, which
    divides any monomial with ``p_a + p_{a+1} >= m``.  Fast, and each step is
    recorded as a membership certificate.

``"elimination"``
    Full exact Gaussian elimination of the whole spanning set of the slice,
    memoized per slice.  Independent of the leading-term argument; used for
    dimension counts and for cross-checking.

:func:`normal_form_via_embedding` is a third, independent route through the
Grassmann embedding, and :func:`normal_form_triangular` a fourth that reads
single coefficients of the image at the witness monomials.  The last is the
fast path for slices near the weight floor, where the alpha basis is tiny even
when the input has many monomials.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .diffpoly import (
    DiffMonomial,
    DiffPolynomial,
    _is_alpha,
    _mono,
    _mono_mul,
    alpha_floor,
    derive,
    enumerate_alpha,
    enumerate_monomials,
    format_poly,
)
from .embedding import _phi_monomial_terms, mu_witness, phi_coefficient
from .errors import InvalidInput, InvalidParameter, InvariantViolation, check_terms, require_m

METHODS = ("leading", "elimination")


def ritt_exponent(m: int, i: int) -> int:
    """Smallest j with ``x_i^j`` in [x^m]: ``(i + 1) m - i``."""
    return (i + 1) * m - i


@lru_cache(maxsize=None)
def _generator_derivative(m: int, k: int) -> DiffPolynomial:
    if k == 0:
        return DiffPolynomial.var(0, m)
    return derive(_generator_derivative(m, k - 1))


def generator_derivative(m: int, k: int) -> DiffPolynomial:
    """``(x^m)^{(k)}``: homogeneous of degree m and weight k."""
    require_m(m)
    if k < 0:
        raise InvalidParameter("k must be a natural number")
    return _generator_derivative(m, k)


@lru_cache(maxsize=None)
def _reducer(m: int, k: int) -> tuple[dict, Fraction]:
    g = _generator_derivative(m, k)
    a, r = divmod(k, m)
    expected = DiffMonomial.from_exponents({a: m - r, a + 1: r})
    lead = min(g.terms)
    if lead != expected:
        raise InvariantViolation(f"(x^{m})^({k}) leads with {lead}, expected {expected}")
    return dict(g.terms), g.terms[lead]


def _pivot(e: tuple, m: int) -> tuple[DiffMonomial, int] | None:
    """Cofactor and k such that ``cofactor * lead((x^m)^{(k)}) == e``."""
    n = len(e)
    for a in range(n):
        p = e[a]
        q = e[a + 1] if a + 1 < n else 0
        if p + q >= m:
            r = max(0, m - p)
            cof = list(e)
            cof[a] -= m - r
            if r:
                cof[a + 1] -= r
            while cof and cof[-1] == 0:
                cof.pop()
            return _mono(tuple(cof)), a * m + r
    return None


def _spanning_rows(m: int, d: int, w: int) -> list[tuple[DiffMonomial, int, DiffPolynomial]]:
    rows = []
    if d < m:
        return rows
    for k in range(w + 1):
        g = _generator_derivative(m, k)
        for cof in enumerate_monomials(d - m, w - k):
            rows.append((cof, k, DiffPolynomial.monomial(cof) * g))
    return rows


def ideal_spanning_set(m: int, d: int, w: int) -> list[DiffPolynomial]:
    """Products ``M * (x^m)^{(k)}`` spanning the (d, w) slice, by k then M."""
    require_m(m)
    return [poly for _, _, poly in _spanning_rows(m, d, w)]


@dataclass(frozen=True)
class CertificateTerm:
    cofactor: DiffMonomial
    k: int
    coefficient: Fraction


@dataclass(frozen=True)
class MembershipCertificate:
    """``f = sum coefficient * cofactor * (x^m)^{(k)}``."""

    m: int
    terms: tuple[CertificateTerm, ...]

    @classmethod
    def from_map(cls, m: int, coeffs: dict) -> MembershipCertificate:
        items = sorted(((cof, k), c) for (cof, k), c in coeffs.items() if c)
        return cls(m, tuple(CertificateTerm(cof, k, c) for (cof, k), c in items))

    def expand(self) -> DiffPolynomial:
        total = DiffPolynomial.zero()
        for t in self.terms:
            total = total + DiffPolynomial.monomial(t.cofactor, t.coefficient) * _generator_derivative(self.m, t.k)
        return total

    def to_records(self) -> list[dict]:
        return [
            {
                "cofactor": format_poly(DiffPolynomial.monomial(t.cofactor)),
                "k": t.k,
                "coefficient": f"{t.coefficient.numerator}/{t.coefficient.denominator}",
            }
            for t in self.terms
        ]


@dataclass(frozen=True)
class NormalForm:
    """An alpha_m combination, the canonical representative of a D_m element."""

    m: int
    poly: DiffPolynomial

    def __bool__(self) -> bool:
        return bool(self.poly)

    def is_zero(self) -> bool:
        return not self.poly

    def __str__(self) -> str:
        return format_poly(self.poly)


def min_alpha_weight(m: int, d: int) -> int:
    """Least weight of an alpha_m monomial of degree d."""
    return alpha_floor(m, d)


def _check_input(f: DiffPolynomial, m: int) -> None:
    require_m(m)
    if f.constant_term:
        raise InvalidInput("expected an element of k_+{x} (zero constant term)")


def _reduce_leading(terms, m: int, record: dict | None = None) -> dict:
    work = dict(terms)
    heap = [mono for mono in work if not _is_alpha(mono, m)]
    heapq.heapify(heap)
    while heap:
        # smallest tuple = largest monomial
        mono = heapq.heappop(heap)
        c = work.get(mono)
        if c is None:
            continue
        cof, k = _pivot(mono, m)
        g, lead_coef = _reducer(m, k)
        scale = c / lead_coef
        for gm, gc in g.items():
            key = _mono_mul(cof, gm)
            old = work.get(key)
            if old is None:
                work[key] = -scale * gc
                if not _is_alpha(key, m):
                    heapq.heappush(heap, key)
            else:
                new = old - scale * gc
                if new:
                    work[key] = new
                else:
                    del work[key]
        if record is not None:
            tag = (cof, k)
            record[tag] = record.get(tag, 0) + scale
        check_terms(len(work), "ideal reduction")
    return work


class _FullSlice:
    def __init__(self, m: int, d: int, w: int):
        self.m, self.d, self.w = m, d, w
        self.echelon = linalg.Echelon(track=True)
        self.spanning_size = 0
        for cof, k, poly in _spanning_rows(m, d, w):
            self.spanning_size += 1
            self.echelon.insert(poly.terms, tag=(cof, k))

    @property
    def rank(self) -> int:
        return self.echelon.rank


@lru_cache(maxsize=4096)
def _full_slice(m: int, d: int, w: int) -> _FullSlice:
    return _FullSlice(m, d, w)


def _reduce(f: DiffPolynomial, m: int, method: str, record: dict | None) -> dict:
    if method == "leading":
        return _reduce_leading(f.terms, m, record)
    if method != "elimination":
        raise InvalidParameter(f"unknown method {method!r}; expected one of {METHODS}")
    remainder: dict = {}
    for (d, w), part in f.slices().items():
        rem, combo = _full_slice(m, d, w).echelon.reduce(part.terms)
        remainder.update(rem)
        if record is not None:
            for tag, c in combo.items():
                record[tag] = record.get(tag, 0) + c
    return remainder


_MONOMIAL_NF: dict[int, dict] = {}
_MONOMIAL_NF_LIMIT = 4_000_000  # stored terms across all entries
_monomial_nf_size = 0


def _monomial_nf(m: int, mono: DiffMonomial) -> dict:
    """Normal form of one monomial, memoized per m (values are shared, read-only).

    Each non-alpha monomial reduces through its pivot to smaller monomials of
    the same slice; the dependency walk uses an explicit stack.
    """
    global _monomial_nf_size
    cache = _MONOMIAL_NF.setdefault(m, {})
    hit = cache.get(mono)
    if hit is not None:
        return hit
    if _monomial_nf_size > _MONOMIAL_NF_LIMIT:
        _MONOMIAL_NF.clear()
        _monomial_nf_size = 0
        cache = _MONOMIAL_NF.setdefault(m, {})
    floor: dict[int, int] = {}
    stack = [mono]
    while stack:
        cur = stack[-1]
        if cur in cache:
            stack.pop()
            continue
        d = sum(cur)
        lo = floor.get(d)
        if lo is None:
            lo = floor[d] = min_alpha_weight(m, d)
        if sum(i * p for i, p in enumerate(cur)) < lo:
            cache[cur] = {}
            stack.pop()
            continue
        if _is_alpha(cur, m):
            cache[cur] = {cur: Fraction(1)}
            stack.pop()
            continue
        cof, k = _pivot(cur, m)
        g, lead_coef = _reducer(m, k)
        lead = min(g)
        deps = [_mono_mul(cof, gm) for gm in g if gm != lead]
        missing = [dep for dep in deps if dep not in cache]
        if missing:
            stack.extend(missing)
            continue
        acc: dict = {}
        for gm, gc in g.items():
            if gm == lead:
                continue
            scale = -gc / lead_coef
            for t, v in cache[_mono_mul(cof, gm)].items():
                acc[t] = acc.get(t, 0) + scale * v
        cache[cur] = {t: v for t, v in acc.items() if v}
        _monomial_nf_size += len(cache[cur]) + 1
        stack.pop()
    check_terms(len(cache[mono]), "ideal reduction")
    return cache[mono]


def normal_form(f: DiffPolynomial, m: int, method: str = "leading") -> NormalForm:
    """The unique alpha_m combination congruent to ``f`` modulo [x^m].

    With the leading method, monomials in slices that contain no alpha_m
    monomial go straight to zero: leading-term reduction always ends on alpha_m
    monomials, so such slices lie in [x^m].
    """
    _check_input(f, m)
    if method == "leading":
        acc: dict = {}
        for mono, c in f.items():
            for t, v in _monomial_nf(m, mono).items():
                acc[t] = acc.get(t, 0) + c * v
        return NormalForm(m, DiffPolynomial._wrap({k: v for k, v in acc.items() if v}))
    rem = _reduce(f, m, method, None)
    bad = [mono for mono in rem if not _is_alpha(mono, m)]
    if bad:
        raise InvariantViolation(f"reduction left non-alpha monomials {bad[:3]} (m={m})")
    return NormalForm(m, DiffPolynomial._wrap({k: v for k, v in rem.items() if v}))


def membership(
    f: DiffPolynomial, m: int, method: str = "leading"
) -> tuple[bool, MembershipCertificate | None]:
    """Decide ``f in [x^m]``; a positive answer carries a certificate."""
    _check_input(f, m)
    record: dict = {}
    rem = _reduce(f, m, method, record)
    if rem:
        return False, None
    return True, MembershipCertificate.from_map(m, record)


@lru_cache(maxsize=4096)
def _embedding_slice(m: int, d: int, w: int) -> tuple[linalg.Echelon, int]:
    ech = linalg.Echelon(track=True)
    basis = enumerate_alpha(m, d, w)
    for mono in basis:
        ech.insert(_phi_monomial_terms(m, mono), tag=mono)
    return ech, len(basis)


def normal_form_via_embedding(f: DiffPolynomial, m: int) -> NormalForm:
    """Solve ``sum c_a phi(a) = phi(f)`` over the alpha basis, slice by slice."""
    _check_input(f, m)
    out: dict = {}
    for (d, w), part in f.slices().items():
        ech, count = _embedding_slice(m, d, w)
        if ech.rank != count:
            raise InvariantViolation(f"phi is not injective on slice (d={d}, w={w}), m={m}")
        target: dict = {}
        for mono, c in part.items():
            for g, v in _phi_monomial_terms(m, mono).items():
                target[g] = target.get(g, 0) + c * v
        sol = ech.solve({g: v for g, v in target.items() if v})
        if sol is None:
            raise InvariantViolation(f"phi(f) is outside the image of the alpha basis, slice ({d}, {w})")
        out.update(sol)
    return NormalForm(m, DiffPolynomial._wrap({k: v for k, v in out.items() if v}))


@lru_cache(maxsize=4096)
def _triangular_slice(m: int, d: int, w: int) -> tuple[list, list, list]:
    basis = list(reversed(enumerate_alpha(m, d, w)))
    mus = [mu_witness(m, mono) for mono in basis]
    mat = [[phi_coefficient(m, mono, mu) for mono in basis] for mu in mus]
    n = len(basis)
    if any(mat[r][c] for r in range(n) for c in range(r)) or not all(mat[r][r] for r in range(n)):
        raise InvariantViolation(f"witness matrix of slice ({d}, {w}) is not triangular, m={m}")
    return basis, mus, mat


def normal_form_triangular(f: DiffPolynomial, m: int) -> NormalForm:
    """Back-substitute through the triangular witness matrix, slice by slice.

    Row r of the system is the coefficient of the witness of the r-th basis
    monomial in ``phi(f)``; only those coefficients are ever computed.
    """
    _check_input(f, m)
    out: dict = {}
    for (d, w), part in f.slices().items():
        if w < min_alpha_weight(m, d):
            continue
        basis, mus, mat = _triangular_slice(m, d, w)
        rhs = [sum(c * phi_coefficient(m, mono, mu) for mono, c in part.items()) for mu in mus]
        sol = [Fraction(0)] * len(basis)
        for r in range(len(basis) - 1, -1, -1):
            acc = rhs[r] - sum(mat[r][c] * sol[c] for c in range(r + 1, len(basis)))
            sol[r] = Fraction(acc) / mat[r][r]
        out.update((mono, c) for mono, c in zip(basis, sol) if c)
    return NormalForm(m, DiffPolynomial._wrap(out))


def component_dimension(m: int, d: int, w: int) -> int:
    """``#monomials - rank(ideal slice)`` by full elimination.

    The degree-0 slice is the line of constants of k{x}; it lies outside D_m.
    """
    require_m(m)
    return len(enumerate_monomials(d, w)) - _full_slice(m, d, w).rank


def derivation_kernel_dimension(m: int, d: int, w: int) -> int:
    """Dimension of the kernel of the derivation D_m(d, w) -> D_m(d, w + 1)."""
    require_m(m)
    if d < 1:
        raise InvalidParameter("d must be >= 1")
    basis = enumerate_alpha(m, d, w)
    images = [normal_form(derive(DiffPolynomial.monomial(mono)), m).poly.terms for mono in basis]
    return len(basis) - linalg.rank(images)


def default_cap(f: DiffPolynomial, m: int) -> int:
    """Search cap for :func:`nil_index_element` when none is given."""
    if len(f) == 1:
        (mono,) = f.terms
        if mono.degree == 1:
            return ritt_exponent(m, len(mono) - 1) + 2
    if m == 2:
        # order-0 case of the operator bound: weight + 2
        return normal_form(f, m).poly.max_weight() + 2
    raise InvalidParameter("an explicit cap is required for m > 2")


def nil_index_element(f: DiffPolynomial, m: int, cap: int | None = None) -> int | None:
    """Smallest N <= cap with ``f^N`` in [x^m]; None when the cap is exhausted."""
    g = normal_form(f, m).poly
    if not g:
        raise InvalidInput("f is zero modulo [x^m]")
    if cap is None:
        cap = default_cap(f, m)
    power = g
    for n in range(2, cap + 1):
        power = normal_form(power * g, m).poly
        if not power:
            return n
    return None
