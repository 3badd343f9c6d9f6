"""Differential operators over (D_2)_id, the algebra D_2 with a unit adjoined.

An operator is ``sum_n a_n D^n`` with ``a_n = scalar + (alpha_2 combination)``.
Products use ``D c = c D + c'``, hence ``D^n c = sum_j C(n, j) c^{(j)} D^{n-j}``.
Coefficients are put back into normal form after every step, except in the
primality-witness products: there the arithmetic runs over k{x} and only the
final coefficients are reduced.  Since [x^2] is a differential ideal, reduction
is a ring map from k{x}[D] onto D_2[D], so both orders give the same operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping

from .diffpoly import (
    UNIT,
    DiffPolynomial,
    _fraction_str,
    _mono_str,
    derive,
    enumerate_alpha,
    parse_terms,
)
from .diffpoly import to_records as poly_records
from .errors import EmptyInput, InvalidInput, InvariantViolation
from .ideal import min_alpha_weight, normal_form, normal_form_triangular

M = 2


def _nf(f: DiffPolynomial) -> DiffPolynomial:
    return normal_form(f, M).poly


@dataclass(frozen=True)
class OperatorCoefficient:
    """``scalar * 1 + poly`` in (D_2)_id; ``poly`` is kept in normal form."""

    scalar: Fraction = Fraction(0)
    poly: DiffPolynomial = field(default_factory=DiffPolynomial.zero)

    @classmethod
    def of(cls, value) -> OperatorCoefficient:
        if isinstance(value, OperatorCoefficient):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        if isinstance(value, DiffPolynomial):
            const = value.constant_term
            rest = value - const if const else value
            return cls(const, _nf(rest))
        raise TypeError(f"cannot make an operator coefficient from {type(value).__name__}")

    def __bool__(self) -> bool:
        return bool(self.scalar) or bool(self.poly)

    def __add__(self, other: OperatorCoefficient) -> OperatorCoefficient:
        return OperatorCoefficient(self.scalar + other.scalar, self.poly + other.poly)

    def __sub__(self, other: OperatorCoefficient) -> OperatorCoefficient:
        return OperatorCoefficient(self.scalar - other.scalar, self.poly - other.poly)

    def __neg__(self) -> OperatorCoefficient:
        return OperatorCoefficient(-self.scalar, -self.poly)

    def __mul__(self, other) -> OperatorCoefficient:
        if isinstance(other, (int, Fraction)):
            return OperatorCoefficient(self.scalar * other, self.poly * other)
        s1, p1, s2, p2 = self.scalar, self.poly, other.scalar, other.poly
        poly = p1 * s2 + p2 * s1
        if p1 and p2:
            poly = poly + _nf(p1 * p2)
        return OperatorCoefficient(s1 * s2, poly)

    __rmul__ = __mul__

    def derive(self) -> OperatorCoefficient:
        return OperatorCoefficient(Fraction(0), _nf(derive(self.poly)))

    @property
    def weight(self) -> int:
        return self.poly.max_weight()

    def as_poly(self) -> DiffPolynomial:
        return self.poly + self.scalar if self.scalar else self.poly

    def __str__(self) -> str:
        return str(self.as_poly())


_ZERO = OperatorCoefficient()


class DiffOperator:
    """Finite sum ``sum_n a_n D^n`` with nonzero coefficients only."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        for n, c in (coeffs or {}).items():
            if n < 0:
                raise InvalidInput("D-orders must be natural numbers")
            c = OperatorCoefficient.of(c)
            if c:
                clean[n] = c
        self._coeffs = clean

    @classmethod
    def _wrap(cls, coeffs: dict) -> DiffOperator:
        obj = object.__new__(cls)
        obj._coeffs = coeffs
        return obj

    @classmethod
    def zero(cls) -> DiffOperator:
        return cls._wrap({})

    @classmethod
    def one(cls) -> DiffOperator:
        return cls({0: 1})

    @classmethod
    def d(cls, n: int = 1) -> DiffOperator:
        return cls({n: 1})

    @classmethod
    def of(cls, value, order: int = 0) -> DiffOperator:
        return cls({order: value})

    def items(self) -> Iterator[tuple[int, OperatorCoefficient]]:
        return iter(sorted(self._coeffs.items(), reverse=True))

    def coefficient(self, n: int) -> OperatorCoefficient:
        return self._coeffs.get(n, _ZERO)

    @property
    def order(self) -> int:
        if not self._coeffs:
            raise EmptyInput("the zero operator has no order")
        return max(self._coeffs)

    def in_d2(self) -> bool:
        """True when every scalar part vanishes, i.e. the operator lies in D_2[D]."""
        return all(not c.scalar for c in self._coeffs.values())

    def max_weight(self) -> int:
        return max((c.weight for c in self._coeffs.values()), default=0)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffOperator):
            return self._coeffs == other._coeffs
        if isinstance(other, int) and other == 0:
            return not self._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: DiffOperator) -> DiffOperator:
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            s = out.get(n, _ZERO) + c
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return DiffOperator._wrap(out)

    def __neg__(self) -> DiffOperator:
        return DiffOperator._wrap({n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other: DiffOperator) -> DiffOperator:
        return self + (-other)

    def __mul__(self, other) -> DiffOperator:
        if isinstance(other, (int, Fraction)):
            if not other:
                return DiffOperator.zero()
            return DiffOperator._wrap({n: c * other for n, c in self._coeffs.items()})
        if isinstance(other, DiffOperator):
            return op_multiply(self, other)
        return NotImplemented

    def __rmul__(self, other) -> DiffOperator:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> DiffOperator:
        result = DiffOperator.one()
        for _ in range(n):
            result = op_multiply(result, self)
        return result

    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"DiffOperator({format_operator(self)!r})"


def op_multiply(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    if not a or not b:
        return DiffOperator.zero()
    top = max(a._coeffs)
    # derivative chains b_j, b_j', ..., b_j^{(top)}
    chains = {}
    for j, bj in b._coeffs.items():
        chain = [bj]
        for _ in range(top):
            chain.append(chain[-1].derive() if chain[-1].poly else _ZERO)
        chains[j] = chain
    out: dict[int, OperatorCoefficient] = {}
    for i, ai in a._coeffs.items():
        for j, chain in chains.items():
            for t in range(i + 1):
                bt = chain[t]
                if not bt:
                    continue
                term = ai * bt
                if not term:
                    continue
                n = i - t + j
                out[n] = out.get(n, _ZERO) + term * comb(i, t)
    return DiffOperator._wrap({n: c for n, c in out.items() if c})


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return op_multiply(a, b) - op_multiply(b, a)


def leading_coefficient(a: DiffOperator) -> OperatorCoefficient:
    if not a:
        raise EmptyInput("the zero operator has no leading coefficient")
    return a._coeffs[max(a._coeffs)]


def _require_nil_domain(a: DiffOperator) -> None:
    if not a:
        raise InvalidInput("the zero operator")
    if not a.in_d2():
        raise InvalidInput("operator has a nonzero scalar part; scalars are never nilpotent")


def nil_bound(a: DiffOperator) -> int:
    """An N with ``a^N = 0``: ``max coefficient weight + D-order + 2``.

    Coefficients of ``a^N`` have degree at least N and weight at most
    ``N (w + n)``, while a nonzero product of degree D needs weight
    ``D(D - 1)`` or more after embedding; so ``N - 1 > w + n`` forces zero.
    """
    _require_nil_domain(a)
    return a.max_weight() + a.order + 2


def nil_index_operator(a: DiffOperator) -> int:
    bound = nil_bound(a)
    power = a
    n = 1
    while power:
        power = op_multiply(power, a)
        n += 1
        if n > bound and power:
            raise InvariantViolation(f"a^{n} is nonzero beyond the nil bound {bound}")
    return n


# -- primality witnesses -----------------------------------------------------


@dataclass(frozen=True)
class PrimalityWitness:
    """A nonzero product exhibiting that two ideals do not annihilate each other.

    Corollary form: ``c`` is None and ``product = b^{(k)} a``.
    Operator form: ``product = [(c D)^k, a] b``.
    """

    k: int
    product: object
    c: DiffPolynomial | None = None

    @property
    def kind(self) -> str:
        return "element" if self.c is None else "operator"


@dataclass(frozen=True)
class SearchExhausted:
    k_range: tuple[int, int]
    c_range: tuple[int, int] | None = None
    reason: str = ""


def _nonzero_element(f: DiffPolynomial, name: str) -> DiffPolynomial:
    g = _nf(f)
    if not g:
        raise InvalidInput(f"{name} is zero in D_2")
    return g


def witness_corollary(a: DiffPolynomial, b: DiffPolynomial, cap: int = 10):
    """Least ``k <= cap`` with ``b^{(k)} a`` nonzero in D_2."""
    a = _nonzero_element(a, "a")
    b = _nonzero_element(b, "b")
    bk = b
    for k in range(cap + 1):
        if k:
            bk = _nf(derive(bk))
        prod = _nf(bk * a)
        if prod:
            return PrimalityWitness(k, prod)
    return SearchExhausted((0, cap), reason="no k found; contradicts primality of D_2, suspected bug")


def c_candidates(c_cap: int) -> Iterator[int]:
    """Orders j of the candidates ``c = x_j``, scanned in increasing order."""
    return iter(range(c_cap + 1))


def candidate_element(j: int) -> DiffPolynomial:
    return DiffPolynomial.var(j)


# Witness products are computed unreduced: a lifted operator maps D-order to
# a polynomial of k{x}, constants included.

def _lift(a: DiffOperator) -> dict[int, DiffPolynomial]:
    return {n: c.as_poly() for n, c in a._coeffs.items()}


def _lifted_multiply(a: dict, b: dict) -> dict[int, DiffPolynomial]:
    if not a or not b:
        return {}
    top = max(a)
    chains = {}
    for j, bj in b.items():
        chain = [bj]
        for _ in range(top):
            chain.append(derive(chain[-1]))
        chains[j] = chain
    out: dict[int, DiffPolynomial] = {}
    for i, ai in a.items():
        for j, chain in chains.items():
            for t in range(i + 1):
                if not chain[t]:
                    continue
                n = i - t + j
                term = ai * chain[t] * comb(i, t)
                out[n] = out[n] + term if n in out else term
    return {n: c for n, c in out.items() if c}


def _lifted_sub(a: dict, b: dict) -> dict[int, DiffPolynomial]:
    out = dict(a)
    for n, c in b.items():
        out[n] = out[n] - c if n in out else -c
    return {n: c for n, c in out.items() if c}


# slices with at most this many alpha monomials use the triangular readout
_TRIANGULAR_MAX = 64


def _reduce_fast(f: DiffPolynomial) -> DiffPolynomial:
    """Normal form that drops slices below the weight floor and reads small
    slices off the witness matrix; the rest go through leading-term reduction."""
    small: dict = {}
    large: dict = {}
    for (d, w), part in f.slices().items():
        if w < min_alpha_weight(M, d):
            continue
        bucket = small if len(enumerate_alpha(M, d, w)) <= _TRIANGULAR_MAX else large
        bucket.update(part.terms)
    out = DiffPolynomial.zero()
    if small:
        out = out + normal_form_triangular(DiffPolynomial._wrap(small), M).poly
    if large:
        out = out + _nf(DiffPolynomial._wrap(large))
    return out


def _lower(a: dict, reduce) -> DiffOperator:
    out = {}
    for n, f in a.items():
        const = f.constant_term
        c = OperatorCoefficient(const, reduce(f - const if const else f))
        if c:
            out[n] = c
    return DiffOperator._wrap(out)


def _lifted_theorem2(t: dict, a: dict, b: dict) -> dict[int, DiffPolynomial]:
    comm = _lifted_sub(_lifted_multiply(t, a), _lifted_multiply(a, t))
    return _lifted_multiply(comm, b)


def theorem2_product(c: DiffPolynomial, k: int, a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """``[(c D)^k, a] b``, an element of the product of the ideals of a and b."""
    t = {0: DiffPolynomial.constant(1)}
    for _ in range(k):
        t = _lifted_multiply(t, {1: c})
    return _lower(_lifted_theorem2(t, _lift(a), _lift(b)), _reduce_fast)


def _min_degree(a: DiffOperator) -> int:
    return min(c.poly.min_degree() for c in a._coeffs.values())


def _provably_zero(k: int, j: int, a: DiffOperator, b: DiffOperator) -> bool:
    """Weight-floor test for ``[(x_j D)^k, a] b`` with a, b in D_2[D].

    Every coefficient of the product has degree at least
    ``k + mindeg(a) + mindeg(b)`` and weight at most ``k j + w_a + w_b``
    plus the number of D's that can land on coefficients.  A nonzero element
    of D_2 of degree d has weight at least d(d - 1).
    """
    degree = k + _min_degree(a) + _min_degree(b)
    weight = k * j + a.max_weight() + b.max_weight() + k + a.order + b.order
    return weight < min_alpha_weight(M, degree)


def witness_theorem2(a: DiffOperator, b: DiffOperator, k_cap: int = 10, c_cap: int = 12):
    """Find ``c`` and ``k`` with ``[(c D)^k, a] b != 0``.

    The scan starts at the k supplied by :func:`witness_corollary` on the
    leading coefficients (at least 1, since ``(c D)^0`` commutes with all)
    and moves to larger k if no candidate works, then back to the smaller k
    it skipped.  Candidates that the weight floor rules out are skipped
    without computing the product.
    """
    for name, op in (("a", a), ("b", b)):
        if not op:
            raise InvalidInput(f"{name} is the zero operator")
        if not op.in_d2():
            raise InvalidInput(f"{name} must lie in D_2[D] (no scalar parts)")
    lead = witness_corollary(leading_coefficient(b).poly, leading_coefficient(a).poly, k_cap)
    start = k_cap + 1 if isinstance(lead, SearchExhausted) else max(lead.k, 1)
    la, lb = _lift(a), _lift(b)
    powers: dict[int, tuple[int, dict]] = {}  # j -> (k, lifted (x_j D)^k)
    # the corollary's k first, then larger, then the smaller ones it skipped
    for k in [*range(start, k_cap + 1), *range(1, start)]:
        for j in c_candidates(c_cap):
            if _provably_zero(k, j, a, b):
                continue
            c = candidate_element(j)
            have, t = powers.get(j, (0, {0: DiffPolynomial.constant(1)}))
            if have > k:
                have, t = 0, {0: DiffPolynomial.constant(1)}
            for _ in range(k - have):
                t = _lifted_multiply(t, {1: c})
            powers[j] = (k, t)
            prod = _lower(_lifted_theorem2(t, la, lb), _reduce_fast)
            if prod:
                return PrimalityWitness(k, prod, c)
    return SearchExhausted((1, k_cap), (0, c_cap), reason="no candidate c found")


def verify_witness(w: PrimalityWitness, a, b) -> bool:
    """Recompute the product from scratch and compare.

    Operator witnesses are re-reduced by leading-term reduction alone, a route
    independent of the triangular readout used during the search.
    """
    if not w.product:
        return False
    if w.c is None:
        bk = _nf(b)
        for _ in range(w.k):
            bk = _nf(derive(bk))
        return _nf(bk * _nf(a)) == w.product
    t = {0: DiffPolynomial.constant(1)}
    for _ in range(w.k):
        t = _lifted_multiply(t, {1: w.c})
    return _lower(_lifted_theorem2(t, _lift(a), _lift(b)), _nf) == w.product


# -- text forms --------------------------------------------------------------


def format_operator(a: DiffOperator) -> str:
    if not a:
        return "0"
    pieces = []
    for n, c in a.items():
        dpart = "" if n == 0 else ("D" if n == 1 else f"D^{n}")
        terms = [(mono, c.poly.coefficient(mono)) for mono in c.poly.support()]
        if c.scalar:
            terms.append((UNIT, c.scalar))
        for mono, v in terms:
            factors = [_fraction_str(abs(v))]
            if mono:
                factors.append(_mono_str(mono))
            if dpart:
                factors.append(dpart)
            body = "*".join(factors)
            if not pieces:
                pieces.append(("-" if v < 0 else "") + body)
            else:
                pieces.append((" - " if v < 0 else " + ") + body)
    return "".join(pieces)


def parse_operator(text: str) -> DiffOperator:
    """Parse e.g. ``"x0*D^2 + x1*D + 1"``; ``D`` factors come last in a term."""
    grouped: dict[int, dict] = {}
    for coeff, mono, order in parse_terms(text, allow_d=True):
        bucket = grouped.setdefault(order, {})
        bucket[mono] = bucket.get(mono, 0) + coeff
    return DiffOperator({n: DiffPolynomial(t) for n, t in grouped.items()})


def to_records(a: DiffOperator) -> list[dict]:
    return [
        {
            "order": n,
            "scalar": f"{c.scalar.numerator}/{c.scalar.denominator}",
            "poly": poly_records(c.poly),
        }
        for n, c in a.items()
    ]
