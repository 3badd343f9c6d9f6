"""Differential polynomials in one indeterminate over the rationals.

``k{x} = Q[x_0, x_1, x_2, ...]`` with the derivation ``x_n' = x_{n+1}``.

A monomial ``x_0^{p_0} x_1^{p_1} ... x_n^{p_n}`` is stored as its dense
exponent tuple ``(p_0, ..., p_n)`` with trailing zeros stripped.  Two
gradings matter everywhere: the degree ``sum p_i`` and the weight
``sum i * p_i``.  The derivation preserves degree and raises weight by one,
and the generator ``x^m`` is bihomogeneous, so every question about the
ideal ``[x^m]`` splits along (degree, weight) slices.

The monomial order compares exponent vectors at the first differing index
and declares the monomial with the *smaller* exponent there to be larger.
On stripped tuples this is exactly the reverse of Python's tuple order, so
``sorted(monomials)`` lists them from largest to smallest.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import EmptyInput, InvalidInput, ParseError, check_terms, require_m

Rational = Fraction


class DiffMonomial(tuple):
    """Exponent vector ``(p_0, p_1, ...)``; the empty tuple is the unit 1."""

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        exps = list(exponents)
        for p in exps:
            if not isinstance(p, int) or p < 0:
                raise InvalidInput(f"exponents must be natural numbers, got {p!r}")
        while exps and exps[-1] == 0:
            exps.pop()
        return tuple.__new__(cls, exps)

    @classmethod
    def from_exponents(cls, mapping: Mapping[int, int]) -> DiffMonomial:
        """Build from a sparse ``{order: exponent}`` map."""
        if not mapping:
            return UNIT
        if min(mapping) < 0:
            raise InvalidInput("derivative orders must be natural numbers")
        dense = [0] * (max(mapping) + 1)
        for i, p in mapping.items():
            dense[i] += p
        return cls(dense)

    @classmethod
    def var(cls, i: int, power: int = 1) -> DiffMonomial:
        return cls.from_exponents({i: power})

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> DiffMonomial:
        """The product ``x_{k_0} x_{k_1} ...`` for a multiset of orders."""
        counts: dict[int, int] = {}
        for k in orders:
            counts[k] = counts.get(k, 0) + 1
        return cls.from_exponents(counts)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def weight(self) -> int:
        return sum(i * p for i, p in enumerate(self))

    @property
    def exponents(self) -> dict[int, int]:
        return {i: p for i, p in enumerate(self) if p}

    def orders(self) -> list[int]:
        """Derivative orders with multiplicity, ascending (``k_0 <= k_1 <= ...``)."""
        return [i for i, p in enumerate(self) for _ in range(p)]

    def mul(self, other: tuple) -> DiffMonomial:
        return _mono_mul(self, other)

    def divides(self, other: tuple) -> bool:
        return len(self) <= len(other) and all(p <= q for p, q in zip(self, other))

    def div(self, other: tuple) -> DiffMonomial:
        """Exact quotient ``self / other``; ``other`` must divide ``self``."""
        out = list(self)
        for i, p in enumerate(other):
            out[i] -= p
            if out[i] < 0:
                raise InvalidInput(f"{_mono_str(other)} does not divide {_mono_str(self)}")
        return DiffMonomial(out)

    def __repr__(self) -> str:
        return f"DiffMonomial({_mono_str(self)})"

    def __str__(self) -> str:
        return _mono_str(self)


UNIT = tuple.__new__(DiffMonomial, ())


def _mono(t: tuple) -> DiffMonomial:
    return tuple.__new__(DiffMonomial, t)


def _mono_mul(a: tuple, b: tuple) -> DiffMonomial:
    if len(a) < len(b):
        a, b = b, a
    return tuple.__new__(DiffMonomial, tuple(x + y for x, y in zip(a, b)) + a[len(b):])


def _mono_str(e: tuple) -> str:
    if not e:
        return "1"
    parts = []
    for i, p in enumerate(e):
        if p == 1:
            parts.append(f"x{i}")
        elif p:
            parts.append(f"x{i}^{p}")
    return "*".join(parts)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class DiffPolynomial:
    """Sparse Q-linear combination of :class:`DiffMonomial`.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        clean: dict[DiffMonomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = _coerce(c)
            if c:
                key = mono if isinstance(mono, DiffMonomial) else DiffMonomial(mono)
                c = clean.get(key, 0) + c
                if c:
                    clean[key] = c
                else:
                    clean.pop(key, None)
        self._terms = clean

    @classmethod
    def _wrap(cls, terms: dict) -> DiffPolynomial:
        # trusted: keys are DiffMonomial, values nonzero Fractions
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls) -> DiffPolynomial:
        return cls._wrap({})

    @classmethod
    def constant(cls, c) -> DiffPolynomial:
        return cls({UNIT: c})

    @classmethod
    def var(cls, i: int, power: int = 1) -> DiffPolynomial:
        return cls._wrap({DiffMonomial.var(i, power): Fraction(1)})

    @classmethod
    def monomial(cls, mono: tuple, c=1) -> DiffPolynomial:
        return cls({mono: c})

    @property
    def terms(self) -> Mapping[DiffMonomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono: tuple) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def support(self) -> list[DiffMonomial]:
        """Supported monomials, largest first."""
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[DiffMonomial]:
        return iter(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({UNIT: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> DiffPolynomial:
        return DiffPolynomial._wrap({k: -c for k, c in self._terms.items()})

    def __add__(self, other) -> DiffPolynomial:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        _axpy(out, other._terms, Fraction(1))
        return DiffPolynomial._wrap(out)

    __radd__ = __add__

    def __sub__(self, other) -> DiffPolynomial:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        _axpy(out, other._terms, Fraction(-1))
        return DiffPolynomial._wrap(out)

    def __rsub__(self, other) -> DiffPolynomial:
        return -self + other

    def __mul__(self, other) -> DiffPolynomial:
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return DiffPolynomial.zero()
            return DiffPolynomial._wrap({k: v * c for k, v in self._terms.items()})
        if isinstance(other, DiffPolynomial):
            return multiply(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> DiffPolynomial:
        if n < 0:
            raise InvalidInput("negative power")
        result = DiffPolynomial.constant(1)
        for _ in range(n):
            result = multiply(result, self)
        return result

    def derive(self, times: int = 1) -> DiffPolynomial:
        f = self
        for _ in range(times):
            f = derive(f)
        return f

    def slices(self) -> dict[tuple[int, int], DiffPolynomial]:
        """Split into bihomogeneous parts keyed by (degree, weight)."""
        out: dict[tuple[int, int], dict] = {}
        for mono, c in self._terms.items():
            out.setdefault((mono.degree, mono.weight), {})[mono] = c
        return {key: DiffPolynomial._wrap(t) for key, t in sorted(out.items())}

    def max_weight(self) -> int:
        return max((mono.weight for mono in self._terms), default=0)

    def min_degree(self) -> int:
        return min((mono.degree for mono in self._terms), default=0)

    def __repr__(self) -> str:
        return f"DiffPolynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(x) -> DiffPolynomial | None:
    if isinstance(x, DiffPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return DiffPolynomial.constant(x)
    return None


def _axpy(acc: dict, terms: Mapping, scale: Fraction) -> None:
    """In place ``acc += scale * terms``, dropping cancelled entries."""
    for mono, c in terms.items():
        v = acc.get(mono)
        if v is None:
            acc[mono] = c * scale
        else:
            v += c * scale
            if v:
                acc[mono] = v
            else:
                del acc[mono]


def derive_monomial(e: tuple) -> dict[DiffMonomial, int]:
    """Derivative of a single monomial as ``{monomial: integer coefficient}``."""
    out: dict[DiffMonomial, int] = {}
    n = len(e)
    for i, p in enumerate(e):
        if not p:
            continue
        new = list(e)
        new[i] -= 1
        if i + 1 < n:
            new[i + 1] += 1
        else:
            new.append(1)
        while new and new[-1] == 0:
            new.pop()
        key = _mono(tuple(new))
        out[key] = out.get(key, 0) + p
    return out


def derive(f: DiffPolynomial) -> DiffPolynomial:
    """Apply the derivation ``x_n -> x_{n+1}`` with the Leibniz rule."""
    out: dict[DiffMonomial, Fraction] = {}
    for mono, c in f.items():
        for new, k in derive_monomial(mono).items():
            out[new] = out.get(new, 0) + c * k
    return DiffPolynomial._wrap({k: v for k, v in out.items() if v})


def multiply(f: DiffPolynomial, g: DiffPolynomial) -> DiffPolynomial:
    out: dict[DiffMonomial, Fraction] = {}
    for a, ca in f.items():
        for b, cb in g.items():
            key = _mono_mul(a, b)
            out[key] = out.get(key, 0) + ca * cb
    check_terms(len(out), "multiply")
    return DiffPolynomial._wrap({k: v for k, v in out.items() if v})


def is_alpha(mono: tuple, m: int) -> bool:
    """``p_i + p_{i+1} < m`` for every i (absent exponents are 0)."""
    require_m(m)
    return _is_alpha(mono, m)


def _is_alpha(e: tuple, m: int) -> bool:
    if not e:
        return True
    if e[-1] >= m:
        return False
    return all(e[i] + e[i + 1] < m for i in range(len(e) - 1))


@lru_cache(maxsize=None)
def _monomials(d: int, w: int) -> tuple[DiffMonomial, ...]:
    found = []

    def rec(remaining_parts: int, remaining_weight: int, low: int, acc: list[int]):
        if remaining_parts == 0:
            if remaining_weight == 0:
                found.append(DiffMonomial.from_orders(acc))
            return
        # parts are nondecreasing, so every remaining part is >= low
        for k in range(low, remaining_weight // remaining_parts + 1):
            acc.append(k)
            rec(remaining_parts - 1, remaining_weight - k, k, acc)
            acc.pop()

    rec(d, w, 0, [])
    return tuple(sorted(found))


def enumerate_monomials(d: int, w: int) -> list[DiffMonomial]:
    """All monomials of degree ``d`` and weight ``w``, largest first."""
    if d < 0 or w < 0:
        return []
    return list(_monomials(d, w))


def alpha_floor(m: int, d: int) -> int:
    """Least weight of an alpha_m monomial of degree d.

    Sorted orders of an alpha_m monomial satisfy ``k_i >= 2 * (i // (m - 1))``
    and ``x_0^{m-1} x_2^{m-1} x_4^{m-1} ...`` attains the bound.
    """
    return sum(2 * (i // (m - 1)) for i in range(d))


@lru_cache(maxsize=4096)
def _alpha(m: int, d: int, w: int) -> tuple[DiffMonomial, ...]:
    found = []
    floors = [alpha_floor(m, r) for r in range(d + 1)]

    def rec(i: int, prev: int, rem_d: int, rem_w: int, acc: list[int]):
        if rem_d == 0:
            if rem_w == 0:
                while acc and not acc[-1]:
                    acc = acc[:-1]
                found.append(_mono(tuple(acc)))
            return
        # the rest sits at orders >= i and is itself alpha
        if rem_w < rem_d * i + floors[rem_d]:
            return
        for p in range(min(m - 1 - prev, rem_d), -1, -1):
            if p * i <= rem_w:
                acc.append(p)
                rec(i + 1, p, rem_d - p, rem_w - p * i, acc)
                acc.pop()

    rec(0, 0, d, w, [])
    return tuple(sorted(found))


def enumerate_alpha(m: int, d: int, w: int) -> list[DiffMonomial]:
    """Alpha_m monomials of degree ``d`` and weight ``w``, largest first."""
    require_m(m)
    if d < 0 or w < 0:
        return []
    return list(_alpha(m, d, w))


class Order(enum.Enum):
    P_LARGER = "P_larger"
    Q_LARGER = "Q_larger"
    EQUAL = "equal"


def compare_order(p: tuple, q: tuple) -> Order:
    """Compare at the first differing exponent; the smaller exponent wins."""
    if tuple(p) == tuple(q):
        return Order.EQUAL
    n = max(len(p), len(q))
    for j in range(n):
        pj = p[j] if j < len(p) else 0
        qj = q[j] if j < len(q) else 0
        if pj != qj:
            return Order.P_LARGER if pj < qj else Order.Q_LARGER
    return Order.EQUAL


def leading_monomial(f: DiffPolynomial) -> DiffMonomial:
    if not f:
        raise EmptyInput("the zero polynomial has no leading monomial")
    # tuple order is the reverse of the monomial order
    return min(f.terms)


# -- text and structured forms ------------------------------------------------


def _fraction_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: DiffPolynomial) -> str:
    """Render in the input grammar, terms in descending monomial order."""
    if not f:
        return "0"
    pieces = []
    for mono in f.support():
        c = f.coefficient(mono)
        body = _fraction_str(abs(c))
        if mono:
            body += "*" + _mono_str(mono)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("nat", text[i:j], i))
                i = j
            elif ch in "x+-*/^D":
                self.tokens.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", text, i)
        self.tokens.append(("end", "", len(text)))
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.text, tok[2])

    def nat(self, what: str) -> int:
        tok = self.peek()
        if tok[0] == "-":
            raise self.error(f"negative {what}")
        if tok[0] != "nat":
            raise self.error(f"expected {what}")
        self.take()
        return int(tok[1])


def parse_terms(text: str, allow_d: bool = False) -> list[tuple[Fraction, DiffMonomial, int]]:
    """Parse into ``(coefficient, monomial, d_order)`` triples.

    ``d_order`` is the power of the operator symbol ``D`` and is always 0 when
    ``allow_d`` is false.  ``D`` factors must come last in a term.
    """
    lex = _Lexer(text)
    out = []
    sign = 1
    if lex.peek()[0] == "-":
        lex.take()
        sign = -1
    while True:
        coeff, mono, order = _parse_term(lex, allow_d)
        out.append((sign * coeff, mono, order))
        kind = lex.peek()[0]
        if kind == "end":
            return out
        if kind not in "+-":
            raise lex.error("expected '+', '-' or end of input")
        sign = 1 if lex.take()[0] == "+" else -1


def _parse_term(lex: _Lexer, allow_d: bool) -> tuple[Fraction, DiffMonomial, int]:
    coeff = Fraction(1)
    exps: dict[int, int] = {}
    d_order = 0
    tok = lex.peek()
    if tok[0] == "nat":
        lex.take()
        num = int(tok[1])
        if lex.peek()[0] == "/":
            slash = lex.take()
            den_tok = lex.peek()
            if den_tok[0] != "nat" or int(den_tok[1]) == 0:
                raise lex.error("malformed rational", slash)
            lex.take()
            coeff = Fraction(num, int(den_tok[1]))
        else:
            coeff = Fraction(num)
        if lex.peek()[0] != "*":
            return coeff, UNIT, 0
        lex.take()
    while True:
        tok = lex.take()
        if tok[0] == "x":
            if d_order:
                raise lex.error("'D' factors must come last in a term", tok)
            order = lex.nat("derivative order after 'x'")
            power = 1
            if lex.peek()[0] == "^":
                lex.take()
                power = lex.nat("exponent")
            exps[order] = exps.get(order, 0) + power
        elif tok[0] == "D" and allow_d:
            power = 1
            if lex.peek()[0] == "^":
                lex.take()
                power = lex.nat("exponent")
            d_order += power
        else:
            raise lex.error("expected a factor", tok)
        if lex.peek()[0] != "*":
            break
        lex.take()
    return coeff, DiffMonomial.from_exponents(exps), d_order


def parse(text: str) -> DiffPolynomial:
    """Parse e.g. ``"2*x0*x1 - 1/2*x3^2"``; ``xk`` is the k-th derivative."""
    acc: dict[DiffMonomial, Fraction] = {}
    for c, mono, _ in parse_terms(text):
        acc[mono] = acc.get(mono, 0) + c
    return DiffPolynomial(acc)


def to_records(f: DiffPolynomial) -> list[dict]:
    return [
        {
            "exponents": [[i, p] for i, p in sorted(mono.exponents.items())],
            "coefficient": f"{f.coefficient(mono).numerator}/{f.coefficient(mono).denominator}",
        }
        for mono in f.support()
    ]


def from_records(records: Iterable[Mapping]) -> DiffPolynomial:
    acc = {}
    for rec in records:
        mono = DiffMonomial.from_exponents({int(i): int(p) for i, p in rec["exponents"]})
        acc[mono] = acc.get(mono, 0) + Fraction(rec["coefficient"])
    return DiffPolynomial(acc)
