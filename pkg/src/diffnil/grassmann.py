"""The Grassmann algebra Lambda(V_m) without unit, with an ordinary derivation.

V_m has basis ``xi[k, i]`` and ``eta[k, i]`` for levels ``0 <= k <= m - 2`` and
orders ``i >= 0``.  The derivation sends each generator to the one with order
``i + 1`` and acts on products by the plain Leibniz rule (no Koszul sign).
Monomials are strictly ascending tuples of :class:`BasisVector` under the key
(level, order, kind) with xi before eta; signs live in the coefficients.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .errors import InvalidInput, InvalidParameter, UnsupportedParameter, check_terms, require_m

XI = 0
ETA = 1
_KIND_NAMES = ("xi", "eta")


class BasisVector(NamedTuple):
    level: int
    order: int
    kind: int

    @property
    def kind_name(self) -> str:
        return _KIND_NAMES[self.kind]

    def derived(self) -> BasisVector:
        return tuple.__new__(BasisVector, (self.level, self.order + 1, self.kind))

    def __str__(self) -> str:
        return f"{_KIND_NAMES[self.kind]}[{self.level},{self.order}]"


GrassmannMonomial = tuple  # ascending tuple of BasisVector


def xi(level: int, order: int) -> BasisVector:
    return BasisVector(level, order, XI)


def eta(level: int, order: int) -> BasisVector:
    return BasisVector(level, order, ETA)


def canonicalize(vectors: Iterable[BasisVector]) -> tuple[int, GrassmannMonomial]:
    """Sort a wedge word; returns ``(sign, monomial)`` with sign 0 on a repeat."""
    seq = list(vectors)
    n = len(seq)
    if len(set(seq)) < n:
        return 0, ()
    inversions = sum(1 for i in range(n) for j in range(i + 1, n) if seq[j] < seq[i])
    return (-1 if inversions & 1 else 1), tuple(sorted(seq))


def _wedge_mono(a: tuple, b: tuple) -> tuple[int, tuple]:
    la = len(a)
    inversions = 0
    for y in b:
        pos = bisect_left(a, y)
        if pos < la and a[pos] == y:
            return 0, ()
        inversions += la - pos
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


class GrassmannElement:
    """Finite Q-combination of nonempty Grassmann monomials in Lambda(V_m)."""

    __slots__ = ("m", "_terms")

    def __init__(self, m: int, terms: Mapping | None = None):
        require_m(m)
        self.m = m
        clean: dict[tuple, Fraction] = {}
        for word, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            word = tuple(BasisVector(*v) for v in word)
            if not word:
                raise InvalidInput("Lambda(V_m) has no unit: the empty monomial is not allowed")
            for v in word:
                _check_vector(v, m)
            sign, mono = canonicalize(word)
            if sign:
                c = clean.get(mono, 0) + sign * c
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self._terms = clean

    @classmethod
    def _wrap(cls, m: int, terms: dict) -> GrassmannElement:
        obj = object.__new__(cls)
        obj.m = m
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, m: int) -> GrassmannElement:
        require_m(m)
        return cls._wrap(m, {})

    @classmethod
    def generator(cls, m: int, vector: BasisVector) -> GrassmannElement:
        return cls(m, {(vector,): 1})

    def items(self):
        return self._terms.items()

    def support(self) -> list[tuple]:
        return sorted(self._terms)

    def coefficient(self, mono: Iterable[BasisVector]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, GrassmannElement):
            return self.m == other.m and self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.m, frozenset(self._terms.items())))

    def __neg__(self) -> GrassmannElement:
        return GrassmannElement._wrap(self.m, {k: -c for k, c in self._terms.items()})

    def __add__(self, other: GrassmannElement) -> GrassmannElement:
        _same_m(self, other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return GrassmannElement._wrap(self.m, out)

    def __sub__(self, other: GrassmannElement) -> GrassmannElement:
        return self + (-other)

    def __mul__(self, scalar) -> GrassmannElement:
        if isinstance(scalar, GrassmannElement):
            return NotImplemented
        c = Fraction(scalar)
        if not c:
            return GrassmannElement.zero(self.m)
        return GrassmannElement._wrap(self.m, {k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: GrassmannElement) -> GrassmannElement:
        return wedge(self, other)

    def degrees(self) -> set[int]:
        return {len(mono) for mono in self._terms}

    def weights(self) -> set[int]:
        return {monomial_weight(mono) for mono in self._terms}

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"GrassmannElement(m={self.m}, {format_element(self, ascii=True)!r})"


def _check_vector(v: BasisVector, m: int) -> None:
    if not (0 <= v.level <= m - 2) or v.order < 0 or v.kind not in (XI, ETA):
        raise InvalidParameter(f"{v} is not a basis vector of V_{m}")


def _same_m(u: GrassmannElement, v: GrassmannElement) -> None:
    if u.m != v.m:
        raise InvalidParameter(f"mixed ambient algebras: m={u.m} and m={v.m}")


def monomial_weight(mono: Iterable[BasisVector]) -> int:
    return sum(v.order for v in mono)


def wedge(u: GrassmannElement, v: GrassmannElement) -> GrassmannElement:
    """Exterior product; products with a repeated vector vanish."""
    _same_m(u, v)
    out: dict[tuple, Fraction] = {}
    for a, ca in u._terms.items():
        for b, cb in v._terms.items():
            sign, mono = _wedge_mono(a, b)
            if sign:
                out[mono] = out.get(mono, 0) + (ca * cb if sign > 0 else -ca * cb)
    check_terms(len(out), "wedge")
    return GrassmannElement._wrap(u.m, {k: c for k, c in out.items() if c})


def _derive_mono(mono: tuple) -> list[tuple[int, tuple]]:
    out = []
    for j, v in enumerate(mono):
        nv = v.derived()
        pos = bisect_left(mono, nv)
        if pos < len(mono) and mono[pos] == nv:
            continue
        # nv lands after v; each vector it jumps over flips the sign
        between = pos - j - 1
        new = mono[:j] + mono[j + 1:pos] + (nv,) + mono[pos:]
        out.append((-1 if between & 1 else 1, new))
    return out


def derive_grassmann(u: GrassmannElement) -> GrassmannElement:
    """Derivation raising one generator's order at a time (plain Leibniz)."""
    out: dict[tuple, Fraction] = {}
    for mono, c in u._terms.items():
        for sign, new in _derive_mono(mono):
            out[new] = out.get(new, 0) + (c if sign > 0 else -c)
    return GrassmannElement._wrap(u.m, {k: c for k, c in out.items() if c})


def power(u: GrassmannElement, n: int) -> GrassmannElement:
    """``u ^ u ^ ... ^ u`` (n factors); stops as soon as a partial product vanishes."""
    if n < 1:
        raise InvalidParameter("power requires n >= 1 (the algebra has no unit)")
    result = u
    for _ in range(n - 1):
        if not result:
            break
        result = wedge(result, u)
    return result


def is_even(u: GrassmannElement) -> bool:
    return all(len(mono) % 2 == 0 for mono in u._terms)


def weight_lower_bound(D: int, m: int = 2) -> int:
    """``d(d - 1)`` with ``d = D // 2``; stated for Lambda(V_2) only."""
    require_m(m)
    if m != 2:
        raise UnsupportedParameter("the weight floor d(d-1) is only established for m = 2")
    if D < 0:
        raise InvalidParameter("degree must be a natural number")
    d = D // 2
    return d * (d - 1)


def monomials_up_to_weight(D: int, max_weight: int, m: int = 2) -> list[tuple]:
    """Every nonzero degree-D monomial of Lambda(V_m) with weight <= max_weight.

    A monomial of weight at most B only involves generators of order at most B,
    so this search is exhaustive.
    """
    require_m(m)
    gens = sorted(
        (BasisVector(level, order, kind) for order in range(max_weight + 1)
         for level in range(m - 1) for kind in (XI, ETA)),
        key=lambda v: (v.order, v.level, v.kind),
    )
    found: list[tuple] = []

    def rec(start: int, left: int, budget: int, acc: list):
        if left == 0:
            found.append(tuple(sorted(acc)))
            return
        for idx in range(start, len(gens)):
            g = gens[idx]
            # remaining picks have order >= g.order
            if g.order * left > budget:
                break
            acc.append(g)
            rec(idx + 1, left - 1, budget - g.order, acc)
            acc.pop()

    if D > 0:
        rec(0, D, max_weight, [])
    return found


def format_element(u: GrassmannElement, ascii: bool = False) -> str:
    if not u:
        return "0"
    join = "/\\" if ascii else "∧"
    pieces = []
    for mono in u.support():
        c = u._terms[mono]
        mag = abs(c)
        body = (str(mag.numerator) if mag.denominator == 1 else str(mag)) + "*"
        body += join.join(str(v) for v in mono)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def to_records(u: GrassmannElement) -> list[dict]:
    return [
        {
            "vectors": [[v.kind_name, v.level, v.order] for v in mono],
            "coefficient": f"{u._terms[mono].numerator}/{u._terms[mono].denominator}",
        }
        for mono in u.support()
    ]


def nil_index(u: GrassmannElement, cap: int) -> int | None:
    """Smallest N <= cap with ``u^N = 0``, or None."""
    result = u
    for n in range(1, cap + 1):
        if not result:
            return n
        if n < cap:
            result = wedge(result, u)
    return None
