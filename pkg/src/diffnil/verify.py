"""Bounded machine checks of the structural theorems about D_m.

Each suite sweeps a finite grid (or a seeded sample) and records one
:class:`Check` per slice or sample.  Results are deterministic for fixed
parameters and seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import diffop, embedding, grassmann, ideal
from .diffpoly import DiffPolynomial, enumerate_alpha, enumerate_monomials, format_poly
from .errors import InvalidParameter, UnsupportedParameter
from .sampling import random_element, random_operator, random_polynomial


@dataclass
class Check:
    key: dict
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"key": self.key, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    name: str
    params: dict
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "total": len(self.checks),
            "failed": len(self.failures),
            "checks": [c.as_dict() for c in self.checks],
        }


def _grid(max_degree: int, max_weight: int, min_degree: int = 1):
    for d in range(min_degree, max_degree + 1):
        for w in range(max_weight + 1):
            yield d, w


def ritt(m: int, max_i: int) -> SuiteResult:
    """Nil index of ``x_i`` by Grassmann powers and by ideal membership."""
    checks = []
    for i in range(max_i + 1):
        expected = ideal.ritt_exponent(m, i)
        cap = expected + 2
        by_powers = grassmann.nil_index(embedding.phi_generator(m, i), cap)
        by_ideal = ideal.nil_index_element(DiffPolynomial.var(i), m, cap)
        # the vanishing power must also come with a certificate that re-expands
        member_at, cert = ideal.membership(DiffPolynomial.var(i, expected), m)
        sound = cert is not None and cert.expand() == DiffPolynomial.var(i, expected)
        checks.append(Check(
            {"m": m, "i": i},
            by_powers == expected and by_ideal == expected and member_at and sound,
            {"expected": expected, "grassmann": by_powers, "ideal": by_ideal,
             "certificate_terms": len(cert.terms) if cert else 0},
        ))
    return SuiteResult("ritt", {"m": m, "max_i": max_i}, checks)


def injectivity(m: int, max_degree: int, max_weight: int) -> SuiteResult:
    checks = []
    for d, w in _grid(max_degree, max_weight):
        r, count = embedding.injectivity_rank(m, d, w)
        checks.append(Check({"m": m, "d": d, "w": w}, r == count, {"rank": r, "basis": count}))
    return SuiteResult("injectivity", {"m": m, "max_degree": max_degree, "max_weight": max_weight}, checks)


def basis(m: int, max_degree: int, max_weight: int) -> SuiteResult:
    checks = []
    for d, w in _grid(max_degree, max_weight, min_degree=0):
        dim = ideal.component_dimension(m, d, w)
        count = len(enumerate_alpha(m, d, w))
        checks.append(Check({"m": m, "d": d, "w": w}, dim == count,
                            {"dimension": dim, "alpha": count,
                             "monomials": len(enumerate_monomials(d, w))}))
    return SuiteResult("basis", {"m": m, "max_degree": max_degree, "max_weight": max_weight}, checks)


def constants(m: int, max_degree: int, max_weight: int) -> SuiteResult:
    checks = []
    for d, w in _grid(max_degree, max_weight):
        k = ideal.derivation_kernel_dimension(m, d, w)
        checks.append(Check({"m": m, "d": d, "w": w}, k == 0, {"kernel": k}))
    return SuiteResult("constants", {"m": m, "max_degree": max_degree, "max_weight": max_weight}, checks)


def triangular(m: int, max_degree: int, max_weight: int) -> SuiteResult:
    checks = []
    for d, w in _grid(max_degree, max_weight):
        rows, matrix = embedding.witness_matrix(m, d, w)
        checks.append(Check({"m": m, "d": d, "w": w}, embedding.is_upper_triangular(matrix),
                            {"size": len(rows)}))
    return SuiteResult("triangular", {"m": m, "max_degree": max_degree, "max_weight": max_weight}, checks)


def agreement(m: int, max_degree: int, max_weight: int, samples: int, seed: int) -> SuiteResult:
    """Leading-term reduction, full elimination, the embedding and the
    triangular witness readout give one normal form."""
    checks = []

    def compare(key, f):
        a = ideal.normal_form(f, m)
        b = ideal.normal_form(f, m, method="elimination")
        c = ideal.normal_form_via_embedding(f, m)
        t = ideal.normal_form_triangular(f, m)
        checks.append(Check(key, a == b == c == t, {"normal_form": format_poly(a.poly)}))

    for d, w in _grid(max_degree, max_weight):
        for mono in enumerate_monomials(d, w):
            compare({"m": m, "d": d, "w": w, "monomial": str(mono)}, DiffPolynomial.monomial(mono))
    rng = random.Random(seed)
    for s in range(samples):
        f = random_polynomial(rng, max_degree=min(max_degree, 4), max_weight=max_weight)
        compare({"m": m, "sample": s, "f": format_poly(f)}, f)
    return SuiteResult("agreement", {"m": m, "max_degree": max_degree, "max_weight": max_weight,
                                     "samples": samples, "seed": seed}, checks)


def _require_m2(m: int, suite: str) -> None:
    if m != 2:
        raise UnsupportedParameter(f"suite {suite!r} is stated for m = 2 only")


def nilpotent(m: int, samples: int, seed: int) -> SuiteResult:
    """Random nonzero elements of D_2 vanish by their nil bound; checked twice."""
    _require_m2(m, "nilpotent")
    rng = random.Random(seed)
    checks = []
    for s in range(samples):
        f = random_element(rng)
        bound = diffop.nil_bound(diffop.DiffOperator.of(f))
        n = ideal.nil_index_element(f, 2, cap=bound)
        g = grassmann.nil_index(embedding.phi(2, f), bound)
        checks.append(Check({"sample": s, "f": format_poly(f)},
                            n is not None and n == g and n <= bound,
                            {"nil_index": n, "grassmann": g, "bound": bound}))
    return SuiteResult("nilpotent", {"m": m, "samples": samples, "seed": seed}, checks)


def operator_nil(m: int, samples: int, seed: int) -> SuiteResult:
    _require_m2(m, "operator-nil")
    rng = random.Random(seed)
    checks = []
    for s in range(samples):
        a = random_operator(rng)
        bound = diffop.nil_bound(a)
        n = diffop.nil_index_operator(a)
        before = a ** (n - 1)
        ok = n <= bound and not (a ** n) and bool(before)
        checks.append(Check({"sample": s, "a": str(a)}, ok, {"nil_index": n, "bound": bound}))
    return SuiteResult("operator-nil", {"m": m, "samples": samples, "seed": seed}, checks)


def weight_floor(max_degree: int) -> SuiteResult:
    """Exhaustive minimum weight of nonzero degree-D monomials of Lambda(V_2)."""
    checks = []
    for D in range(1, max_degree + 1):
        bound = grassmann.weight_lower_bound(D, 2)
        # d(d-1) + d bounds the true minimum from above, so this search is exhaustive
        horizon = bound + D // 2 + 1
        monos = grassmann.monomials_up_to_weight(D, horizon, 2)
        weights = [grassmann.monomial_weight(mono) for mono in monos]
        least = min(weights)
        checks.append(Check({"D": D}, least == bound and all(x >= bound for x in weights),
                            {"bound": bound, "minimum": least, "searched": len(monos)}))
    return SuiteResult("weight-floor", {"max_degree": max_degree}, checks)


def witnesses(samples: int, seed: int, k_cap: int = 10, c_cap: int = 12) -> SuiteResult:
    rng = random.Random(seed)
    checks = []
    for s in range(samples):
        a, b = random_element(rng), random_element(rng)
        w = diffop.witness_corollary(a, b, k_cap)
        ok = isinstance(w, diffop.PrimalityWitness) and diffop.verify_witness(w, a, b)
        checks.append(Check({"sample": s, "kind": "element", "a": format_poly(a), "b": format_poly(b)},
                            ok, {"k": getattr(w, "k", None)}))
        a, b = random_operator(rng), random_operator(rng)
        w = diffop.witness_theorem2(a, b, k_cap, c_cap)
        ok = isinstance(w, diffop.PrimalityWitness) and diffop.verify_witness(w, a, b)
        checks.append(Check({"sample": s, "kind": "operator", "a": str(a), "b": str(b)}, ok,
                            {"k": getattr(w, "k", None),
                             "c": format_poly(w.c) if ok else None}))
    return SuiteResult("witness", {"samples": samples, "seed": seed, "k_cap": k_cap, "c_cap": c_cap}, checks)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "ritt": ritt,
    "injectivity": injectivity,
    "basis": basis,
    "constants": constants,
    "triangular": triangular,
    "agreement": agreement,
    "nilpotent": nilpotent,
    "operator-nil": operator_nil,
    "weight-floor": weight_floor,
    "witness": witnesses,
}


def run_suite(name: str, m: int = 2, max_degree: int = 4, max_weight: int = 8,
              samples: int = 25, seed: int = 0, max_i: int = 3) -> SuiteResult:
    if name not in SUITES:
        raise InvalidParameter(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name == "ritt":
        return ritt(m, max_i)
    if name in ("injectivity", "basis", "constants", "triangular"):
        return SUITES[name](m, max_degree, max_weight)
    if name == "agreement":
        return agreement(m, max_degree, max_weight, samples, seed)
    if name in ("nilpotent", "operator-nil"):
        return SUITES[name](m, samples, seed)
    if name == "weight-floor":
        return weight_floor(max_degree)
    return witnesses(samples, seed)
