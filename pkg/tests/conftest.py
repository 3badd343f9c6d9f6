from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from diffnil.diffop import DiffOperator
from diffnil.diffpoly import DiffMonomial, DiffPolynomial, enumerate_alpha
from diffnil.grassmann import BasisVector, GrassmannElement

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--stretch", action="store_true", default=False,
                     help="also run the stretch targets (Ritt index at m=4, i=3)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--stretch"):
        return
    skip = pytest.mark.skip(reason="stretch target; pass --stretch to run")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (len(s.split()[0]), s)):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


# --- strategies -------------------------------------------------------------

coefficients = st.integers(-3, 3).filter(bool).map(Fraction) | st.fractions(
    min_value=-3, max_value=3, max_denominator=4
).filter(bool)

monomials = st.lists(st.integers(0, 4), min_size=1, max_size=3).map(DiffMonomial.from_orders)


def polynomials(max_terms: int = 4):
    return st.dictionaries(monomials, coefficients, max_size=max_terms).map(DiffPolynomial)


nonzero_polys = polynomials().filter(bool)


def d2_elements(max_terms: int = 3):
    pool = [m for d in range(1, 4) for w in range(5) for m in enumerate_alpha(2, d, w)]
    return st.dictionaries(st.sampled_from(pool), st.sampled_from([-2, -1, 1, 2]),
                           min_size=1, max_size=max_terms).map(DiffPolynomial)


def operators(max_order: int = 2, scalars: bool = False):
    coeff = d2_elements(2)
    if scalars:
        coeff = st.tuples(st.integers(-2, 2), coeff).map(
            lambda t: t[1] + DiffPolynomial.constant(t[0]))
    return st.dictionaries(st.integers(0, max_order), coeff, max_size=3).map(DiffOperator)


vectors = st.builds(BasisVector, st.integers(0, 1), st.integers(0, 3), st.integers(0, 1))


def grassmann_elements(m: int = 3, max_terms: int = 3):
    words = st.lists(vectors, min_size=1, max_size=3, unique=True).map(tuple)
    if m == 2:
        words = st.lists(vectors.filter(lambda v: v.level == 0), min_size=1, max_size=3,
                         unique=True).map(tuple)
    return st.dictionaries(words, st.integers(-2, 2), max_size=max_terms).map(
        lambda t: GrassmannElement(m, t))
