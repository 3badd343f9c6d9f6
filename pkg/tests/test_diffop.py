import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from diffnil import diffop
from diffnil.diffop import (
    DiffOperator,
    OperatorCoefficient,
    PrimalityWitness,
    SearchExhausted,
    commutator,
    leading_coefficient,
    nil_bound,
    nil_index_operator,
    op_multiply,
    parse_operator,
    verify_witness,
    witness_corollary,
    witness_theorem2,
)
from diffnil.diffpoly import DiffPolynomial, derive, parse
from diffnil.errors import EmptyInput, InvalidInput, ParseError
from diffnil.ideal import normal_form
from diffnil.sampling import random_operator

from .conftest import d2_elements, operators

Op = parse_operator
D = DiffOperator.d()


def test_multiply_examples():
    x = Op("x0")
    assert op_multiply(D, x) == Op("x0*D + x1")
    xd = Op("x0*D")
    assert op_multiply(xd, xd) == 0
    a = Op("x0*D^2 + 2*x1")
    assert op_multiply(DiffOperator.one(), a) == a == op_multiply(a, DiffOperator.one())


def test_commutator_examples():
    assert commutator(D, Op("x0")) == Op("x1")
    a = Op("x0*D + x2")
    assert commutator(a, a) == 0
    assert commutator(DiffOperator.d(2), Op("x0")) == Op("2*x1*D + x2")


def test_leading_coefficient_examples():
    assert leading_coefficient(Op("x0*D^3 + x2")) == OperatorCoefficient.of(parse("x0"))
    assert leading_coefficient(Op("x5")) == OperatorCoefficient.of(parse("x5"))
    assert leading_coefficient(Op("2*D + x0*D")) == OperatorCoefficient(Fraction(2), parse("x0"))
    with pytest.raises(EmptyInput):
        leading_coefficient(DiffOperator.zero())


def test_nil_bound_examples():
    assert nil_bound(Op("x0*D")) == 3
    assert nil_bound(Op("x2")) == 4
    assert nil_bound(Op("x0*D^2 + x1")) == 5
    with pytest.raises(InvalidInput):
        nil_bound(Op("1 + x0"))
    with pytest.raises(InvalidInput):
        nil_bound(DiffOperator.zero())


def test_nil_index_examples():
    assert nil_index_operator(Op("x0*D")) == 2
    assert nil_index_operator(Op("x1")) == 3
    assert nil_index_operator(Op("x0*D + x1")) == 2


def test_coefficients_are_reduced():
    # x1^2 = -x0*x2 in D_2
    assert Op("x1^2*D") == Op("-x0*x2*D")
    assert Op("x0^2 + x0*x1*D") == 0


def test_corollary_examples():
    w = witness_corollary(parse("x0"), parse("x0"))
    assert (w.k, w.product) == (2, parse("x0*x2"))
    w = witness_corollary(parse("x2"), parse("x0"))
    assert w.k == 0 and w.product == parse("x0*x2")
    w = witness_corollary(parse("x1"), parse("x1"))
    assert (w.k, w.product) == (0, parse("-x0*x2"))
    with pytest.raises(InvalidInput):
        witness_corollary(parse("x0^2"), parse("x0"))


def test_corollary_exhaustion_is_reported():
    w = witness_corollary(parse("x0"), parse("x0"), cap=1)
    assert isinstance(w, SearchExhausted) and w.k_range == (0, 1)


def test_theorem2_examples():
    x = Op("x0")
    w = witness_theorem2(x, x)
    assert isinstance(w, PrimalityWitness) and w.k == 2 and w.kind == "operator"
    assert w.c == parse("x5")
    assert verify_witness(w, x, x)
    w = witness_theorem2(Op("x0*D"), x)
    assert w.k == 2 and w.c == parse("x5") and verify_witness(w, Op("x0*D"), x)
    with pytest.raises(InvalidInput):
        witness_theorem2(DiffOperator.zero(), x)


def test_theorem2_exhaustion_is_reported():
    w = witness_theorem2(Op("x0"), Op("x0"), k_cap=2, c_cap=2)
    assert isinstance(w, SearchExhausted)
    assert w.k_range == (1, 2) and w.c_range == (0, 2)


def test_small_candidates_fail_for_x():
    # [(x_j D)^2, x] x vanishes for j < 5: the scan genuinely needs x5
    for j in range(5):
        assert not diffop.theorem2_product(parse(f"x{j}"), 2, Op("x0"), Op("x0"))


def test_text_round_trip_and_records():
    a = Op("x0*D^2 - 1/2*x1*D + 3")
    assert diffop.format_operator(a) == "1*x0*D^2 - 1/2*x1*D + 3"
    assert Op(diffop.format_operator(a)) == a
    assert diffop.to_records(Op("x0*D"))[0]["order"] == 1
    with pytest.raises(ParseError):
        Op("D*x0")


# --- properties ---------------------------------------------------------------

@given(operators(scalars=True), operators(scalars=True), operators(scalars=True))
@settings(max_examples=30)
def test_multiplication_associative(a, b, c):
    assert op_multiply(op_multiply(a, b), c) == op_multiply(a, op_multiply(b, c))


@given(operators(scalars=True), operators(scalars=True), operators(scalars=True))
@settings(max_examples=30)
def test_multiplication_distributive(a, b, c):
    assert op_multiply(a, b + c) == op_multiply(a, b) + op_multiply(a, c)
    assert op_multiply(a + b, c) == op_multiply(a, c) + op_multiply(b, c)


@given(d2_elements())
def test_commutation_identity(f):
    c = DiffOperator.of(f)
    assert op_multiply(D, c) == op_multiply(c, D) + DiffOperator.of(derive(f))
    assert commutator(D, c) == DiffOperator.of(normal_form(derive(f), 2).poly)


@given(operators(), operators())
@settings(max_examples=30)
def test_commutator_antisymmetric(a, b):
    assert commutator(a, b) == -commutator(b, a)


@given(d2_elements(), d2_elements())
def test_corollary_witnesses_verify(a, b):
    w = witness_corollary(a, b)
    assert isinstance(w, PrimalityWitness) and verify_witness(w, a, b)


def test_random_operators_vanish_within_bound():
    rng = random.Random(11)
    for _ in range(10):
        a = random_operator(rng, max_order=2)
        n = nil_index_operator(a)
        assert 2 <= n <= nil_bound(a)
        assert a ** (n - 1) and not a ** n


@given(operators(max_order=1), operators(max_order=1), st.integers(1, 2), st.integers(0, 4))
@settings(max_examples=40)
def test_weight_floor_skip_is_sound(a, b, k, j):
    assume(a and b)
    if diffop._provably_zero(k, j, a, b):
        assert not diffop.theorem2_product(parse(f"x{j}"), k, a, b)


def test_infeasible_pair_is_exhausted_quickly():
    # the scan finds nothing for k <= 5, and for k >= 6 the weight floor rules out every j <= 12
    a, b = Op("1*x0*x2"), Op("-2*x0*x4*D")
    w = witness_theorem2(a, b)
    assert isinstance(w, SearchExhausted) and w.k_range == (1, 10)
    assert all(diffop._provably_zero(k, j, a, b) for k in range(6, 11) for j in range(13))
    w = witness_theorem2(a, b, c_cap=13)
    assert (w.k, w.c) == (6, parse("x13")) and verify_witness(w, a, b)


def test_scan_falls_back_to_smaller_k():
    # the leading coefficients suggest k = 6, which the weight floor rules out; k = 3 works
    a = Op("2*x0*x3*D^3 + 1*x1*x3*D^2 - 1*x0*x2*D^2")
    b = Op("-2*x0*x3*D")
    assert witness_corollary(parse("x0*x3"), parse("x0*x3")).k == 6
    w = witness_theorem2(a, b)
    assert isinstance(w, PrimalityWitness) and (w.k, w.c) == (3, parse("x10"))
    assert verify_witness(w, a, b)


def test_high_k_witness_is_found():
    # needs k = 8; the product is only nonzero in the slice of degree 11 and weight 110
    a = Op("1*x0*x2*D^2 + 1*x3*D + 2*x1*x3*D - 1*x0*x4*D - 2*x1")
    b = Op("1*x0*x2*D^2")
    w = witness_theorem2(a, b)
    assert (w.k, w.c) == (8, parse("x12"))
    assert [set(c.poly.slices()) for _, c in w.product.items()] == [{(11, 110)}]


def _stepwise_product(c, k, a, b):
    # reduces after every multiplication
    t = DiffOperator.one()
    for _ in range(k):
        t = op_multiply(t, DiffOperator.of(c, 1))
    return op_multiply(commutator(t, a), b)


@given(operators(max_order=1), operators(max_order=1), st.integers(1, 2), st.integers(0, 5))
@settings(max_examples=30)
def test_unreduced_product_matches_stepwise(a, b, k, j):
    assume(a and b)
    c = parse(f"x{j}")
    assert diffop.theorem2_product(c, k, a, b) == _stepwise_product(c, k, a, b)


@given(operators())
def test_commutator_with_d_differentiates_the_leading_coefficient(a):
    assume(a)
    n = a.order
    lead = leading_coefficient(a).poly
    expected = normal_form(derive(lead), 2).poly
    assert commutator(D, a).coefficient(n).poly == expected
