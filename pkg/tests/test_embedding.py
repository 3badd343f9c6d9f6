from fractions import Fraction

import pytest
from hypothesis import given

from diffnil import embedding
from diffnil.diffpoly import DiffPolynomial, _is_alpha, derive, enumerate_alpha, enumerate_monomials, parse
from diffnil.embedding import coefficient_of, mu_witness, phi, phi_generator, witness_matrix
from diffnil.errors import EmptyInput, InvalidInput, InvalidParameter
from diffnil.grassmann import GrassmannElement, derive_grassmann, eta, is_even, power, xi
from diffnil.ideal import generator_derivative

from .conftest import polynomials


def M(text):
    (mono,) = parse(text).support()
    return mono


def test_phi_generator_examples():
    assert phi_generator(2, 0) == GrassmannElement(2, {(xi(0, 0), eta(0, 0)): 1})
    assert phi_generator(2, 1) == GrassmannElement(
        2, {(xi(0, 1), eta(0, 0)): 1, (xi(0, 0), eta(0, 1)): 1})
    assert phi_generator(3, 0) == GrassmannElement(
        3, {(xi(0, 0), eta(0, 0)): 1, (xi(1, 0), eta(1, 0)): 1})
    with pytest.raises(InvalidParameter):
        phi_generator(1, 0)


def test_phi_examples():
    assert phi(2, parse("x0^2")) == 0
    assert phi(2, parse("x0*x2")) == GrassmannElement(
        2, {(xi(0, 0), eta(0, 0), xi(0, 1), eta(0, 1)): 2})
    assert phi(2, parse("x1^2 + x0*x2")) == 0
    with pytest.raises(InvalidInput):
        phi(2, parse("1 + x0"))


def test_mu_witness_examples():
    assert mu_witness(2, M("x0*x2")) == (xi(0, 0), eta(0, 0), xi(0, 1), eta(0, 1))
    assert mu_witness(2, M("x0")) == (xi(0, 0), eta(0, 0))
    assert mu_witness(3, M("x0^2")) == (xi(0, 0), eta(0, 0), xi(1, 0), eta(1, 0))
    with pytest.raises(InvalidInput):
        mu_witness(2, M("x1^2"))
    with pytest.raises(EmptyInput):
        mu_witness(2, DiffPolynomial.constant(1).support()[0])


def test_coefficient_of_examples():
    mu = mu_witness(2, M("x0*x2"))
    assert coefficient_of(phi(2, parse("x0*x2")), mu) == 2
    assert coefficient_of(GrassmannElement.zero(2), mu) == 0
    assert coefficient_of(phi(2, parse("x1^2")), mu) == -2


def test_witness_matrix_examples():
    rows, mat = witness_matrix(2, 1, 3)
    assert rows == [M("x3")] and mat[0][0] != 0
    rows, mat = witness_matrix(2, 2, 2)
    assert mat == [[Fraction(2)]]
    rows, mat = witness_matrix(2, 2, 4)
    assert rows == [M("x0*x4"), M("x1*x3")]
    assert mat == [[-4, 1], [0, 3]]
    assert embedding.is_upper_triangular(mat)


def test_injectivity_examples():
    assert embedding.injectivity_rank(2, 2, 2) == (1, 1)
    assert embedding.injectivity_rank(2, 0, 0) == (0, 0)
    assert embedding.injectivity_rank(3, 3, 3) == (2, 2)


@pytest.mark.parametrize("m", [2, 3])
def test_ideal_generators_map_to_zero(m):
    for k in range(6):
        assert phi(m, generator_derivative(m, k)) == 0


@pytest.mark.parametrize("m", [2, 3])
def test_mu_witness_entries_are_distinct_and_hit(m):
    for d in range(1, 4):
        for w in range(6):
            for mono in enumerate_alpha(m, d, w):
                mu = mu_witness(m, mono)
                assert len(set(mu)) == 2 * d
                assert coefficient_of(phi(m, DiffPolynomial.monomial(mono)), mu) != 0


@given(polynomials(3), polynomials(3))
def test_phi_is_multiplicative(f, g):
    for m in (2, 3):
        assert phi(m, f * g) == (phi(m, f) ^ phi(m, g))


@given(polynomials())
def test_phi_commutes_with_derivation(f):
    for m in (2, 3):
        assert phi(m, derive(f)) == derive_grassmann(phi(m, f))


@given(polynomials())
def test_images_are_even(f):
    assert is_even(phi(3, f))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_generator_image_vanishes_at_power_m(m):
    u = phi_generator(m, 0)
    assert power(u, m - 1) != 0 and power(u, m) == 0


@pytest.mark.parametrize("m", [2, 3])
def test_phi_coefficient_matches_expansion(m):
    for d in range(1, 4):
        for w in range(7):
            for mono in enumerate_monomials(d, w):
                image = embedding._phi_monomial_terms(m, mono)
                for target, c in image.items():
                    assert embedding.phi_coefficient(m, mono, target) == c
                for mono2 in enumerate_monomials(d, w):
                    mu = mu_witness(m, mono2) if _is_alpha(mono2, m) else None
                    if mu is not None and mu not in image:
                        assert embedding.phi_coefficient(m, mono, mu) == 0
