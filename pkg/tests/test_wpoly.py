import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsig import make_ring, parse_poly, poly_mul, poly_pow, render, weighted_degree
from fsig.errors import (
    DuplicateVariable,
    ExponentOverflow,
    NegativeDimension,
    NonpositiveWeight,
    NotHomogeneous,
    NotPrime,
    PolynomialSyntaxError,
    RingMismatch,
    UnknownVariable,
    ZeroPolynomial,
)
from fsig.wpoly import Polynomial, bracket_normal_form, frobenius_scale, monomials_up_to

from oracles import expand_power

XYZ = [("x", 1), ("y", 1), ("z", 1)]


def test_make_ring_quadric_cone():
    ring = make_ring(3, XYZ, [2])
    assert ring.dim == 2
    assert ring.names == ("x", "y", "z")
    assert ring.weights == (1, 1, 1)


def test_make_ring_polynomial_ring():
    assert make_ring(5, [("x", 1)], []).dim == 1


@pytest.mark.parametrize(
    "args, exc",
    [
        ((4, XYZ, [2]), NotPrime),
        ((1, XYZ, []), NotPrime),
        ((3, [("x", 1), ("x", 2)], []), DuplicateVariable),
        ((3, [("x", 0)], []), NonpositiveWeight),
        ((3, [("x", 1)], [1, 1]), NegativeDimension),
    ],
)
def test_make_ring_errors(args, exc):
    with pytest.raises(exc):
        make_ring(*args)


def test_parse_a_n_equation():
    f = parse_poly("x^2+y^2+z^2", make_ring(3, XYZ))
    assert len(f) == 3
    assert set(f.terms.values()) == {1}


def test_parse_reduces_coefficients():
    ring = make_ring(3, XYZ)
    assert parse_poly("3*x + x", ring) == parse_poly("x", ring)


def test_parse_d5_juxtaposition():
    ring = make_ring(5, XYZ)
    f = parse_poly("x^2+yz^2+y^4", ring)
    assert len(f) == 3
    assert f.terms[(0, 1, 2)] == 1


@pytest.mark.parametrize(
    "text, expected",
    [
        ("2x", "2*x"),
        ("2*x", "2*x"),
        ("-x", "4*x"),
        ("x*-y", "4*x*y"),
        (" ( x + y ) ^ 2 ", "x^2 + 2*x*y + y^2"),
        ("x^2y", "x^2*y"),
        ("2^3 x", "3*x"),
        ("x - x", "0"),
        ("(x+1)(x-1)", "x^2 + 4"),
    ],
)
def test_parse_syntax_variants(text, expected):
    assert render(parse_poly(text, make_ring(5, XYZ))) == expected


@pytest.mark.parametrize("text, pos", [("x+", 2), ("x+*y", 2), ("(x+y", 4), ("x^y", 2), ("x $ y", 2), ("", 0)])
def test_parse_syntax_errors(text, pos):
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_poly(text, make_ring(5, XYZ))
    assert err.value.position == pos


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_poly("x + t", make_ring(5, XYZ))
    assert err.value.name == "t"


def test_parse_exponent_overflow():
    with pytest.raises(ExponentOverflow):
        parse_poly("x^2147483648", make_ring(5, XYZ))


def test_mul_difference_of_squares():
    ring = make_ring(5, [("x", 1), ("y", 1)])
    f = poly_mul(parse_poly("x+y", ring), parse_poly("x-y", ring))
    assert f == parse_poly("x^2 + 4y^2", ring)


def test_mul_identity():
    ring = make_ring(5, [("x", 1), ("y", 1)])
    f = parse_poly("x+y", ring)
    assert poly_mul(f, Polynomial.constant(ring, 1)) == f


def test_mul_char2_freshman():
    ring = make_ring(2, [("x", 1), ("y", 1)])
    f = parse_poly("x+y", ring)
    assert poly_mul(f, f) == parse_poly("x^2+y^2", ring)


def test_mul_ring_mismatch():
    a = parse_poly("x", make_ring(5, [("x", 1)]))
    b = parse_poly("x", make_ring(7, [("x", 1)]))
    with pytest.raises(RingMismatch):
        poly_mul(a, b)


def test_pow_zero_is_one():
    ring = make_ring(3, XYZ)
    assert poly_pow(parse_poly("x+y", ring), 0) == Polynomial.constant(ring, 1)


def test_pow_frobenius():
    ring = make_ring(3, XYZ)
    assert poly_pow(parse_poly("x+y", ring), 3) == parse_poly("x^3+y^3", ring)


def test_pow_quadric_square_matches_multinomial():
    ring = make_ring(3, XYZ)
    f = parse_poly("x^2+y^2+z^2", ring)
    expected = expand_power(list(f.terms.items()), 2, 3)
    assert dict(poly_pow(f, 2).terms) == expected
    assert poly_pow(f, 2) == parse_poly("x^4+y^4+z^4+2x^2y^2+2x^2z^2+2y^2z^2", ring)


def test_pow_large_exponent_matches_multinomial():
    ring = make_ring(7, XYZ)
    f = parse_poly("x^3+2y^3+z^3+xyz", ring)
    assert dict(poly_pow(f, 20).terms) == expand_power(list(f.terms.items()), 20, 7)


def test_pow_exponent_overflow():
    ring = make_ring(3, [("x", 1)])
    with pytest.raises(ExponentOverflow):
        poly_pow(parse_poly("x^1000", ring), 3**20)


def test_weighted_degree_a_n():
    for n in range(1, 6):
        ring = make_ring(7, [("x", n + 1), ("y", n + 1), ("z", 2)])
        assert weighted_degree(parse_poly(f"x^2+y^2+z^{n + 1}", ring)) == 2 * (n + 1)


def test_weighted_degree_constant_and_errors():
    ring = make_ring(3, [("x", 1), ("y", 1)])
    assert weighted_degree(Polynomial.constant(ring, 1)) == 0
    with pytest.raises(NotHomogeneous) as err:
        weighted_degree(parse_poly("x + y^2", ring))
    assert err.value.degrees == {1, 2}
    with pytest.raises(ZeroPolynomial):
        weighted_degree(Polynomial.zero(ring))


def test_bracket_normal_form_examples():
    ring = make_ring(3, XYZ)
    assert bracket_normal_form(parse_poly("x^4 + x^2y^2", ring), 3) == parse_poly("x^2y^2", ring)
    f = parse_poly("x^2 + 2xy + z", ring)
    assert bracket_normal_form(f, 3) == f
    sq = poly_pow(parse_poly("x^2+y^2+z^2", ring), 2)
    assert bracket_normal_form(sq, 3) == parse_poly("2x^2y^2+2x^2z^2+2y^2z^2", ring)


def test_render_canonical_order():
    ring = make_ring(5, [("x", 3), ("y", 3), ("z", 2)])
    f = parse_poly("z^3 + 2 + y^2 + x^2 + 3*x*z", ring)
    assert render(f) == "x^2 + y^2 + z^3 + 3*x*z + 2"


def test_monomials_up_to_counts():
    ring = make_ring(3, XYZ)
    assert len(list(monomials_up_to(ring, 3, 100))) == 27
    assert sorted(monomials_up_to(ring, 3, 1)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


# -- properties ---------------------------------------------------------------

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def ring_and_polys(draw, count=3):
    p = draw(PRIMES)
    nv = draw(st.integers(1, 4))
    weights = draw(st.lists(st.integers(1, 3), min_size=nv, max_size=nv))
    ring = make_ring(p, [(n, w) for n, w in zip("xyzw", weights)])
    mono = st.tuples(*[st.integers(0, 6)] * nv)
    polys = []
    for _ in range(count):
        terms = draw(st.dictionaries(mono, st.integers(0, p - 1), max_size=5))
        polys.append(Polynomial(ring, terms))
    return ring, polys


@settings(max_examples=1000, deadline=None)
@given(ring_and_polys())
def test_ring_axioms(data):
    ring, (a, b, c) = data
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a - a == Polynomial.zero(ring)


@settings(max_examples=200, deadline=None)
@given(ring_and_polys(count=1), st.integers(0, 8))
def test_pow_matches_repeated_mul(data, k):
    ring, (f,) = data
    expected = Polynomial.constant(ring, 1)
    for _ in range(k):
        expected = poly_mul(expected, f)
    assert poly_pow(f, k) == expected


@settings(max_examples=200, deadline=None)
@given(ring_and_polys(count=1))
def test_frobenius_identity(data):
    ring, (f,) = data
    p = ring.prime
    naive = Polynomial.constant(ring, 1)
    for _ in range(p):
        naive = poly_mul(naive, f)
    assert naive == frobenius_scale(f, p)


@settings(max_examples=300, deadline=None)
@given(ring_and_polys(count=1))
def test_render_parse_round_trip(data):
    ring, (f,) = data
    assert parse_poly(render(f), ring) == f


@settings(max_examples=200, deadline=None)
@given(ring_and_polys(count=2), st.integers(1, 7), st.integers(0, 6))
def test_bracket_idempotent_and_linear(data, q, c):
    ring, (a, b) = data
    nf = lambda g: bracket_normal_form(g, q)  # noqa: E731
    assert nf(nf(a)) == nf(a)
    assert nf(a + b.scale(c)) == nf(a) + nf(b).scale(c)
