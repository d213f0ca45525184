import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fsig import make_ring, parse_poly, poly_mul
from fsig.errors import BudgetExceeded, NotHomogeneous, NotPolynomial, UnitPolynomial, ZeroPolynomial
from fsig.frobenius import (
    SkippedReport,
    classify_reports,
    classify_theorem53,
    fedder_is_fpure,
    free_rank_aq,
    fsignature_sequence,
    hypersurface_a_invariant,
    lemma51_holds,
    naive_free_rank_oracle,
    splitting_ideal_basis,
    thm54_intermediate,
)
from fsig.wpoly import Polynomial, bracket_normal_form

from oracles import expand_power


def fedder_oracle(f, p):
    expanded = expand_power(list(f.terms.items()), p - 1, p)
    return any(all(e < p for e in m) for m in expanded)


def test_fedder_examples(std3):
    assert fedder_is_fpure(parse_poly("x^2+y^2+z^2", std3(3)))
    assert fedder_is_fpure(parse_poly("x^3+y^3+z^3", std3(7)))
    assert not fedder_is_fpure(parse_poly("x^3+y^3+z^3", std3(5)))
    # the surviving monomial (xyz)^6 has coefficient 6!/(2!2!2!) = 90 = 6 mod 7
    f = parse_poly("x^3+y^3+z^3", std3(7))
    assert expand_power(list(f.terms.items()), 6, 7)[(6, 6, 6)] == 6


def test_fedder_errors(std3):
    ring = std3(5)
    with pytest.raises(UnitPolynomial):
        fedder_is_fpure(parse_poly("x + 1", ring))
    with pytest.raises(ZeroPolynomial):
        fedder_is_fpure(Polynomial.zero(ring))


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("e", [1, 2])
def test_regular_case(std3, p, e):
    f = parse_poly("x", std3(p))
    rep = free_rank_aq(f, e=e)
    q = p**e
    assert rep.a_q == q**2 and rep.ratio == 1
    assert sum(rep.degree_profile.values()) == rep.a_q
    # profile is the monomial count of y^i z^j with i, j < q
    expected = {}
    for i, j in itertools.product(range(q), repeat=2):
        expected[i + j] = expected.get(i + j, 0) + 1
    assert rep.degree_profile == expected
    assert rep.lemma51_ok


def test_regular_one_variable_profile_tight():
    ring = make_ring(3, [("x", 1), ("y", 1)])
    rep = free_rank_aq(parse_poly("x", ring), e=2)
    assert rep.degree_profile == {n: 1 for n in range(9)}
    assert lemma51_holds(rep.degree_profile, -1, 9)
    assert max(rep.degree_profile) == 8


def test_fermat_p7(std3):
    f = parse_poly("x^3+y^3+z^3", std3(7))
    assert free_rank_aq(f, e=1).a_q == 1 == naive_free_rank_oracle(f, e=1)
    seq = fsignature_sequence(f, e_max=2)
    assert [r.a_q for r in seq] == [1, 1]
    assert [r.ratio for r in seq] == [Fraction(1, 49), Fraction(1, 2401)]


def test_a1_standard_weights(a1_ring3):
    ring, f = a1_ring3
    rep = free_rank_aq(f, ring, 1)
    assert rep.a_q == naive_free_rank_oracle(f, ring, 1) == 5
    assert abs(rep.ratio - Fraction(1, 2)) <= Fraction(2, 3)
    seq = fsignature_sequence(f, ring, 3)
    gaps = [abs(r.ratio - Fraction(1, 2)) for r in seq]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < Fraction(1, 100)


def test_a1_weighted_lemma51():
    ring = make_ring(3, [("x", 2), ("y", 2), ("z", 2)], [4])
    rep = free_rank_aq(parse_poly("x^2+y^2+z^2", ring), e=1)
    assert hypersurface_a_invariant(parse_poly("x^2+y^2+z^2", ring), ring) == -2
    assert rep.lemma51_ok and rep.a_q == 5


def test_non_homogeneous(std3):
    ring = make_ring(5, [("x", 1), ("y", 1)])
    f = parse_poly("x^2 + y^3 + x*y", ring)
    rep = free_rank_aq(f, e=1)
    assert rep.degree_profile is None and rep.lemma51_ok is None
    assert rep.a_q == naive_free_rank_oracle(f, e=1)
    with pytest.raises(NotHomogeneous):
        free_rank_aq(f, e=1, graded=True)


def test_budget(std3):
    f = parse_poly("x^2+y^2+z^2", std3(5))
    with pytest.raises(BudgetExceeded):
        free_rank_aq(f, e=2, budget=100)
    with pytest.raises(BudgetExceeded):
        naive_free_rank_oracle(f, e=2)
    seq = fsignature_sequence(f, e_max=3, budget=200)
    assert isinstance(seq[-1], SkippedReport) and seq[-1].e == 2 and len(seq) == 2


def test_lemma51_examples():
    assert lemma51_holds({}, -1, 5)
    assert lemma51_holds({0: 1, 2: 1}, -1, 3)
    assert not lemma51_holds({3: 1}, -1, 3)


def test_classification_examples(std3):
    assert classify_theorem53(parse_poly("x^3+y^3+z^3", std3(7))).verdict == "UniqueSummand"
    c = classify_theorem53(parse_poly("x^3+y^3+z^3", std3(5)))
    assert c.verdict == "NotFPure" and c.a_q_values == (0, 0) and c.consistent
    c = classify_theorem53(parse_poly("x^2+y^2+z^2", std3(3)))
    assert c.verdict == "FPureRationalLike" and c.a_inv == -1 and c.a_q_values[0] >= 2 and c.consistent


def test_classify_reports_rules():
    assert classify_reports(True, -1, []).verdict == "Inconclusive"
    assert classify_reports(True, 1, [free_rank_aq(parse_poly("x", make_ring(2, [("x", 1)])))]).verdict == "Inconclusive"


def test_thm54_examples():
    ring = make_ring(3, [("x", 2), ("y", 2), ("z", 2)], [4])
    ok, data = thm54_intermediate(parse_poly("x^2+y^2+z^2", ring), ring, 1, (2, 2), N=3)
    assert ok and data["a_q"] <= data["rhs"] and data["symmetric"]

    reg = make_ring(3, [("x", 1), ("y", 1)], [1])
    ok, data = thm54_intermediate(parse_poly("x", reg), reg, 1, (1,), N=5)
    assert ok and data["a_q"] == 3

    e6 = make_ring(5, [("x", 6), ("y", 4), ("z", 3)], [12])
    ok, data = thm54_intermediate(parse_poly("x^2+y^3+z^4", e6), e6, 1, (4, 3), N=2)
    assert ok and data["symmetric"]


def test_thm54_bad_sop():
    ring = make_ring(3, [("x", 2), ("y", 2), ("z", 2)], [4])
    with pytest.raises(NotPolynomial):
        thm54_intermediate(parse_poly("x^2+y^2+z^2", ring), ring, 1, (3, 5))


def test_splitting_ideal_basis(a1_ring3):
    ring, f = a1_ring3
    basis = splitting_ideal_basis(f, ring, 1)
    assert len(basis) == 27 - 5
    g = poly_mul(f, f)
    for h in basis:
        assert bracket_normal_form(poly_mul(h, g), 3).is_zero()


def test_report_dict(a1_ring3):
    ring, f = a1_ring3
    d = free_rank_aq(f, ring, 1).to_dict()
    assert d["ratio"] == "5/9" and "elapsed_ms" not in d
    assert all(isinstance(k, str) for k in d["degree_profile"])


# -- properties ---------------------------------------------------------------


@st.composite
def small_hypersurfaces(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    nv = draw(st.integers(1, 3))
    weights = draw(st.lists(st.integers(1, 3), min_size=nv, max_size=nv))
    deg = draw(st.integers(1, 6))
    monos = [m for m in itertools.product(range(deg + 1), repeat=nv)
             if sum(e * w for e, w in zip(m, weights)) == deg]
    if not monos:
        monos = [tuple(deg if i == 0 else 0 for i in range(nv))]
        deg = deg * weights[0]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4, unique=True))
    coeffs = draw(st.lists(st.integers(1, p - 1), min_size=len(chosen), max_size=len(chosen)))
    terms = dict(zip(chosen, coeffs))
    ring = make_ring(p, [(n, w) for n, w in zip("xyz", weights)], [deg])
    return ring, Polynomial(ring, terms)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_hypersurfaces())
def test_blocked_equals_naive_and_invariants(data):
    ring, f = data
    if ring.prime**ring.nvars > 5000:
        return
    rep = free_rank_aq(f, ring, 1)
    assert rep.a_q == naive_free_rank_oracle(f, ring, 1)
    assert 0 <= rep.a_q <= ring.prime ** ring.dim
    assert sum(rep.degree_profile.values()) == rep.a_q
    pure = fedder_is_fpure(f, ring)
    assert pure == fedder_oracle(f, ring.prime)
    assert (rep.a_q >= 1) == pure
    if pure:
        assert hypersurface_a_invariant(f, ring) <= 0
        assert rep.lemma51_ok
