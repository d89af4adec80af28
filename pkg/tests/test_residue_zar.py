import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoval.extensions import ve_contains
from pseudoval.generators import function_battery, rand_divergent, rand_elem, rand_stationary
from pseudoval.residue_zar import (
    FinPlace,
    InfPlace,
    Poly,
    SplitTFunc,
    TFunc,
    Whole,
    XadDescriptor,
    ZarError,
    check_distinct_residues,
    divergent_neighbourhood,
    generic_point_check,
    in_all,
    is_irreducible,
    isolated_certificate,
    monic_irreducibles,
    parse_point,
    parse_tfunc,
    points_up_to,
    stationary_separator,
    transport,
    transport_agrees,
    witness_f_not_dz,
    witness_f_not_e,
    xad_map,
    xad_ring,
    zar_contains,
)
from pseudoval.sequences import BINARY, Kind, approach, convergent, descend, divergent, equivalent, stationary
from pseudoval.valued_field import ParseError, field_from_name
from strategies import rngs

Q = field_from_name("dyadic-q")
F5 = field_from_name("dyadic-f5")


def tf(p, text):
    return parse_tfunc(p, text)


# ---- polynomials -----------------------------------------------------------------

def test_poly_arithmetic_mod_p():
    f = Poly(5, (1, 1))
    assert (f * f).coeffs == (1, 2, 1)
    assert (f ** 5).coeffs == (1, 0, 0, 0, 0, 1)
    q, r = Poly(5, (2, 0, 1)).divmod(f)
    assert q * f + r == Poly(5, (2, 0, 1))
    assert Poly(5, (3, 0, 2)).monic().coeffs == (4, 0, 1)


def test_irreducible_counts_over_f5():
    # number of monic irreducibles of degree n over F_5: 5, 10, 40
    assert [len(monic_irreducibles(5, n)) for n in (1, 2, 3)] == [5, 10, 40]
    assert is_irreducible(Poly(5, (2, 0, 1)))
    assert not is_irreducible(Poly(5, (1, 0, 1)))  # t^2 + 1 = (t - 2)(t - 3)


def test_irreducible_over_q():
    assert is_irreducible(Poly(0, (-2, 0, 1)))
    assert not is_irreducible(Poly(0, (-4, 0, 1)))
    assert is_irreducible(Poly(0, (-2, 0, 0, 1)))


def test_points_up_to_degree_three():
    pts = points_up_to(5, 3)
    assert len(pts) == 2 + 5 + 10 + 40
    assert Whole() in pts and InfPlace() in pts


# ---- containment ----------------------------------------------------------------

def test_finite_place_examples():
    at_t = FinPlace(Poly(5, (0, 1)))
    assert zar_contains(at_t, tf(5, "[1] / [4, 1]"))
    assert not zar_contains(at_t, tf(5, "[1] / [0, 1]"))
    at_t_q = FinPlace(Poly(0, (0, 1)))
    assert zar_contains(at_t_q, tf(0, "[1] / [-1, 1]"))
    assert not zar_contains(at_t_q, tf(0, "[1] / [0, 1]"))


def test_infinite_place_examples():
    for p in (0, 5):
        assert zar_contains(InfPlace(), tf(p, "[1] / [0, 1]"))
        assert not zar_contains(InfPlace(), tf(p, "[0, 1]"))


@settings(max_examples=20)
@given(st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=4), min_size=20, max_size=20))
def test_whole_contains_everything(coeff_lists):
    for cs in coeff_lists:
        if any(cs):
            assert zar_contains(Whole(), TFunc(Poly(5, (1,)), Poly(5, tuple(cs))))


def _tfuncs(p):
    coeff = st.integers(0, p - 1) if p else st.fractions(min_value=-5, max_value=5, max_denominator=4)
    poly = st.lists(coeff, min_size=1, max_size=4).map(lambda cs: Poly(p, tuple(cs))).filter(bool)
    return st.builds(TFunc, poly, poly)


@settings(max_examples=100)
@given(st.sampled_from([0, 5]), st.data())
def test_order_functions_are_additive(p, data):
    a, b = data.draw(_tfuncs(p)), data.draw(_tfuncs(p))
    places = [Poly(p, (0, 1)), Poly(p, (-1, 1)), Poly(p, (2, 0, 1)) if p else Poly(p, (-2, 0, 1))]
    for f in places:
        assert (a * b).order_at(f) == a.order_at(f) + b.order_at(f)
    assert (a * b).order_at_infinity() == a.order_at_infinity() + b.order_at_infinity()


# ---- certificates ----------------------------------------------------------------

def test_every_non_generic_point_is_isolated_over_f5():
    for pt in points_up_to(5, 3):
        if isinstance(pt, Whole):
            continue
        cert = isolated_certificate(pt, 5, 3)
        assert cert.unique and cert.others_excluding == (pt,)
        assert cert.checked == 57 and cert.degree_bound == 3


def test_whole_has_no_certificate():
    with pytest.raises(ZarError):
        isolated_certificate(Whole(), 5)


def test_whole_lies_in_every_certificate_open():
    for pt in points_up_to(5, 2):
        if not isinstance(pt, Whole):
            cert = isolated_certificate(pt, 5, 2)
            assert Whole().contains(cert.function)


def test_certificate_over_q_needs_sample():
    pt = FinPlace(Poly(0, (-2, 0, 1)))
    with pytest.raises(ZarError):
        isolated_certificate(pt, 0)
    sample = [FinPlace(Poly(0, (c, 1))) for c in range(-3, 4)] + [pt]
    assert isolated_certificate(pt, 0, sample=sample).unique


def test_generic_point_examples():
    sample = [q for q in points_up_to(5, 2) if not isinstance(q, Whole)]
    assert generic_point_check([tf(5, "[0, 1]"), tf(5, "[1] / [4, 1]")], sample)
    assert generic_point_check([], sample)


@settings(max_examples=10)
@given(st.lists(_tfuncs(5).filter(bool), min_size=10, max_size=10))
def test_generic_point_on_random_batteries(opens):
    sample = [q for q in points_up_to(5, 3) if not isinstance(q, Whole)]
    assert generic_point_check(opens, sample)


# ---- literals ------------------------------------------------------------------------

def test_literal_round_trips():
    for text in ("inf", "whole", "[2, 0, 1]"):
        pt = parse_point(5, text)
        assert parse_point(5, pt.literal()) == pt
    psi = tf(5, "[1, 2] / [0, 1]")
    assert tf(5, psi.literal()) == psi
    with pytest.raises(ParseError):
        tf(5, "[1, 2 / [0, 1]")
    with pytest.raises(ZarError):
        parse_point(5, "[1, 0, 1]")


# ---- rings around a closed ball --------------------------------------------------

def test_xad_map_examples():
    assert xad_map(XadDescriptor(Q.zero, Q.monomial(1, 1), 3)) == FinPlace(Poly(0, (-3, 1)))
    assert xad_map(XadDescriptor(Q.zero, Q.one, "E")) == InfPlace()
    assert xad_map(XadDescriptor(Q.zero, Q.one, "F")) == Whole()


def test_xad_rings_have_expected_limits():
    alpha, c = Q.parse("1 + t^(1/2)"), Q.monomial(2, Fraction(3, 4))
    e = xad_ring(XadDescriptor(alpha, c, "E"))
    f = xad_ring(XadDescriptor(alpha, c, "F"))
    d = xad_ring(XadDescriptor(alpha, c, 3))
    assert e.kind == Kind.CONVERGENT and f.kind == Kind.STATIONARY and d.kind == Kind.DIVERGENT
    assert f.term(1) - f.term(0) == c
    assert d.base == alpha - c * 3


def test_distinct_residues():
    check_distinct_residues([0, 1, 2], 5)
    with pytest.raises(ZarError):
        check_distinct_residues([1, 6], 5)


def test_strict_containments_with_witnesses():
    alpha, c = Q.parse("t^(-1) + 2"), Q.monomial(3, 1)
    f = xad_ring(XadDescriptor(alpha, c, "F"))
    e = xad_ring(XadDescriptor(alpha, c, "E"))
    d = xad_ring(XadDescriptor(alpha, c, 2))
    w = witness_f_not_e(alpha, c)
    assert ve_contains(f, w) and not ve_contains(e, w)
    w = witness_f_not_dz(alpha, c, 2)
    assert ve_contains(f, w) and not ve_contains(d, w)


@settings(max_examples=20)
@given(rngs)
def test_smaller_rings_sit_inside_the_stationary_ring(rng):
    alpha = rand_elem(rng, Q)
    c = Q.monomial(rng.randint(1, 4), Fraction(rng.randint(-4, 4), 2))
    f = xad_ring(XadDescriptor(alpha, c, "F"))
    others = [xad_ring(XadDescriptor(alpha, c, "E"))] + [xad_ring(XadDescriptor(alpha, c, z)) for z in (0, 1, -2)]
    for phi in function_battery(rng, f, 20):
        for o in others:
            if ve_contains(o, phi):
                assert ve_contains(f, phi)


@settings(max_examples=30)
@given(rngs, st.sampled_from(["E", "F", 0, 1, 3]))
def test_transport_matches_residue_containment(rng, marker):
    alpha, c = rand_elem(rng, Q), Q.monomial(rng.randint(1, 3), Fraction(rng.randint(-2, 2), 2))
    d = XadDescriptor(alpha, c, marker)
    roots = rng.sample(range(-3, 4), 3)
    psi = SplitTFunc(rng.randint(1, 4), tuple((r, rng.choice([1, -1, 2, -2])) for r in roots))
    assert transport_agrees(d, psi)
    phi = transport(psi, alpha, c)
    u = alpha - c * 5
    assert phi(u) == psi.to_tfunc(0).num(Fraction(5)) / psi.to_tfunc(0).den(Fraction(5)) * Q.one


# ---- separation facts ----------------------------------------------------------------

@settings(max_examples=10)
@given(rngs)
def test_finite_residue_field_isolates_divergent_ring(rng):
    alpha = rand_elem(rng, F5)
    delta = Fraction(rng.randint(-2, 2), 2)
    c = F5.monomial(1, delta)
    target = divergent(alpha, descend(delta))
    fns = divergent_neighbourhood(alpha, c)
    assert in_all(target, fns)
    excluded = 0
    while excluded < 50:
        other = rand_divergent(rng, F5, delta, rand_elem(rng, F5, delta - 2, delta + 2))
        if equivalent(other, target):
            continue
        assert not in_all(other, fns)
        excluded += 1


def test_neighbourhood_needs_finite_residue_field():
    with pytest.raises(ZarError):
        divergent_neighbourhood(Q.zero, Q.one)


def test_irrational_breadth_rings_agree_on_battery():
    rng = random.Random(11)
    third = Fraction(1, 3)
    for _ in range(10):
        beta = rand_elem(rng, Q)
        conv = convergent(beta, approach(third, BINARY))
        div = divergent(beta, descend(third, BINARY))
        for phi in function_battery(rng, conv, 20):
            assert ve_contains(conv, phi) == ve_contains(div, phi)


@settings(max_examples=10)
@given(rngs)
def test_stationary_separators_are_singletons(rng):
    beta = rand_elem(rng, Q)
    gamma = Fraction(rng.randint(-3, 3), 2)
    c = Q.monomial(rng.randint(1, 3), gamma)
    target = stationary(beta, gamma)
    phi = stationary_separator(beta, c)
    pair = [phi, phi.inverse()]
    assert ve_contains(target, phi) and in_all(target, pair)
    for _ in range(50):
        if rng.random() < 0.5:
            other = rand_stationary(rng, Q, gamma, beta + Q.monomial(1, gamma - rng.randint(1, 3)))
            # same breadth, different ball: B(phi) alone separates
            assert not ve_contains(other, phi)
        else:
            g2 = gamma + rng.choice([-1, 1]) * Fraction(rng.randint(1, 4), 2)
            other = rand_stationary(rng, Q, g2, beta)
            # same pseudo-limit, different breadth: B(phi, 1/phi) separates
            assert not in_all(other, pair)
