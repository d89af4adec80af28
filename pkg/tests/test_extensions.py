from fractions import Fraction

import pytest
from hypothesis import given, settings

from pseudoval.extensions import (
    ExtRing,
    Factored,
    HeuristicIndecision,
    Raw,
    is_exact,
    omega_contains,
    parse_ratfunc,
    raw_limit,
    split,
    subbasic_b,
    ve_contains,
    w_e,
    window_bound,
    window_verdict,
)
from pseudoval.generators import (
    FIELD_NAMES,
    equivalent_variant,
    function_battery,
    rand_convergent,
    rand_divergent,
    rand_elem,
    rand_stationary,
)
from pseudoval.metrics import sigma_beta, z_construct
from pseudoval.sequences import BINARY, Kind, approach, convergent, descend, divergent, stationary
from pseudoval.valued_field import INF, NEG_INF, ParseError, field_from_name
from strategies import rngs

Q = field_from_name("dyadic-q")


def t(q, c=1):
    return Q.monomial(c, Fraction(q))


def X():
    return Factored.linear(Q.zero)


def deep_values(spec, phi, start=30, length=8):
    """Independent oracle: evaluate phi on materialized terms far out."""
    return [phi(spec.term(n)).valuation() for n in range(start, start + length)]


E = convergent(Q.zero, approach(1))


# ---- w_E -------------------------------------------------------------------

def test_we_of_x_is_breadth():
    assert w_e(E, X()) == 1
    vals = deep_values(E, X())
    assert all(Fraction(1) - v == Fraction(1, 2 ** 31) / 2 ** i for i, v in enumerate(vals))


def test_we_with_root_outside_ball():
    phi = Factored.linear(t("1/2"))
    assert w_e(E, phi) == Fraction(1, 2)
    assert set(deep_values(E, phi)) == {Fraction(1, 2)}


def test_we_of_constant():
    assert w_e(E, Factored(t("-3/4", 5))) == Fraction(-3, 4)


def test_we_pole_inside_cauchy_ball():
    cauchy = convergent(Q.zero, approach(INF))
    assert w_e(cauchy, X().inverse()) == NEG_INF
    assert w_e(cauchy, X()) == INF


# ---- V_E membership ---------------------------------------------------------

def test_membership_examples():
    up = Factored.linear(Q.zero, t("1/2"))
    down = up.inverse()
    assert ve_contains(E, up)
    assert all(v > 0 for v in deep_values(E, up))
    assert not ve_contains(E, down)
    assert all(v < 0 for v in deep_values(E, down))
    for spec in (E, divergent(Q.zero, descend(1)), stationary(Q.zero, 1)):
        assert ve_contains(spec, Factored(Q.one))


def test_boundary_tie_at_breadth():
    # v(phi(s_n)) = gamma_n - 1 tends to 0 from below: never in V
    phi = Factored.linear(Q.zero, t(1))
    assert not ve_contains(E, phi)
    assert window_verdict(E, phi) is False
    assert all(v < 0 for v in deep_values(E, phi))
    # the inverse tends to 0 from above
    assert ve_contains(E, phi.inverse())
    assert all(v > 0 for v in deep_values(E, phi.inverse()))


def test_divergent_boundary_mirrors_convergent():
    d = divergent(Q.zero, descend(1))
    phi = Factored.linear(Q.zero, t(1))
    assert ve_contains(d, phi)
    assert not ve_contains(d, phi.inverse())
    assert all(v > 0 for v in deep_values(d, phi, 10))


def test_stationary_separator():
    beta, c = t("1/2", 3), t(1, 2)
    spec = stationary(beta, 1)
    phi = Factored.linear(beta, c)
    assert subbasic_b(ExtRing(spec), phi)
    assert set(deep_values(spec, phi, 1)) == {0}


def test_stationary_coefficient_cancellation():
    # the root matches the principal part of s_2 exactly; the closed form skips that term
    spec = stationary(Q.zero, 1)
    root = spec.term(2)
    phi = Factored.linear(root, t(1))
    assert window_bound(spec, phi) == 3
    assert ve_contains(spec, phi) and window_verdict(spec, phi)
    assert phi.valuation_at(spec.term(2)) == INF


# ---- Omega -----------------------------------------------------------------

def test_omega_examples():
    assert omega_contains(E, t("1/4"), Fraction(1, 2))
    assert not omega_contains(E, Q.zero, Fraction(1, 2))
    assert omega_contains(E, Q.zero, INF)


# ---- literals ----------------------------------------------------------------

def test_parse_factored_and_raw():
    phi = parse_ratfunc(Q, "t^(-1/2) * (X - t)^2 * X^-1")
    assert is_exact(phi)
    assert phi(t(2)) == t("-1/2") * (t(2) - t(1)) ** 2 / t(2)
    raw = parse_ratfunc(Q, "[1, 0, 1] / [t, 1]")
    assert isinstance(raw, Raw)
    assert raw(t(1)) == (Q.one + t(2)) / (t(1) + t(1))
    assert parse_ratfunc(Q, str(phi)) == phi
    assert parse_ratfunc(Q, str(raw)) == raw


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_ratfunc(Q, "(X - t)^ * X")
    assert info.value.pos == 9


# ---- raw mode ----------------------------------------------------------------

def test_raw_limit_matches_factored():
    phi = Factored(t(1, 2), ((t("1/2"), 2), (t("1/4"), -1)))
    assert raw_limit(E, phi.to_raw()) == w_e(E, phi) == Fraction(7, 4)


def test_raw_indecision_when_not_stable():
    # a root inside the ball keeps v(phi(s_n)) moving towards its limit
    phi = Factored(t(1, 2), ((t("1/2"), 2), (t(3), -1)))
    with pytest.raises(HeuristicIndecision):
        raw_limit(E, phi.to_raw())
    slow = convergent(Q.zero, approach(Fraction(1, 3), BINARY))
    with pytest.raises(HeuristicIndecision):
        raw_limit(slow, X().to_raw(), window=12)


# ---- properties ------------------------------------------------------------------

def _spec(rng):
    f = field_from_name(rng.choice(FIELD_NAMES))
    roll = rng.random()
    if roll < 0.45 or f.name == "padic-5":
        deltas = [INF] if f.name == "padic-5" else [Fraction(1), Fraction(1, 3), Fraction(5, 4), INF]
        return rand_convergent(rng, f, rng.choice(deltas))
    if roll < 0.75 or not f.residue_field_infinite:
        return rand_divergent(rng, f, rng.choice([Fraction(0), Fraction(1), Fraction(1, 3)]))
    return rand_stationary(rng, f, Fraction(rng.randint(-1, 2)))


@settings(max_examples=60)
@given(rngs)
def test_closed_form_agrees_with_window(rng):
    spec = _spec(rng)
    for phi in function_battery(rng, spec, 6):
        assert ve_contains(spec, phi) == window_verdict(spec, phi)


@settings(max_examples=40)
@given(rngs)
def test_split_predicts_window_values(rng):
    spec = _spec(rng)
    for phi in function_battery(rng, spec, 4):
        sp = split(spec, phi)
        start = window_bound(spec, phi)
        for n in range(start, start + 4):
            v = phi.valuation_at(spec.term(n))
            g = spec.gamma(n)
            if spec.kind == Kind.STATIONARY or sp.in_mult == 0:
                assert v == w_e(spec, phi)
            else:
                assert v == sp.out_part + sp.in_mult * g


@settings(max_examples=40)
@given(rngs)
def test_representative_independence(rng):
    spec = _spec(rng)
    other = equivalent_variant(rng, spec)
    assert ExtRing(spec) == ExtRing(other)
    for phi in function_battery(rng, spec, 8):
        assert ve_contains(spec, phi) == ve_contains(other, phi)


@settings(max_examples=40)
@given(rngs)
def test_sigma_preimage_identity(rng):
    f = Q if rng.random() < 0.7 else field_from_name("dyadic-f3")
    beta = rand_elem(rng, f)
    delta = rng.choice([Fraction(1), Fraction(1, 3), Fraction(-1, 2), Fraction(2)])
    gamma = rng.choice([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)])
    s = beta + f.monomial(1, gamma + Fraction(1, 4))
    spec = z_construct(beta, delta) if rng.random() < 0.5 else rand_convergent(rng, f, delta, base=beta)
    assert (sigma_beta(spec, beta) <= gamma) == omega_contains(spec, s, gamma)


@settings(max_examples=30)
@given(rngs)
def test_stationary_ring_contains_convergent_ring(rng):
    alpha = rand_elem(rng, Q)
    delta = Fraction(rng.randint(-4, 4), 2)
    conv = convergent(alpha, approach(delta))
    stat = stationary(alpha, delta)
    battery = function_battery(rng, stat, 20)
    for phi in battery:
        if ve_contains(conv, phi):
            assert ve_contains(stat, phi)
    witness = Factored.linear(alpha, Q.monomial(1, delta))
    assert ve_contains(stat, witness) and not ve_contains(conv, witness)
