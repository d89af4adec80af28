"""Seeded random field elements, sequence specs and function batteries."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Optional

from .extensions import Factored
from .sequences import (
    BINARY,
    DYADIC_STEP,
    EXPLICIT,
    CoeffStream,
    GaugeGen,
    Kind,
    MonomialPerturbation,
    SeqSpec,
    APPROACH,
    DESCEND,
    constant,
)
from .valued_field import INF, Dyadic, ExtRat, Field, FieldElem, PAdic, ext

FIELD_NAMES = ("padic-5", "dyadic-q", "dyadic-f5")


def rand_coeff(rng: random.Random, field: Field):
    """A nonzero base coefficient (a unit for p-adic fields)."""
    if isinstance(field, PAdic):
        while True:
            c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 3 * field.p), rng.randint(1, 3))
            if c.numerator % field.p and c.denominator % field.p:
                return c
    if field.p:
        return rng.randint(1, field.p - 1)
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.choice([1, 1, 2, 3]))


def rand_exponent(rng: random.Random, field: Field, lo, hi) -> Fraction:
    """A value-group element in ``[lo, hi]``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if isinstance(field, PAdic):
        a, b = math.ceil(lo), math.floor(hi)
        return Fraction(rng.randint(a, b))
    den = rng.choice([1, 2, 4, 8])
    a, b = math.ceil(lo * den), math.floor(hi * den)
    if a > b:
        den = 64
        a, b = math.ceil(lo * den), math.floor(hi * den)
    return Fraction(rng.randint(a, b), den)


def elem_with_valuation(rng: random.Random, field: Field, v, extra: int = 2) -> FieldElem:
    """An element of valuation exactly ``v`` with a few higher-order terms."""
    v = Fraction(v)
    out = field.monomial(rand_coeff(rng, field), v)
    for _ in range(rng.randint(0, extra)):
        out = out + field.monomial(rand_coeff(rng, field), v + rand_exponent(rng, field, Fraction(1, 4), 2) + (1 if isinstance(field, PAdic) else 0))
    return out


def rand_elem(rng: random.Random, field: Field, lo=-1, hi=3) -> FieldElem:
    if rng.random() < 0.08:
        return field.zero
    return elem_with_valuation(rng, field, rand_exponent(rng, field, lo, hi))


def elem_at_least(rng: random.Random, field: Field, v, strict: bool = False) -> FieldElem:
    """A random element with valuation ``>= v`` (``> v`` when strict); may be zero."""
    if rng.random() < 0.15:
        return field.zero
    v = ext(v)
    lo = v
    if strict or not field.in_value_group(v):
        lo = v + (1 if isinstance(field, PAdic) else Fraction(1, 64))
        if isinstance(field, PAdic):
                lo = Fraction(math.floor(v) + 1)
    w = rand_exponent(rng, field, lo, lo + 2)
    if w < v or (strict and w == v):
        w = lo if field.in_value_group(lo) else rand_exponent(rng, field, lo, lo + 1)
    return elem_with_valuation(rng, field, w)


def rand_unit(rng: random.Random, field: Field) -> FieldElem:
    if rng.random() < 0.5:
        return field.one
    return field.coerce(rand_coeff(rng, field)) + elem_at_least(rng, field, 1)


def rand_coeffs(rng: random.Random, field: Field) -> CoeffStream:
    if isinstance(field, Dyadic) and field.p == 0 and rng.random() < 0.4:
        return CoeffStream("naturals")
    if rng.random() < 0.4:
        return CoeffStream("ones")
    return CoeffStream("list", tuple(Fraction(rand_coeff(rng, field)) for _ in range(rng.randint(1, 4))))


def rand_perturbation(rng: random.Random, field: Field) -> Optional[MonomialPerturbation]:
    if rng.random() < 0.5:
        return None
    gap = Fraction(rng.randint(1, 2)) if isinstance(field, PAdic) else rng.choice([Fraction(1, 4), Fraction(1, 2), Fraction(1)])
    return MonomialPerturbation(Fraction(rand_coeff(rng, field)), gap)


def rand_approach_gauge(rng: random.Random, field: Field, delta) -> GaugeGen:
    delta = ext(delta)
    if delta == INF:
        if rng.random() < 0.3:
            start = rng.randint(-2, 1)
            return GaugeGen(APPROACH, INF, EXPLICIT, (Fraction(start), Fraction(start + 2)))
        return GaugeGen(APPROACH, INF, DYADIC_STEP)
    if not field.in_value_group(delta):
        if rng.random() < 0.3:
            first = Fraction(int(delta) - 1)
            return GaugeGen(APPROACH, delta, EXPLICIT, (first,))
        return GaugeGen(APPROACH, delta, BINARY)
    rule = rng.choice([DYADIC_STEP, DYADIC_STEP, BINARY, EXPLICIT])
    if rule == EXPLICIT:
        return GaugeGen(APPROACH, delta, EXPLICIT, (delta - 3, delta - 2))
    return GaugeGen(APPROACH, delta, rule)


def rand_descend_gauge(rng: random.Random, field: Field, delta) -> GaugeGen:
    delta = ext(delta)
    if not field.in_value_group(delta):
        return GaugeGen(DESCEND, delta, BINARY)
    rule = rng.choice([DYADIC_STEP, DYADIC_STEP, BINARY, EXPLICIT])
    if rule == EXPLICIT:
        return GaugeGen(DESCEND, delta, EXPLICIT, (delta + 3, delta + 2))
    return GaugeGen(DESCEND, delta, rule)


def rand_convergent(rng: random.Random, field: Field, delta, base: Optional[FieldElem] = None,
                    plain: bool = False) -> SeqSpec:
    """A random pseudo-convergent spec of breadth ``delta``.

    ``plain`` keeps the canonical gauge and drops unit, coefficient and
    perturbation variation.
    """
    if base is None:
        base = rand_elem(rng, field)
    if plain:
        from .sequences import canonical_approach

        return SeqSpec(Kind.CONVERGENT, base, canonical_approach(field, delta))
    return SeqSpec(
        Kind.CONVERGENT,
        base,
        rand_approach_gauge(rng, field, delta),
        rand_coeffs(rng, field),
        rand_unit(rng, field),
        rand_perturbation(rng, field),
    )


def rand_divergent(rng: random.Random, field: Field, delta, base: Optional[FieldElem] = None) -> SeqSpec:
    if base is None:
        base = rand_elem(rng, field)
    return SeqSpec(
        Kind.DIVERGENT,
        base,
        rand_descend_gauge(rng, field, delta),
        rand_coeffs(rng, field),
        rand_unit(rng, field),
        rand_perturbation(rng, field),
    )


def rand_stationary(rng: random.Random, field: Field, gamma, base: Optional[FieldElem] = None) -> SeqSpec:
    if base is None:
        base = rand_elem(rng, field)
    coeffs = CoeffStream("naturals", power=rng.choice([1, -1]))
    return SeqSpec(Kind.STATIONARY, base, constant(gamma), coeffs, rand_unit(rng, field), rand_perturbation(rng, field))


def same_ball_base(rng: random.Random, spec: SeqSpec) -> FieldElem:
    """Another pseudo-limit of ``spec``."""
    ball_radius = spec.gauge.limit if spec.kind != Kind.STATIONARY else spec.gamma(0)
    if ball_radius == INF:
        return spec.base
    return spec.base + elem_at_least(rng, spec.field, ball_radius, strict=spec.kind == Kind.DIVERGENT)


def equivalent_variant(rng: random.Random, spec: SeqSpec) -> SeqSpec:
    """A differently built spec with the same ring."""
    f = spec.field
    base = same_ball_base(rng, spec)
    if spec.kind == Kind.CONVERGENT:
        return rand_convergent(rng, f, spec.gauge.limit, base)
    if spec.kind == Kind.DIVERGENT:
        return rand_divergent(rng, f, spec.gauge.limit, base)
    return rand_stationary(rng, f, spec.gamma(0), base)


# --------------------------------------------------------------------------
# function batteries
# --------------------------------------------------------------------------

def _root_near(rng: random.Random, spec: SeqSpec) -> FieldElem:
    """A root placed inside, outside or on a tie with the sequence."""
    f = spec.field
    kind = spec.kind
    radius = spec.gamma(0) if kind == Kind.STATIONARY else spec.gauge.limit
    roll = rng.random()
    if roll < 0.25:
        return spec.base + elem_at_least(rng, f, radius, strict=kind == Kind.DIVERGENT) if radius != INF else spec.base
    if roll < 0.45:
        # cancels the leading term of some s_k
        k = rng.randint(0, 6)
        g = spec.gamma(k)
        return spec.term(k) + elem_at_least(rng, f, g, strict=True)
    if roll < 0.6:
        # exactly the principal part at index k
        k = rng.randint(0, 6)
        return spec.base + spec.principal(k)
    if roll < 0.75 and kind == Kind.STATIONARY:
        # tie at gamma with an arbitrary residue
        return spec.base + elem_with_valuation(rng, f, radius)
    top = spec.gamma(0) if kind != Kind.DIVERGENT else radius
    if top == INF:
        top = Fraction(3)
    lo = min(Fraction(top) - 3, Fraction(-1))
    if kind == Kind.CONVERGENT:
        hi = Fraction(top) if not f.in_value_group(radius) or radius == INF else radius
        v = rand_exponent(rng, f, lo, hi)
        if v >= radius:
            v = lo
    else:
        v = rand_exponent(rng, f, lo, Fraction(radius) if radius != INF else lo + 2)
    return spec.base + elem_with_valuation(rng, f, v)


def rand_factored(rng: random.Random, spec: SeqSpec, max_factors: int = 4) -> Factored:
    f = spec.field
    scale = f.monomial(rand_coeff(rng, f), rand_exponent(rng, f, -3, 3))
    factors = []
    for _ in range(rng.randint(1, max_factors)):
        e = rng.choice([1, 1, -1, -1, 2, -2])
        factors.append((_root_near(rng, spec), e))
    return Factored(scale, tuple(factors)).collected()


def function_battery(rng: random.Random, spec: SeqSpec, count: int = 20) -> list:
    f = spec.field
    out = [Factored(f.one), Factored.linear(spec.base), Factored.linear(spec.base).inverse()]
    while len(out) < count:
        out.append(rand_factored(rng, spec))
    return out[:count]
