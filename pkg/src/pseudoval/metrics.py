"""Distances on fixed-breadth spaces, similitudes and the X -> 1/X duality.

Distances are exact pairs ``(eta, delta)`` standing for
``max(exp(-eta) - exp(-delta), 0)``; floats only appear in display output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Optional, Union

from .extensions import ExtRing, Factored, ve_contains
from .sequences import (
    APPROACH,
    DESCEND,
    Kind,
    ScaledPerturbation,
    SeqSpec,
    SpecError,
    InversePerturbation,
    canonical_approach,
    convergent,
    equivalent,
    pseudo_limit_set,
)
from .valued_field import INF, ExtRat, Field, FieldElem, PAdic, ext, fmt_ext


class MetricError(ValueError):
    """Inputs outside the domain of a metric operation."""


class RawWindowError(RuntimeError):
    """``v(s_n - t_n)`` did not settle before the index cap."""


@dataclass(frozen=True)
class DistDesc:
    """``max(exp(-eta) - exp(-delta), 0)``, kept as exponents."""

    eta: ExtRat
    delta: ExtRat

    def __post_init__(self):
        eta, delta = ext(self.eta), ext(self.delta)
        if eta >= delta:
            eta = INF
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "delta", delta)

    @property
    def is_zero(self) -> bool:
        return self.eta == INF

    def _check(self, other: "DistDesc"):
        if not isinstance(other, DistDesc):
            return NotImplemented
        if self.delta != other.delta:
            raise MetricError(
                f"distances at different breadths ({fmt_ext(self.delta)}, {fmt_ext(other.delta)}) are not comparable"
            )
        return None

    def __lt__(self, other: "DistDesc") -> bool:
        self._check(other)
        return self.eta > other.eta

    def __le__(self, other: "DistDesc") -> bool:
        self._check(other)
        return self.eta >= other.eta

    def __gt__(self, other: "DistDesc") -> bool:
        return other < self

    def __ge__(self, other: "DistDesc") -> bool:
        return other <= self

    def display_value(self) -> float:
        """Float rendering for humans; not used in any comparison."""
        if self.is_zero:
            return 0.0
        r = 0.0 if self.delta == INF else math.exp(-float(self.delta))
        return math.exp(-float(self.eta)) - r

    def scaled(self, shift) -> "DistDesc":
        """Descriptor after a similitude by an element of valuation ``shift``."""
        shift = Fraction(shift)
        return DistDesc(self.eta + shift, self.delta + shift)

    def to_doc(self) -> dict:
        return {
            "eta": fmt_ext(self.eta),
            "delta": fmt_ext(self.delta),
            "zero": self.is_zero,
            "displayValue": f"{self.display_value():.12g}",
            "displayNote": "non-normative",
        }

    def __str__(self) -> str:
        if self.is_zero:
            return f"0 (delta={fmt_ext(self.delta)})"
        return f"exp(-{fmt_ext(self.eta)}) - exp(-{fmt_ext(self.delta)})"


def dmax(*ds: DistDesc) -> DistDesc:
    return max(ds)


def _spec(w: Union[ExtRing, SeqSpec]) -> SeqSpec:
    return w.spec if isinstance(w, ExtRing) else w


def _require_convergent(spec: SeqSpec, what: str = "input"):
    if spec.kind != Kind.CONVERGENT:
        raise MetricError(f"{what} must be pseudo-convergent, got {spec.kind}")


def dist_delta(w1: Union[ExtRing, SeqSpec], w2: Union[ExtRing, SeqSpec]) -> DistDesc:
    """``d_delta`` between two convergent rings of the same breadth."""
    e, f = _spec(w1), _spec(w2)
    _require_convergent(e, "first ring")
    _require_convergent(f, "second ring")
    if e.field != f.field:
        raise MetricError("rings over different fields")
    delta = e.gauge.limit
    if f.gauge.limit != delta:
        raise MetricError(f"breadth mismatch: {fmt_ext(delta)} vs {fmt_ext(f.gauge.limit)}")
    return DistDesc((e.base - f.base).valuation(), delta)


def dist_pseudo_limit_formula(b1: FieldElem, b2: FieldElem, delta) -> DistDesc:
    return DistDesc((b1 - b2).valuation(), ext(delta))


def raw_dist(e: SeqSpec, f: SeqSpec, stable: int = 8, cap: int = 256) -> DistDesc:
    """Limit of ``max(d(s_n, t_n) - r, 0)`` read off materialized terms.

    Grows the window until ``v(s_n - t_n)`` is constant on ``stable``
    consecutive indices; raises past ``cap``.
    """
    _require_convergent(e)
    _require_convergent(f)
    delta = e.gauge.limit
    if f.gauge.limit != delta:
        raise MetricError("breadth mismatch")
    run, last = 0, None
    for n in range(cap):
        v = (e.term(n) - f.term(n)).valuation()
        run = run + 1 if v == last else 1
        last = v
        if run >= stable:
            return DistDesc(v, delta)
    raise RawWindowError(f"v(s_n - t_n) not constant over {stable} consecutive indices below {cap}")


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------

def z_construct(beta: FieldElem, delta) -> SeqSpec:
    """A convergent spec with pseudo-limit ``beta`` and breadth ``delta``."""
    delta = ext(delta)
    f = beta.field
    if delta != INF and isinstance(f, PAdic):
        raise MetricError(f"{f} has discrete value group; only breadth inf is realizable")
    return convergent(beta, canonical_approach(f, delta))


def sigma_beta(w: Union[ExtRing, SeqSpec], beta: FieldElem) -> ExtRat:
    """``V_E -> delta_E`` on rings having ``beta`` as a pseudo-limit."""
    spec = _spec(w)
    _require_convergent(spec)
    if not pseudo_limit_set(spec).contains(beta):
        raise MetricError(f"{beta} is not a pseudo-limit of {spec}")
    return spec.gauge.limit


def scale_spec(spec: SeqSpec, c: FieldElem) -> SeqSpec:
    """The sequence ``c * s_n`` in standard form."""
    if not c:
        raise MetricError("scaling by zero")
    f = spec.field
    vc = c.valuation()
    unit_fix = c / f.monomial(1, vc)
    pert = None
    if spec.perturbation is not None:
        pert = ScaledPerturbation(c, spec.perturbation, spec, vc)
    return SeqSpec(
        spec.kind,
        c * spec.base,
        spec.gauge.shifted(vc),
        spec.coeffs,
        spec.unit * unit_fix,
        pert,
    )


def similitude(c: FieldElem, w: Union[ExtRing, SeqSpec]) -> ExtRing:
    """``Psi_c : V_E -> V_{cE}``, breadth ``delta -> delta + v(c)``."""
    spec = _spec(w)
    _require_convergent(spec)
    return ExtRing(scale_spec(spec, c))


def invert_sequence(spec: SeqSpec) -> SeqSpec:
    """The termwise inverse ``{1/s_n}``, for specs having 0 as a pseudo-limit.

    Divergent becomes convergent and back; the gauge is negated.  The base
    must already be close enough to 0 that ``v(s_n) == gamma_n`` for every n.
    """
    if spec.kind == Kind.STATIONARY:
        raise MetricError("inversion is defined for pseudo-convergent and pseudo-divergent specs")
    f = spec.field
    if not pseudo_limit_set(spec).contains(f.zero):
        raise MetricError("0 is not a pseudo-limit; translate first")
    if spec.gauge.limit in (INF, -INF):
        raise MetricError("breadth must be finite for inversion")
    if spec.base:
        vb = spec.base.valuation()
        if spec.gauge.effective_family == APPROACH:
            ok = vb >= spec.gauge.limit
        else:
            ok = vb > spec.gamma(0)
        if not ok:
            raise MetricError(
                f"v(base) = {fmt_ext(vb)} does not exceed every gamma_n; choose a representative with base 0"
            )
    kind = Kind.CONVERGENT if spec.kind == Kind.DIVERGENT else Kind.DIVERGENT
    for n in range(8):
        if not spec.term(n):
            raise MetricError(f"term {n} is zero")
    return SeqSpec(
        kind,
        f.zero,
        spec.gauge.negated(),
        spec.coeffs.inverted(),
        spec.unit.inv(),
        InversePerturbation(spec),
    )


def value_between(field: Field, lo: ExtRat, hi: ExtRat) -> Fraction:
    """An element of the value group strictly between ``lo`` and ``hi``."""
    lo, hi = ext(lo), ext(hi)
    if not lo < hi:
        raise MetricError(f"empty interval ({fmt_ext(lo)}, {fmt_ext(hi)})")
    if hi == INF:
        return Fraction(math.floor(lo) + 1)
    if isinstance(field, PAdic):
        q = Fraction(math.floor(lo) + 1)
        if q < hi:
            return q
        raise MetricError(f"no integer strictly between {lo} and {hi}")
    scale = 1
    while True:
        q = Fraction(math.floor(lo * scale) + 1, scale)
        if q < hi:
            return q
        scale *= 2


def density_approximant(spec: SeqSpec, n: int) -> SeqSpec:
    """``s_n + Z``: a ring with pseudo-limit in K approximating ``V_E``."""
    _require_convergent(spec)
    return z_construct(spec.term(n), spec.gauge.limit)


def density_index(spec: SeqSpec, gamma) -> int:
    """Least n with ``gamma_n > gamma``; past it ``s_n + Z`` is within ``(gamma, delta)``."""
    gamma = ext(gamma)
    n = spec.gauge.first_index(lambda g: g > gamma)
    if n is None:
        raise MetricError(f"gauge does not pass {gamma}")
    return n


def ball_cover_function(center: FieldElem, vc) -> Factored:
    """``(X - center) / c`` with ``v(c) == vc``."""
    f = center.field
    return Factored.linear(center, f.monomial(1, Fraction(vc)))


def ball_cover_values(field: Field, gamma, delta, depth: int = 8) -> Iterator[Fraction]:
    """Value-group points of ``(gamma, delta)`` with denominators up to ``2**depth``."""
    gamma, delta = ext(gamma), ext(delta)
    if isinstance(field, PAdic):
        depth = 0
    hi = delta if delta != INF else math.floor(gamma) + 4
    for k in range(depth + 1):
        step = Fraction(1, 2 ** k)
        q = Fraction(math.floor(gamma / step) + 1) * step
        while q < hi:
            if k == 0 or q.denominator == 2 ** k:
                yield q
            q += step


def in_metric_ball(center: SeqSpec, rho_exp, other: SeqSpec) -> bool:
    """``d_delta(V_E, V_F) < exp(-rho_exp) - exp(-delta)``."""
    delta = center.gauge.limit
    return dist_delta(center, other) < DistDesc(rho_exp, delta)


def closure_approximant(spec: SeqSpec, delta, n: int) -> SeqSpec:
    """A ring of breadth ``delta`` with pseudo-limit ``s_n``.

    For ``delta`` larger than the breadth of ``spec`` these converge to
    ``V_E`` in the Zariski topology as n grows.
    """
    return z_construct(spec.term(n), delta)


@dataclass(frozen=True)
class Separator:
    """``B((X - s)/c)`` containing ``V_E`` and missing every ring of breadth ``delta``."""

    function: Factored
    center: FieldElem
    vc: Fraction
    index: int


def separation_function(spec: SeqSpec, delta) -> Separator:
    """Open set isolating a ring of breadth ``delta' > delta`` from breadth ``delta``."""
    _require_convergent(spec)
    delta = ext(delta)
    hi = spec.gauge.limit
    if not hi > delta:
        raise MetricError("separation needs breadth larger than delta")
    g = value_between(spec.field, delta, hi)
    n = spec.gauge.first_index(lambda x: x > g)
    if n is None:
        raise MetricError("gauge does not pass the separating value")
    s = spec.term(n)
    return Separator(ball_cover_function(s, g), s, g, n)


def metric_equal(a: ExtRing, b: ExtRing) -> bool:
    return equivalent(a.spec, b.spec)
