"""Symbolic pseudo-monotone sequences in standard form.

A sequence is stored as a generator rather than a list of terms:

    s_n = base + unit * c_n * t^{gamma_n} + perturbation(n, gamma_n)

with ``v(unit) == 0``, ``c_n`` a nonzero base-field coefficient, ``gamma_n``
taken from a :class:`GaugeGen` and ``v(perturbation(n, gamma_n)) > gamma_n``.
(For p-adic fields ``t^q`` means ``p^q``.)  Because ``v(s_n - base) ==
gamma_n`` exactly, every "for all but finitely many n" question about the
sequence has a closed-form answer.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .valued_field import (
    INF,
    Dyadic,
    ExtRat,
    Field,
    FieldElem,
    PAdic,
    ext,
    field_from_name,
    fmt_ext,
)


class SpecError(ValueError):
    """A sequence descriptor violates its own invariants."""


class Kind(str, enum.Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    STATIONARY = "stationary"

    def __str__(self) -> str:
        return self.value


class Boundary(str, enum.Enum):
    CLOSED = "closed"
    OPEN = "open"

    def __str__(self) -> str:
        return self.value


# --------------------------------------------------------------------------
# gauge generators
# --------------------------------------------------------------------------

APPROACH = "approach"
DESCEND = "descend"
CONSTANT = "constant"

BINARY = "binary-truncation"
DYADIC_STEP = "dyadic-step"
EXPLICIT = "explicit"


@lru_cache(maxsize=None)
def _truncations(target: Fraction, below: bool) -> list:
    # grown in place by _truncation
    return []


def _truncation(target: Fraction, below: bool, n: int) -> Fraction:
    """n-th distinct dyadic truncation of ``target`` strictly below (above) it."""
    seen = _truncations(target, below)
    level = len(seen) and seen[-1][1] + 1
    while len(seen) <= n:
        scale = 1 << level
        if below:
            val = Fraction(math.ceil(target * scale) - 1, scale)
        else:
            val = Fraction(math.floor(target * scale) + 1, scale)
        if not seen or val != seen[-1][0]:
            seen.append((val, level))
        level += 1
    return seen[n][0]


@dataclass(frozen=True)
class GaugeGen:
    """Rule ``n -> gamma_n`` with a declared limit ``target``.

    ``family`` is ``approach`` (strictly increasing to ``target``, which may
    be INF), ``descend`` (strictly decreasing to a finite ``target``) or
    ``constant``.  The base rule is transformed by ``gamma -> sign*gamma +
    shift``; similitudes shift and inversion negates.
    """

    family: str
    target: ExtRat
    rule: str = DYADIC_STEP
    prefix: tuple = ()
    sign: int = 1
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "target", ext(self.target))
        object.__setattr__(self, "shift", Fraction(self.shift))
        object.__setattr__(self, "prefix", tuple(Fraction(q) for q in self.prefix))
        if self.family not in (APPROACH, DESCEND, CONSTANT):
            raise SpecError(f"unknown gauge family {self.family!r}")
        if self.rule not in (BINARY, DYADIC_STEP, EXPLICIT):
            raise SpecError(f"unknown gauge rule {self.rule!r}")
        if self.family == DESCEND and self.target == INF:
            raise SpecError("a descending gauge needs a finite target")
        if self.family == CONSTANT and self.target == INF:
            raise SpecError("a constant gauge needs a finite value")
        if self.rule == EXPLICIT and not self.prefix:
            raise SpecError("explicit rule needs a nonempty prefix")

    @property
    def effective_family(self) -> str:
        if self.sign == 1 or self.family == CONSTANT:
            return self.family
        return DESCEND if self.family == APPROACH else APPROACH

    @property
    def limit(self) -> ExtRat:
        """The declared limit after transformation."""
        if self.target == INF:
            return INF if self.sign == 1 else -INF
        return self.sign * self.target + self.shift

    def _base(self, n: int) -> Fraction:
        if self.family == CONSTANT:
            return self.target
        if self.rule == EXPLICIT:
            if n < len(self.prefix):
                return self.prefix[n]
            return self._continuation(n - len(self.prefix))
        if self.target == INF:
            return Fraction(n)
        if self.rule == DYADIC_STEP:
            if self.family == APPROACH:
                return self.target - Fraction(1, 2 ** (n + 1))
            return self.target + Fraction(1, 2 ** n)
        return _truncation(self.target, self.family == APPROACH, n)

    def _continuation(self, k: int) -> Fraction:
        last = self.prefix[-1]
        if self.target == INF:
            return math.floor(last) + 1 + k
        below = self.family == APPROACH
        i = 0
        # skip truncations not beyond the last listed value
        while True:
            val = _truncation(self.target, below, i)
            if (val > last) if below else (val < last):
                break
            i += 1
        return _truncation(self.target, below, i + k)

    def value(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("gauge index must be non-negative")
        return self.sign * self._base(n) + self.shift

    def values(self, count: int) -> list:
        return [self.value(n) for n in range(count)]

    def check_prefix(self, field: Field, count: int = 32) -> None:
        """Verify monotonicity, target consistency and value-group membership."""
        vals = self.values(count)
        lim = self.limit
        fam = self.effective_family
        for n, g in enumerate(vals):
            if not field.in_value_group(g):
                raise SpecError(f"gauge value gamma_{n} = {g} is not in the value group of {field}")
            if fam == APPROACH and not g < lim:
                raise SpecError(f"gauge value gamma_{n} = {g} does not stay below target {fmt_ext(lim)}")
            if fam == DESCEND and not g > lim:
                raise SpecError(f"gauge value gamma_{n} = {g} does not stay above target {fmt_ext(lim)}")
        for n in range(count - 1):
            a, b = vals[n], vals[n + 1]
            if fam == APPROACH and not a < b:
                raise SpecError(f"gauge not strictly increasing at n={n}: {a} >= {b}")
            if fam == DESCEND and not a > b:
                raise SpecError(f"gauge not strictly decreasing at n={n}: {a} <= {b}")
            if fam == CONSTANT and a != b:
                raise SpecError("constant gauge changed value")

    def first_index(self, pred: Callable[[Fraction], bool], cap: int = 4096) -> Optional[int]:
        for n in range(cap):
            if pred(self.value(n)):
                return n
        return None

    def shifted(self, delta: Fraction) -> "GaugeGen":
        return replace(self, shift=self.shift + delta)

    def negated(self) -> "GaugeGen":
        return replace(self, sign=-self.sign, shift=-self.shift)

    def to_doc(self) -> dict:
        doc = {"family": self.family, "target": fmt_ext(self.target), "rule": self.rule}
        if self.prefix:
            doc["prefix"] = [str(q) for q in self.prefix]
        if self.sign != 1:
            doc["sign"] = self.sign
        if self.shift:
            doc["shift"] = str(self.shift)
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "GaugeGen":
        rule = doc.get("rule", DYADIC_STEP)
        prefix = ()
        if isinstance(rule, list):
            prefix, rule = tuple(rule), EXPLICIT
        prefix = tuple(doc.get("prefix", prefix))
        return cls(
            family=doc["family"],
            target=ext(str(doc["target"])),
            rule=rule,
            prefix=tuple(Fraction(str(q)) for q in prefix),
            sign=int(doc.get("sign", 1)),
            shift=Fraction(str(doc.get("shift", 0))),
        )


def approach(target, rule: str = DYADIC_STEP, prefix=()) -> GaugeGen:
    return GaugeGen(APPROACH, ext(target), rule, tuple(prefix))


def descend(target, rule: str = DYADIC_STEP, prefix=()) -> GaugeGen:
    return GaugeGen(DESCEND, ext(target), rule, tuple(prefix))


def constant(gamma) -> GaugeGen:
    return GaugeGen(CONSTANT, ext(gamma))


def canonical_approach(field: Field, target) -> GaugeGen:
    """Dyadic steps when the target is in the value group, truncations otherwise."""
    target = ext(target)
    if target == INF or field.in_value_group(target):
        return approach(target, DYADIC_STEP)
    return approach(target, BINARY)


def canonical_descend(field: Field, target) -> GaugeGen:
    target = ext(target)
    if field.in_value_group(target):
        return descend(target, DYADIC_STEP)
    return descend(target, BINARY)


# --------------------------------------------------------------------------
# coefficient streams and perturbations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffStream:
    """``n -> c_n``: ``ones``, ``naturals`` (c_n = n+1) or a cycled list."""

    kind: str = "ones"
    values: tuple = ()
    power: int = 1

    def raw(self, n: int):
        if self.kind == "ones":
            return 1
        if self.kind == "naturals":
            return n + 1
        if self.kind == "list":
            return self.values[n % len(self.values)]
        raise SpecError(f"unknown coefficient stream {self.kind!r}")

    def __call__(self, field: Field, n: int):
        c = field.base_coeff(Fraction(self.raw(n)))
        if self.power == -1:
            if isinstance(field, Dyadic):
                return field._cinv(c)
            return 1 / c
        return c

    def inverted(self) -> "CoeffStream":
        return replace(self, power=-self.power)

    def to_doc(self):
        if self.kind == "list":
            doc = [str(c) for c in self.values]
        else:
            doc = self.kind
        if self.power != 1:
            return {"stream": doc, "power": self.power}
        return doc

    @classmethod
    def from_doc(cls, doc) -> "CoeffStream":
        power = 1
        if isinstance(doc, dict):
            power = int(doc.get("power", 1))
            doc = doc["stream"]
        if doc is None:
            return cls()
        if isinstance(doc, str):
            return cls(doc, (), power)
        return cls("list", tuple(Fraction(str(c)) for c in doc), power)


@dataclass(frozen=True)
class MonomialPerturbation:
    """``coeff * t^{gamma_n + gap}`` with ``gap > 0`` in the value group."""

    coeff: Fraction
    gap: Fraction

    def __call__(self, spec: "SeqSpec", n: int, gamma: Fraction) -> FieldElem:
        return spec.field.monomial(self.coeff, gamma + self.gap)

    def to_doc(self):
        return {"coeff": str(self.coeff), "gap": str(self.gap)}


@dataclass(frozen=True)
class ScaledPerturbation:
    """``factor * inner(n, gamma - shift)``, produced by similitudes."""

    factor: FieldElem
    inner: Callable
    original: "SeqSpec"
    shift: Fraction

    def __call__(self, spec: "SeqSpec", n: int, gamma: Fraction) -> FieldElem:
        return self.factor * self.inner(self.original, n, gamma - self.shift)

    def to_doc(self):
        return None


@dataclass(frozen=True)
class BasePerturbation:
    """A constant offset absorbed from a translated base, plus an inner term."""

    offset: FieldElem
    inner: Optional[Callable]
    original: "SeqSpec"

    def __call__(self, spec: "SeqSpec", n: int, gamma: Fraction) -> FieldElem:
        extra = self.inner(self.original, n, gamma) if self.inner else spec.field.zero
        return self.offset + extra

    def to_doc(self):
        return None


@dataclass(frozen=True)
class InversePerturbation:
    """Exact remainder of ``1/s_n`` after its principal monomial."""

    original: "SeqSpec"

    def __call__(self, spec: "SeqSpec", n: int, gamma: Fraction) -> FieldElem:
        return self.original.term(n).inv() - spec.principal(n)

    def to_doc(self):
        return None


# --------------------------------------------------------------------------
# sequence specs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SeqSpec:
    kind: Kind
    base: FieldElem
    gauge: GaugeGen
    coeffs: CoeffStream = field(default_factory=CoeffStream)
    unit: Optional[FieldElem] = None
    perturbation: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        f = self.base.field
        if self.unit is None:
            object.__setattr__(self, "unit", f.one)
        elif self.unit.valuation() != 0:
            raise SpecError("the unit factor must have valuation 0")
        fam = self.gauge.effective_family
        expected = {Kind.CONVERGENT: APPROACH, Kind.DIVERGENT: DESCEND, Kind.STATIONARY: CONSTANT}[self.kind]
        if fam != expected:
            raise SpecError(f"{self.kind} sequences need a {expected} gauge, got {fam}")
        if self.kind == Kind.STATIONARY and not f.residue_field_infinite:
            raise SpecError(f"pseudo-stationary sequences need an infinite residue field; {f} has a finite one")
        if self.kind == Kind.STATIONARY and self.coeffs.kind != "naturals":
            # a cycled list repeats residues, so terms would not stay pairwise apart
            raise SpecError("pseudo-stationary sequences need pairwise distinct coefficients (use naturals)")
        self.gauge.check_prefix(f)

    @property
    def field(self) -> Field:
        return self.base.field

    def gamma(self, n: int) -> Fraction:
        return self.gauge.value(n)

    def principal(self, n: int) -> FieldElem:
        """``unit * c_n * t^{gamma_n}``."""
        f = self.field
        return self.unit * f.monomial(self.coeffs(f, n), self.gamma(n))

    def term(self, n: int) -> FieldElem:
        return _term(self, n)

    def terms(self, count: int) -> list:
        return [self.term(n) for n in range(count)]

    def with_perturbation(self, pert: Callable) -> "SeqSpec":
        return replace(self, perturbation=pert)

    def to_doc(self) -> dict:
        doc = {
            "field": self.field.name,
            "kind": self.kind.value,
            "base": str(self.base),
            "gauge": self.gauge.to_doc(),
            "coeffs": self.coeffs.to_doc(),
        }
        if self.unit != self.field.one:
            doc["unit"] = str(self.unit)
        if self.perturbation is not None:
            pdoc = self.perturbation.to_doc() if hasattr(self.perturbation, "to_doc") else None
            doc["perturbation"] = pdoc if pdoc is not None else "opaque"
        return doc

    @classmethod
    def from_doc(cls, doc: dict, field: Field | None = None) -> "SeqSpec":
        if field is None:
            field = field_from_name(doc["field"])
        kind = Kind(doc["kind"])
        base = field.coerce(str(doc.get("base", "0")))
        gdoc = doc["gauge"]
        if isinstance(gdoc, dict) and gdoc.get("family") is None:
            gdoc = dict(gdoc, family={Kind.CONVERGENT: APPROACH, Kind.DIVERGENT: DESCEND,
                                      Kind.STATIONARY: CONSTANT}[kind])
        gauge = GaugeGen.from_doc(gdoc)
        default = "naturals" if kind == Kind.STATIONARY else "ones"
        coeffs = CoeffStream.from_doc(doc.get("coeffs", default))
        unit = field.coerce(str(doc["unit"])) if "unit" in doc else None
        pert = None
        if doc.get("perturbation"):
            p = doc["perturbation"]
            pert = MonomialPerturbation(Fraction(str(p.get("coeff", 1))), Fraction(str(p["gap"])))
            if pert.gap <= 0 or not field.in_value_group(pert.gap):
                raise SpecError("perturbation gap must be a positive value-group element")
        return cls(kind, base, gauge, coeffs, unit, pert)

    def __str__(self) -> str:
        return f"{self.kind}(base={self.base}, breadth={fmt_ext(self.gauge.limit)})"


@lru_cache(maxsize=65536)
def _term(spec: SeqSpec, n: int) -> FieldElem:
    s = spec.base + spec.principal(n)
    if spec.perturbation is not None:
        g = spec.gamma(n)
        p = spec.perturbation(spec, n, g)
        if p.valuation() <= g:
            raise SpecError(f"perturbation at n={n} has valuation {fmt_ext(p.valuation())} <= gamma_n = {g}")
        s = s + p
    return s


def convergent(base: FieldElem, gauge: GaugeGen, **kw) -> SeqSpec:
    return SeqSpec(Kind.CONVERGENT, base, gauge, **kw)


def divergent(base: FieldElem, gauge: GaugeGen, **kw) -> SeqSpec:
    return SeqSpec(Kind.DIVERGENT, base, gauge, **kw)


def stationary(base: FieldElem, gamma, **kw) -> SeqSpec:
    kw.setdefault("coeffs", CoeffStream("naturals"))
    return SeqSpec(Kind.STATIONARY, base, constant(gamma), **kw)


# --------------------------------------------------------------------------
# balls
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ball:
    """``{x : v(x - center) >= radius}`` (closed) or ``> radius`` (open)."""

    center: FieldElem
    radius: ExtRat
    boundary: Boundary = Boundary.CLOSED

    def contains(self, x: FieldElem) -> bool:
        v = (x - self.center).valuation()
        if self.boundary == Boundary.CLOSED:
            return v >= self.radius
        return v > self.radius

    def normalized(self) -> tuple:
        """(boundary, radius) with equal sets mapped to equal pairs."""
        f = self.center.field
        r = self.radius
        if r == INF:
            return (self.boundary, r)
        if isinstance(f, PAdic):
            # value group Z: every ball is closed at an integer radius
            if self.boundary == Boundary.CLOSED:
                return (Boundary.CLOSED, Fraction(math.ceil(r)))
            return (Boundary.CLOSED, Fraction(math.floor(r) + 1))
        if not f.in_value_group(r):
            return (Boundary.CLOSED, r)
        return (self.boundary, r)

    def is_empty(self) -> bool:
        return self.radius == INF and self.boundary == Boundary.OPEN

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ball):
            return NotImplemented
        if self.center.field != other.center.field:
            return False
        if self.is_empty() or other.is_empty():
            return self.is_empty() and other.is_empty()
        if self.normalized() != other.normalized():
            return False
        return self.contains(other.center)

    def __hash__(self):
        return hash(self.normalized())

    def __str__(self) -> str:
        op = ">=" if self.boundary == Boundary.CLOSED else ">"
        return f"{{x : v(x - ({self.center})) {op} {fmt_ext(self.radius)}}}"

    def to_doc(self) -> dict:
        return {"center": str(self.center), "radiusExp": fmt_ext(self.radius), "boundary": self.boundary.value}


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def classify(samples: Sequence[FieldElem], min_len: int = 4) -> Optional[Kind]:
    """Pseudo-monotone type of a finite sample, or None."""
    if len(samples) < min_len:
        raise ValueError(f"need at least {min_len} samples, got {len(samples)}")
    diffs = [(samples[i + 1] - samples[i]).valuation() for i in range(len(samples) - 1)]
    if any(d == INF for d in diffs):
        raise ValueError("samples must be pairwise distinct")
    if all(a < b for a, b in zip(diffs, diffs[1:])):
        return Kind.CONVERGENT
    if all(a > b for a, b in zip(diffs, diffs[1:])):
        return Kind.DIVERGENT
    first = diffs[0]
    n = len(samples)
    for i in range(n):
        for j in range(i + 1, n):
            v = (samples[j] - samples[i]).valuation()
            if v == INF:
                raise ValueError("samples must be pairwise distinct")
            if v != first:
                return None
    return Kind.STATIONARY


def gauge(spec: SeqSpec, n: int) -> Fraction:
    """``v(s_{n+1} - s_n)`` from materialized terms, checked against the rule."""
    if n < 0:
        raise ValueError("index must be non-negative")
    d = (spec.term(n + 1) - spec.term(n)).valuation()
    expected = {
        Kind.CONVERGENT: lambda: spec.gamma(n),
        Kind.DIVERGENT: lambda: spec.gamma(n + 1),
        Kind.STATIONARY: lambda: spec.gamma(0),
    }[spec.kind]()
    if d != expected:
        raise SpecError(f"gauge at n={n} is {fmt_ext(d)}, rule says {expected}")
    return d


def breadth(spec: SeqSpec, prefix: int = 32) -> ExtRat:
    spec.gauge.check_prefix(spec.field, prefix)
    return spec.gauge.limit


def breadth_ideal_contains(spec: SeqSpec, b: FieldElem) -> bool:
    """``v(b) > v(s_{n+1} - s_n)`` for every n, decided exactly."""
    v = b.valuation()
    if spec.kind == Kind.CONVERGENT:
        delta = spec.gauge.limit
        if delta == INF:
            return v == INF
        # the gauge increases to delta without attaining it
        return v >= delta
    if spec.kind == Kind.DIVERGENT:
        # the gauge is largest at n = 0: v(s_0 - s_1) = gamma_1
        return v > spec.gamma(1)
    return v > spec.gamma(0)


def pseudo_limit_set(spec: SeqSpec) -> Ball:
    if spec.kind == Kind.CONVERGENT:
        return Ball(spec.base, spec.gauge.limit, Boundary.CLOSED)
    if spec.kind == Kind.DIVERGENT:
        return Ball(spec.base, spec.gauge.limit, Boundary.OPEN)
    return Ball(spec.base, spec.gamma(0), Boundary.CLOSED)


def is_pseudo_limit(spec: SeqSpec, x: FieldElem, window: int = 16) -> bool:
    """Window check of the pseudo-limit property on the first ``window`` terms.

    Convergent: ``v(x - s_n) == gamma_n`` for every n in the window.
    Divergent: ``v(x - s_n) == gamma_n`` on a tail of at least 4 terms.
    Stationary: ``v(x - s_n) == gamma`` for all but at most one n.
    """
    vals = [(x - spec.term(n)).valuation() for n in range(window)]
    gammas = [spec.gamma(n) for n in range(window)]
    if spec.kind == Kind.CONVERGENT:
        return vals == gammas
    if spec.kind == Kind.DIVERGENT:
        tail = 0
        for v, g in zip(reversed(vals), reversed(gammas)):
            if v != g:
                break
            tail += 1
        return tail >= 4
    misses = sum(1 for v in vals if v != gammas[0])
    return misses <= 1 and all(v >= gammas[0] for v in vals)


def equivalent(e: SeqSpec, f: SeqSpec) -> bool:
    """Whether ``V_E == V_F``: equal pseudo-limit sets and matching stationarity."""
    if e.field != f.field:
        return False
    if (e.kind == Kind.STATIONARY) != (f.kind == Kind.STATIONARY):
        return False
    return pseudo_limit_set(e) == pseudo_limit_set(f)


def translate(spec: SeqSpec, a: FieldElem) -> SeqSpec:
    """The sequence ``s_n + a``."""
    return replace(spec, base=spec.base + a)


def rebase_at(spec: SeqSpec, new_base: FieldElem) -> SeqSpec:
    """Same terms, written around ``new_base``; the offset goes into the perturbation.

    Needs ``v(base - new_base) > gamma_n`` for every n.
    """
    offset = spec.base - new_base
    if not offset:
        return spec
    v = offset.valuation()
    fam = spec.gauge.effective_family
    if fam == APPROACH:
        ok = v >= spec.gauge.limit
    elif fam == DESCEND:
        ok = v > spec.gamma(0)
    else:
        ok = v > spec.gamma(0)
    if not ok:
        raise SpecError(f"cannot rebase: v(base - new_base) = {fmt_ext(v)} does not exceed the gauge")
    return replace(spec, base=new_base, perturbation=BasePerturbation(offset, spec.perturbation, spec))
