"""Extension rings V_E and the limit map w_E.

``V_E`` is the set of rational functions phi with ``phi(s_n)`` in V for all
but finitely many n.  For phi given in factored form with roots in K,

    v(phi(s_n)) = v(c) + sum_i e_i * v(s_n - a_i),

and each ``v(s_n - a_i)`` is eventually either the constant ``v(base - a_i)``
(root outside the pseudo-limit ball) or ``gamma_n`` itself (root inside).
So eventually ``v(phi(s_n)) = A + m * gamma_n`` and every question reduces to
the sign of an affine function of the gauge.  A window oracle evaluates the
actual terms and is kept independent of that reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .sequences import (
    APPROACH,
    DESCEND,
    Ball,
    Kind,
    SeqSpec,
    equivalent,
    pseudo_limit_set,
)
from .valued_field import (
    INF,
    NEG_INF,
    ExtRat,
    Field,
    FieldElem,
    ParseError,
    TokenStream,
    _ElemParser,
    ext,
    fmt_ext,
)


class HeuristicIndecision(RuntimeError):
    """A raw-mode window did not stabilize."""


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Factored:
    """``scale * prod (X - root)^exp`` with roots in K; roots may repeat."""

    scale: FieldElem
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((a, int(e)) for a, e in self.factors if int(e) != 0))

    @property
    def field(self) -> Field:
        return self.scale.field

    @classmethod
    def const(cls, c: FieldElem) -> "Factored":
        return cls(c)

    @classmethod
    def linear(cls, root: FieldElem, c: Optional[FieldElem] = None) -> "Factored":
        """``(X - root) / c``."""
        f = root.field
        scale = f.one if c is None else c.inv()
        return cls(scale, ((root, 1),))

    def __mul__(self, other: "Factored") -> "Factored":
        return Factored(self.scale * other.scale, self.factors + other.factors)

    def inverse(self) -> "Factored":
        return Factored(self.scale.inv(), tuple((a, -e) for a, e in self.factors))

    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def __call__(self, x: FieldElem) -> FieldElem:
        out = self.scale
        for a, e in self.factors:
            out = out * (x - a) ** e
        return out

    def valuation_at(self, x: FieldElem) -> ExtRat:
        """``v(phi(x))`` by additivity; INF/NEG_INF at zeros and poles."""
        if not self.scale:
            return INF
        total = self.scale.valuation()
        pos = neg = False
        for a, e in self.factors:
            d = (x - a).valuation()
            if d == INF:
                pos |= e > 0
                neg |= e < 0
                continue
            total += e * d
        if pos and neg:
            raise ZeroDivisionError("phi has a zero and a pole at the same point")
        return INF if pos else NEG_INF if neg else total

    def compose_reciprocal(self) -> "Factored":
        """``phi(1/X)``: ``(1/X - a) = -a (X - 1/a) / X`` for ``a != 0``."""
        scale = self.scale
        factors = []
        for a, e in self.factors:
            if a:
                scale = scale * (-a) ** e
                factors.append((a.inv(), e))
            factors.append((a.field.zero, -e))
        return Factored(scale, tuple(factors)).collected()

    def collected(self) -> "Factored":
        acc: list = []
        for a, e in self.factors:
            for i, (b, k) in enumerate(acc):
                if b == a:
                    acc[i] = (b, k + e)
                    break
            else:
                acc.append((a, e))
        return Factored(self.scale, tuple((a, e) for a, e in acc if e))

    def to_raw(self) -> "Raw":
        f = self.field
        num = [self.scale]
        den = [f.one]
        for a, e in self.factors:
            lin = [-a, f.one]
            for _ in range(abs(e)):
                if e > 0:
                    num = _poly_mul(num, lin)
                else:
                    den = _poly_mul(den, lin)
        return Raw(tuple(num), tuple(den))

    def __str__(self) -> str:
        parts = [f"({self.scale})"]
        for a, e in self.factors:
            parts.append(f"(X - ({a}))^{e}" if e != 1 else f"(X - ({a}))")
        return " * ".join(parts)


def _poly_mul(a, b):
    out = [a[0].field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


@dataclass(frozen=True)
class Raw:
    """``num(X) / den(X)`` as ascending coefficient lists over K."""

    num: tuple
    den: tuple

    def __post_init__(self):
        if not any(self.den):
            raise ZeroDivisionError("zero denominator polynomial")

    @property
    def field(self) -> Field:
        return self.den[0].field

    @staticmethod
    def _horner(coeffs, x):
        acc = x.field.zero
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x: FieldElem) -> FieldElem:
        return self._horner(self.num, x) / self._horner(self.den, x)

    def valuation_at(self, x: FieldElem) -> ExtRat:
        n = self._horner(self.num, x).valuation()
        d = self._horner(self.den, x).valuation()
        if d == INF:
            return NEG_INF if n != INF else INF
        return n - d if n != INF else INF

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.num) + "] / [" + ", ".join(str(c) for c in self.den) + "]"


RatFunc = Union[Factored, Raw]


def is_exact(phi: RatFunc) -> bool:
    return isinstance(phi, Factored)


def parse_ratfunc(field: Field, text: str) -> RatFunc:
    """Parse ``c * (X - a)^e * ...`` or ``[c0, c1, ...] / [d0, ...]``."""
    ts = TokenStream(text)
    if ts.peek()[1] == "[":
        num = _parse_coeff_list(field, ts)
        den = (field.one,)
        if ts.accept("/"):
            den = _parse_coeff_list(field, ts)
        if not ts.at_end():
            ts.error("trailing input")
        try:
            return Raw(num, den)
        except ZeroDivisionError:
            raise ParseError("zero denominator polynomial", text, len(text))
    scale = field.one
    factors = []
    while True:
        tok = ts.peek()
        if tok[1] == "X":
            ts.next()
            factors.append((field.zero, _parse_exponent(ts)))
        elif tok[1] == "(" and ts.peek(1)[1] == "X":
            ts.next()
            ts.next()
            if ts.peek()[1] == ")":
                root = field.zero
            elif ts.peek()[1] in ("+", "-") and ts.peek(1)[1] == "(":
                neg = ts.next()[1] == "-"
                val = _ElemParser(field, text, ts).element()
                root = val if neg else -val
            else:
                # X + S has root -S
                root = -_ElemParser(field, text, ts).element()
            ts.expect(")")
            factors.append((root, _parse_exponent(ts)))
        elif tok[0] == "end":
            ts.error("expected a factor")
        else:
            scale = scale * _ElemParser(field, text, ts).element()
        if ts.at_end():
            break
        ts.expect("*")
    return Factored(scale, tuple(factors))


def _parse_exponent(ts: TokenStream) -> int:
    if not ts.accept("^"):
        return 1
    paren = ts.accept("(")
    q = ts.rational()
    if paren:
        ts.expect(")")
    if q.denominator != 1:
        ts.error("factor exponents must be integers")
    return int(q)


def _parse_coeff_list(field: Field, ts: TokenStream) -> tuple:
    ts.expect("[")
    out = [_ElemParser(field, ts.text, ts).element()]
    while ts.accept(","):
        out.append(_ElemParser(field, ts.text, ts).element())
    ts.expect("]")
    return tuple(out)


# --------------------------------------------------------------------------
# extension rings
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtRing:
    """The ring ``V_E`` of a sequence spec, with its limit ball cached."""

    spec: SeqSpec
    limits: Ball = field(init=False)
    breadth: ExtRat = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "limits", pseudo_limit_set(self.spec))
        object.__setattr__(self, "breadth", self.spec.gauge.limit)

    @property
    def kind(self) -> Kind:
        return self.spec.kind

    @property
    def field(self) -> Field:
        return self.spec.field

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtRing):
            return NotImplemented
        return equivalent(self.spec, other.spec)

    def __hash__(self):
        return hash((self.kind == Kind.STATIONARY, self.limits))

    def contains(self, phi: RatFunc) -> bool:
        return ve_contains(self.spec, phi)

    def in_fixed_breadth(self, delta) -> bool:
        """Membership in the space of convergent-type rings of breadth ``delta``."""
        return self.kind == Kind.CONVERGENT and self.breadth == ext(delta)

    def has_pseudo_limit(self, beta: FieldElem) -> bool:
        return self.limits.contains(beta)

    def __str__(self) -> str:
        return f"V[{self.kind}, {self.limits}]"


# --------------------------------------------------------------------------
# closed form
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Split:
    """``v(phi(s_n)) = out_part + in_mult * gamma_n`` for large n."""

    out_part: Fraction
    in_mult: int
    out_vals: tuple
    in_vals: tuple


def split(spec: SeqSpec, phi: Factored) -> Split:
    ball = pseudo_limit_set(spec)
    radius = ball.radius
    strict = spec.kind == Kind.DIVERGENT
    A = phi.scale.valuation()
    m = 0
    outs, ins = [], []
    for a, e in phi.factors:
        b = (spec.base - a).valuation()
        inside = b > radius if strict else b >= radius
        if inside:
            m += e
            ins.append(b)
        else:
            A += e * b
            outs.append(b)
    return Split(A, m, tuple(outs), tuple(ins))


def w_e(spec: SeqSpec, phi: RatFunc) -> ExtRat:
    """``lim v(phi(s_n))``; exact for factored phi, heuristic for raw phi."""
    if isinstance(phi, Raw):
        return raw_limit(spec, phi)
    if not phi.scale:
        return INF
    sp = split(spec, phi)
    A, m = sp.out_part, sp.in_mult
    if m == 0:
        return A
    if spec.kind == Kind.STATIONARY:
        return A + m * spec.gamma(0)
    delta = spec.gauge.limit
    if delta == INF:
        return INF if m > 0 else NEG_INF
    return A + m * delta


def ve_contains(spec: SeqSpec, phi: RatFunc) -> bool:
    """Whether ``phi(s_n)`` lies in V for all but finitely many n."""
    if isinstance(phi, Raw):
        return raw_limit(spec, phi) >= 0
    if not phi.scale:
        return True
    sp = split(spec, phi)
    A, m = sp.out_part, sp.in_mult
    if m == 0:
        return A >= 0
    if spec.kind == Kind.STATIONARY:
        return A + m * spec.gamma(0) >= 0
    delta = spec.gauge.limit
    if spec.kind == Kind.CONVERGENT:
        # A + m*gamma_n approaches A + m*delta from below (m > 0) or above (m < 0)
        if delta == INF:
            return m > 0
        return A + m * delta > 0 if m > 0 else A + m * delta >= 0
    return A + m * delta >= 0 if m > 0 else A + m * delta > 0


def omega_contains(spec: SeqSpec, s: FieldElem, gamma) -> bool:
    """``w_E(X - s) <= gamma``."""
    gamma = ext(gamma)
    if gamma == INF:
        return True
    return w_e(spec, Factored(s.field.one, ((s, 1),))) <= gamma


def subbasic_b(ring: ExtRing, phi: RatFunc) -> bool:
    return ve_contains(ring.spec, phi)


# --------------------------------------------------------------------------
# window oracle
# --------------------------------------------------------------------------

def window_values(spec: SeqSpec, phi: RatFunc, start: int, length: int) -> list:
    """Exact ``v(phi(s_n))`` for n in ``[start, start + length)``."""
    return [phi.valuation_at(spec.term(n)) for n in range(start, start + length)]


def window_bound(spec: SeqSpec, phi: Factored, cap: int = 4096) -> int:
    """Index N past which the closed form's eventual regime holds.

    Past N every out-of-ball root is beyond the gauge (or vice versa for
    divergent sequences), tie exceptions of stationary sequences are over, and
    the sign of ``A + m * gamma_n`` has settled.
    """
    if not phi.scale:
        return 0
    sp = split(spec, phi)
    g = spec.gauge
    n0 = 0
    if spec.kind == Kind.CONVERGENT and sp.out_vals:
        top = max(sp.out_vals)
        n0 = g.first_index(lambda x: x > top, cap)
    elif spec.kind == Kind.DIVERGENT:
        finite = [b for b in sp.in_vals if b != INF]
        if finite:
            low = min(finite)
            n0 = g.first_index(lambda x: x < low, cap)
    elif spec.kind == Kind.STATIONARY:
        n0 = _stationary_exceptions(spec, phi, cap)
    if n0 is None:
        raise RuntimeError("gauge did not clear the root valuations within the cap")
    if spec.kind == Kind.STATIONARY or sp.in_mult == 0:
        return n0
    verdict = ve_contains(spec, phi)
    A, m = sp.out_part, sp.in_mult
    for n in range(n0, cap):
        if (A + m * g.value(n) >= 0) == verdict:
            return n
    raise RuntimeError("sign of the eventual valuation did not settle within the cap")


def _stationary_exceptions(spec: SeqSpec, phi: Factored, cap: int) -> int:
    gamma = spec.gamma(0)
    f = spec.field
    last = -1
    for a, _ in phi.factors:
        d = a - spec.base
        if d.valuation() != gamma:
            continue
        r = (d / (spec.unit * f.monomial(1, gamma))).residue()
        for n in range(min(cap, 256)):
            if spec.coeffs(f, n) == r:
                last = max(last, n)
                break
    return last + 1


def window_verdict(spec: SeqSpec, phi: Factored, length: int = 8) -> bool:
    """Membership read off actual terms at the closed-form window bound."""
    start = window_bound(spec, phi)
    return all(v >= 0 for v in window_values(spec, phi, start, length))


def raw_limit(spec: SeqSpec, phi: Raw, window: int = 64, stable: int = 8) -> ExtRat:
    """Stabilized ``v(phi(s_n))`` over the first ``window`` terms (heuristic)."""
    vals = window_values(spec, phi, 0, window)
    tail = vals[-stable:]
    if all(v == tail[0] for v in tail):
        return tail[0]
    raise HeuristicIndecision(
        f"v(phi(s_n)) did not stabilize over the last {stable} of {window} terms: "
        + ", ".join(fmt_ext(v) for v in tail)
    )
