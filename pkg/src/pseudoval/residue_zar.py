"""Valuation rings of k(t) containing k, and the residue-side picture of
the rings induced by sequences around a closed ball.

Points of ``Zar(k(t)|k)`` are the trivial ring ``k(t)`` itself (Whole), the
ring at infinity ``k[1/t]_(1/t)`` (InfPlace) and ``k[t]_(f)`` for a monic
irreducible f (FinPlace).  Here ``k`` is ``F_p`` or ``Q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .extensions import Factored, ve_contains
from .sequences import (
    CoeffStream,
    Kind,
    SeqSpec,
    approach,
    constant,
    descend,
)
from .valued_field import Dyadic, Field, FieldElem, ParseError, TokenStream, _is_prime


class ZarError(ValueError):
    pass


# --------------------------------------------------------------------------
# polynomials over F_p (p prime) or Q (p == 0)
# --------------------------------------------------------------------------

def _mod_p(c, p: int) -> int:
    if isinstance(c, int):
        return c % p
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ZarError(f"{c} is not defined mod {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


@dataclass(frozen=True)
class Poly:
    """Ascending coefficients over ``F_p`` (ints mod p) or ``Q`` (p == 0)."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        if self.p:
            cs = [_mod_p(c, self.p) for c in self.coeffs]
        else:
            cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, p: int, c) -> "Poly":
        return cls(p, (c,))

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls(p, (0, 1))

    @classmethod
    def linear(cls, p: int, root) -> "Poly":
        """``t - root``."""
        return cls(p, (-root, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lead(self):
        return self.coeffs[-1]

    def _inv(self, c):
        if self.p:
            return pow(int(c), -1, self.p)
        return 1 / Fraction(c)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(self.p, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self or not other:
            return Poly(self.p, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(self.p, tuple(out))

    def __pow__(self, k: int) -> "Poly":
        out = Poly(self.p, (1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [0] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv = self._inv(other.lead())
        d = other.degree
        while len(rem) - 1 >= d and any(rem):
            k = len(rem) - 1 - d
            c = rem[-1] * inv
            if self.p:
                c %= self.p
            q[k] = c
            for j, oc in enumerate(other.coeffs):
                rem[k + j] -= c * oc
            if self.p:
                rem = [x % self.p for x in rem]
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(self.p, tuple(q)), Poly(self.p, tuple(rem))

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        inv = self._inv(self.lead())
        return Poly(self.p, tuple(c * inv for c in self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc % self.p if self.p else acc

    def order_at(self, f: "Poly") -> int:
        """Multiplicity of ``f`` as a factor."""
        if not self:
            raise ZarError("order of the zero polynomial")
        k, g = 0, self
        while True:
            q, r = g.divmod(f)
            if r:
                return k
            k, g = k + 1, q

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else "t" if i == 1 else f"t^{i}"
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts)

    def to_doc(self) -> list:
        return [str(c) for c in self.coeffs]

    def literal(self) -> str:
        """Coefficient-list form accepted by ``parse_poly``."""
        return "[" + ", ".join(self.to_doc()) + "]"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def _monic_polys(p: int, deg: int):
    for tail in itertools.product(range(p), repeat=deg):
        yield Poly(p, tail + (1,))


def is_irreducible(f: Poly) -> bool:
    """Trial division by monic polynomials up to half the degree.

    Over Q only degrees up to 3 are decided (rational-root test).
    """
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if f.p:
        for k in range(1, d // 2 + 1):
            for g in _monic_polys(f.p, k):
                if not f % g:
                    return False
        return True
    if d > 3:
        raise ZarError("irreducibility over Q is only decided up to degree 3")
    return not _rational_roots(f)


def _divisors(n: int) -> list:
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0]


def _rational_roots(f: Poly) -> list:
    import math

    den = 1
    for c in f.coeffs:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f.coeffs]
    if ints[0] == 0:
        return [Fraction(0)]
    roots = []
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * a, b)
                if f(r) == 0 and r not in roots:
                    roots.append(r)
    return roots


@lru_cache(maxsize=None)
def monic_irreducibles(p: int, deg: int) -> tuple:
    if not _is_prime(p):
        raise ZarError("enumeration needs a prime p")
    return tuple(f for f in _monic_polys(p, deg) if is_irreducible(f))


# --------------------------------------------------------------------------
# rational functions in t and points of Zar(k(t)|k)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TFunc:
    """``num / den`` in k(t)."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @property
    def p(self) -> int:
        return self.num.p

    @classmethod
    def poly(cls, f: Poly) -> "TFunc":
        return cls(f, Poly(f.p, (1,)))

    def inv(self) -> "TFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return TFunc(self.den, self.num)

    def __mul__(self, other: "TFunc") -> "TFunc":
        return TFunc(self.num * other.num, self.den * other.den)

    def __bool__(self) -> bool:
        return bool(self.num)

    def order_at(self, f: Poly) -> int:
        return self.num.order_at(f) - self.den.order_at(f)

    def order_at_infinity(self) -> int:
        return self.den.degree - self.num.degree

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"

    def to_doc(self) -> dict:
        return {"num": self.num.to_doc(), "den": self.den.to_doc()}

    def literal(self) -> str:
        return f"{self.num.literal()} / {self.den.literal()}"


class ZarPoint:
    def contains(self, psi: TFunc) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Whole(ZarPoint):
    def contains(self, psi: TFunc) -> bool:
        return True

    def __str__(self) -> str:
        return "k(t)"

    def to_doc(self):
        return {"point": "whole"}

    def literal(self) -> str:
        return "whole"


@dataclass(frozen=True)
class InfPlace(ZarPoint):
    def contains(self, psi: TFunc) -> bool:
        return not psi or psi.order_at_infinity() >= 0

    def __str__(self) -> str:
        return "k[1/t]_(1/t)"

    def to_doc(self):
        return {"point": "infinity"}

    def literal(self) -> str:
        return "inf"


@dataclass(frozen=True)
class FinPlace(ZarPoint):
    f: Poly

    def __post_init__(self):
        if self.f.degree < 1 or self.f.lead() != 1:
            raise ZarError(f"{self.f} is not a monic polynomial of positive degree")
        if not is_irreducible(self.f):
            raise ZarError(f"{self.f} is reducible")

    def contains(self, psi: TFunc) -> bool:
        return not psi or psi.order_at(self.f) >= 0

    def __str__(self) -> str:
        return f"k[t]_({self.f})"

    def to_doc(self):
        return {"point": "finite", "f": self.f.to_doc()}

    def literal(self) -> str:
        return self.f.literal()


def zar_contains(point: ZarPoint, psi: TFunc) -> bool:
    return point.contains(psi)


def points_up_to(p: int, degree_bound: int) -> list:
    """Whole, InfPlace and every FinPlace of degree at most ``degree_bound``."""
    pts: list = [Whole(), InfPlace()]
    for d in range(1, degree_bound + 1):
        pts.extend(FinPlace(f) for f in monic_irreducibles(p, d))
    return pts


@dataclass(frozen=True)
class Certificate:
    point: ZarPoint
    function: TFunc
    unique: bool
    checked: int
    degree_bound: int
    others_excluding: tuple = ()


def certificate_function(point: ZarPoint, p: int) -> TFunc:
    """``t`` for the place at infinity, ``1/f`` for ``k[t]_(f)``."""
    if isinstance(point, InfPlace):
        return TFunc.poly(Poly.x(p))
    if isinstance(point, FinPlace):
        return TFunc.poly(point.f).inv()
    raise ZarError("the generic point k(t) is not isolated")


def isolated_certificate(point: ZarPoint, p: int, degree_bound: int = 3,
                         sample: Optional[Sequence[ZarPoint]] = None) -> Certificate:
    """Check that ``point`` is the only one missing its certificate function.

    Over ``F_p`` the check runs over all points up to ``degree_bound``; over Q
    (``p == 0``) a finite ``sample`` is required.
    """
    psi = certificate_function(point, p)
    if p:
        pts = points_up_to(p, degree_bound)
    else:
        if sample is None:
            raise ZarError("over Q a finite sample of points is required")
        pts = [Whole(), InfPlace()] + list(sample)
        if point not in pts:
            pts.append(point)
    missing = [q for q in pts if not q.contains(psi)]
    return Certificate(point, psi, missing == [point], len(pts), degree_bound, tuple(missing))


def generic_point_check(opens: Sequence[TFunc], sample: Sequence[ZarPoint]) -> bool:
    """Whole lies in every finite intersection of subbasic opens."""
    for psi in opens:
        if not any(q.contains(psi) for q in sample):
            raise ZarError(f"B({psi}) is empty on the sample")
    return all(Whole().contains(psi) for psi in opens)


# --------------------------------------------------------------------------
# literals
# --------------------------------------------------------------------------

def parse_poly(p: int, text: str) -> Poly:
    ts = TokenStream(text)
    poly = _poly_list(p, ts)
    if not ts.at_end():
        ts.error("trailing input")
    return poly


def _poly_list(p: int, ts: TokenStream) -> Poly:
    ts.expect("[")
    cs = [ts.rational()]
    while ts.accept(","):
        cs.append(ts.rational())
    ts.expect("]")
    if p:
        out = []
        for c in cs:
            if c.denominator % p == 0:
                raise ParseError(f"{c} is not defined mod {p}", ts.text, ts.peek()[2])
            out.append(c.numerator * pow(c.denominator, -1, p))
        cs = out
    return Poly(p, tuple(cs))


def parse_tfunc(p: int, text: str) -> TFunc:
    """``[c0, c1, ...]`` or ``[..] / [..]``, ascending coefficients."""
    ts = TokenStream(text)
    num = _poly_list(p, ts)
    den = Poly(p, (1,))
    if ts.accept("/"):
        den = _poly_list(p, ts)
    if not ts.at_end():
        ts.error("trailing input")
    if not den:
        raise ParseError("zero denominator", text, len(text))
    return TFunc(num, den)


def parse_point(p: int, text: str) -> ZarPoint:
    text = text.strip()
    if text in ("whole", "k(t)"):
        return Whole()
    if text in ("inf", "infinity"):
        return InfPlace()
    return FinPlace(parse_poly(p, text).monic())


# --------------------------------------------------------------------------
# the rings around a closed ball and their residue images
# --------------------------------------------------------------------------

CONVERGENT_E = "E"
STATIONARY_F = "F"


@dataclass(frozen=True)
class XadDescriptor:
    """One ring attached to the closed ball ``alpha + cV``.

    ``marker`` is ``"E"`` (pseudo-convergent, closed ball), ``"F"``
    (pseudo-stationary on the ball) or a residue representative ``z`` naming
    the pseudo-divergent ring with limits ``alpha - c z + cM``.
    """

    alpha: FieldElem
    c: FieldElem
    marker: Union[str, Fraction, int]

    def __post_init__(self):
        if not isinstance(self.alpha.field, Dyadic):
            raise ZarError("these rings need a field with a non-discrete value group")
        if not self.c:
            raise ZarError("c must be nonzero")
        if self.marker not in (CONVERGENT_E, STATIONARY_F):
            object.__setattr__(self, "marker", self.alpha.field.base_coeff(Fraction(self.marker)))

    @property
    def field(self) -> Dyadic:
        return self.alpha.field

    @property
    def delta(self) -> Fraction:
        return self.c.valuation()


def xad_ring(d: XadDescriptor) -> SeqSpec:
    f = d.field
    delta = d.delta
    if d.marker == CONVERGENT_E:
        return SeqSpec(Kind.CONVERGENT, d.alpha, approach(delta))
    if d.marker == STATIONARY_F:
        unit = d.c / f.monomial(1, delta)
        return SeqSpec(Kind.STATIONARY, d.alpha, constant(delta), CoeffStream("naturals"), unit)
    base = d.alpha - d.c * f.coerce(d.marker)
    return SeqSpec(Kind.DIVERGENT, base, descend(delta))


def xad_map(d: XadDescriptor) -> ZarPoint:
    if d.marker == STATIONARY_F:
        if not d.field.residue_field_infinite:
            raise ZarError("the pseudo-stationary ring needs an infinite residue field")
        return Whole()
    if d.marker == CONVERGENT_E:
        return InfPlace()
    return FinPlace(Poly.linear(d.field.p, d.marker))


def check_distinct_residues(zs: Iterable, p: int) -> None:
    seen = set()
    for z in zs:
        r = Poly(p, (z,)).coeffs if p else Fraction(z)
        if r in seen:
            raise ZarError(f"duplicate residue {r}")
        seen.add(r)


@dataclass(frozen=True)
class SplitTFunc:
    """``kappa * prod (t - r)^e`` with roots in k."""

    kappa: object
    factors: tuple

    def to_tfunc(self, p: int) -> TFunc:
        num = Poly(p, (self.kappa,))
        den = Poly(p, (1,))
        for r, e in self.factors:
            lin = Poly.linear(p, r)
            if e > 0:
                num = num * lin ** e
            else:
                den = den * lin ** (-e)
        return TFunc(num, den)


def transport(psi: SplitTFunc, alpha: FieldElem, c: FieldElem) -> Factored:
    """``phi(X) = psi((alpha - X)/c)``.

    Each ``(t - r)`` becomes ``-(X - (alpha - c r))/c``.
    """
    f = alpha.field
    scale = f.coerce(psi.kappa)
    factors = []
    neg_inv_c = -(c.inv())
    for r, e in psi.factors:
        scale = scale * neg_inv_c ** e
        factors.append((alpha - c * f.coerce(r), e))
    return Factored(scale, tuple(factors))


def transport_agrees(d: XadDescriptor, psi: SplitTFunc) -> bool:
    phi = transport(psi, d.alpha, d.c)
    return ve_contains(xad_ring(d), phi) == zar_contains(xad_map(d), psi.to_tfunc(d.field.p))


def witness_f_not_e(alpha: FieldElem, c: FieldElem) -> Factored:
    """``(X - alpha)/c``: in the stationary ring, not in the convergent one."""
    return Factored.linear(alpha, c)


def witness_f_not_dz(alpha: FieldElem, c: FieldElem, z) -> Factored:
    """``c / (X - alpha + c z)``: in the stationary ring, not in ``V_{D_z}``."""
    f = alpha.field
    return Factored.linear(alpha - c * f.coerce(z), c).inverse()


# --------------------------------------------------------------------------
# separating intersections
# --------------------------------------------------------------------------

def divergent_neighbourhood(alpha: FieldElem, c: FieldElem) -> list:
    """``(X - alpha)/c`` and ``c/(X - beta_r)`` for ``beta_r = alpha - c r``, r in k*.

    Over a finite residue field their intersection meets the divergent rings
    of breadth ``v(c)`` only in the one with limits ``alpha + cM``.
    """
    f = alpha.field
    if f.residue_field_infinite:
        raise ZarError("needs a finite residue field")
    out = [Factored.linear(alpha, c)]
    for r in range(1, f.p):
        beta = alpha - c * f.coerce(r)
        out.append(Factored.linear(beta, c).inverse())
    return out


def in_all(spec: SeqSpec, functions: Sequence[Factored]) -> bool:
    return all(ve_contains(spec, phi) for phi in functions)


def stationary_separator(beta: FieldElem, c: FieldElem) -> Factored:
    """``(X - beta)/c``; with its inverse it isolates the stationary ring at ``(beta, v(c))``."""
    return Factored.linear(beta, c)
