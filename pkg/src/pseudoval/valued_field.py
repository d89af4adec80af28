"""Exact arithmetic in two concrete rank-one valued fields.

``PAdic(p)`` is the field of rationals with the p-adic valuation; its value
group is Z.  ``Dyadic(p)`` is the field of fractions of finite sums

    c_1 t^{q_1} + ... + c_m t^{q_m},   q_i in Z[1/2],

with coefficients in Q (``p == 0``) or in F_p, valued by the least exponent.
Its value group Z[1/2] is dense, so rational targets such as 1/3 lie outside
of it while remaining exactly representable.

Extended rationals (valuations, gauges, breadths) are plain ``Fraction``
values plus the two float sentinels ``INF`` and ``NEG_INF``; ``Fraction``
compares exactly against them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

INF = math.inf
NEG_INF = -math.inf

ExtRat = Union[Fraction, float]


class ParseError(ValueError):
    """Malformed literal; ``pos`` is the 0-based offset into ``text``."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


class ConfigMismatch(TypeError):
    pass


# --------------------------------------------------------------------------
# extended rationals
# --------------------------------------------------------------------------

def ext(x) -> ExtRat:
    """Coerce ``x`` to an extended rational (Fraction, INF or NEG_INF)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise TypeError(f"finite floats are not exact: {x!r}")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity", "oo"):
            return INF
        if s in ("-inf", "-infinity", "-oo"):
            return NEG_INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as an extended rational")


def fmt_ext(x: ExtRat) -> str:
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return str(Fraction(x))


def is_dyadic(q: ExtRat) -> bool:
    if not isinstance(q, Fraction):
        return False
    d = q.denominator
    return d & (d - 1) == 0


def padic_order(n: int, p: int) -> int:
    if n == 0:
        return INF
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# --------------------------------------------------------------------------
# field configurations
# --------------------------------------------------------------------------

class Field:
    """Common interface of the two field configurations."""

    name: str

    def __call__(self, x) -> "FieldElem":
        return self.coerce(x)

    @property
    def zero(self) -> "FieldElem":
        return self.coerce(0)

    @property
    def one(self) -> "FieldElem":
        return self.coerce(1)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PAdic(Field):
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return f"padic-{self.p}"

    @property
    def residue_characteristic(self) -> int:
        return self.p

    @property
    def residue_field_infinite(self) -> bool:
        return False

    def in_value_group(self, q: ExtRat) -> bool:
        return isinstance(q, Fraction) and q.denominator == 1

    def base_coeff(self, c) -> Fraction:
        c = Fraction(c)
        if c == 0 or padic_order(c.numerator, self.p) or padic_order(c.denominator, self.p):
            raise ValueError(f"{c} is not a {self.p}-adic unit")
        return c

    def coerce(self, x) -> "PAdicElem":
        if isinstance(x, PAdicElem):
            if x.field != self:
                raise ConfigMismatch(f"{x.field} element used in {self}")
            return x
        if isinstance(x, FieldElem):
            raise ConfigMismatch(f"{x.field} element used in {self}")
        if isinstance(x, str):
            return self.parse(x)
        return PAdicElem(self, Fraction(x))

    def monomial(self, c, q) -> "PAdicElem":
        """``c * p**q``."""
        q = ext(q)
        if not self.in_value_group(q):
            raise ValueError(f"exponent {q} not in the value group Z")
        return PAdicElem(self, Fraction(c) * Fraction(self.p) ** int(q))

    def parse(self, text: str) -> "PAdicElem":
        return _ElemParser(self, text).parse_all()

    def from_doc(self, doc) -> "PAdicElem":
        if isinstance(doc, (str, int)):
            return self.coerce(doc)
        return self.coerce(doc["value"])


@dataclass(frozen=True)
class Dyadic(Field):
    """Dyadic-exponent sums over Q (``p == 0``) or F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return "dyadic-q" if self.p == 0 else f"dyadic-f{self.p}"

    @property
    def residue_characteristic(self) -> int:
        return self.p

    @property
    def residue_field_infinite(self) -> bool:
        return self.p == 0

    def in_value_group(self, q: ExtRat) -> bool:
        return is_dyadic(q)

    # coefficient arithmetic in k = Q or F_p
    def base_coeff(self, c):
        if self.p:
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{c} has no image in F_{self.p}")
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        return Fraction(c)

    def _cadd(self, a, b):
        return int(a + b) % self.p if self.p else a + b

    def _cmul(self, a, b):
        return int(a * b) % self.p if self.p else a * b

    def _cinv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero coefficient")
        return pow(int(a), -1, self.p) if self.p else 1 / a

    def _cneg(self, a):
        return (-a) % self.p if self.p else -a

    def coerce(self, x) -> "DyadicElem":
        if isinstance(x, DyadicElem):
            if x.field != self:
                raise ConfigMismatch(f"{x.field} element used in {self}")
            return x
        if isinstance(x, FieldElem):
            raise ConfigMismatch(f"{x.field} element used in {self}")
        if isinstance(x, str):
            return self.parse(x)
        c = self.base_coeff(x)
        return DyadicElem._make(self, ((c, Fraction(0)),) if c else (), _ONE_TERMS)

    def monomial(self, c, q) -> "DyadicElem":
        """``c * t**q`` for a base-field coefficient ``c``."""
        q = ext(q)
        if not is_dyadic(q):
            raise ValueError(f"exponent {q} not in the value group Z[1/2]")
        c = self.base_coeff(c)
        return DyadicElem._make(self, ((c, q),) if c else (), _ONE_TERMS)

    def from_terms(self, num: Iterable, den: Iterable = ((1, 0),)) -> "DyadicElem":
        return DyadicElem._make(self, self._canon(num), self._canon(den))

    def _canon(self, terms) -> tuple:
        acc: dict = {}
        for c, q in terms:
            q = Fraction(q)
            if not is_dyadic(q):
                raise ValueError(f"exponent {q} not in Z[1/2]")
            acc[q] = self._cadd(acc.get(q, 0), self.base_coeff(c))
        return tuple((c, q) for q, c in sorted(acc.items()) if c)

    def parse(self, text: str) -> "DyadicElem":
        return _ElemParser(self, text).parse_all()

    def from_doc(self, doc) -> "DyadicElem":
        if isinstance(doc, (str, int)):
            return self.coerce(doc)
        num = [(Fraction(str(d["c"])), Fraction(str(d["q"]))) for d in doc["numeratorTerms"]]
        den = [(Fraction(str(d["c"])), Fraction(str(d["q"]))) for d in doc.get("denominatorTerms", [{"c": 1, "q": 0}])]
        return self.from_terms(num, den)


_ONE_TERMS = ((Fraction(1), Fraction(0)),)


def field_from_name(name: str) -> Field:
    """``padic-5``, ``dyadic-q`` or ``dyadic-f5``."""
    s = name.strip().lower()
    m = re.fullmatch(r"padic-(\d+)", s)
    if m:
        return PAdic(int(m.group(1)))
    if s in ("dyadic-q", "dyadic"):
        return Dyadic(0)
    m = re.fullmatch(r"dyadic-f(?:p)?(\d+)", s)
    if m:
        return Dyadic(int(m.group(1)))
    raise ValueError(f"unknown field {name!r}; expected padic-<p>, dyadic-q or dyadic-f<p>")


# --------------------------------------------------------------------------
# elements
# --------------------------------------------------------------------------

class FieldElem:
    __slots__ = ("field",)

    def _other(self, other):
        try:
            return self.field.coerce(other)
        except ConfigMismatch:
            raise
        except (TypeError, ValueError):
            return NotImplemented

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inv()
        result = self.field.one
        for _ in range(abs(k)):
            result = result * base
        return result

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"{self.field.name}({self})"

    def ultrametric_ok(self, other) -> bool:
        v = self.valuation()
        w = other.valuation()
        s = (self + other).valuation()
        return s >= min(v, w) and (v == w or s == min(v, w))


class PAdicElem(FieldElem):
    __slots__ = ("value",)

    def __init__(self, field: PAdic, value: Fraction):
        self.field = field
        self.value = value

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return PAdicElem(self.field, self.value + other.value)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return PAdicElem(self.field, self.value * other.value)

    def __neg__(self):
        return PAdicElem(self.field, -self.value)

    def inv(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return PAdicElem(self.field, 1 / self.value)

    def __eq__(self, other):
        if isinstance(other, PAdicElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def valuation(self) -> ExtRat:
        if self.value == 0:
            return INF
        p = self.field.p
        return Fraction(padic_order(self.value.numerator, p) - padic_order(self.value.denominator, p))

    def residue(self) -> int:
        """Image in F_p; requires non-negative valuation."""
        v = self.valuation()
        if v < 0:
            raise ValueError(f"residue of {self} undefined: negative valuation {v}")
        if v > 0:
            return 0
        p = self.field.p
        return self.value.numerator * pow(self.value.denominator, -1, p) % p

    def leading_unit(self) -> "PAdicElem":
        """``x / p**v(x)``."""
        return PAdicElem(self.field, self.value / Fraction(self.field.p) ** int(self.valuation()))

    def canonical(self) -> "PAdicElem":
        return PAdicElem(self.field, Fraction(self.value))

    def __str__(self) -> str:
        return str(self.value)

    def to_doc(self):
        return {"config": self.field.name, "value": str(self.value)}


def _fmt_coeff(c) -> str:
    return str(c)


def _fmt_terms(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for c, q in terms:
        parts.append(_fmt_coeff(c) if q == 0 else f"{_fmt_coeff(c)}*t^({q})")
    return " + ".join(parts)


class DyadicElem(FieldElem):
    """``num / den`` kept unevaluated; ``den`` is normalized to lead with ``1*t^0``."""

    __slots__ = ("num", "den")

    def __init__(self, field: Dyadic, num: tuple, den: tuple):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def _make(cls, field: Dyadic, num: tuple, den: tuple) -> "DyadicElem":
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(field, (), _ONE_TERMS)
        lc, le = den[0]
        if lc == 1 and le == 0:
            return cls(field, num, den)
        if len(den) == 1:
            ilc = field._cinv(lc)
            return cls(field, tuple((field._cmul(c, ilc), q - le) for c, q in num), _ONE_TERMS)
        ilc = field._cinv(lc)
        num = tuple((field._cmul(c, ilc), q - le) for c, q in num)
        den = tuple((field._cmul(c, ilc), q - le) for c, q in den)
        return cls(field, num, den)

    def _padd(self, a, b):
        f = self.field
        acc = dict((q, c) for c, q in a)
        for c, q in b:
            acc[q] = f._cadd(acc.get(q, 0), c)
        return tuple((c, q) for q, c in sorted(acc.items()) if c)

    def _pmul(self, a, b):
        if a is _ONE_TERMS or a == _ONE_TERMS:
            return b
        if b is _ONE_TERMS or b == _ONE_TERMS:
            return a
        f = self.field
        acc: dict = {}
        for c1, q1 in a:
            for c2, q2 in b:
                q = q1 + q2
                acc[q] = f._cadd(acc.get(q, 0), f._cmul(c1, c2))
        return tuple((c, q) for q, c in sorted(acc.items()) if c)

    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_polynomial(self) -> bool:
        return self.den == _ONE_TERMS

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return DyadicElem._make(self.field, self._padd(self.num, other.num), self.den)
        num = self._padd(self._pmul(self.num, other.den), self._pmul(other.num, self.den))
        return DyadicElem._make(self.field, num, self._pmul(self.den, other.den))

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return DyadicElem(self.field, (), _ONE_TERMS)
        return DyadicElem._make(self.field, self._pmul(self.num, other.num), self._pmul(self.den, other.den))

    def __neg__(self):
        f = self.field
        return DyadicElem(f, tuple((f._cneg(c), q) for c, q in self.num), self.den)

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return DyadicElem._make(self.field, self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self.field.coerce(other)
        if not isinstance(other, DyadicElem):
            return NotImplemented
        if self.field != other.field:
            return False
        if self.den == other.den:
            return self.num == other.num
        return self._pmul(self.num, other.den) == self._pmul(other.num, self.den)

    def __hash__(self):
        # valuation and leading coefficient are invariants of the element
        if not self.num:
            return hash((self.field, None))
        return hash((self.field, self.num[0]))

    def valuation(self) -> ExtRat:
        if not self.num:
            return INF
        return self.num[0][1] - self.den[0][1]

    def leading_coefficient(self):
        return self.num[0][0] if self.num else 0

    def residue(self):
        """Coefficient of t^0 of the expansion; requires non-negative valuation."""
        v = self.valuation()
        if v < 0:
            raise ValueError(f"residue of {self} undefined: negative valuation {v}")
        if v > 0:
            return self.field.base_coeff(0)
        return self.field._cmul(self.num[0][0], self.field._cinv(self.den[0][0]))

    def leading_unit(self) -> "DyadicElem":
        """``x / t**v(x)``."""
        v = self.valuation()
        return DyadicElem._make(self.field, tuple((c, q - v) for c, q in self.num), self.den)

    def canonical(self) -> "DyadicElem":
        f = self.field
        return DyadicElem._make(f, f._canon(self.num), f._canon(self.den))

    def __str__(self) -> str:
        if self.is_polynomial:
            return _fmt_terms(self.num)
        return f"({_fmt_terms(self.num)})/({_fmt_terms(self.den)})"

    def to_doc(self):
        return {
            "config": self.field.name,
            "numeratorTerms": [{"c": str(c), "q": str(q)} for c, q in self.num],
            "denominatorTerms": [{"c": str(c), "q": str(q)} for c, q in self.den],
        }


def valuation(x: FieldElem) -> ExtRat:
    return x.valuation()


def residue(x: FieldElem):
    return x.residue()


def elem_from_doc(doc, field: Field | None = None) -> FieldElem:
    if field is None:
        field = field_from_name(doc["config"])
    return field.from_doc(doc)


# --------------------------------------------------------------------------
# literal parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<op>[-+*/^(),\[\]])|(?P<name>[tX]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split a literal into (kind, value, position) tokens."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", text, i)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        i = m.end()
    out.append(("end", "", n))
    return out


class TokenStream:
    def __init__(self, text: str, tokens=None):
        self.text = text
        self.toks = tokens if tokens is not None else tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value and self.peek()[0] != "end":
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        tok = self.peek()
        if tok[1] != value or tok[0] == "end":
            self.error(f"expected {value!r}")
        return self.next()

    def error(self, message: str):
        tok = self.peek()
        found = tok[1] if tok[0] != "end" else "end of input"
        raise ParseError(f"{message}, found {found!r}", self.text, tok[2])

    def rational(self) -> Fraction:
        sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
        tok = self.peek()
        if tok[0] != "num":
            self.error("expected a number")
        self.next()
        num = int(tok[1])
        den = 1
        if self.peek()[1] == "/" and self.peek(1)[0] == "num":
            self.next()
            dtok = self.next()
            den = int(dtok[1])
            if den == 0:
                raise ParseError("zero denominator", self.text, dtok[2])
        return sign * Fraction(num, den)

    def at_end(self) -> bool:
        return self.peek()[0] == "end"


class _ElemParser:
    """Recursive-descent parser for field-element literals.

    Dyadic grammar: ``sum | (sum)/(sum)`` where ``sum`` joins terms
    ``[sign] rat [* t^(q)] | [sign] t[^(q)]`` with ``+``/``-``.
    """

    def __init__(self, field: Field, text: str, stream: TokenStream | None = None):
        self.field = field
        self.ts = stream or TokenStream(text)

    def parse_all(self) -> FieldElem:
        x = self.element()
        if not self.ts.at_end():
            self.ts.error("trailing input")
        return x

    def _build(self, num, den=None) -> FieldElem:
        if isinstance(self.field, PAdic):
            total = sum((Fraction(c) for c, _ in num), Fraction(0))
            if den is not None:
                d = sum((Fraction(c) for c, _ in den), Fraction(0))
                if d == 0:
                    raise ParseError("zero denominator", self.ts.text, self.ts.peek()[2])
                total /= d
            return PAdicElem(self.field, total)
        if den is None:
            return self.field.from_terms(num)
        if not self.field._canon(den):
            raise ParseError("zero denominator", self.ts.text, self.ts.peek()[2])
        return self.field.from_terms(num, den)

    def element(self) -> FieldElem:
        ts = self.ts
        if ts.peek()[1] == "(" and ts.peek(1)[1] != "X":
            ts.next()
            num = self.sum()
            ts.expect(")")
            if ts.accept("/"):
                ts.expect("(")
                den = self.sum()
                ts.expect(")")
                return self._build(num, den)
            return self._build(num)
        return self._build(self.sum())

    def sum(self) -> list:
        terms = [self.term()]
        while self.ts.peek()[1] in ("+", "-") and self.ts.peek()[0] == "op" and self._term_follows():
            terms.append(self.term())
        return terms

    def _term_follows(self) -> bool:
        k = 1
        if self.ts.peek(k)[1] in ("+", "-"):
            k += 1
        nxt = self.ts.peek(k)
        return nxt[0] == "num" or nxt[1] == "t"

    def term(self):
        ts = self.ts
        sign = 1
        while ts.peek()[1] in ("+", "-") and ts.peek()[0] == "op":
            if ts.next()[1] == "-":
                sign = -sign
        if ts.peek()[1] == "t":
            return (sign, self.mono())
        c = ts.rational()
        if ts.peek()[1] == "*" and ts.peek(1)[1] == "t":
            ts.next()
            return (sign * c, self.mono())
        return (sign * c, Fraction(0))

    def mono(self) -> Fraction:
        ts = self.ts
        if isinstance(self.field, PAdic):
            ts.error("p-adic literals are plain rationals")
        ts.expect("t")
        if not ts.accept("^"):
            return Fraction(1)
        if ts.accept("("):
            q = ts.rational()
            ts.expect(")")
        else:
            q = ts.rational()
        if not is_dyadic(q):
            pos = ts.peek()[2]
            raise ParseError(f"exponent {q} must have a power-of-two denominator", ts.text, pos)
        return q


def parse_elem(field: Field, text: str) -> FieldElem:
    return field.parse(text)
