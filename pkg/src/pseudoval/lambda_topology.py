"""Upper-limit topologies on (a, b] refined by a finite set Lambda.

The space carries the ultrametric

    d(x, y) = max{ r(lam) : lam in [min(x,y), max(x,y)) and lam in Lambda }

with ``r(lam_i) = 1/i`` for a fixed enumeration of Lambda.  With a finite
Lambda two distinct points may sit at distance 0 (no lam between them);
:func:`is_gap` reports such pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .valued_field import INF, NEG_INF, ExtRat, ext, fmt_ext


class LambdaError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSpace:
    """``(a, b]`` with ``lam`` a tuple of ``(value, index)`` pairs."""

    a: ExtRat
    b: ExtRat
    lam: tuple

    def __post_init__(self):
        a, b = ext(self.a), ext(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        pairs = tuple((Fraction(v), int(i)) for v, i in self.lam)
        object.__setattr__(self, "lam", pairs)
        if not a < b:
            raise LambdaError(f"need a < b, got ({fmt_ext(a)}, {fmt_ext(b)}]")
        idx = sorted(i for _, i in pairs)
        if idx != list(range(1, len(pairs) + 1)):
            raise LambdaError("enumeration indices must be exactly 1..|Lambda|")
        vals = [v for v, _ in pairs]
        if len(set(vals)) != len(vals):
            raise LambdaError("Lambda values must be distinct")
        for v in vals:
            if not (a < v <= b):
                raise LambdaError(f"{v} is outside ({fmt_ext(a)}, {fmt_ext(b)}]")

    @classmethod
    def from_values(cls, a, b, values: Iterable) -> "LambdaSpace":
        """Enumerate ``values`` in the order given."""
        return cls(a, b, tuple((Fraction(v), i + 1) for i, v in enumerate(values)))

    @classmethod
    def from_doc(cls, doc: dict) -> "LambdaSpace":
        lam = []
        for i, item in enumerate(doc["lambda"]):
            if isinstance(item, dict):
                lam.append((Fraction(str(item["value"])), int(item.get("index", i + 1))))
            else:
                lam.append((Fraction(str(item)), i + 1))
        return cls(ext(str(doc.get("a", "-inf"))), ext(str(doc.get("b", "inf"))), tuple(lam))

    def to_doc(self) -> dict:
        return {
            "a": fmt_ext(self.a),
            "b": fmt_ext(self.b),
            "lambda": [{"value": str(v), "index": i} for v, i in self.lam],
        }

    def r(self, value) -> Fraction:
        for v, i in self.lam:
            if v == value:
                return Fraction(1, i)
        raise LambdaError(f"{value} is not in Lambda")

    def contains(self, x) -> bool:
        return self.a < x <= self.b

    def check(self, x):
        if not self.contains(x):
            raise LambdaError(f"{x} is outside ({fmt_ext(self.a)}, {fmt_ext(self.b)}]")

    def extended(self, values: Iterable) -> "LambdaSpace":
        """Append new elements with the next enumeration indices."""
        n = len(self.lam)
        extra = tuple((Fraction(v), n + k + 1) for k, v in enumerate(values))
        return LambdaSpace(self.a, self.b, self.lam + extra)


def lambda_dist(space: LambdaSpace, x, y) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    space.check(x)
    space.check(y)
    if x == y:
        return Fraction(0)
    lo, hi = min(x, y), max(x, y)
    return max((Fraction(1, i) for v, i in space.lam if lo <= v < hi), default=Fraction(0))


def is_gap(space: LambdaSpace, x, y) -> bool:
    """Distinct points at distance 0: no element of Lambda separates them."""
    return Fraction(x) != Fraction(y) and lambda_dist(space, x, y) == 0


@dataclass(frozen=True)
class Interval:
    """Half-open ``(lo, hi]``."""

    lo: ExtRat
    hi: ExtRat

    def contains(self, x) -> bool:
        return self.lo < x <= self.hi

    def to_doc(self) -> dict:
        return {"y": fmt_ext(self.lo), "z": fmt_ext(self.hi)}

    def __str__(self) -> str:
        return f"({fmt_ext(self.lo)}, {fmt_ext(self.hi)}]"


def ball_to_interval(space: LambdaSpace, x, rho) -> Interval:
    """The open ball ``{y : d(x, y) < rho}`` as an interval ``(y, z]``.

    ``y`` is the largest lam below x with ``r(lam) >= rho`` and ``z`` the
    smallest such lam at or above x; a lam equal to x bounds the ball on the
    right, since ``d(x, y) >= r(x)`` for every ``y > x``.
    """
    x, rho = Fraction(x), Fraction(rho)
    space.check(x)
    if rho <= 0:
        raise LambdaError("radius must be positive")
    heavy = [v for v, i in space.lam if Fraction(1, i) >= rho]
    lo = max((v for v in heavy if v < x), default=space.a)
    hi = min((v for v in heavy if v >= x), default=space.b)
    return Interval(lo, hi)


def ball_brute(space: LambdaSpace, x, rho, grid: Sequence) -> list:
    """Grid points within distance ``< rho`` of ``x``."""
    return [y for y in grid if lambda_dist(space, x, y) < rho]


def default_grid(space: LambdaSpace, size: int = 50) -> list:
    """``size`` points of ``(a, b]`` including every element of Lambda."""
    lo = space.a if space.a != NEG_INF else min([v for v, _ in space.lam] + [Fraction(0)]) - 1
    hi = space.b if space.b != INF else max([v for v, _ in space.lam] + [Fraction(0)]) + 1
    pts = {v for v, _ in space.lam}
    k = max(size - len(pts), 1)
    step = (Fraction(hi) - Fraction(lo)) / k
    for j in range(1, k + 1):
        if len(pts) >= size:
            break
        pts.add(Fraction(lo) + j * step)
    return sorted(pts)


def cover_witness(space: LambdaSpace, gammas: Sequence, chosen: Iterable[int]) -> Fraction:
    """A point of ``(a, b]`` outside the chosen members of the cover.

    The cover is ``F_1 = (gamma_1, b]`` and ``F_{k+1} = (gamma_{k+1}, gamma_k]``
    for a strictly decreasing ``gammas`` (indices are 1-based).
    """
    gammas = [Fraction(g) for g in gammas]
    if not gammas:
        raise LambdaError("need at least one gamma")
    if any(not x > y for x, y in zip(gammas, gammas[1:])):
        raise LambdaError("gammas must be strictly decreasing")
    if not gammas[0] < space.b:
        raise LambdaError("gamma_1 must be below b")
    if not all(space.a < g for g in gammas):
        raise LambdaError("gammas must lie in (a, b)")
    chosen = sorted(set(chosen))
    if chosen and (chosen[0] < 1 or chosen[-1] > len(gammas)):
        raise LambdaError(f"chosen indices must lie in 1..{len(gammas)}")
    if not chosen:
        return gammas[0]
    m = chosen[-1]
    if m < len(gammas):
        return gammas[m]
    # past the listed gammas: any point of (a, gamma_m] works
    last = gammas[-1]
    return (space.a + last) / 2 if space.a != NEG_INF else last - 1


def cover_member(gammas: Sequence, k: int, b) -> Interval:
    gammas = [Fraction(g) for g in gammas]
    hi = ext(b) if k == 1 else gammas[k - 2]
    return Interval(gammas[k - 1], hi)


def interval_is_ball(space: LambdaSpace, iv: Interval) -> bool:
    """Both endpoints lie in ``Lambda`` plus the ends of the space."""
    ends = {v for v, _ in space.lam} | {space.a, space.b}
    return iv.lo in ends and iv.hi in ends
