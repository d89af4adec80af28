"""Seeded property batteries: each returns a :class:`CheckResult`.

Batteries are grouped by the module whose claims they exercise so the CLI
can run ``suite --module metrics`` and the test suite can time each one.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import generators as gen
from .extensions import (
    ExtRing,
    Factored,
    omega_contains,
    ve_contains,
    window_verdict,
)
from .lambda_topology import (
    LambdaSpace,
    ball_to_interval,
    cover_member,
    cover_witness,
    default_grid,
    interval_is_ball,
    lambda_dist,
)
from .metrics import (
    DistDesc,
    density_approximant,
    density_index,
    dist_delta,
    dist_pseudo_limit_formula,
    invert_sequence,
    raw_dist,
    scale_spec,
    sigma_beta,
    similitude,
    z_construct,
)
from .residue_zar import (
    FinPlace,
    InfPlace,
    Poly,
    SplitTFunc,
    TFunc,
    Whole,
    XadDescriptor,
    ZarError,
    certificate_function,
    divergent_neighbourhood,
    generic_point_check,
    in_all,
    isolated_certificate,
    points_up_to,
    stationary_separator,
    transport,
    witness_f_not_dz,
    witness_f_not_e,
    xad_map,
    xad_ring,
)
from .sequences import Kind, SeqSpec, descend, divergent, equivalent, pseudo_limit_set, stationary
from .valued_field import INF, Dyadic, PAdic, field_from_name, fmt_ext


@dataclass
class CheckResult:
    name: str
    module: str
    passed: bool
    count: int
    limit: float
    elapsed: float = 0.0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def within_time(self) -> bool:
        return self.elapsed < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.count} checks in {self.elapsed:.2f}s (limit {self.limit:g}s)"

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "module": self.module,
            "passed": self.ok,
            "count": self.count,
            "elapsedLimitSeconds": self.limit,
            "failures": self.failures[:10],
            "notes": self.notes,
        }


class _Tally:
    def __init__(self):
        self.count = 0
        self.failures: list = []

    def check(self, cond: bool, msg: Callable[[], str] | str):
        self.count += 1
        if not cond:
            self.failures.append(msg() if callable(msg) else msg)


DELTAS = (Fraction(1), Fraction(1, 3), INF)


def _deltas_for(field):
    # a discrete value group only carries Cauchy (breadth inf) sequences
    return (INF,) if isinstance(field, PAdic) else DELTAS


def _pool_base(rng, field, anchor, delta):
    """Bases clustered around ``anchor`` so that equal balls occur often."""
    roll = rng.random()
    if roll < 0.25:
        return anchor
    if roll < 0.45 and delta != INF:
        return anchor + gen.elem_at_least(rng, field, delta)
    v = gen.rand_exponent(rng, field, -1, 3)
    return anchor + gen.elem_with_valuation(rng, field, v)


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------

def check_ultrametric(seed: int, triples: int = 200) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    notes = []
    for name in gen.FIELD_NAMES:
        f = field_from_name(name)
        ds = _deltas_for(f)
        if len(ds) < len(DELTAS):
            notes.append(f"{name}: breadths {', '.join(fmt_ext(d) for d in ds)} only (discrete value group)")
        for delta in ds:
            for _ in range(triples):
                anchor = gen.rand_elem(rng, f)
                a, b, c = (gen.rand_convergent(rng, f, delta, _pool_base(rng, f, anchor, delta)) for _ in range(3))
                dab, dba = dist_delta(a, b), dist_delta(b, a)
                dbc, dac = dist_delta(b, c), dist_delta(a, c)
                t.check(dab == dba, lambda: f"asymmetric: {a} {b}")
                t.check(dab.is_zero == equivalent(a, b), lambda: f"zero/equivalence mismatch: {a} {b}")
                t.check(dist_delta(a, a).is_zero, lambda: f"d(a,a) != 0: {a}")
                t.check(dac <= max(dab, dbc), lambda: f"triangle fails: {a} {b} {c}")
    return CheckResult("ultrametric", "metrics", not t.failures, t.count, 10.0, failures=t.failures, notes=notes)


def _pair(rng, f, delta):
    """Two specs of breadth ``delta`` and whether they differ by a constant.

    Termwise differences of equivalent but unrelated specs need not settle,
    so the raw window oracle is only run on nonzero or constant-gap pairs.
    """
    e = gen.rand_convergent(rng, f, delta)
    if rng.random() < 0.3:
        shift = gen.elem_at_least(rng, f, delta) if delta != INF else f.zero
        return e, SeqSpec(e.kind, e.base + shift, e.gauge, e.coeffs, e.unit, e.perturbation), True
    return e, gen.rand_convergent(rng, f, delta, _pool_base(rng, f, e.base, delta)), False


def _rand_field_delta(rng):
    f = field_from_name(rng.choice(gen.FIELD_NAMES))
    return f, rng.choice(_deltas_for(f))


def check_formula(seed: int, pairs: int = 300) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(pairs):
        f, delta = _rand_field_delta(rng)
        e, g, shifted = _pair(rng, f, delta)
        d = dist_delta(e, g)
        formula = dist_pseudo_limit_formula(e.base, g.base, delta)
        t.check(d == formula, lambda: f"dist {d} != formula {formula} for {e}, {g}")
        if not d.is_zero or shifted:
            raw = raw_dist(e, g)
            t.check(raw == formula, lambda: f"raw window {raw} != formula {formula} for {e}, {g}")
    return CheckResult("formula agreement", "metrics", not t.failures, t.count, 5.0, failures=t.failures)


def check_well_defined(seed: int, pairs: int = 100) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(pairs):
        f, delta = _rand_field_delta(rng)
        e = gen.rand_convergent(rng, f, delta)
        g = gen.rand_convergent(rng, f, delta, _pool_base(rng, f, e.base, delta))
        e2 = gen.equivalent_variant(rng, e)
        t.check(equivalent(e, e2), lambda: f"variant not equivalent: {e} {e2}")
        d1, d2 = dist_delta(e, g), dist_delta(e2, g)
        t.check(d1 == d2, lambda: f"{d1} != {d2} for {e} ~ {e2} vs {g}")
        if not d1.is_zero:
            r1, r2 = raw_dist(e, g), raw_dist(e2, g)
            t.check(r1 == r2 == d1, lambda: f"raw limits {r1}, {r2} differ from {d1}")
    return CheckResult("well-definedness", "metrics", not t.failures, t.count, 5.0, failures=t.failures)


def check_similitude(seed: int, count: int = 100) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(count):
        f, delta = _rand_field_delta(rng)
        e, g, _ = _pair(rng, f, delta)
        h = gen.rand_convergent(rng, f, delta, _pool_base(rng, f, e.base, delta))
        c = gen.rand_elem(rng, f, -2, 2)
        while not c:
            c = gen.rand_elem(rng, f, -2, 2)
        vc = c.valuation()
        ce, cg, ch = similitude(c, e), similitude(c, g), similitude(c, h)
        d, dc = dist_delta(e, g), dist_delta(ce, cg)
        t.check(ce.breadth == delta + vc if delta != INF else ce.breadth == INF,
                lambda: f"breadth {fmt_ext(ce.breadth)} after scaling by v={vc}")
        t.check(dc == d.scaled(vc), lambda: f"descriptor {dc} != shifted {d.scaled(vc)}")
        t.check(all(ce.spec.term(n) == c * e.term(n) for n in range(6)), lambda: f"terms of cE differ for {e}")
        if not d.is_zero:
            t.check(raw_dist(ce.spec, cg.spec) == dc, lambda: f"raw window disagrees on scaled pair {e}, {g}")
        # order isomorphism on the triple
        d2, d2c = dist_delta(e, h), dist_delta(ce, ch)
        t.check((d < d2) == (dc < d2c) and (d == d2) == (dc == d2c), lambda: "order not preserved")
        back = similitude(c.inv(), ce)
        t.check(back == ExtRing(e), lambda: f"inverse similitude does not return {e}")
        t.check(all(back.spec.term(n) == e.term(n) for n in range(6)), lambda: "inverse similitude changes terms")
    return CheckResult("similitude", "metrics", not t.failures, t.count, 5.0, failures=t.failures)


def check_density(seed: int, count: int = 50) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(count):
        f, delta = _rand_field_delta(rng)
        e = gen.rand_convergent(rng, f, delta)
        top = e.gamma(0) + 6 if delta == INF else delta
        grid = {gen.rand_exponent(rng, f, e.gamma(0), top) for _ in range(3)}
        grid.update(e.gamma(k) for k in range(1, 6))
        grid = sorted(g for g in grid if g < top)[-5:]
        for gamma in grid:
            n = density_index(e, gamma)
            approx = density_approximant(e, n)
            d = dist_delta(e, approx)
            t.check(d < DistDesc(gamma, delta), lambda: f"approximant {n} at {d} not within {gamma} of {e}")
            t.check(d == DistDesc(e.gamma(n), delta), lambda: f"approximant distance {d} != gamma_{n}")
        zb = z_construct(e.base, delta)
        t.check(sigma_beta(zb, e.base) == delta and pseudo_limit_set(zb).contains(e.base),
                lambda: f"Z-construction round trip fails at {e.base}, {fmt_ext(delta)}")
    return CheckResult("completion density", "metrics", not t.failures, t.count, 5.0, failures=t.failures)


# --------------------------------------------------------------------------
# extensions
# --------------------------------------------------------------------------

def _random_spec(rng, kind):
    if kind == Kind.CONVERGENT:
        f, delta = _rand_field_delta(rng)
        return gen.rand_convergent(rng, f, delta)
    if kind == Kind.DIVERGENT:
        f = field_from_name(rng.choice(("dyadic-q", "dyadic-f5")))
        return gen.rand_divergent(rng, f, rng.choice([Fraction(1), Fraction(1, 3), Fraction(0), Fraction(-3, 2)]))
    return gen.rand_stationary(rng, Dyadic(0), rng.choice([Fraction(1), Fraction(1, 2), Fraction(-1)]))


def check_membership(seed: int, count: int = 300) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    kinds = [Kind.CONVERGENT, Kind.DIVERGENT, Kind.STATIONARY]
    ties = 0
    for i in range(count):
        spec = _random_spec(rng, kinds[i % 3])
        phi = gen.rand_factored(rng, spec)
        ties += any((a - spec.term(k)).valuation() > spec.gamma(k) for a, _ in phi.factors for k in range(8))
        closed, window = ve_contains(spec, phi), window_verdict(spec, phi)
        t.check(closed == window, lambda: f"closed form {closed} vs window {window}: {spec}, {phi}")
    res = CheckResult("membership oracle", "extensions", not t.failures, t.count, 20.0, failures=t.failures)
    res.notes.append(f"{ties} cases with a root cancelling the leading term of some s_n")
    return res


def check_sigma_omega(seed: int, count: int = 100) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(count):
        f = field_from_name(rng.choice(gen.FIELD_NAMES))
        beta = gen.rand_elem(rng, f)
        delta = rng.choice(_deltas_for(f) + ((Fraction(rng.randint(-4, 8), 4),) if isinstance(f, Dyadic) else ()))
        e = gen.rand_convergent(rng, f, delta, gen.same_ball_base(rng, z_construct(beta, delta)))
        if delta == INF:
            gamma = gen.rand_exponent(rng, f, -2, 4)
        elif rng.random() < 0.25 and f.in_value_group(delta):
            gamma = delta
        else:
            gamma = gen.rand_exponent(rng, f, Fraction(delta) - 2, Fraction(delta) + 2)
        s = beta + gen.elem_at_least(rng, f, gamma, strict=True)
        lhs = sigma_beta(e, beta) <= gamma
        rhs = omega_contains(e, s, gamma)
        t.check(lhs == rhs, lambda: f"breadth<=gamma is {lhs} but omega says {rhs}: {e}, s={s}, gamma={gamma}")
    return CheckResult("sigma/omega preimage", "extensions", not t.failures, t.count, 5.0, failures=t.failures)


# --------------------------------------------------------------------------
# lambda topology
# --------------------------------------------------------------------------

def _random_space(rng):
    size = rng.randint(3, 12)
    a = rng.choice([Fraction(0), Fraction(-1), -INF])
    b = rng.choice([Fraction(1), Fraction(2), INF])
    lo = Fraction(a) if a != -INF else Fraction(-3)
    hi = Fraction(b) if b != INF else Fraction(4)
    vals = set()
    while len(vals) < size:
        q = lo + (hi - lo) * Fraction(rng.randint(1, 96), 96)
        vals.add(q)
    vals = list(vals)
    rng.shuffle(vals)
    return LambdaSpace.from_values(a, b, vals)


def check_lambda_metric(seed: int, spaces: int = 20, grid_size: int = 50) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    gaps = 0
    for _ in range(spaces):
        space = _random_space(rng)
        grid = default_grid(space, grid_size)
        n = len(grid)
        dm = [[lambda_dist(space, x, y) for y in grid] for x in grid]
        lam = [v for v, _ in space.lam]
        for i in range(n):
            for j in range(n):
                t.check(dm[i][j] == dm[j][i], "asymmetric lambda distance")
                if i != j and dm[i][j] == 0:
                    # only a pair with no element of Lambda in between may sit at 0
                    lo, hi = min(grid[i], grid[j]), max(grid[i], grid[j])
                    t.check(not any(lo <= v < hi for v in lam), "zero distance across an element of Lambda")
                    gaps += 1
        # distances are 0 or 1/i; integer ranks preserve their order exactly
        rank = {Fraction(0): 0}
        rank.update({Fraction(1, i): len(lam) + 1 - i for i in range(1, len(lam) + 1)})
        im = [[rank[d] for d in row] for row in dm]
        for i in range(n):
            row_i = im[i]
            for j in range(n):
                dij = row_i[j]
                bad = any(a > dij and a > b for a, b in zip(row_i, im[j]))
                t.check(not bad, lambda: f"strong triangle fails on {space.to_doc()}")
        radii = set()
        for v, i in space.lam:
            r = Fraction(1, i)
            radii.update({r, r + Fraction(1, 1000), r - Fraction(1, 1000)})
        radii.add(Fraction(2))
        radii = sorted(r for r in radii if r > 0)
        for xi, x in enumerate(grid):
            for rho in radii:
                iv = ball_to_interval(space, x, rho)
                brute = [y for yi, y in enumerate(grid) if dm[xi][yi] < rho]
                pred = [y for y in grid if iv.contains(y)]
                t.check(brute == pred, lambda: f"ball ({x}, {rho}) is {iv} but grid says otherwise on {space.to_doc()}")
                t.check(interval_is_ball(space, iv), "ball endpoints outside Lambda and the ends")
    res = CheckResult("lambda metric", "lambda_topology", not t.failures, t.count, 10.0, failures=t.failures)
    res.notes.append(f"{gaps} ordered grid pairs at distance 0 (degenerate: Lambda-gap)")
    return res


def check_cover_witness(seed: int, max_index: int = 10) -> CheckResult:
    t = _Tally()
    space = LambdaSpace.from_values(0, 1, [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)])
    gammas = [Fraction(1, 2 ** k) for k in range(1, 2 * max_index + 2)]
    members = [cover_member(gammas, k, space.b) for k in range(1, len(gammas) + 1)]
    for size in range(0, max_index + 1):
        for chosen in itertools.combinations(range(1, max_index + 1), size):
            x = cover_witness(space, gammas, chosen)
            t.check(space.contains(x), lambda: f"witness {x} outside the space")
            t.check(not any(members[k - 1].contains(x) for k in chosen), lambda: f"witness {x} covered by {chosen}")
            t.check(any(m.contains(x) for m in members), lambda: f"witness {x} not covered by the full family")
    return CheckResult("no finite subcover", "lambda_topology", not t.failures, t.count, 1.0, failures=t.failures)


# --------------------------------------------------------------------------
# residue side
# --------------------------------------------------------------------------

def _rand_tfunc(rng, p, max_deg=3):
    while True:
        num = Poly(p, tuple(rng.randrange(p) for _ in range(rng.randint(1, max_deg + 1))))
        den = Poly(p, tuple(rng.randrange(p) for _ in range(rng.randint(1, max_deg + 1))))
        if num and den:
            return TFunc(num, den)


def _rand_split(rng, p, zs=()):
    pool = list(range(p)) if p else [Fraction(k) for k in range(-3, 5)]
    pool += list(zs)
    kappa = rng.randint(1, p - 1) if p else Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2]))
    facs = {}
    for _ in range(rng.randint(0, 4)):
        r = rng.choice(pool)
        facs[r] = facs.get(r, 0) + rng.choice([1, -1, 2, -2])
    return SplitTFunc(kappa, tuple((r, e) for r, e in facs.items() if e))


def check_residue(seed: int) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    p, bound = 5, 3
    pts = points_up_to(p, bound)
    for q in pts:
        if isinstance(q, Whole):
            try:
                certificate_function(q, p)
                t.check(False, "the generic point produced a certificate")
            except ZarError:
                t.check(True, "")
            continue
        cert = isolated_certificate(q, p, bound)
        t.check(cert.unique, lambda: f"certificate for {q} not unique: {cert.others_excluding}")
        t.check(Whole().contains(cert.function), "generic point misses a certificate function")
    sample = [q for q in pts if not isinstance(q, Whole)]
    for _ in range(10):
        opens = []
        while len(opens) < rng.randint(1, 6):
            psi = _rand_tfunc(rng, p)
            if any(q.contains(psi) for q in sample):
                opens.append(psi)
        t.check(generic_point_check(opens, sample), "generic point check failed")
    # rings around a closed ball and their images
    for fname in ("dyadic-q", "dyadic-f5"):
        f = field_from_name(fname)
        alpha = gen.rand_elem(rng, f)
        c = gen.elem_with_valuation(rng, f, gen.rand_exponent(rng, f, -1, 2))
        zs = [3, 0, 1] if f.p else [Fraction(3), Fraction(0), Fraction(-1, 2)]
        markers = ["E"] + zs + (["F"] if f.residue_field_infinite else [])
        descs = {m: XadDescriptor(alpha, c, m) for m in markers}
        battery = [_rand_split(rng, f.p, zs) for _ in range(20)]
        for m, d in descs.items():
            ring = xad_ring(d)
            point = xad_map(d)
            for psi in battery:
                phi = transport(psi, alpha, c)
                lhs = ve_contains(ring, phi)
                t.check(lhs == point.contains(psi.to_tfunc(f.p)),
                        lambda: f"{fname} {m}: transport disagreement on {psi}")
                t.check(lhs == window_verdict(ring, phi), lambda: f"{fname} {m}: window disagrees on {psi}")
                if "F" in descs and m != "F" and lhs:
                    t.check(ve_contains(xad_ring(descs["F"]), phi), lambda: f"V_{m} not inside V_F on {psi}")
        if "F" in descs:
            ringF, ringE = xad_ring(descs["F"]), xad_ring(descs["E"])
            w = witness_f_not_e(alpha, c)
            t.check(ve_contains(ringF, w) and not ve_contains(ringE, w), "V_E = V_F on the witness")
            for z in zs:
                w = witness_f_not_dz(alpha, c, z)
                t.check(ve_contains(ringF, w) and not ve_contains(xad_ring(descs[z]), w), f"V_D{z} = V_F on the witness")
    res = CheckResult("residue certificates", "residue_zar", not t.failures, t.count, 10.0, failures=t.failures)
    res.notes.append(f"uniqueness checked over {len(pts)} points of degree <= {bound} over F_{p}")
    return res


def check_partitions(seed: int) -> CheckResult:
    rng = random.Random(seed)
    t = _Tally()
    # breadth outside the value group: divergent and convergent rings coincide
    for _ in range(50):
        f = field_from_name(rng.choice(("dyadic-q", "dyadic-f5")))
        delta = rng.choice([Fraction(1, 3), Fraction(2, 3), Fraction(-5, 3)])
        beta = gen.rand_elem(rng, f)
        e = gen.rand_convergent(rng, f, delta, beta)
        d = gen.rand_divergent(rng, f, delta, gen.same_ball_base(rng, e))
        t.check(equivalent(e, d), "convergent and divergent not identified")
        for phi in gen.function_battery(rng, e, 10):
            a, b = window_verdict(e, phi), window_verdict(d, phi)
            t.check(a == b == ve_contains(e, phi) == ve_contains(d, phi), lambda: f"disagreement on {phi}: {e} vs {d}")
    # finite residue field: a finite intersection isolates each divergent ring
    f5 = Dyadic(5)
    for _ in range(10):
        alpha = gen.rand_elem(rng, f5)
        delta = gen.rand_exponent(rng, f5, -1, 2)
        c = gen.elem_with_valuation(rng, f5, delta)
        target = gen.rand_divergent(rng, f5, delta, gen.same_ball_base(rng, divergent(alpha, descend(delta))))
        nbhd = divergent_neighbourhood(alpha, c)
        t.check(in_all(target, nbhd), "target outside its own neighbourhood")
        t.check(all(window_verdict(target, phi) for phi in nbhd), "window oracle puts target outside")
        alts = 0
        while alts < 50:
            if rng.random() < 0.5:
                other = alpha + gen.elem_with_valuation(rng, f5, delta)
            else:
                other = alpha + gen.elem_with_valuation(rng, f5, gen.rand_exponent(rng, f5, delta - 3, delta))
            alt = gen.rand_divergent(rng, f5, delta, other)
            if equivalent(alt, target):
                continue
            alts += 1
            t.check(not in_all(alt, nbhd), lambda: f"alternative {alt} not excluded")
            t.check(not all(window_verdict(alt, phi) for phi in nbhd), lambda: f"window keeps alternative {alt}")
    # X -> 1/X duality
    fq = Dyadic(0)
    for i in range(100):
        f = fq if i % 2 else f5
        delta = gen.rand_exponent(rng, f, -2, 2)
        spec = gen.rand_divergent(rng, f, delta, f.zero)
        inv = invert_sequence(spec)
        t.check(inv.kind == Kind.CONVERGENT and inv.gauge.limit == -delta, "inverse has wrong kind or breadth")
        for phi in gen.function_battery(rng, spec, 20):
            psi = phi.compose_reciprocal()
            a = ve_contains(spec, phi)
            t.check(a == ve_contains(inv, psi) == window_verdict(inv, psi), lambda: f"duality fails on {phi} for {spec}")
    # stationary rings are isolated
    for _ in range(10):
        gamma = gen.rand_exponent(rng, fq, -1, 2)
        beta = gen.rand_elem(rng, fq)
        c = gen.elem_with_valuation(rng, fq, gamma)
        target = gen.rand_stationary(rng, fq, gamma, gen.same_ball_base(rng, stationary(beta, gamma)))
        phi = stationary_separator(beta, c)
        t.check(ve_contains(target, phi) and window_verdict(target, phi), "stationary target outside B(phi)")
        t.check(ve_contains(target, phi.inverse()), "stationary target outside B(1/phi)")
        for _ in range(50):
            other = beta + gen.elem_with_valuation(rng, fq, gen.rand_exponent(rng, fq, gamma - 3, gamma - Fraction(1, 8)))
            alt = gen.rand_stationary(rng, fq, gamma, other)
            t.check(not ve_contains(alt, phi) and not window_verdict(alt, phi), lambda: f"B(phi) keeps {alt}")
        for _ in range(50):
            g2 = gen.rand_exponent(rng, fq, gamma - 3, gamma + 3)
            if g2 == gamma:
                g2 = gamma + Fraction(1, 4)
            alt = gen.rand_stationary(rng, fq, g2, beta)
            both = ve_contains(alt, phi) and ve_contains(alt, phi.inverse())
            t.check(not both, lambda: f"B(phi, 1/phi) keeps {alt}")
    return CheckResult("divergent/stationary partitions", "residue_zar", not t.failures, t.count, 20.0, failures=t.failures)


BATTERIES = {
    1: check_ultrametric,
    2: check_formula,
    3: check_well_defined,
    4: check_similitude,
    5: check_density,
    6: check_membership,
    7: check_sigma_omega,
    8: check_lambda_metric,
    9: check_cover_witness,
    10: check_residue,
    11: check_partitions,
}

MODULES = {
    "metrics": (1, 2, 3, 4, 5),
    "extensions": (6, 7),
    "lambda_topology": (8, 9),
    "residue_zar": (10, 11),
}


def run_battery(number: int, seed: int) -> CheckResult:
    fn = BATTERIES[number]
    start = time.perf_counter()
    try:
        res = fn(seed)
    except Exception as exc:  # a crash is a failure, reported like one
        res = CheckResult(fn.__name__, "?", False, 0, 0.0, failures=[f"{type(exc).__name__}: {exc}"])
    res.elapsed = time.perf_counter() - start
    res.name = f"[{number}] {res.name}"
    return res


def run_module(module: str, seed: int) -> list:
    if module == "all":
        numbers = sorted(BATTERIES)
    else:
        numbers = MODULES[module]
    return [run_battery(n, seed) for n in numbers]
