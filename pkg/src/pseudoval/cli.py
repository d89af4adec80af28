"""Command-line front end.

Every subcommand prints one report per line (JSON by default) and exits
with 0 on success, 1 on a domain or input error and 2 when a heuristic
(raw-mode) computation could not decide.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import extensions as ext_mod
from . import lambda_topology as lt
from . import metrics as met
from . import residue_zar as rz
from . import sequences as seq
from .suite import MODULES, run_module
from .valued_field import INF, Field, ParseError, ext, field_from_name, fmt_ext


class CliError(Exception):
    """A domain or input error reported with exit status 1."""


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------

def _field(args) -> Field:
    try:
        return field_from_name(args.field)
    except ValueError as exc:
        raise CliError(str(exc))


def _json(text: str, what: str):
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc.msg}", text, exc.pos)


def _spec(args, text, what="--spec") -> seq.SeqSpec:
    if text is None:
        raise CliError(f"{what} is required")
    doc = _json(text, what)
    field = _field(args) if "field" not in doc or args.field_given else None
    try:
        return seq.SeqSpec.from_doc(doc, field)
    except KeyError as exc:
        raise CliError(f"{what} is missing key {exc.args[0]!r}")


def _elem(field: Field, text, what: str):
    if text is None:
        raise CliError(f"{what} is required")
    return field.parse(str(text))


def _ratfunc(field: Field, text):
    if text is None:
        raise CliError("--phi is required")
    return ext_mod.parse_ratfunc(field, text)


def _rat(text, what: str) -> Fraction:
    if text is None:
        raise CliError(f"{what} is required")
    q = ext(str(text))
    if q in (INF, -INF):
        raise CliError(f"{what} must be finite")
    return q


def _rat_list(text) -> list:
    if isinstance(text, list):
        return [ext(str(x)) for x in text]
    return [ext(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _space(text) -> lt.LambdaSpace:
    if text is None:
        raise CliError("--space is required")
    return lt.LambdaSpace.from_doc(_json(text, "--space"))


# --------------------------------------------------------------------------
# commands: each returns (inputs, verdicts, witnesses, provenance)
# --------------------------------------------------------------------------

def cmd_classify(args):
    f = _field(args)
    if args.terms:
        terms = [f.parse(s) for s in args.terms.split(";") if s.strip()]
        inputs = {"field": f.name, "terms": [str(x) for x in terms]}
    else:
        spec = _spec(args, args.spec)
        terms = spec.terms(args.count)
        inputs = {"spec": spec.to_doc(), "count": args.count}
    kind = seq.classify(terms)
    return inputs, {"kind": kind.value if kind else None}, {}, "exact"


def cmd_breadth(args):
    spec = _spec(args, args.spec)
    b = seq.breadth(spec, args.prefix)
    gauges = [str(seq.gauge(spec, n)) for n in range(min(args.prefix, 8))]
    return {"spec": spec.to_doc()}, {"breadth": fmt_ext(b)}, {"gaugePrefix": gauges}, "exact"


def cmd_limits(args):
    spec = _spec(args, args.spec)
    ball = seq.pseudo_limit_set(spec)
    verdicts = {"ball": ball.to_doc()}
    inputs = {"spec": spec.to_doc()}
    if args.x is not None:
        x = _elem(spec.field, args.x, "--x")
        inputs["x"] = str(x)
        verdicts["isPseudoLimit"] = ball.contains(x)
        verdicts["windowCheck"] = seq.is_pseudo_limit(spec, x)
    return inputs, verdicts, {}, "exact"


def cmd_member(args):
    spec = _spec(args, args.spec)
    phi = _ratfunc(spec.field, args.phi)
    inputs = {"spec": spec.to_doc(), "phi": str(phi)}
    verdict = ext_mod.ve_contains(spec, phi)
    witnesses = {}
    if ext_mod.is_exact(phi):
        start = ext_mod.window_bound(spec, phi)
        vals = ext_mod.window_values(spec, phi, start, 8)
        witnesses = {"windowStart": start, "windowValues": [fmt_ext(v) for v in vals],
                     "windowVerdict": all(v >= 0 for v in vals)}
        return inputs, {"contains": verdict}, witnesses, "exact"
    return inputs, {"contains": verdict}, witnesses, "heuristic"


def cmd_we(args):
    spec = _spec(args, args.spec)
    phi = _ratfunc(spec.field, args.phi)
    value = ext_mod.w_e(spec, phi)
    prov = "exact" if ext_mod.is_exact(phi) else "heuristic"
    return {"spec": spec.to_doc(), "phi": str(phi)}, {"wE": fmt_ext(value)}, {}, prov


def cmd_omega(args):
    spec = _spec(args, args.spec)
    s = _elem(spec.field, args.s, "--s")
    gamma = ext(str(args.gamma))
    inputs = {"spec": spec.to_doc(), "s": str(s), "gamma": fmt_ext(gamma)}
    return inputs, {"contains": ext_mod.omega_contains(spec, s, gamma)}, {}, "exact"


def cmd_dist(args):
    if args.e1 is not None or args.e2 is not None:
        e1, e2 = _spec(args, args.e1, "--e1"), _spec(args, args.e2, "--e2")
        d = met.dist_delta(e1, e2)
        inputs = {"e1": e1.to_doc(), "e2": e2.to_doc()}
        witnesses = {}
        if args.raw:
            witnesses["rawWindow"] = met.raw_dist(e1, e2).to_doc()
        return inputs, d.to_doc(), witnesses, "exact"
    f = _field(args)
    b1, b2 = _elem(f, args.beta1, "--beta1"), _elem(f, args.beta2, "--beta2")
    delta = ext(str(args.delta))
    d = met.dist_pseudo_limit_formula(b1, b2, delta)
    return {"field": f.name, "beta1": str(b1), "beta2": str(b2), "delta": fmt_ext(delta)}, d.to_doc(), {}, "exact"


def cmd_simil(args):
    spec = _spec(args, args.spec)
    c = _elem(spec.field, args.c, "--c")
    w = met.similitude(c, spec)
    verdicts = {"breadth": fmt_ext(w.breadth), "limits": w.limits.to_doc(), "spec": w.spec.to_doc()}
    return {"spec": spec.to_doc(), "c": str(c)}, verdicts, {"terms": [str(x) for x in w.spec.terms(4)]}, "exact"


def cmd_invert(args):
    spec = _spec(args, args.spec)
    inv = met.invert_sequence(spec)
    verdicts = {"kind": inv.kind.value, "breadth": fmt_ext(inv.gauge.limit), "limits": seq.pseudo_limit_set(inv).to_doc()}
    witnesses = {"terms": [str(x) for x in inv.terms(4)], "classified": seq.classify(inv.terms(6)).value}
    if args.phi:
        phi = _ratfunc(spec.field, args.phi)
        if not ext_mod.is_exact(phi):
            raise CliError("duality check needs a factored function")
        psi = phi.compose_reciprocal()
        witnesses["duality"] = {"phi": str(phi), "phiOfInverse": str(psi),
                                "inE": ext_mod.ve_contains(spec, phi), "inInverse": ext_mod.ve_contains(inv, psi)}
    return {"spec": spec.to_doc()}, verdicts, witnesses, "exact"


def cmd_sigma(args):
    f = _field(args)
    if args.spec is not None:
        spec = _spec(args, args.spec)
        beta = _elem(spec.field, args.beta, "--beta")
        return {"spec": spec.to_doc(), "beta": str(beta)}, {"breadth": fmt_ext(met.sigma_beta(spec, beta))}, {}, "exact"
    beta = _elem(f, args.beta, "--beta")
    delta = ext(str(args.delta))
    z = met.z_construct(beta, delta)
    verdicts = {"spec": z.to_doc(), "breadth": fmt_ext(z.gauge.limit), "limits": seq.pseudo_limit_set(z).to_doc()}
    return {"field": f.name, "beta": str(beta), "delta": fmt_ext(delta)}, verdicts, {}, "exact"


def cmd_lambda_dist(args):
    space = _space(args.space)
    x, y = _rat(args.x, "--x"), _rat(args.y, "--y")
    d = lt.lambda_dist(space, x, y)
    verdicts = {"d": str(d)}
    if lt.is_gap(space, x, y):
        verdicts["degenerate"] = "Lambda-gap"
    return {"space": space.to_doc(), "x": str(x), "y": str(y)}, verdicts, {}, "exact"


def cmd_lambda_ball(args):
    space = _space(args.space)
    x, rho = _rat(args.x, "--x"), _rat(args.rho, "--rho")
    iv = lt.ball_to_interval(space, x, rho)
    return {"space": space.to_doc(), "x": str(x), "rho": str(rho)}, iv.to_doc(), {}, "exact"


def cmd_cover_witness(args):
    space = _space(args.space)
    gammas = _rat_list(args.gammas)
    chosen = [int(q) for q in _rat_list(args.chosen)] if args.chosen else []
    x = lt.cover_witness(space, gammas, chosen)
    members = [lt.cover_member(gammas, k, space.b) for k in chosen]
    inputs = {"space": space.to_doc(), "gammas": [str(g) for g in gammas], "chosen": sorted(set(chosen))}
    witnesses = {"members": [str(m) for m in members], "covered": any(m.contains(x) for m in members)}
    return inputs, {"uncovered": str(x)}, witnesses, "exact"


def cmd_zar(args):
    p = args.p
    action = args.action
    if action == "xad":
        return cmd_xad(args)
    if action == "member":
        point = rz.parse_point(p, args.point)
        psi = rz.parse_tfunc(p, args.psi)
        return ({"p": p, "point": point.literal(), "psi": psi.literal()},
                {"contains": rz.zar_contains(point, psi)}, {}, "exact")
    if action == "isolated":
        point = rz.parse_point(p, args.point)
        sample = [rz.parse_point(p, s) for s in args.sample.split(";")] if args.sample else None
        cert = rz.isolated_certificate(point, p, args.degree_bound, sample)
        verdicts = {"unique": cert.unique, "degreeBound": cert.degree_bound, "pointsChecked": cert.checked}
        witnesses = {"function": cert.function.literal(), "pointDisplay": str(point),
                     "nonContainers": [q.literal() for q in cert.others_excluding]}
        inputs = {"p": p, "point": point.literal()}
        if sample:
            inputs["sample"] = ";".join(q.literal() for q in sample)
        return inputs, verdicts, witnesses, "exact"
    if action == "generic":
        if not p:
            raise CliError("the generic-point check enumerates points; give a prime --p")
        opens = [rz.parse_tfunc(p, s) for s in (args.psi or "").split(";") if s.strip()]
        sample = [q for q in rz.points_up_to(p, args.degree_bound) if not isinstance(q, rz.Whole)]
        ok = rz.generic_point_check(opens, sample)
        return ({"p": p, "psi": ";".join(o.literal() for o in opens)},
                {"wholeInAll": ok, "degreeBound": args.degree_bound}, {}, "exact")
    raise CliError(f"unknown zar action {action!r}")


def cmd_xad(args):
    f = _field(args)
    alpha, c = _elem(f, args.alpha, "--alpha"), _elem(f, args.c, "--c")
    marker = args.marker
    if marker not in ("E", "F"):
        marker = _rat(marker, "--marker")
    d = rz.XadDescriptor(alpha, c, marker)
    ring = rz.xad_ring(d)
    point = rz.xad_map(d)
    inputs = {"field": f.name, "alpha": str(alpha), "c": str(c), "marker": str(marker)}
    verdicts = {"point": point.literal(), "pointDisplay": str(point), "ring": ring.to_doc(), "limits": seq.pseudo_limit_set(ring).to_doc()}
    witnesses = {}
    if args.psi:
        psi = rz.parse_tfunc(f.p, args.psi)
        split = _split_tfunc(psi)
        phi = rz.transport(split, alpha, c)
        inputs["psi"] = psi.literal()
        witnesses = {"phi": str(phi), "inRing": ext_mod.ve_contains(ring, phi), "inPoint": point.contains(psi)}
    return inputs, verdicts, witnesses, "exact"


def _split_tfunc(psi: rz.TFunc) -> rz.SplitTFunc:
    """Factor a function whose numerator and denominator split into linear factors."""
    p = psi.num.p
    facs = {}
    kappa = 1

    def peel(poly, sign):
        nonlocal kappa
        roots = range(p) if p else None
        g = poly
        if p:
            for r in roots:
                while g.degree >= 1 and g(r) == 0:
                    g = g.divmod(rz.Poly.linear(p, r))[0]
                    facs[r] = facs.get(r, 0) + sign
        else:
            while g.degree >= 1:
                rs = rz._rational_roots(g)
                if not rs:
                    break
                r = rs[0]
                g = g.divmod(rz.Poly.linear(p, r))[0]
                facs[r] = facs.get(r, 0) + sign
        if g.degree >= 1:
            raise CliError(f"{poly} does not split into linear factors over the residue field")
        c = g.coeffs[0]
        if sign > 0:
            kappa = kappa * c
        else:
            kappa = kappa * (pow(int(c), -1, p) if p else 1 / Fraction(c))
        if p:
            kappa %= p

    peel(psi.num, 1)
    peel(psi.den, -1)
    return rz.SplitTFunc(kappa, tuple((r, e) for r, e in sorted(facs.items()) if e))


# --------------------------------------------------------------------------
# parser and driver
# --------------------------------------------------------------------------

COMMANDS = {
    "classify": cmd_classify,
    "breadth": cmd_breadth,
    "limits": cmd_limits,
    "member": cmd_member,
    "we": cmd_we,
    "omega": cmd_omega,
    "dist": cmd_dist,
    "simil": cmd_simil,
    "invert": cmd_invert,
    "sigma": cmd_sigma,
    "lambda-dist": cmd_lambda_dist,
    "lambda-ball": cmd_lambda_ball,
    "cover-witness": cmd_cover_witness,
    "zar": cmd_zar,
    "xad": cmd_xad,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="default: $PSEUDOVAL_SEED or 0")
    common.add_argument("--in", dest="infile", help="JSON file whose keys supply option values")
    common.add_argument("--field", default=None, help="padic-<p>, dyadic-q or dyadic-f<p>")
    common.add_argument("--timing", action="store_true", help="add elapsed seconds (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="pseudoval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *opts):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for o in opts:
            if isinstance(o, tuple):
                p.add_argument(o[0], **o[1])
            else:
                p.add_argument(o)
        return p

    add("classify", "pseudo-monotone type of a finite sample",
        ("--terms", {"help": "semicolon-separated element literals"}), "--spec",
        ("--count", {"type": int, "default": 8}))
    add("breadth", "breadth of a sequence spec", "--spec", ("--prefix", {"type": int, "default": 32}))
    add("limits", "pseudo-limit ball of a spec", "--spec", "--x")
    add("member", "is phi in V_E", "--spec", "--phi")
    add("we", "limit of v(phi(s_n))", "--spec", "--phi")
    add("omega", "is w_E(X - s) <= gamma", "--spec", "--s", "--gamma")
    add("dist", "distance between convergent rings of equal breadth", "--e1", "--e2",
        "--beta1", "--beta2", ("--delta", {"default": "inf"}), ("--raw", {"action": "store_true"}))
    add("simil", "scale a convergent spec by c", "--spec", "--c")
    add("invert", "termwise inverse of a spec with pseudo-limit 0", "--spec", "--phi")
    add("sigma", "breadth at a pseudo-limit, or the inverse construction", "--spec", "--beta",
        ("--delta", {"default": "inf"}))
    add("lambda-dist", "distance in a Lambda upper-limit space", "--space", "--x", "--y")
    add("lambda-ball", "open ball as a half-open interval", "--space", "--x", "--rho")
    add("cover-witness", "point missed by a finite subfamily of the standard cover", "--space",
        "--gammas", ("--chosen", {"default": ""}))
    add("zar", "valuation rings of k(t) over k",
        ("action", {"choices": ("member", "isolated", "generic", "xad")}),
        ("--p", {"type": int, "default": 5}), "--point", "--psi", "--sample",
        ("--degree-bound", {"type": int, "default": 3, "dest": "degree_bound"}),
        "--alpha", "--c", ("--marker", {"default": "E"}))
    add("xad", "rings around a closed ball and their residue images", "--alpha", "--c",
        ("--marker", {"default": "E", "help": "E, F or a residue representative z"}), "--psi")
    add("suite", "run property batteries",
        ("--module", {"default": "all", "choices": ("all",) + tuple(MODULES)}))
    return parser


def _apply_infile(args, parser) -> None:
    if not args.infile:
        return
    try:
        with open(args.infile, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {args.infile}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.infile} is not valid JSON: {exc.msg}", "", exc.pos)
    if not isinstance(doc, dict):
        raise CliError("--in file must hold a JSON object")
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise CliError(f"--in file key {key!r} is not an option of {args.command}")
        if getattr(args, attr) in (None, "", parser.get_default(attr)):
            if isinstance(value, (dict, list)) and attr not in ("gammas",):
                value = json.dumps(value)
            setattr(args, attr, value)


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return
    lines = [f"command: {report['command']}"]
    for key in ("inputs", "verdicts", "witnesses", "error"):
        if key in report and report[key]:
            for k, v in sorted(report[key].items()):
                val = json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else str(v)
                lines.append(f"{key}.{k}: {val}")
    for key in ("provenance", "seed", "elapsedSeconds"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    out.write("\n".join(lines) + "\n")


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    args.field_given = args.field is not None
    if args.field is None:
        args.field = "dyadic-q"
    if args.seed is None:
        env = os.environ.get("PSEUDOVAL_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"PSEUDOVAL_SEED must be an integer, got {env!r}")
    start = time.perf_counter()
    report: dict = {"command": args.command, "seed": args.seed}
    code = 0
    try:
        _apply_infile(args, parser)
        if args.command == "suite":
            results = run_module(args.module, args.seed)
            for r in results:
                doc = {"command": "suite", "seed": args.seed, "provenance": "exact",
                       "inputs": {"module": args.module, "battery": r.name},
                       "verdicts": r.to_doc(), "witnesses": {}}
                if args.timing:
                    doc["elapsedSeconds"] = round(r.elapsed, 3)
                _emit(doc, args.format, out)
            passed = sum(r.ok for r in results)
            report.update(provenance="exact", inputs={"module": args.module},
                          verdicts={"summary": f"{passed}/{len(results)} passed",
                                    "allPassed": passed == len(results),
                                    "checks": sum(r.count for r in results)})
            code = 0 if passed == len(results) else 1
        else:
            inputs, verdicts, witnesses, prov = COMMANDS[args.command](args)
            report.update(inputs=inputs, verdicts=verdicts, witnesses=witnesses, provenance=prov)
    except ParseError as exc:
        report["error"] = {"type": "parse", "message": str(exc), "position": exc.pos}
        code = 1
    except ext_mod.HeuristicIndecision as exc:
        report["error"] = {"type": "heuristic-indecision", "message": str(exc)}
        report["provenance"] = "heuristic"
        code = 2
    except (CliError, seq.SpecError, met.MetricError, lt.LambdaError, rz.ZarError,
            ValueError, TypeError, ZeroDivisionError, RuntimeError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 1
    if args.timing:
        report["elapsedSeconds"] = round(time.perf_counter() - start, 3)
    _emit(report, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
