"""Command-line front end.  Reports are JSON (sorted keys) with optional CSV traces."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .association import (boundary_witness, default_testset, s_assoc, strong_assoc, strong_weak_assoc,
                          null_test, weak_assoc)
from .asymptotic import classify_A, classify_A_secondkind, family_classify, family_agreement
from .errors import UltraseqError
from .functorial import check_temperate, spec_from_json
from .gnum import GenNumber
from .growth import seq_from_json
from .scales import (ASYMPTOTIC_KINDS, asymptotic_family, constant_family, ladder, make_colombeau_family, make_log_scale,
                     make_power_family, scale_from_asymptotic, scale_from_json)
from .torus import (classify_coefficients, coeff_from_json, constant_coeffs, delta_unboundedness_trace, embed,
                    full, geometric, gf_mul, truncation, write_csv, zero_gf)
from .ultranorm import classify_value, norm_estimate, norm_exact, powered_trace
from .verdict import State, Verdict, _jsonable

SCHEMA_VERSION = 1
EXIT = {State.HOLDS: 0, State.FAILS: 1, State.INCONCLUSIVE: 3}
_SAFE = {name: getattr(math, name) for name in ("log", "exp", "sqrt", "sin", "cos", "pi", "e", "floor")}


class UsageError(Exception):
    pass


def _load(text: str):
    """Inline JSON or a path to a JSON file."""
    if text is None:
        return None
    try:
        if os.path.exists(text):
            with open(text) as fh:
                return json.load(fh)
        return json.loads(text)
    except (json.JSONDecodeError, OSError) as exc:
        raise UsageError(f"malformed JSON input: {exc}") from exc


def _callable(expr: str):
    code = compile(expr, "<callable>", "eval")

    def f(n):
        return eval(code, {"__builtins__": {}}, {**_SAFE, "n": n, "abs": abs})
    return f


def _sequence(d: dict, scale):
    if "callable" in d:
        return _callable(d["callable"])
    return seq_from_json(d, scale)


def _scale(arg):
    return scale_from_json(_load(arg)) if arg else make_log_scale()


def _ladder(args):
    return ladder(args.ladder_max_exp)


def _report(command, inputs, results, traces=None):
    out = {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs, "results": results}
    if traces:
        out["traces"] = traces
    return out


def _verdict_result(name, v: Verdict) -> dict:
    return {"name": name, "verdict": v.to_json()}


def _top_state(results) -> State:
    states = [State(r["verdict"]["result"]) for r in results if "verdict" in r]
    if any(s is State.FAILS for s in states):
        return State.FAILS
    if any(s is State.INCONCLUSIVE for s in states):
        return State.INCONCLUSIVE
    return State.HOLDS


# -- commands ------------------------------------------------------------------------


def cmd_norm(args):
    r = _scale(args.scale)
    seq_d = _load(args.seq)
    f = _sequence(seq_d, r)
    lad = _ladder(args)
    results = []
    if not callable(f) or hasattr(f, "terms"):
        results.append({"name": "exact", **norm_exact(f, r).to_json()})
    est = norm_estimate(f, r, lad, tol=args.tol)
    results.append({"name": "estimated", **est.to_json()})
    traces = None
    if args.csv:
        write_csv(args.csv, ["n", "p_value", "powered_value"], powered_trace(f, r, lad))
        traces = [os.path.basename(args.csv)]
    state = State.INCONCLUSIVE if all(x["mode"] == "inconclusive" for x in results) else State.HOLDS
    return _report("norm", {"seq": seq_d, "scale": r.to_json()}, results, traces), state


def cmd_classify(args):
    r = _scale(args.scale)
    seq_d = _load(args.seq)
    f = _sequence(seq_d, r)
    lad = _ladder(args)
    v = norm_exact(f, r) if hasattr(f, "terms") else norm_estimate(f, r, lad, tol=args.tol)
    if v.mode == "inconclusive" and hasattr(f, "terms"):
        v = norm_estimate(f, r, lad, tol=args.tol)
    label = classify_value(v)
    state = State.INCONCLUSIVE if label.value == "Inconclusive" else State.HOLDS
    res = [{"name": "classification", "class": label.value, "norm": v.to_json()}]
    return _report("classify", {"seq": seq_d, "scale": r.to_json()}, res), state


def _gf(d, r):
    if d is None or d == "zero":
        return zero_gf(r)
    if "embed" in d:
        return embed(coeff_from_json(d["embed"]), r)
    if "full" in d:
        return full(coeff_from_json(d["full"]), r)
    raise UsageError("generalized function must be {'embed': coeff} or {'full': coeff} or 'zero'")


def _testset(arg):
    if arg in (None, "demo"):
        return [geometric(0.5)]
    if arg == "default":
        return default_testset()
    d = _load(arg)
    return [coeff_from_json(x) for x in (d if isinstance(d, list) else [d])]


def cmd_assoc(args):
    r = _scale(args.scale)
    flavor = args.flavor
    inputs = {"flavor": flavor, "s": args.s, "scale": r.to_json()}
    if flavor in ("weak", "strong-weak"):
        F = _gf(_load(args.F), r) if args.F else embed(constant_coeffs(), r)
        G = _gf(_load(args.G), r) if args.G else full(constant_coeffs(), r)
        D = _testset(args.testset)
        inputs.update(F=args.F or "embed(delta)", G=args.G or "delta functional",
                      testset=[psi.to_json() for psi in D])
        fn = weak_assoc if flavor == "weak" else strong_weak_assoc
        v = fn(F, G, args.s, D)
    else:
        if not args.x:
            raise UsageError(f"--x is required for flavor {flavor}")
        x = GenNumber(_sequence(_load(args.x), r), r)
        y = GenNumber(_sequence(_load(args.y), r), r) if args.y else None
        inputs.update(x=_load(args.x), y=_load(args.y) if args.y else None)
        if flavor == "plain":
            v = null_test(x if y is None else x - y)
        elif flavor == "s":
            v = s_assoc(x, y, args.s)
        else:
            v = strong_assoc(x, y if y is not None else GenNumber(seq_from_json({"zero": True}), r), s=args.s)
    res = [_verdict_result(flavor, v)]
    return _report("assoc", inputs, res), v.state


def cmd_embed(args):
    r = _scale(args.scale)
    c_d = _load(args.coeff)
    c = coeff_from_json(c_d)
    F = embed(c, r)
    lad = _ladder(args)
    rows = [(n, truncation(r, n), F.sup(n)) for n in lad if n >= r.domain_start and truncation(r, n) <= 2**16]
    nv = F.ultranorm()
    res = [{"name": "coefficients", **classify_coefficients(c).to_json()},
           {"name": "sup_norm", **nv.to_json(), "class": classify_value(nv).value}]
    traces = None
    if args.csv:
        write_csv(args.csv, ["n", "K_n", "sup"], rows)
        traces = [os.path.basename(args.csv)]
    return _report("embed", {"coeff": c_d, "scale": r.to_json()}, res, traces), State.HOLDS


def cmd_demo_delta2(args):
    r = _scale(args.scale)
    lad = _ladder(args)
    d = embed(constant_coeffs(), r)
    d2 = gf_mul(d, d)
    samples = [n for n in lad if n >= r.domain_start and truncation(r, n) <= 2**12]
    peaks = []
    for n in samples:
        K, a = d2.at(n)
        peaks.append({"n": n, "K_n": truncation(r, n), "delta_sup": d.sup(n), "delta2_peak": float(a.real.max()),
                      "delta2_sup": d2.sup(n)})
    res = []
    for name, g in (("delta", d), ("delta_squared", d2)):
        v = g.ultranorm()
        res.append({"name": name, **v.to_json(), "class": classify_value(v).value})
    trace = delta_unboundedness_trace(r, lad)
    res.append({"name": "unboundedness_trace", "rows": [list(t) for t in trace]})
    res.append({"name": "peaks", "rows": peaks})
    traces = None
    if args.csv:
        write_csv(args.csv, ["n", "sup_norm"], trace)
        traces = [os.path.basename(args.csv)]
    return _report("demo-delta2", {"scale": r.to_json()}, res, traces), State.HOLDS


_FAMILIES = {"log": lambda: constant_family(make_log_scale()), "colombeau": make_colombeau_family,
             "power": make_power_family}


def cmd_temperate(args):
    spec_d = _load(args.spec)
    spec = spec_from_json(spec_d)
    fam = _FAMILIES[args.family]()
    v = check_temperate(spec, fam)
    return _report("temperate-check", {"spec": spec_d, "family": args.family}, [_verdict_result(spec.name, v)]), v.state


def cmd_aclassify(args):
    seq_d = _load(args.seq)
    f = seq_from_json(seq_d)
    a = ASYMPTOTIC_KINDS[args.scale_kind]()
    if a.real_indexed:
        sk = classify_A_secondkind(f, a)
        res = [{"name": "second_kind", **sk.to_json()}]
    else:
        ac = classify_A(f, a)
        fam = family_classify(f, asymptotic_family(a))
        res = [{"name": "A", **ac.to_json()}, {"name": "family", **fam.to_json()},
               _verdict_result("equivalence", family_agreement(f, a))]
    return _report("aclassify", {"seq": seq_d, "scale_kind": args.scale_kind}, res), State.HOLDS


def cmd_convert_scale(args):
    a = ASYMPTOTIC_KINDS[args.scale_kind]()
    m = args.sigma if a.real_indexed else args.m
    if m is None:
        raise UsageError("--sigma is required for infra-exp, --m otherwise")
    r = scale_from_asymptotic(a, m)
    lad = _ladder(args)
    rows = [[n, r.eval(n)] for n in lad[:8]]
    res = [{"name": "scale", "scale": r.to_json(), "L": r.L, "samples": rows}]
    return _report("convert-scale", {"scale_kind": args.scale_kind, "m": m}, res), State.HOLDS


# -- entry point ---------------------------------------------------------------------


def _globals(parser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--ladder-max-exp", type=int, default=d if suppress else 20)
    parser.add_argument("--tol", type=float, default=d if suppress else 0.05)
    parser.add_argument("--format", choices=("json", "text"), default=d if suppress else "json")
    parser.add_argument("--csv", default=d)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ultraseq", description="Generalized numbers and functions via ultranorms.")
    p.add_argument("--version", action="version", version=__version__)
    _globals(p, False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", parents=[common], help="exact and estimated ultranorm")
    s.add_argument("seq")
    s.add_argument("scale", nargs="?")
    s.set_defaults(fn=cmd_norm)

    s = sub.add_parser("classify", parents=[common], help="negligible / moderate / unbounded")
    s.add_argument("seq")
    s.add_argument("scale", nargs="?")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("assoc", parents=[common], help="association tests")
    s.add_argument("--flavor", choices=("plain", "s", "strong", "weak", "strong-weak"), default="weak")
    s.add_argument("--s", type=float, default=0.0)
    s.add_argument("--testset", help="'demo' (psi_k = 2^-|k|), 'default', or coefficient JSON list")
    s.add_argument("--scale")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--F")
    s.add_argument("--G")
    s.set_defaults(fn=cmd_assoc)

    s = sub.add_parser("embed", parents=[common], help="mollifier embedding of a coefficient family")
    s.add_argument("coeff")
    s.add_argument("scale", nargs="?")
    s.set_defaults(fn=cmd_embed)

    s = sub.add_parser("demo-delta2", parents=[common], help="delta and delta squared in the algebra")
    s.add_argument("scale", nargs="?")
    s.set_defaults(fn=cmd_demo_delta2)

    s = sub.add_parser("temperate-check", parents=[common], help="check a map spec")
    s.add_argument("spec")
    s.add_argument("--family", choices=sorted(_FAMILIES), default="log")
    s.set_defaults(fn=cmd_temperate)

    s = sub.add_parser("aclassify", parents=[common], help="asymptotic-scale classification")
    s.add_argument("seq")
    s.add_argument("--scale-kind", choices=sorted(ASYMPTOTIC_KINDS), default="polynomial")
    s.set_defaults(fn=cmd_aclassify)

    s = sub.add_parser("convert-scale", parents=[common], help="scale r = 1/|log a_m|")
    s.add_argument("--scale-kind", choices=sorted(ASYMPTOTIC_KINDS), default="polynomial")
    s.add_argument("--m", type=int)
    s.add_argument("--sigma", type=float)
    s.set_defaults(fn=cmd_convert_scale)
    return p


def _text(report) -> str:
    lines = [f"command: {report['command']}"]
    for r in report["results"]:
        items = ", ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in r.items() if k != "name")
        lines.append(f"{r['name']}: {items}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, state = args.fn(args)
    except UsageError as exc:
        print(f"ultraseq: {exc}", file=sys.stderr)
        return 2
    except (UltraseqError, KeyError, TypeError, ValueError, SyntaxError) as exc:
        print(f"ultraseq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = _jsonable(report)
    if args.format == "text":
        print(_text(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
    return EXIT[state]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
