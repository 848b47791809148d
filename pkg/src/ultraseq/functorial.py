"""Gauge functions, temperate maps and their canonical extension."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidParameter, NotModerate, PreconditionFailed, Unsupported
from .gnum import GenNumber
from .growth import GrowthClass, SymbolicSeq, as_seq, exp_power, n_pow_neg_log
from .loggrowth import INF, LogGrowth, Monomial
from .scales import Scale, ScaleFamily, constant_family, make_log_scale
from .torus import TorusGF, derivative, gf_mul
from .ultranorm import Classification, norm_exact
from .verdict import Verdict, fails, holds, inconclusive

M_MAX = 8


def _const(c: float, scale: Scale) -> SymbolicSeq:
    return SymbolicSeq() if c == 0 else SymbolicSeq((GrowthClass(scale=scale).times(c),))


def _single(x) -> GrowthClass:
    x = as_seq(x)
    if len(x.terms) != 1:
        raise Unsupported("gauge applied to a sum of terms")
    return x.terms[0]


def _lg_growth(t: GrowthClass) -> float:
    return t.log_growth().limit()


# symbolic action of the elementary gauges on a positive term x_n = exp(LG(n))

def _power(k: float):
    def act(x):
        t = _single(x)
        return as_seq(GrowthClass(scale=t.scale, extra=t.log_growth().scaled(k)))
    return act


def _exp(x):
    t = _single(x)
    lg = t.log_growth()
    lim = lg.limit()
    if lim != INF:
        # x bounded: e^x is bounded above and below
        return _const(1.0, t.scale)
    e = lg.exp_of()
    if e is None:
        raise Unsupported(f"exp(exp({lg})) leaves the symbolic class")
    c, mono = e
    return as_seq(GrowthClass(scale=t.scale, extra=LogGrowth.term(mono, c)))


def _log1p(x):
    t = _single(x)
    lg = t.log_growth()
    lim = lg.limit()
    if lim == -INF:
        return as_seq(t)
    if lim != INF:
        return _const(math.log1p(math.exp(lim)), t.scale)
    mono, c = lg.dominant()
    try:
        new = LogGrowth.const(math.log(c)) + mono.log()
    except ValueError as exc:
        raise Unsupported(str(exc)) from exc
    return as_seq(GrowthClass(scale=t.scale, extra=new))


def _exp_log_pow(k: float):
    """x -> exp(log(1+x)^k), within bounded factors."""
    def act(x):
        t = _single(x)
        lg = t.log_growth()
        if lg.limit() != INF:
            return _const(1.0, t.scale)
        out = lg
        for _ in range(int(k) - 1):
            out = out * lg
        return as_seq(GrowthClass(scale=t.scale, extra=out))
    if k != int(k) or k < 1:
        raise InvalidParameter("ExpLogPow needs a positive integer power")
    return act


@dataclass(frozen=True)
class GaugeFn:
    """Increasing map R+ -> R+ with a numeric form and a symbolic action on sequences."""

    tag: str
    apply: Callable[[float], float] = field(compare=False)
    act: Callable[[SymbolicSeq], SymbolicSeq] = field(compare=False, repr=False)

    def __call__(self, x):
        return self.apply(x)

    def on_seq(self, x) -> SymbolicSeq:
        """g applied termwise to a positive sequence, up to bounded factors."""
        return self.act(x)

    def __add__(self, other: "GaugeFn") -> "GaugeFn":
        return GaugeFn(f"{self.tag}+{other.tag}", lambda x: self(x) + other(x),
                       lambda s: self.on_seq(s) + other.on_seq(s))

    def __mul__(self, other: "GaugeFn") -> "GaugeFn":
        return GaugeFn(f"{self.tag}*{other.tag}", lambda x: self(x) * other(x),
                       lambda s: self.on_seq(s) * other.on_seq(s))

    def scaled_arg(self, c: float) -> "GaugeFn":
        """x -> g(c x)."""
        return GaugeFn(f"{self.tag}o{c:g}", lambda x: self(c * x), lambda s: self.on_seq(as_seq(s).times(c)))


def Power(k: float) -> GaugeFn:
    if k <= 0:
        raise InvalidParameter("power must be positive")
    return GaugeFn(f"Power({k:g})", lambda x: x**k, _power(k))


def Exp() -> GaugeFn:
    return GaugeFn("Exp", lambda x: math.exp(min(x, 700.0)), _exp)


def Expm1() -> GaugeFn:
    return GaugeFn("Expm1", lambda x: math.expm1(min(x, 700.0)),
                   lambda s: _exp(s) if _lg_growth(_single(s)) == INF else (
                       as_seq(_single(s)) if _lg_growth(_single(s)) == -INF else _const(1.0, _single(s).scale)))


def Log1p() -> GaugeFn:
    return GaugeFn("Log1p", math.log1p, _log1p)


def Identity() -> GaugeFn:
    return GaugeFn("Identity", lambda x: x, lambda s: as_seq(s))


def Affine(a: float, b: float) -> GaugeFn:
    if a < 0 or b < 0:
        raise InvalidParameter("affine gauge needs a, b >= 0")

    def act(s):
        s = as_seq(s)
        out = s.times(a) if a else SymbolicSeq()
        return out + _const(b, s.scale) if b else out
    return GaugeFn(f"Affine({a:g},{b:g})", lambda x: a * x + b, act)


def ExpLogPow(k: int) -> GaugeFn:
    return GaugeFn(f"ExpLogPow({k})", lambda x: math.exp(min(math.log1p(x) ** k, 700.0)), _exp_log_pow(k))


def gauge_from_json(d) -> GaugeFn:
    if isinstance(d, str):
        d = {"tag": d}
    if "tag" not in d and d:
        raise InvalidParameter(f"gauge needs a 'tag' field, got {sorted(d)}")
    tag = d.get("tag", "Identity")
    if tag == "Power":
        return Power(float(d.get("k", 2)))
    if tag == "Exp":
        return Exp()
    if tag == "Expm1":
        return Expm1()
    if tag == "Log1p":
        return Log1p()
    if tag == "Identity":
        return Identity()
    if tag == "Affine":
        return Affine(float(d.get("a", 1)), float(d.get("b", 0)))
    if tag == "ExpLogPow":
        return ExpLogPow(int(d.get("k", 2)))
    if tag in ("Sum", "Product"):
        parts = [gauge_from_json(x) for x in d["of"]]
        out = parts[0]
        for g in parts[1:]:
            out = out + g if tag == "Sum" else out * g
        return out
    raise InvalidParameter(f"unknown gauge {tag!r}")


# -- moderation and compatibility ------------------------------------------------


def default_probes(family: ScaleFamily) -> list:
    """Positive probe sequences: e^(s/r) n^gamma on the first row, plus stretched exponentials."""
    base = family.rows(1)[0]
    out = [GrowthClass(s=s, gamma=g, scale=base) for s in (-2, -1, 0, 1, 2) for g in (-2, -1, 0, 1, 2)
           if base.symbolic or s == 0]
    out += [exp_power(base, 1.0, 1.0 / j) for j in (1, 2, 3, 4)]
    return out


def default_negligible_probes(family: ScaleFamily) -> list:
    base = family.rows(1)[0]
    out = [n_pow_neg_log(base, k) for k in (0.5, 1.0, 2.0)]
    out += [exp_power(base, -1.0, 1.0 / j) for j in (1, 2, 3, 4)]
    return out


def _row_class(x, r: Scale) -> Classification:
    v = norm_exact(x, r)
    if v.mode == "inconclusive":
        return Classification.INCONCLUSIVE
    return Classification.NEGLIGIBLE if v.value == 0 else (
        Classification.UNBOUNDED if v.value == INF else Classification.MODERATE)


def _quantifier_search(outer_rows, inner_rows, accept, pick_probes, image, ok):
    """For each outer row find an inner row that maps every accepted probe into ok.

    Returns (None, None) on success, else (outer index, witness).
    """
    for i, outer in enumerate(outer_rows, start=1):
        last = None
        for inner in inner_rows:
            src, dst = (inner, outer) if accept == "inner" else (outer, inner)
            bad = None
            for f in pick_probes(src):
                try:
                    if not ok(image(f), dst):
                        bad = f
                        break
                except Unsupported:
                    bad = f
                    break
            if bad is None:
                last = None
                break
            last = bad
        if last is not None:
            return i, last
    return None, None


def is_r_moderate(g: GaugeFn, family: Optional[ScaleFamily] = None, probes: Optional[Sequence] = None,
                  m_max: int = M_MAX, M_max: int = M_MAX) -> Verdict:
    """g maps moderate positive sequences of some row into moderate ones of another.

    For rows decreasing in m (condition (II)): for all m there is M with
    g(F+_{r^m}) in F+_{r^M}.  For increasing rows (condition (I)) the
    quantifiers are exchanged: for all M there is m.
    """
    family = family or constant_family(make_log_scale())
    probes = list(probes) if probes is not None else default_probes(family)
    rows = family.rows(max(m_max, M_max))

    def pick(r):
        return [f for f in probes if _row_class(f, r).is_moderate]

    def ok(x, r):
        return _row_class(x, r).is_moderate
    if family.direction == "II":
        i, w = _quantifier_search(rows[:m_max], rows[:M_max], "outer", pick, g.on_seq, ok)
        quant = "forall m exists M"
    else:
        i, w = _quantifier_search(rows[:M_max], rows[:m_max], "inner", pick, g.on_seq, ok)
        quant = "forall M exists m"
    if i is None:
        return holds(gauge=g.tag, quantifiers=quant, probes=len(probes), evidence="probe corpus")
    return fails(gauge=g.tag, quantifiers=quant, row=i, probe=str(w), image=_safe_str(g, w))


def _safe_str(g, w):
    try:
        return str(g.on_seq(w))
    except Unsupported as exc:
        return f"unsupported: {exc}"


def continuous_at_zero(h: GaugeFn) -> Verdict:
    xs = [10.0 ** -j for j in range(1, 300, 6)]
    vals = [h(x) for x in xs]
    if vals[-1] < 1e-2 and all(b <= a + 1e-15 for a, b in zip(vals, vals[1:])):
        return holds(h_at=vals[-1])
    return fails(reason="not continuous at 0 with h(0) = 0", h_at=vals[-1], x=xs[-1])


def is_r_compatible(h: GaugeFn, family: Optional[ScaleFamily] = None, probes: Optional[Sequence] = None,
                    m_max: int = M_MAX, M_max: int = M_MAX) -> Verdict:
    """h continuous at 0 and mapping negligible rows into negligible rows.

    Condition (II): for all M there is m with h(K+_{r^m}) in K+_{r^M};
    exchanged for condition (I).
    """
    c = continuous_at_zero(h)
    if not c.held:
        return fails(gauge=h.tag, **c.detail)
    family = family or constant_family(make_log_scale())
    probes = list(probes) if probes is not None else default_negligible_probes(family)
    rows = family.rows(max(m_max, M_max))

    def pick(r):
        return [f for f in probes if _row_class(f, r) is Classification.NEGLIGIBLE]

    def ok(x, r):
        return _row_class(x, r) is Classification.NEGLIGIBLE
    if family.direction == "II":
        i, w = _quantifier_search(rows[:M_max], rows[:m_max], "inner", pick, h.on_seq, ok)
        quant = "forall M exists m"
    else:
        i, w = _quantifier_search(rows[:m_max], rows[:M_max], "outer", pick, h.on_seq, ok)
        quant = "forall m exists M"
    if i is None:
        return holds(gauge=h.tag, quantifiers=quant, probes=len(probes), evidence="probe corpus")
    return fails(gauge=h.tag, quantifiers=quant, row=i, probe=str(w), image=_safe_str(h, w))


# -- temperate maps ----------------------------------------------------------------


@dataclass(frozen=True)
class TemperateMapSpec:
    """phi with gauges for (a) q(phi f) <= g(p f) and (b) q(phi(f+k) - phi f) <= g2(p f) h(p k)."""

    name: str
    phi: Callable[[complex], complex] = field(compare=False)
    g: GaugeFn = field(compare=False)
    g2: GaugeFn = field(compare=False)
    h: GaugeFn = field(compare=False)
    on_seq: Optional[Callable] = field(default=None, compare=False)
    on_gf: Optional[Callable] = field(default=None, compare=False)
    seminorms: tuple = (("abs", "abs"),)


def square_spec() -> TemperateMapSpec:
    return TemperateMapSpec("square", lambda x: x * x, Power(2), Affine(2, 1), Identity() + Power(2),
                            on_seq=lambda s: s * s, on_gf=lambda f: gf_mul(f, f))


def linear_spec(c: float) -> TemperateMapSpec:
    c = float(c)
    return TemperateMapSpec(f"linear:{c:g}", lambda x: c * x, Affine(abs(c), 0), Affine(0, 1),
                            Affine(abs(c), 0), on_seq=lambda s: s.times(c), on_gf=lambda f: f.times(c))


def exp_spec() -> TemperateMapSpec:
    return TemperateMapSpec("exp", cmath.exp, Exp(), Exp(), Expm1())


def derivative_spec() -> TemperateMapSpec:
    """d/dx on trigonometric polynomials; per index the sup grows at most like K_n^2 (times p)."""
    return TemperateMapSpec("derivative", None, Identity(), Affine(0, 1), Identity(), on_gf=derivative)


def spec_from_json(d: dict) -> TemperateMapSpec:
    phi = d.get("phi", "square")
    if phi == "square":
        spec = square_spec()
    elif phi.startswith("linear"):
        spec = linear_spec(float(phi.split(":", 1)[1]) if ":" in phi else 1.0)
    elif phi == "exp":
        spec = exp_spec()
    else:
        raise InvalidParameter(f"unknown map {phi!r}")
    kw = {}
    for key in ("g", "g2", "h"):
        if key in d:
            kw[key] = gauge_from_json(d[key])
    if kw:
        spec = TemperateMapSpec(spec.name, spec.phi, kw.get("g", spec.g), kw.get("g2", spec.g2),
                                kw.get("h", spec.h), spec.on_seq, spec.on_gf)
    return spec


def _carrier_grid() -> list:
    mags = [0.0] + [10.0 ** j for j in np.linspace(-6, 2.5, 18)]
    phases = [cmath.exp(1j * t) for t in (0.0, 0.7, math.pi / 2, 2.2, math.pi, 4.0)]
    return [m * u for m in mags for u in phases]


def check_temperate(spec: TemperateMapSpec, family: Optional[ScaleFamily] = None, probes=None,
                    rtol: float = 1e-12) -> Verdict:
    """Conditions (a) and (b) on a carrier grid, plus moderation/compatibility of the gauges."""
    grid = _carrier_grid()
    if spec.phi is not None:
        for f in grid:
            lhs, rhs = abs(spec.phi(f)), spec.g(abs(f))
            if lhs > rhs * (1 + rtol) + 1e-300:
                return fails(condition="a", f=f, lhs=lhs, rhs=rhs)
        for f in grid[::3]:
            for k in grid[::2]:
                try:
                    lhs = abs(spec.phi(f + k) - spec.phi(f))
                except OverflowError:
                    continue
                rhs = spec.g2(abs(f)) * spec.h(abs(k))
                if lhs > rhs * (1 + 1e-9) + 1e-12 * max(1.0, abs(spec.phi(f))):
                    return fails(condition="b", f=f, k=k, lhs=lhs, rhs=rhs)
    checks = {"g": is_r_moderate(spec.g, family, probes), "g2": is_r_moderate(spec.g2, family, probes),
              "h": is_r_compatible(spec.h, family)}
    for name, v in checks.items():
        if v.failed:
            return fails(condition=f"{name} gauge", witness=v.detail)
    for name, v in checks.items():
        if v.inconclusive:
            return inconclusive(condition=f"{name} gauge", evidence=v.detail)
    return holds(map=spec.name, grid=len(grid), evidence="probe corpus and carrier grid")


def extend(spec: TemperateMapSpec, x, check: bool = True):
    """Apply phi to a representative; the class does not depend on the choice."""
    if check:
        v = check_temperate(spec)
        if not v.held:
            raise PreconditionFailed(f"{spec.name} is not temperate: {v.detail}")
    if isinstance(x, TorusGF):
        if spec.on_gf is None:
            raise Unsupported(f"{spec.name} has no action on generalized functions")
        out = spec.on_gf(x)
        if out.classification() is Classification.UNBOUNDED:
            raise NotModerate("extension left the moderate space")
        return out
    if isinstance(x, GenNumber):
        if x.symbolic is not None and isinstance(x.rep, SymbolicSeq) and spec.on_seq is not None:
            return GenNumber(spec.on_seq(x.rep), x.scale)
        f, phi = x.rep, spec.phi
        return GenNumber(lambda n: phi(f(n) if callable(f) else x.value(n)), x.scale)
    raise TypeError(f"cannot extend over {type(x).__name__}")


def continuity_probe(spec: TemperateMapSpec, x: GenNumber, epsilons=(math.exp(-1), math.exp(-2), math.exp(-4))):
    """||phi(x + k) - phi(x)|| for perturbations k of norm eps."""
    r = x.scale
    base = extend(spec, x, check=False)
    rows = []
    for eps in epsilons:
        k = GenNumber(SymbolicSeq((GrowthClass(s=math.log(eps), scale=r),)), r)
        d = extend(spec, x + k, check=False) - base
        rows.append({"eps": eps, "distance": d.ultranorm().value})
    dists = [row["distance"] for row in rows]
    order = sorted(range(len(epsilons)), key=lambda i: -epsilons[i])
    monotone = all(dists[order[i + 1]] <= dists[order[i]] * (1 + 1e-9) for i in range(len(order) - 1))
    return {"map": spec.name, "rows": rows, "monotone": monotone,
            "result": "holds" if monotone else "fails"}
