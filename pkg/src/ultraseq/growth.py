"""Exact symbolic sequences.

A :class:`GrowthClass` is the sequence

    sign * (+-1)^n * exp(c0 + s/r_n + gamma*log n + delta*log log n + extra(n))

where ``extra`` is an optional :class:`~ultraseq.loggrowth.LogGrowth` for growth
outside the affine family (e.g. ``-(log n)^2`` for n^(-log n)).  A
:class:`SymbolicSeq` is a finite sum of such terms over one scale.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import AmbiguousDominance, ScaleMismatch, Unsupported
from .loggrowth import INF, LOG_N, LOGLOG_N, LogGrowth, Monomial, unit
from .scales import Scale, make_log_scale, scale_from_json

CANCEL_TOL = 1e-9

_LOG_SQUARED = LogGrowth.term(Monomial.of(log=2.0))


@dataclass(frozen=True)
class GrowthClass:
    c0: float = 0.0
    s: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    scale: Scale = field(default_factory=make_log_scale)
    phase: str = "pos"  # "pos" or "alt"
    sign: complex = 1.0
    extra: LogGrowth = field(default_factory=LogGrowth)

    def __post_init__(self):
        if self.phase not in ("pos", "alt"):
            raise ValueError(f"phase must be 'pos' or 'alt', got {self.phase!r}")
        u = complex(self.sign)
        if abs(abs(u) - 1) > 1e-12:
            raise ValueError("sign must be a unit complex number")
        object.__setattr__(self, "sign", u.real if u.imag == 0 else u)

    @property
    def alternating(self) -> bool:
        return self.phase == "alt"

    def log_growth(self) -> LogGrowth:
        lg = LogGrowth.const(self.c0) + LOG_N.scaled(self.gamma) + LOGLOG_N.scaled(self.delta)
        if self.s:
            if not self.scale.symbolic:
                raise Unsupported(f"scale {self.scale} has no closed-form reciprocal")
            lg = lg + self.scale.reciprocal_lg().scaled(self.s)
        return lg + self.extra

    def log_abs(self, n: int) -> float:
        out = self.c0 + self.gamma * math.log(n)
        if self.delta:
            out += self.delta * math.log(math.log(n))
        if self.s:
            r = self.scale.eval(n)
            out += self.s / r if r > 0 else (INF if self.s > 0 else -INF)
        if not self.extra.is_zero:
            out += self.extra.value(n)
        return out

    def eval(self, n: int) -> complex:
        la = self.log_abs(n)
        mag = 0.0 if la == -INF else (INF if la > 709 else math.exp(la))
        val = self.sign * mag
        if self.alternating and n % 2:
            val = -val
        return val

    __call__ = eval

    def __mul__(self, other: "GrowthClass") -> "GrowthClass":
        return gc_mul(self, other)

    def __neg__(self) -> "GrowthClass":
        return replace(self, sign=-self.sign)

    def times(self, lam: complex) -> "GrowthClass":
        """Multiply by a nonzero scalar."""
        lam = complex(lam)
        if lam == 0:
            raise ValueError("use SymbolicSeq for the zero sequence")
        return replace(self, c0=self.c0 + math.log(abs(lam)), sign=self.sign * lam / abs(lam))

    def inverse(self) -> "GrowthClass":
        return GrowthClass(-self.c0, -self.s, -self.gamma, -self.delta, self.scale, self.phase,
                           1 / self.sign, -self.extra)

    def to_json(self) -> dict:
        d = {"c0": self.c0, "s": self.s, "gamma": self.gamma, "delta": self.delta,
             "phase": self.phase, "scale": self.scale.to_json()}
        if self.sign != 1:
            u = complex(self.sign)
            d["sign"] = u.real if u.imag == 0 else [u.real, u.imag]
        if not self.extra.is_zero:
            d["extra"] = str(self.extra)
        return d

    def __str__(self):
        bits = []
        if self.c0:
            bits.append(f"e^{self.c0:g}")
        if self.s:
            bits.append(f"e^({self.s:g}/r)")
        if self.gamma:
            bits.append(f"n^{self.gamma:g}")
        if self.delta:
            bits.append(f"(log n)^{self.delta:g}")
        if not self.extra.is_zero:
            bits.append(f"exp({self.extra})")
        body = "*".join(bits) or "1"
        pre = "" if self.sign == 1 else ("-" if self.sign == -1 else f"{self.sign}*")
        return pre + ("(-1)^n*" if self.alternating else "") + body


def gc_mul(a: GrowthClass, b: GrowthClass) -> GrowthClass:
    if a.scale != b.scale:
        raise ScaleMismatch(f"{a.scale} vs {b.scale}")
    phase = "alt" if a.alternating != b.alternating else "pos"
    return GrowthClass(a.c0 + b.c0, a.s + b.s, a.gamma + b.gamma, a.delta + b.delta, a.scale,
                       phase, a.sign * b.sign, a.extra + b.extra)


def e_r(scale: Scale) -> GrowthClass:
    """The unit (e^(1/r_n))_n."""
    return GrowthClass(s=1.0, scale=scale)


def n_pow_neg_log(scale: Scale, k: float = 1.0) -> GrowthClass:
    """n^(-k log n) = exp(-k (log n)^2), negligible for the usual scales."""
    return GrowthClass(scale=scale, extra=_LOG_SQUARED.scaled(-k))


def exp_power(scale: Scale, coef: float, p: float = 1.0) -> GrowthClass:
    """exp(coef * n^p)."""
    return GrowthClass(scale=scale, extra=LogGrowth.term(Monomial.of(n=p), coef))


# -- sums ----------------------------------------------------------------------


def _compare_shapes(a: LogGrowth, b: LogGrowth) -> int:
    lim = (a - b).limit()
    if lim == INF:
        return 1
    if lim == -INF:
        return -1
    return 0


@dataclass(frozen=True)
class _Group:
    shape: LogGrowth
    terms: tuple
    A: complex
    B: complex
    exact_zero: bool
    ambiguous: bool

    @property
    def amplitude(self) -> float:
        """limsup of |A + B (-1)^n|."""
        return max(abs(self.A + self.B), abs(self.A - self.B))


def _make_group(terms) -> _Group:
    buckets: dict = {}
    for t in terms:
        key = (round(t.c0, 12), t.alternating, t.log_growth().shape)
        buckets[key] = buckets.get(key, 0) + complex(t.sign)
    live = {k: v for k, v in buckets.items() if abs(v) > 1e-12}
    A = B = 0j
    for (c0, alt, _), u in live.items():
        if alt:
            B += u * math.exp(c0)
        else:
            A += u * math.exp(c0)
    scale_ref = sum(abs(u) * math.exp(k[0]) for k, u in live.items())
    exact_zero = not live
    ambiguous = bool(live) and abs(A) + abs(B) <= CANCEL_TOL * scale_ref
    return _Group(terms[0].log_growth().shape, tuple(terms), A, B, exact_zero, ambiguous)


@dataclass(frozen=True)
class SymbolicSeq:
    """Sum of GrowthClass terms sharing one scale; the empty sum is zero."""

    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        scales = {t.scale for t in self.terms}
        if len(scales) > 1:
            raise ScaleMismatch("terms of a SymbolicSeq must share one scale")

    @classmethod
    def of(cls, *terms: GrowthClass) -> "SymbolicSeq":
        return cls(terms)

    @property
    def scale(self) -> Optional[Scale]:
        return self.terms[0].scale if self.terms else None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "SymbolicSeq":
        return seq_add(self, as_seq(other))

    def __neg__(self) -> "SymbolicSeq":
        return SymbolicSeq(tuple(-t for t in self.terms))

    def __sub__(self, other) -> "SymbolicSeq":
        return self + (-as_seq(other))

    def __mul__(self, other) -> "SymbolicSeq":
        if isinstance(other, (int, float, complex)):
            return self.times(other)
        other = as_seq(other)
        return SymbolicSeq(tuple(gc_mul(a, b) for a in self.terms for b in other.terms))

    __rmul__ = __mul__

    def times(self, lam: complex) -> "SymbolicSeq":
        if lam == 0:
            return SymbolicSeq()
        return SymbolicSeq(tuple(t.times(lam) for t in self.terms))

    @functools.cached_property
    def groups(self) -> tuple:
        """Terms grouped by asymptotic growth, fastest first."""
        if not self.terms:
            return ()
        ordered = sorted(self.terms, key=functools.cmp_to_key(
            lambda a, b: _compare_shapes(a.log_growth().shape, b.log_growth().shape)), reverse=True)
        out, current = [], [ordered[0]]
        for t in ordered[1:]:
            if _compare_shapes(current[0].log_growth().shape, t.log_growth().shape) == 0:
                current.append(t)
            else:
                out.append(_make_group(current))
                current = [t]
        out.append(_make_group(current))
        return tuple(out)

    @property
    def possible_cancellation(self) -> bool:
        return any(g.exact_zero or g.ambiguous for g in self.groups)

    @property
    def ambiguous(self) -> bool:
        """True when some growth group may cancel without being syntactically zero."""
        return any(g.ambiguous for g in self.groups)

    def reduced(self) -> "SymbolicSeq":
        """Drop growth groups whose terms cancel pairwise (identical terms, opposite signs)."""
        keep = [t for g in self.groups if not g.exact_zero for t in g.terms]
        if len(keep) == len(self.terms):
            return self
        return SymbolicSeq(tuple(keep))

    def live_groups(self) -> tuple:
        if self.ambiguous:
            raise AmbiguousDominance("terms of equal growth may cancel")
        return tuple(g for g in self.groups if not g.exact_zero)

    def log_abs(self, n: int) -> float:
        if not self.terms:
            return -INF
        lv = [t.log_abs(n) for t in self.terms]
        top = max(lv)
        if top == INF or top == -INF:
            return top
        acc = 0j
        for t, v in zip(self.terms, lv):
            u = complex(t.sign)
            if t.alternating and n % 2:
                u = -u
            acc += u * math.exp(v - top)
        return top + math.log(abs(acc)) if abs(acc) > 0 else -INF

    def eval(self, n: int) -> complex:
        return sum((t.eval(n) for t in self.terms), 0.0)

    __call__ = eval

    def to_json(self) -> dict:
        return {"terms": [t.to_json() for t in self.terms]}

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"


def as_seq(x) -> SymbolicSeq:
    if isinstance(x, SymbolicSeq):
        return x
    if isinstance(x, GrowthClass):
        return SymbolicSeq((x,))
    raise TypeError(f"cannot use {type(x).__name__} as a symbolic sequence")


def seq_add(a: SymbolicSeq, b: SymbolicSeq) -> SymbolicSeq:
    if a.scale is not None and b.scale is not None and a.scale != b.scale:
        raise ScaleMismatch(f"{a.scale} vs {b.scale}")
    return SymbolicSeq(a.terms + b.terms)


def dominant_term(x) -> GrowthClass:
    """Term of fastest growth (largest leading constant among ties)."""
    x = as_seq(x)
    if x.is_zero:
        raise ValueError("the zero sequence has no dominant term")
    if x.possible_cancellation:
        raise AmbiguousDominance("sum may cancel; no dominant term")
    return max(x.groups[0].terms, key=lambda t: t.c0)


# -- JSON ----------------------------------------------------------------------

_PHASES = {"pos": ("pos", 1.0), "neg": ("pos", -1.0), "alt": ("alt", 1.0), "negalt": ("alt", -1.0)}


def growth_from_json(d: dict, scale: Optional[Scale] = None) -> GrowthClass:
    if scale is None:
        scale = scale_from_json(d["scale"]) if "scale" in d else make_log_scale()
    phase, sign = _PHASES[d.get("phase", "pos")]
    if "sign" in d:
        sv = d["sign"]
        sign = complex(*sv) if isinstance(sv, list) else float(sv)
    extra = LogGrowth()
    if "log2" in d:  # coefficient of (log n)^2
        extra = extra + _LOG_SQUARED.scaled(float(d["log2"]))
    if "exp" in d:  # {"coef": c, "p": p} for exp(c n^p)
        extra = extra + LogGrowth.term(Monomial.of(n=float(d["exp"].get("p", 1))), float(d["exp"]["coef"]))
    if "const" in d:
        v = complex(d["const"]) if not isinstance(d["const"], list) else complex(*d["const"])
        return GrowthClass(c0=math.log(abs(v)), scale=scale, phase=phase,
                           sign=sign * v / abs(v), extra=extra)
    return GrowthClass(float(d.get("c0", 0)), float(d.get("s", 0)), float(d.get("gamma", 0)),
                       float(d.get("delta", 0)), scale, phase, sign, extra)


def seq_from_json(d: dict, scale: Optional[Scale] = None) -> SymbolicSeq:
    if scale is None and "scale" in d:
        scale = scale_from_json(d["scale"])
    if "terms" in d:
        return SymbolicSeq(tuple(growth_from_json(t, scale or make_log_scale()) for t in d["terms"]))
    if d.get("zero"):
        return SymbolicSeq()
    return SymbolicSeq((growth_from_json(d, scale),))


__all__ = [
    "GrowthClass", "SymbolicSeq", "gc_mul", "seq_add", "dominant_term", "e_r", "n_pow_neg_log",
    "exp_power", "as_seq", "growth_from_json", "seq_from_json", "unit",
]
