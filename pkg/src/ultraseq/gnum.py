"""r-generalized numbers: moderate sequences modulo negligible ones."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .errors import AmbiguousDominance, NotModerate, ScaleMismatch, Unsupported
from .growth import GrowthClass, SymbolicSeq, as_seq, e_r, seq_from_json
from .loggrowth import INF, LogGrowth
from .scales import Scale, ladder, scale_from_json
from .ultranorm import (ABS, ZERO_CUT, Classification, UltraNormValue, classify_value, norm_estimate,
                        norm_exact, powered_trace)
from .verdict import Verdict, fails, holds, inconclusive

K_MAX = 10**6
Rep = Union[SymbolicSeq, Callable[[int], complex]]


def _const(c: complex, scale: Scale) -> SymbolicSeq:
    if c == 0:
        return SymbolicSeq()
    return SymbolicSeq((GrowthClass(scale=scale).times(c),))


@dataclass(frozen=True)
class GenNumber:
    """Class of a moderate sequence.

    ``rep`` is a SymbolicSeq or a callable n -> value.  ``asymptotic`` may hold a
    symbolic sequence whose terms are within bounded, nonvanishing factors of
    the callable's terms (same norm and same null behaviour); pairings use it.
    """

    rep: Rep
    scale: Scale
    asymptotic: Optional[SymbolicSeq] = field(default=None, compare=False)
    label: Optional[Classification] = field(default=None, compare=False)

    def __post_init__(self):
        if isinstance(self.rep, GrowthClass):
            object.__setattr__(self, "rep", as_seq(self.rep))
        if self.label is None:
            lab = self.classification()
            if lab is Classification.UNBOUNDED:
                raise NotModerate(f"representative is not moderate on {self.scale}")
            object.__setattr__(self, "label", lab)

    @property
    def symbolic(self) -> Optional[SymbolicSeq]:
        if isinstance(self.rep, SymbolicSeq):
            return self.rep
        return self.asymptotic

    @property
    def black_box(self) -> bool:
        return self.symbolic is None

    def value(self, n: int) -> complex:
        return self.rep.eval(n) if isinstance(self.rep, SymbolicSeq) else self.rep(n)

    __call__ = value

    def log_abs(self, n: int) -> float:
        if isinstance(self.rep, SymbolicSeq):
            return self.rep.log_abs(n)
        v = abs(self.rep(n))
        return -INF if v == 0 else math.log(v)

    def ultranorm(self, r: Optional[Scale] = None, p=ABS, lad=None) -> UltraNormValue:
        r = r or self.scale
        sym = self.symbolic
        if sym is not None and p is ABS:
            try:
                v = norm_exact(sym, r)
            except AmbiguousDominance:
                v = UltraNormValue(math.nan, "inconclusive")
            if v.mode != "inconclusive":
                return v
        return norm_estimate(self, r, lad, p)

    def classification(self, lad=None) -> Classification:
        return classify_value(self.ultranorm(self.scale, ABS, lad))

    def _check(self, other: "GenNumber"):
        if self.scale != other.scale:
            raise ScaleMismatch(f"{self.scale} vs {other.scale}")

    def _combine(self, other, sym_op, num_op) -> "GenNumber":
        if not isinstance(other, GenNumber):
            other = GenNumber(_const(complex(other), self.scale), self.scale)
        self._check(other)
        if isinstance(self.rep, SymbolicSeq) and isinstance(other.rep, SymbolicSeq):
            return GenNumber(sym_op(self.rep, other.rep), self.scale)
        asym = None
        if self.symbolic is not None and other.symbolic is not None:
            asym = sym_op(self.symbolic, other.symbolic)
        a, b = self, other
        return GenNumber(lambda n: num_op(a.value(n), b.value(n)), self.scale, asym)

    def __add__(self, other) -> "GenNumber":
        return self._combine(other, lambda x, y: x + y, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other) -> "GenNumber":
        return self._combine(other, lambda x, y: x - y, lambda x, y: x - y)

    def __mul__(self, other) -> "GenNumber":
        if isinstance(other, (int, float, complex)):
            return self.times(other)
        out = self._combine(other, lambda x, y: x * y, lambda x, y: x * y)
        if out.label is Classification.UNBOUNDED:  # pragma: no cover - products of moderate reps stay moderate
            raise NotModerate("product of moderate numbers left the algebra")
        return out

    __rmul__ = __mul__

    def __neg__(self) -> "GenNumber":
        return self.times(-1)

    def times(self, lam: complex) -> "GenNumber":
        if isinstance(self.rep, SymbolicSeq):
            return GenNumber(self.rep.times(lam), self.scale)
        asym = self.asymptotic.times(lam) if self.asymptotic is not None else None
        f = self.rep
        return GenNumber(lambda n: lam * f(n), self.scale, asym)

    def inverse(self) -> "GenNumber":
        """Inverse of a single positive, non-alternating term."""
        rep = self.rep
        if not isinstance(rep, SymbolicSeq) or len(rep.terms) != 1:
            raise Unsupported("inversion needs a single-term symbolic representative")
        t = rep.terms[0]
        if t.alternating or t.sign != 1:
            raise Unsupported("inversion needs a positive representative")
        return GenNumber(as_seq(t.inverse()), self.scale)

    def to_json(self) -> dict:
        d = {"scale": self.scale.to_json(), "class": self.label.value}
        if isinstance(self.rep, SymbolicSeq):
            d["rep"] = self.rep.to_json()
        else:
            d["rep"] = "callable"
        return d


def gen(rep, scale: Optional[Scale] = None, **kw) -> GenNumber:
    if scale is None:
        scale = as_seq(rep).scale if isinstance(rep, (GrowthClass, SymbolicSeq)) else None
        if scale is None:
            raise ValueError("scale required")
    return GenNumber(rep, scale, **kw)


def gn_add(a: GenNumber, b: GenNumber) -> GenNumber:
    return a + b


def gn_mul(a: GenNumber, b: GenNumber) -> GenNumber:
    return a * b


def gn_neg(a: GenNumber) -> GenNumber:
    return -a


def unit_e_r(r: Scale) -> GenNumber:
    return GenNumber(as_seq(e_r(r)), r)


def zero(r: Scale) -> GenNumber:
    return GenNumber(SymbolicSeq(), r)


def const(c: complex, r: Scale) -> GenNumber:
    return GenNumber(_const(c, r), r)


def eq_quotient(a: GenNumber, b: GenNumber, lad=None) -> Verdict:
    """a = b in the quotient iff a - b is negligible."""
    a._check(b)
    lad = lad or ladder()
    d = a - b
    if isinstance(d.rep, SymbolicSeq):
        try:
            v = norm_exact(d.rep, a.scale)
        except AmbiguousDominance as exc:
            return inconclusive(reason=str(exc))
        if v.mode == "inconclusive":
            return inconclusive(**v.detail)
        if v.value == 0:
            return holds(norm=0.0)
        return fails(norm=v.value, witness=_witness(d, a.scale, lad))
    v = d.ultranorm(a.scale, ABS, lad)
    if v.mode != "inconclusive" and v.low > ZERO_CUT:
        return fails(norm=v.value, ci=v.ci, witness=_witness(d, a.scale, lad))
    return inconclusive(estimate=v.to_json(), reason="black-box representative")


def _witness(x, r, lad) -> dict:
    rows = powered_trace(x, r, lad)
    n, pv, powered = rows[-1]
    return {"index": n, "value": pv, "powered": powered}


# -- Maddox-type membership tests ----------------------------------------------


def _symbolic_lg(x) -> Optional[LogGrowth]:
    """Shape of log|x_n| up to a bounded term, or None for black boxes/zero."""
    sym = x.symbolic if isinstance(x, GenNumber) else as_seq(x)
    if sym is None:
        return None
    groups = sym.reduced().live_groups()
    if not groups:
        return LogGrowth.const(-INF)
    return groups[0].shape


def _is_zero(x) -> bool:
    sym = x.symbolic if isinstance(x, GenNumber) else as_seq(x)
    return sym is not None and sym.reduced().is_zero


def _bisect(pred, lo: int, hi: int) -> Optional[int]:
    """Smallest k in [lo, hi] with pred(k), for pred monotone false -> true."""
    if not pred(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def maddox_linf_test(x, r: Scale, k_max: int = K_MAX, lad=None) -> Verdict:
    """exists k: sup |x_n| k^(-1/r_n) < inf.

    Symbolic inputs are decided exactly (the smallest integer k is returned);
    black boxes are scanned on the ladder and can only be suggestive.
    """
    if _is_zero(x):
        return holds(k=1)
    lg = _symbolic_lg(x) if not callable_only(x) else None
    if lg is not None and r.symbolic:
        coef, mono = r.recip
        rec = LogGrowth.term(mono, coef)

        def bounded(k):
            return (lg - rec.scaled(math.log(k))).limit() < INF
        if not (lg - rec.scaled(1e300)).limit() < INF:
            return fails(reason="no k works", norm=INF)
        k = _bisect(bounded, 1, 2**62)
        return holds(k=k, exact=True) if k is not None else fails(reason="k beyond integer range")
    return _maddox_numeric(x, r, k_max, lad, linf=True)


def maddox_c0_test(x, r: Scale, k_max: int = K_MAX, lad=None) -> Verdict:
    """for all k: |x_n| k^(1/r_n) -> 0.  Fails with the smallest failing k."""
    if _is_zero(x):
        return holds(all_k=True)
    lg = _symbolic_lg(x) if not callable_only(x) else None
    if lg is not None and r.symbolic:
        coef, mono = r.recip
        rec = LogGrowth.term(mono, coef)

        def bad(k):
            return (lg + rec.scaled(math.log(k))).limit() != -INF
        k = _bisect(bad, 1, k_max)
        if k is None:
            if lg.limit_over(coef, mono) == -INF:
                return holds(all_k=True, exact=True)
            return holds(k_max=k_max, exact=True)
        return fails(k=k, exact=True)
    return _maddox_numeric(x, r, k_max, lad, linf=False)


def callable_only(x) -> bool:
    return isinstance(x, GenNumber) and x.black_box or callable(x) and not isinstance(
        x, (GenNumber, GrowthClass, SymbolicSeq))


def _maddox_numeric(x, r, k_max, lad, linf: bool) -> Verdict:
    lad = [n for n in (lad or ladder()) if n >= r.domain_start]
    f = x if isinstance(x, GenNumber) else (lambda n: x(n))
    logs = []
    for n in lad:
        v = abs(f(n))
        logs.append((n, r.eval(n), -INF if v == 0 else math.log(v)))
    tail = logs[-6:]
    if linf:
        for k in (2, 10, 100, 1000, k_max):
            vals = [lv - math.log(k) / rn for _, rn, lv in tail if rn > 0]
            if vals and all(b <= a + 1e-9 for a, b in zip(vals, vals[1:])):
                return inconclusive(k_candidate=k, reason="black-box: tail decreasing on ladder")
        return fails(reason="tail increasing for every k tried", k_max=k_max)
    vals = [lv + math.log(k_max) / rn for _, rn, lv in tail if rn > 0]
    if vals and all(b > a for a, b in zip(vals, vals[1:])):
        return fails(k=k_max, reason="tail increasing on ladder")
    return inconclusive(reason="black-box: negligibility is not decidable from finite data")


# -- JSON ----------------------------------------------------------------------


def gen_from_json(d: dict) -> GenNumber:
    scale = scale_from_json(d["scale"]) if "scale" in d else None
    seq = seq_from_json(d.get("rep", d), scale)
    return GenNumber(seq, seq.scale or scale)
