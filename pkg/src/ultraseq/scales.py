"""Weight scales r = (r_n), families of scales and asymptotic scales.

A scale with a closed form stores its reciprocal ``1/r_n`` as ``coef * M(n)``
for a monomial ``M`` of :mod:`ultraseq.loggrowth`; every exact limit in the
package is taken against that reciprocal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DegenerateScale, InvalidParameter
from .loggrowth import INF, LOG_N, LogGrowth, Monomial, unit
from .verdict import Verdict, fails, holds, inconclusive

DEFAULT_MAX_EXP = 20


def ladder(max_exp: int = DEFAULT_MAX_EXP, start: int = 2) -> tuple:
    """Geometric index ladder 2, 4, ..., 2**max_exp (indices below start dropped)."""
    return tuple(2**j for j in range(1, max_exp + 1) if 2**j >= start)


@dataclass(frozen=True)
class Scale:
    kind: str
    m: Optional[float] = None
    recip: Optional[tuple] = None  # (coef, Monomial) with 1/r_n = coef * M(n)
    domain_start: int = 2
    name: str = ""
    fn: Optional[Callable[[int], float]] = field(default=None, compare=False, repr=False)

    def eval(self, n: int) -> float:
        if self.kind == "egorov":
            return 1.0 if n <= self.m else 0.0
        if self.fn is not None:
            return float(self.fn(n))
        coef, mono = self.recip
        rv = coef * mono.value(n)
        return 0.0 if rv == INF else 1.0 / rv

    __call__ = eval

    @property
    def symbolic(self) -> bool:
        return self.recip is not None

    @property
    def L(self) -> Optional[float]:
        """lim r_n log n, or None when no closed form is known."""
        if self.kind == "egorov":
            return 0.0
        if self.recip is None:
            return None
        return LOG_N.limit_over(*self.recip)

    def reciprocal_lg(self) -> LogGrowth:
        """1/r_n as a LogGrowth expression."""
        coef, mono = self.recip
        return LogGrowth.term(mono, coef)

    def scaled(self, c: float) -> "Scale":
        """The scale n -> c * r_n."""
        if c <= 0:
            raise InvalidParameter("scale factor must be positive")
        if self.recip is None:
            base = self
            return Scale("custom", name=f"{c:g}*{self.name}", fn=lambda n: c * base.eval(n),
                         domain_start=self.domain_start)
        coef, mono = self.recip
        return Scale("scaled", m=self.m, recip=(coef / c, mono), domain_start=self.domain_start,
                     name=f"{c:g}*{self.name}")

    def to_json(self) -> dict:
        d = {"kind": self.kind, "name": self.name}
        if self.m is not None:
            d["m"] = self.m
        return d

    def __str__(self):
        return self.name or self.kind


def make_log_scale() -> Scale:
    return Scale("log", recip=(1.0, unit("log")), domain_start=2, name="1/log n")


def make_power_scale(m: float) -> Scale:
    if not m > 0:
        raise InvalidParameter(f"power scale needs m > 0, got {m}")
    return Scale("power", m=float(m), recip=(1.0, Monomial.of(n=1.0 / m)), domain_start=1,
                 name=f"n^(-1/{m:g})")


def make_log_power_scale(k: float) -> Scale:
    """r_n = (log n)^(-k)."""
    if not k > 0:
        raise InvalidParameter("k must be positive")
    return Scale("logpow", m=float(k), recip=(1.0, Monomial.of(log=k)), domain_start=2,
                 name=f"(log n)^(-{k:g})")


def scale_from_monomial(coef: float, mono: Monomial, name: str = "") -> Scale:
    if coef <= 0 or mono.growth() <= 0:
        raise DegenerateScale("reciprocal must be a positive monomial tending to infinity")
    return Scale("monomial", recip=(float(coef), mono), domain_start=3, name=name or f"1/({coef:g}*{mono})")


def custom_scale(fn: Callable[[int], float], name: str = "custom", domain_start: int = 2) -> Scale:
    """A scale known only through its values; exact norms are unavailable."""
    return Scale("custom", fn=fn, name=name, domain_start=domain_start)


def egorov_row(m: int) -> Scale:
    return Scale("egorov", m=int(m), domain_start=1, name=f"egorov[{m}]")


@dataclass(frozen=True)
class ScaleFamily:
    """Family of scales (r^m)_{m>=1}.

    ``direction`` is "I" when r^m = O(r^(m+1)) and "II" when r^(m+1) = O(r^m).
    ``tail`` says how rows beyond the inspected window behave: "equivalent"
    (all rows pairwise equivalent, so one row stands for all), "escalating"
    (reciprocals eventually dominate every fixed monomial) or "egorov".
    """

    row: Callable[[int], Scale] = field(compare=False)
    direction: str
    tail: str
    name: str = ""
    max_row: Optional[int] = None

    def rows(self, m_max: int) -> list:
        top = m_max if self.max_row is None else min(m_max, self.max_row)
        return [self.row(m) for m in range(1, top + 1)]


def make_egorov_family() -> ScaleFamily:
    return ScaleFamily(egorov_row, "I", "egorov", name="egorov")


def make_colombeau_family() -> ScaleFamily:
    """Rows r^m = (1/m) * (1/log n)."""
    log = make_log_scale()
    return ScaleFamily(lambda m: log.scaled(1.0 / m), "II", "equivalent", name="colombeau")


def make_power_family() -> ScaleFamily:
    """Rows r^m = n^(-1/m); not pairwise equivalent."""
    return ScaleFamily(make_power_scale, "I", "escalating-down", name="power")


def constant_family(r: Scale) -> ScaleFamily:
    return ScaleFamily(lambda m: r, "II", "equivalent", name=f"const[{r}]")


def check_family_direction(fam: ScaleFamily, m_max: int = 6, lad=None) -> Verdict:
    """Verify condition (I) or (II) on consecutive rows."""
    out = []
    for m in range(1, m_max):
        a, b = fam.row(m), fam.row(m + 1)
        v = is_big_O(a, b, lad) if fam.direction == "I" else is_big_O(b, a, lad)
        out.append(v)
        if not v.held:
            return fails(row=m, check=v.detail) if v.failed else inconclusive(row=m, check=v.detail)
    return holds(rows=m_max)


def is_big_O(s: Scale, r: Scale, lad=None) -> Verdict:
    """Decide s = O(r); when both have closed forms the ratio limit is exact."""
    lad = lad or ladder()
    if s.symbolic and r.symbolic:
        (cs, ms), (cr, mr) = s.recip, r.recip
        g = (mr / ms).growth()
        if g < 0:
            return holds(ratio_limit=0.0)
        if g == 0:
            return holds(ratio_limit=cr / cs, equivalent=cr / cs)
        n = max(lad)
        return fails(ratio_limit=INF, index=n, ratio=s.eval(n) / r.eval(n))
    ratios = []
    for n in lad:
        if n < max(s.domain_start, r.domain_start):
            continue
        sv, rv = s.eval(n), r.eval(n)
        if rv == 0:
            if sv > 0:
                return fails(index=n, s=sv, r=rv)
            continue
        ratios.append((n, sv / rv))
    if s.kind == "egorov" and r.kind == "egorov":
        return holds(ratio_sup=max((q for _, q in ratios), default=0.0))
    return inconclusive(ratio_trace=ratios[-6:])


def equivalence_constant(s: Scale, r: Scale) -> Optional[float]:
    """C with s_n / r_n -> C in (0, inf), if the closed forms establish it."""
    v = is_big_O(s, r)
    w = is_big_O(r, s)
    if v.held and w.held and "equivalent" in v.detail:
        return v.detail["equivalent"]
    return None


# -- asymptotic scales ---------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticScale:
    """Scale (a_m)_m given through log a_m(n) as an exact LogGrowth.

    ``kind`` is "polynomial", "exp-iter" or "infra-exp"; the last one is indexed
    by a real sigma and is used by the second-kind algebras.
    """

    kind: str
    log_a: Callable[[float], LogGrowth] = field(compare=False)
    M_witness: Callable[[int], int] = field(compare=False)
    real_indexed: bool = False
    m_range: int = 8

    def a(self, m: float) -> Callable[[int], float]:
        lg = self.log_a(m)

        def value(n):
            v = lg.value(n)
            return 0.0 if v == -INF else (INF if v > 709 else math.exp(v))
        return value

    def check_axioms(self, ms=None) -> Verdict:
        """a_(m+1) = o(a_m), a_(-m) a_m = 1 and a_M = o(a_m^2), exactly."""
        ms = list(ms if ms is not None else range(-self.m_range // 2, self.m_range // 2 + 1))
        for m in ms:
            try:
                lm, lnext, lneg = self.log_a(m), self.log_a(m + 1), self.log_a(-m)
            except ValueError:
                continue
            if not (lnext - lm).tends_to_minus_inf():
                return fails(axiom="decreasing", m=m)
            if not (lneg + lm).is_zero:
                return fails(axiom="inverse", m=m)
            big_m = self.M_witness(m)
            if not (self.log_a(big_m) - lm.scaled(2)).tends_to_minus_inf():
                return fails(axiom="square", m=m, M=big_m)
        return holds(checked=ms)


def _exp_iter_log(m: float) -> LogGrowth:
    m = int(m)
    if m == 0:
        return LogGrowth()
    k = abs(m) - 1  # |log a_m| = exp^(|m|-1)(n)
    names = ["n", "exp1", "exp2", "exp3"]
    if k >= len(names):
        raise ValueError(f"exp^{k} is outside the supported basis")
    sign = -1.0 if m > 0 else 1.0
    return LogGrowth.term(unit(names[k]), sign)


def polynomial_asymptotic_scale() -> AsymptoticScale:
    """a_m(n) = n^(-m)."""
    return AsymptoticScale("polynomial", lambda m: LogGrowth.term(unit("log"), -float(m)),
                           lambda m: 2 * m + 1)


def exp_iter_asymptotic_scale() -> AsymptoticScale:
    """a_m = 1/exp^m (m-fold iterated exponential), a_0 = 1."""
    return AsymptoticScale("exp-iter", _exp_iter_log, lambda m: m + 1, m_range=6)


def infra_exp_scale() -> AsymptoticScale:
    """a_sigma(n) = exp(-n sigma), indexed by real sigma."""
    return AsymptoticScale("infra-exp", lambda s: LogGrowth.term(unit("n"), -float(s)),
                           lambda m: 2 * m + 1, real_indexed=True)


ASYMPTOTIC_KINDS = {
    "polynomial": polynomial_asymptotic_scale,
    "exp-iter": exp_iter_asymptotic_scale,
    "infra-exp": infra_exp_scale,
}


def scale_from_asymptotic(a: AsymptoticScale, m: float, lad=None) -> Scale:
    """r_n = 1 / |log a_m(n)|."""
    try:
        lg = a.log_a(m)
    except ValueError as exc:
        raise DegenerateScale(str(exc)) from exc
    if len(lg.terms) != 1 or lg.terms[0][0].growth() <= 0:
        raise DegenerateScale(f"|log a_{m}| is not a single monomial tending to infinity")
    mono, coef = lg.terms[0]
    for n in lad or ladder(8):
        if n >= 3 and abs(lg.value(n)) == 0:
            raise DegenerateScale(f"a_{m}({n}) = 1")
    return Scale("asymptotic", m=float(m), recip=(abs(coef), mono), domain_start=2,
                 name=f"1/|log a_{m:g}| ({a.kind})")


def asymptotic_family(a: AsymptoticScale) -> ScaleFamily:
    """Rows r^m = 1/|log a_m| for m >= 1 (or sigma = 1/m for real-indexed scales)."""
    if a.real_indexed:
        return ScaleFamily(lambda m: scale_from_asymptotic(a, 1.0 / m), "I", "equivalent",
                           name=f"asym[{a.kind}]")
    if a.kind == "exp-iter":
        return ScaleFamily(lambda m: scale_from_asymptotic(a, m), "II", "escalating",
                           name="asym[exp-iter]", max_row=4)
    return ScaleFamily(lambda m: scale_from_asymptotic(a, m), "II", "equivalent",
                       name=f"asym[{a.kind}]")


# -- JSON ----------------------------------------------------------------------


def scale_from_json(d: dict) -> Scale:
    kind = d.get("kind", "log")
    if kind == "log":
        return make_log_scale()
    if kind == "power":
        return make_power_scale(float(d.get("m", 1)))
    if kind == "logpow":
        return make_log_power_scale(float(d.get("m", 2)))
    if kind == "egorov":
        return egorov_row(int(d.get("m", 1)))
    if kind == "asymptotic":
        if "sigma" in d:
            a = ASYMPTOTIC_KINDS[d.get("family", "infra-exp")]()
            return scale_from_asymptotic(a, float(d["sigma"]))
        a = ASYMPTOTIC_KINDS[d.get("family", "polynomial")]()
        return scale_from_asymptotic(a, int(d.get("m", 1)))
    raise InvalidParameter(f"unknown scale kind {kind!r}")
