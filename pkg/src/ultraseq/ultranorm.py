"""Ultranorms ||f||_{p,r} = limsup p(f_n)^(r_n): exact, estimated, and derived notions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AmbiguousDominance, NotCauchy, PreconditionFailed, Unsupported
from .growth import GrowthClass, SymbolicSeq, as_seq
from .loggrowth import INF
from .scales import Scale, equivalence_constant, ladder
from .verdict import Verdict, fails, holds, inconclusive

EXACT_RTOL = 1e-9
TAIL_WINDOW = 6
ZERO_CUT = 1e-3
INF_CUT = 1e3


@dataclass(frozen=True)
class UltraNormValue:
    """Value in [0, inf] with provenance.

    mode is "exact" (closed form), "bounds" (rigorous interval ci), "estimated"
    (numeric tail extrapolation with heuristic ci) or "inconclusive".
    """

    value: float
    mode: str = "exact"
    ci: Optional[tuple] = None
    detail: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def high(self) -> float:
        return self.ci[1] if self.ci else self.value

    @property
    def low(self) -> float:
        return self.ci[0] if self.ci else self.value

    def to_json(self) -> dict:
        d = {"value": _num(self.value), "mode": self.mode}
        if self.ci:
            d["ci"] = [_num(self.ci[0]), _num(self.ci[1])]
        return d


def _num(x):
    if x == INF:
        return "inf"
    return float(x)


@dataclass(frozen=True)
class Seminorm:
    name: str
    apply: Callable = field(compare=False)
    submult_constant: Optional[float] = None

    def __call__(self, x):
        return self.apply(x)


ABS = Seminorm("abs", lambda x: abs(x), 1.0)


def _expo(lim: float) -> float:
    if lim == INF:
        return INF
    if lim == -INF:
        return 0.0
    return math.exp(lim)


def norm_exact(f, r: Scale) -> UltraNormValue:
    """Closed-form ultranorm of a symbolic sequence under the absolute value."""
    f = as_seq(f).reduced()
    if r.kind == "egorov":
        # p^0 = 1 for p > 0 and 0^0 = 0: only eventually-zero sequences vanish
        f.live_groups()
        return UltraNormValue(0.0 if f.is_zero else 1.0)
    if not r.symbolic:
        return UltraNormValue(math.nan, "inconclusive", detail={"reason": "scale has no closed form"})
    try:
        groups = f.live_groups()
        shapes = [g.shape for g in groups]
    except Unsupported as exc:
        return UltraNormValue(math.nan, "inconclusive", detail={"reason": str(exc)})
    if not groups:
        return UltraNormValue(0.0)
    coef, mono = r.recip
    return UltraNormValue(max(_expo(s.limit_over(coef, mono)) for s in shapes))


def _log_p(f, n: int, p: Seminorm) -> float:
    if p is ABS and hasattr(f, "log_abs"):
        return f.log_abs(n)
    try:
        v = p(f(n))
    except (OverflowError, ValueError, ZeroDivisionError) as exc:
        raise ArithmeticError(f"evaluation failed at n={n}: {exc}") from exc
    if v == 0:
        return -INF
    if v == INF:
        return INF
    return math.log(v)


def powered_trace(f, r: Scale, lad=None, p: Seminorm = ABS) -> list:
    """Rows (n, p(f_n), p(f_n)^(r_n)) over the ladder."""
    lad = lad or ladder()
    rows = []
    for n in lad:
        if n < r.domain_start:
            continue
        lp = _log_p(f, n, p)
        rn = r.eval(n)
        pv = _expo(lp)
        if rn == 0:
            powered = 0.0 if lp == -INF else 1.0
        else:
            powered = _expo(rn * lp) if abs(lp) != INF else (0.0 if lp < 0 else INF)
        rows.append((n, pv, powered))
    return rows


def _fit_intercept(r: np.ndarray, y: np.ndarray) -> tuple:
    lr = np.log(1.0 / r)
    cols = [np.ones_like(r), r, r * lr, r * np.log(np.maximum(lr, 1e-300)), r * lr**2]
    X = np.stack(cols[: max(1, min(len(cols), len(r) - 1))], axis=1)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = float(np.max(np.abs(X @ coef - y))) if len(y) else 0.0
    return float(coef[0]), resid


def norm_estimate(f, r: Scale, lad=None, p: Seminorm = ABS, tol: float = 0.05) -> UltraNormValue:
    """Numeric limsup estimate from the ladder tail.

    r_n log p(f_n) is fitted on the last ladder points by a + b r + c r log(1/r)
    + d r log log(1/r) + e r log(1/r)^2, which is exact for the symbolic families
    on log and power scales; the intercept a is the log of the estimate.
    Sub-window refits drop the last column, so their spread also measures how
    much the answer leans on it, and that spread sets the interval.
    """
    lad = lad or ladder()
    try:
        rows = []
        for n in lad:
            if n < r.domain_start:
                continue
            rows.append((n, r.eval(n), _log_p(f, n, p)))
    except ArithmeticError as exc:
        return UltraNormValue(math.nan, "inconclusive", detail={"reason": str(exc)})
    tail = rows[-TAIL_WINDOW:]
    if not tail:
        return UltraNormValue(math.nan, "inconclusive", detail={"reason": "empty ladder"})
    if all(rn == 0 for _, rn, _ in tail):
        nonzero = any(lp > -INF for _, _, lp in tail)
        return UltraNormValue(1.0 if nonzero else 0.0, "estimated", (1.0, 1.0) if nonzero else (0.0, 0.0))
    ys = []
    for _, rn, lp in tail:
        ys.append(rn * lp if abs(lp) != INF else lp)
    powered = [_expo(y) for y in ys]
    if all(v < ZERO_CUT for v in powered):
        return UltraNormValue(0.0, "estimated", (0.0, max(powered)))
    if all(v > INF_CUT for v in powered):
        return UltraNormValue(INF, "estimated", (min(powered), INF))
    if any(abs(y) == INF for y in ys):
        return UltraNormValue(max(powered), "inconclusive", (min(powered), max(powered)),
                              {"reason": "tail mixes zero/infinite values"})
    rr = np.array([rn for _, rn, _ in tail])
    yy = np.array(ys)
    a_main, resid = _fit_intercept(rr, yy)
    alts = [a_main]
    if len(tail) >= 5:
        alts.append(_fit_intercept(rr[1:], yy[1:])[0])
        alts.append(_fit_intercept(rr[:-1], yy[:-1])[0])
    spread = max(alts) - min(alts)
    pad = max(1e-6, 10 * resid, spread)
    ci = (math.exp(min(alts) - pad), math.exp(max(alts) + pad))
    mode = "inconclusive" if spread > tol else "estimated"
    return UltraNormValue(math.exp(a_main), mode, ci, {"tail": [(n, v) for (n, _, _), v in zip(tail, powered)]})


def _is_symbolic(f) -> bool:
    return isinstance(f, (GrowthClass, SymbolicSeq))


def norm(f, r: Scale, p: Seminorm = ABS, lad=None) -> UltraNormValue:
    """Dispatch to the exact engine when possible, otherwise estimate."""
    if hasattr(f, "ultranorm"):
        return f.ultranorm(r, p, lad)
    if _is_symbolic(f) and p is ABS:
        v = norm_exact(f, r)
        if v.mode != "inconclusive":
            return v
    return norm_estimate(f, r, lad, p)


def distance(f, g, r: Scale, p: Seminorm = ABS, lad=None) -> UltraNormValue:
    """d_{p,r}(f, g) = ||f - g||_{p,r}."""
    if _is_symbolic(f) and _is_symbolic(g):
        return norm(as_seq(f) - as_seq(g), r, p, lad)
    if hasattr(f, "__sub__") and hasattr(f, "ultranorm"):
        return (f - g).ultranorm(r, p, lad)
    return norm_estimate(lambda n: f(n) - g(n), r, lad, p)


class Classification(enum.Enum):
    NEGLIGIBLE = "Negligible"
    MODERATE = "Moderate"  # moderate and not negligible
    UNBOUNDED = "Unbounded"
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_moderate(self) -> bool:
        return self in (Classification.NEGLIGIBLE, Classification.MODERATE)


def classify_value(v: UltraNormValue) -> Classification:
    if v.mode == "inconclusive":
        return Classification.INCONCLUSIVE
    if v.mode == "bounds":
        if v.high == 0:
            return Classification.NEGLIGIBLE
        if v.low == INF:
            return Classification.UNBOUNDED
        if v.high < INF and v.low > 0:
            return Classification.MODERATE
        return Classification.INCONCLUSIVE
    if v.value == 0:
        return Classification.NEGLIGIBLE
    if v.value == INF:
        return Classification.UNBOUNDED
    return Classification.MODERATE


def classify(f, r: Scale, p: Seminorm = ABS, lad=None) -> Classification:
    return classify_value(norm(f, r, p, lad))


def close(a: float, b: float, rtol: float = EXACT_RTOL) -> bool:
    if a == b:
        return True
    if INF in (a, b):
        return False
    return abs(a - b) <= rtol * max(abs(a), abs(b))


def scale_power_law(f, r: Scale, s: Scale, C: float) -> Verdict:
    """Check ||f||_s = ||f||_r ** C for equivalent scales s ~ C r."""
    c = equivalence_constant(s, r)
    if c is None or not close(c, C):
        raise PreconditionFailed(f"s/r does not tend to {C} (found {c})")
    ns, nr = norm_exact(f, s), norm_exact(f, r)
    if "inconclusive" in (ns.mode, nr.mode):
        return inconclusive(norm_s=ns.value, norm_r=nr.value)
    target = nr.value ** C if nr.value not in (0.0, INF) else nr.value
    if close(ns.value, target):
        return holds(norm_s=ns.value, norm_r=nr.value, C=C)
    return fails(norm_s=ns.value, norm_r_pow_C=target, C=C)


# -- diagonal construction for completeness ------------------------------------


@dataclass
class DiagonalResult:
    limit: Callable[[int], complex]
    m_mu: list
    n_mu: list
    tail_member: object
    distances: dict  # mu -> list of (m, UltraNormValue)

    def __call__(self, n):
        return self.limit(n)


def _diff(a, b):
    if _is_symbolic(a) and _is_symbolic(b):
        return as_seq(a) - as_seq(b)
    return lambda n: a(n) - b(n)


def _dist(a, b, r, p, lad):
    return norm(_diff(a, b), r, p, lad)


def diagonal_limit(family: Callable[[int], object], seminorms: Sequence[Seminorm], r: Scale,
                   lad=None, mu_max: int = 8, m_budget: int = 24, span: int = 6) -> DiagonalResult:
    """Diagonal sequence of a Cauchy family, on a finite budget.

    For mu = 1..mu_max a threshold m_mu is chosen with d(f^k, f^l) < 2^-mu for
    k, l in [m_mu, m_mu + span], and n_mu is the first ladder index from which
    the powered differences stay below 2^-mu.  The limit takes f^(m_mu(n)) at
    index n.  Beyond the ladder it coincides with the last selected member, so
    distances to it are computed with that member when the family is symbolic.
    """
    lad = tuple(n for n in (lad or ladder()) if n >= r.domain_start)
    sn = list(seminorms) or [ABS]
    m_mu, n_mu = [], []
    m_lo = 1
    for mu in range(1, mu_max + 1):
        p = sn[min(mu, len(sn)) - 1]
        bound = 2.0 ** -mu
        found = None
        for m0 in range(m_lo, m_budget + 1):
            worst = None
            for k in range(m0, m0 + span + 1):
                d = _dist(family(k), family(m0), r, p, lad)
                if not (d.high < bound):
                    worst = (k, d)
                    break
            if worst is None:
                found = m0
                break
        if found is None:
            raise NotCauchy(f"no threshold for 2^-{mu} within budget {m_budget}",
                            {"mu": mu, "m": worst[0], "distance": worst[1].to_json()})
        m_mu.append(found)
        m_lo = found
        n_first = None
        members = [family(k) for k in range(found, found + span + 1)]
        base = family(found)
        for i, n in enumerate(lad):
            ok = True
            for g in members:
                for n2 in lad[i:]:
                    rn = r.eval(n2)
                    v = p(_value(g, n2) - _value(base, n2))
                    if v > 0 and (rn == 0 or v ** rn >= bound):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                n_first = n
                break
        n_prev = n_mu[-1] if n_mu else lad[0]
        n_mu.append(max(n_prev, n_first) if n_first is not None else INF)

    def mu_bar(n):
        best = 0
        for i, nm in enumerate(n_mu):
            if nm <= n:
                best = i
        return best

    def limit(n):
        return _value(family(m_mu[mu_bar(n)]), n)

    tail_member = family(m_mu[-1])
    distances = {}
    for mu in range(1, mu_max + 1):
        ms = range(m_mu[mu - 1], m_mu[mu - 1] + 3)
        p = sn[min(mu, len(sn)) - 1]
        distances[mu] = [(m, _dist(family(m), tail_member, r, p, lad)) for m in ms]
    return DiagonalResult(limit, m_mu, n_mu, tail_member, distances)


def _value(f, n):
    return f.eval(n) if hasattr(f, "eval") else f(n)
