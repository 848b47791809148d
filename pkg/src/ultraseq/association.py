"""Association relations: null sequences, s-association, ultrametric balls, pairings."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import AmbiguousDominance, NotModerate, ScaleMismatch
from .gnum import GenNumber
from .growth import GrowthClass, SymbolicSeq
from .loggrowth import INF
from .scales import Scale, ladder
from .torus import CoeffFamily, TorusGF, geometric, monomial, pair
from .ultranorm import ABS, EXACT_RTOL, UltraNormValue
from .verdict import Verdict, all_of, fails, holds, inconclusive

TAIL_THRESHOLD = 1e-3


def default_testset() -> list:
    return [geometric(rho) for rho in (0.3, 0.5, 0.8)] + [monomial(k) for k in range(-8, 9)]


def _null_symbolic(seq: SymbolicSeq) -> Verdict:
    try:
        groups = seq.reduced().live_groups()
    except AmbiguousDominance as exc:
        return inconclusive(reason=str(exc))
    if not groups:
        return holds(limit=0.0)
    lead = groups[0].shape.limit()
    if lead == -INF:
        return holds(limit=0.0)
    return fails(limit=abs(groups[0].amplitude) if lead == 0 else INF)


def _null_tail(f: Callable[[int], complex], lad) -> Verdict:
    tail = [(n, abs(f(n))) for n in lad[-6:]]
    vals = [v for _, v in tail]
    if all(v < TAIL_THRESHOLD for v in vals) and vals[-1] <= vals[0]:
        return holds(tail=tail, evidence="tail")
    if all(v >= TAIL_THRESHOLD for v in vals) and vals[-1] >= TAIL_THRESHOLD * vals[0]:
        return fails(tail=tail, evidence="tail")
    return inconclusive(tail=tail)


def null_test(x: GenNumber, lad=None) -> Verdict:
    """x_n -> 0."""
    if x.symbolic is not None:
        return _null_symbolic(x.symbolic)
    return _null_tail(x.value, [n for n in (lad or ladder()) if n >= x.scale.domain_start])


def _e_s(s: float, r: Scale) -> SymbolicSeq:
    return SymbolicSeq((GrowthClass(s=s, scale=r),))


def s_assoc(x: GenNumber, y: Optional[GenNumber], s: float, lad=None) -> Verdict:
    """(x - y) e^(s/r_n) -> 0."""
    d = x if y is None else x - y
    r = d.scale
    if d.symbolic is not None:
        v = _null_symbolic(d.symbolic * _e_s(s, r))
        return _with(v, s=s)
    lad = [n for n in (lad or ladder()) if n >= r.domain_start]

    def g(n):
        rv = r.eval(n)
        la = d.log_abs(n)
        return 0.0 if la == -INF else math.exp(min(700.0, la + s / rv))
    return _with(_null_tail(g, lad), s=s)


def _with(v: Verdict, **extra) -> Verdict:
    return Verdict(v.state, {**extra, **v.detail})


def strictly_below(v: UltraNormValue, bound: float) -> Verdict:
    """Decide ||.|| < bound; exact values within the relative tolerance count as equal."""
    if v.mode == "exact" or (v.mode == "bounds" and v.low == v.high):
        if v.value < bound and not math.isclose(v.value, bound, rel_tol=EXACT_RTOL):
            return holds(norm=v.value, bound=bound)
        return fails(norm=v.value, bound=bound)
    if v.mode == "inconclusive":
        return inconclusive(norm=v.to_json(), bound=bound)
    if v.high < bound:
        return holds(norm=v.to_json(), bound=bound)
    if v.low >= bound:
        return fails(norm=v.to_json(), bound=bound)
    return inconclusive(norm=v.to_json(), bound=bound)


def strong_assoc(F, G, seminorms: Sequence = (ABS,), r: Optional[Scale] = None, s: float = 0.0,
                 lad=None) -> Verdict:
    """d_{p,r}(F, G) < e^(-s) for every listed seminorm."""
    d = F - G
    r = r or d.scale
    bound = math.exp(-s)
    out = []
    for p in seminorms:
        v = d.ultranorm(r, p, lad)
        out.append(_with(strictly_below(v, bound), seminorm=getattr(p, "name", "sup")))
    return all_of(out, s=s)


def strong_weak_single(x: GenNumber, s: float, lad=None) -> Verdict:
    """|x|_r < e^(-s)."""
    return strictly_below(x.ultranorm(x.scale, ABS, lad), math.exp(-s))


def _pairings(F: TorusGF, G: Optional[TorusGF], D: Iterable[CoeffFamily]):
    d = F if G is None else F - G
    for psi in D:
        try:
            yield psi, pair(d, psi)
        except NotModerate as exc:
            yield psi, exc


def _over_testset(F, G, D, test, **detail) -> Verdict:
    witnesses = []
    worst = holds()
    for psi, x in _pairings(F, G, D):
        if isinstance(x, Exception):
            raise x
        v = test(x)
        if not v.held:
            witnesses.append({"psi": psi.to_json(), **v.to_json()})
            if v.failed or worst.held:
                worst = v
    if worst.failed:
        return fails(witnesses=witnesses, **detail)
    if worst.inconclusive:
        return inconclusive(witnesses=witnesses, **detail)
    return holds(witnesses=[], **detail)


def weak_assoc(F: TorusGF, G: Optional[TorusGF], s: float = 0.0, D=None, lad=None) -> Verdict:
    """<F - G, psi> s-associated to 0 for every psi in D."""
    D = default_testset() if D is None else D
    return _over_testset(F, G, D, lambda x: s_assoc(x, None, s, lad), flavor="weak", s=s)


def strong_weak_assoc(F: TorusGF, G: Optional[TorusGF], s: float = 0.0, D=None, lad=None) -> Verdict:
    """|<F - G, psi>|_r < e^(-s) for every psi in D."""
    D = default_testset() if D is None else D
    return _over_testset(F, G, D, lambda x: strong_weak_single(x, s, lad), flavor="strong-weak", s=s)


@dataclass
class ChainReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    undecided: int = 0
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked": self.checked, "violations": self.violations, "undecided": self.undecided,
                "counts": self.counts, "result": "holds" if self.ok else "fails"}


def chain_on_reps(reps: Iterable[GenNumber], s: float, s_prime: float) -> ChainReport:
    """Check StrongWeak(s) => Weak(s) => StrongWeak(s') on individual pairing values."""
    if not s_prime < s:
        raise ValueError("need s' < s")
    rep = ChainReport(counts={"sw_s": 0, "w_s": 0, "sw_s_prime": 0})
    for x in reps:
        sw = strong_weak_single(x, s)
        w = s_assoc(x, None, s)
        sw2 = strong_weak_single(x, s_prime)
        rep.checked += 1
        if any(v.inconclusive for v in (sw, w, sw2)):
            rep.undecided += 1
        rep.counts["sw_s"] += sw.held
        rep.counts["w_s"] += w.held
        rep.counts["sw_s_prime"] += sw2.held
        if sw.held and w.failed:
            rep.violations.append({"step": "StrongWeak(s) => Weak(s)", "rep": str(x.symbolic)})
        if w.held and sw2.failed:
            rep.violations.append({"step": "Weak(s) => StrongWeak(s')", "rep": str(x.symbolic)})
    return rep


def implication_chain(F: TorusGF, G: Optional[TorusGF], s: float, s_prime: float, D=None) -> ChainReport:
    D = default_testset() if D is None else D
    reps = []
    for psi, x in _pairings(F, G, D):
        if isinstance(x, Exception):
            raise x
        reps.append(x)
    return chain_on_reps(reps, s, s_prime)


def boundary_witness(r: Scale, s: float) -> GenNumber:
    """e^(-s/r_n) / log n: s-associated to 0 although its norm is exactly e^(-s)."""
    return GenNumber(SymbolicSeq((GrowthClass(s=-s, delta=-1.0, scale=r),)), r)


# -- ideals J_M ------------------------------------------------------------------

Predicate = Callable[[GenNumber], Verdict]


def M_null(s: float = 0.0) -> Predicate:
    return lambda x: s_assoc(x, None, s)


def M_ball(radius: float) -> Predicate:
    return lambda x: strictly_below(x.ultranorm(x.scale, ABS), radius)


def M_all() -> Predicate:
    return lambda x: holds()


def j_assoc(F: TorusGF, G: Optional[TorusGF], M: Predicate, D=None) -> Verdict:
    """<F - G, psi> in M for every psi in D."""
    D = default_testset() if D is None else D
    return _over_testset(F, G, D, M, flavor="J")


def check_additivity(M: Predicate, samples: Sequence[GenNumber]) -> Verdict:
    """Sampled check that M is closed under addition (not decidable in general)."""
    inside = [x for x in samples if M(x).held]
    for i, x in enumerate(inside):
        for y in inside[i:]:
            v = M(x + y)
            if v.failed:
                return fails(x=str(x.symbolic), y=str(y.symbolic))
    return holds(pairs=len(inside) * (len(inside) + 1) // 2, evidence="sampled")
