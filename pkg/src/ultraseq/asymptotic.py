"""Asymptotic algebras: family-based classes, O/o classes over a_m, second-kind algebras."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import AmbiguousDominance
from .growth import SymbolicSeq, as_seq
from .loggrowth import INF, LogGrowth, Monomial
from .scales import (AsymptoticScale, Scale, ScaleFamily, asymptotic_family, infra_exp_scale,
                     scale_from_asymptotic, scale_from_monomial)
from .ultranorm import Classification, norm_exact
from .verdict import Verdict, fails, holds, inconclusive

M_MAX = 8
EXP_ITER_TOP = 4  # |m| - 1 <= 3: exp3 is the last basis function


@dataclass(frozen=True)
class FamilyClassification:
    moderate: Verdict
    negligible: Verdict
    rows: tuple = ()

    def to_json(self) -> dict:
        return {"moderate": self.moderate.to_json(), "negligible": self.negligible.to_json(),
                "rows": [[m, c.value] for m, c in self.rows]}


def _row_label(f: SymbolicSeq, r: Scale) -> Classification:
    v = norm_exact(f, r)
    if v.mode == "inconclusive":
        return Classification.INCONCLUSIVE
    if v.value == 0:
        return Classification.NEGLIGIBLE
    return Classification.UNBOUNDED if v.value == INF else Classification.MODERATE


_LIMIT_ROW = scale_from_monomial(1.0, Monomial.of(n=1e-9), name="n^(-eps)")


def _beyond_window(f: SymbolicSeq, fam: ScaleFamily) -> tuple:
    """(moderate, negligible) membership for rows past the inspected window, exactly."""
    if fam.tail == "escalating":
        # every basis expression is dominated by the next iterated exponential
        return True, f.reduced().is_zero
    if fam.tail == "escalating-down":
        lab = _row_label(f, _LIMIT_ROW)
        return lab.is_moderate, lab is Classification.NEGLIGIBLE
    return None, None


def family_classify(f, fam: ScaleFamily, m_max: int = M_MAX) -> FamilyClassification:
    """Moderate/negligible w.r.t. a family, with the intersection/union logic of its direction.

    Condition (I): moderate at every row, negligible at some row.
    Condition (II): moderate at some row, negligible at every row.
    """
    f = as_seq(f)
    if fam.tail == "egorov":
        zero = f.reduced().is_zero
        neg = holds(rule="eventually zero") if zero else fails(rule="eventually zero")
        return FamilyClassification(holds(rule="egorov rows bound nothing"), neg)
    try:
        rows = tuple((m, _row_label(f, r)) for m, r in enumerate(fam.rows(m_max), start=1))
    except AmbiguousDominance as exc:
        v = inconclusive(reason=str(exc))
        return FamilyClassification(v, v)
    if any(c is Classification.INCONCLUSIVE for _, c in rows):
        v = inconclusive(rows=[(m, c.value) for m, c in rows])
        return FamilyClassification(v, v, rows)
    mod_rows = [m for m, c in rows if c.is_moderate]
    neg_rows = [m for m, c in rows if c is Classification.NEGLIGIBLE]
    far_mod, far_neg = _beyond_window(f, fam)
    if fam.direction == "II":
        if mod_rows:
            mod = holds(row=mod_rows[0])
        elif far_mod:
            mod = holds(row="beyond window")
        else:
            mod = fails(rows=len(rows))
        all_neg = len(neg_rows) == len(rows) and far_neg is not False
        neg = holds(rows="all") if all_neg else fails(row=next((m for m, c in rows if c is not Classification.NEGLIGIBLE), "beyond window"))
    else:
        all_mod = len(mod_rows) == len(rows) and far_mod is not False
        mod = holds(rows="all") if all_mod else fails(row=next((m for m, c in rows if not c.is_moderate), "beyond window"))
        if neg_rows:
            neg = holds(row=neg_rows[0])
        elif far_neg:
            neg = holds(row="beyond window")
        else:
            neg = fails(rows=len(rows))
    return FamilyClassification(mod, neg, rows)


# -- the algebras A_(a) ------------------------------------------------------------


@dataclass(frozen=True)
class AClass:
    kind: str  # "InAlgebra", "InIdeal" or "Neither"
    m: Optional[int] = None

    @property
    def in_algebra(self) -> bool:
        return self.kind in ("InAlgebra", "InIdeal")

    @property
    def in_ideal(self) -> bool:
        return self.kind == "InIdeal"

    def to_json(self) -> dict:
        return {"class": self.kind, "m": self.m}


def _lead(f: SymbolicSeq) -> Optional[LogGrowth]:
    groups = f.reduced().live_groups()
    return groups[0].shape if groups else None


def _is_O(lg: LogGrowth, a: AsymptoticScale, m: int) -> bool:
    """|f| = O(a_m) for |f| within bounded factors of exp(lg)."""
    if a.kind == "exp-iter" and abs(m) > EXP_ITER_TOP:
        # log a_m = -+exp^(|m|-1)(n) outgrows every basis expression
        return m < 0
    return (lg - a.log_a(m)).limit() < INF


def _is_o_all(lg: LogGrowth, a: AsymptoticScale) -> bool:
    """|f| = o(a_m) for every integer m."""
    if a.kind == "polynomial":
        return lg.limit_over(1.0, Monomial.of(log=1.0)) == -INF
    if a.kind == "exp-iter":
        return False  # would need lg <= -exp^k(n) for every k
    raise ValueError(f"no ideal rule for {a.kind}")


def classify_A(f, a: AsymptoticScale) -> AClass:
    """InAlgebra(m) with the largest m such that f = O(a_m); InIdeal if f = o(a_m) for all m."""
    f = as_seq(f)
    lg = _lead(f)
    if lg is None or _is_o_all(lg, a):
        return AClass("InIdeal")
    if a.kind == "polynomial":
        lam = lg.limit_over(1.0, Monomial.of(log=1.0))
        if lam == INF:
            return AClass("Neither")
        m = math.floor(-lam) + 1
        while not _is_O(lg, a, m):
            m -= 1
        return AClass("InAlgebra", m)
    top = EXP_ITER_TOP + 1 if a.kind == "exp-iter" else a.m_range
    for m in range(top, -top - 1, -1):
        if _is_O(lg, a, m):
            return AClass("InAlgebra", m)
    return AClass("Neither")


def family_agreement(f, a: AsymptoticScale, fam: Optional[ScaleFamily] = None) -> Verdict:
    """Family classification with rows 1/|log a_m| agrees with the A_(a) classification."""
    fam = fam or asymptotic_family(a)
    fc = family_classify(f, fam)
    ac = classify_A(f, a)
    if fc.moderate.inconclusive or fc.negligible.inconclusive:
        return inconclusive(family=fc.to_json(), A=ac.to_json())
    same = fc.moderate.held == ac.in_algebra and fc.negligible.held == ac.in_ideal
    detail = {"family_moderate": fc.moderate.held, "family_negligible": fc.negligible.held, "A": ac.to_json()}
    return holds(**detail) if same else fails(**detail)


# -- second kind -------------------------------------------------------------------


@dataclass(frozen=True)
class SecondKind:
    kind: str  # "InIdeal", "InSubalgebra" or "Neither"
    rate: float  # lim log|f_n| / n
    row_norms: tuple = field(default=())

    @property
    def in_subalgebra(self) -> bool:
        return self.kind in ("InSubalgebra", "InIdeal")

    def to_json(self) -> dict:
        return {"class": self.kind, "rate": self.rate,
                "row_norms": [("inf" if v == INF else v) for v in self.row_norms]}


def classify_A_secondkind(f, a: Optional[AsymptoticScale] = None, m_max: int = M_MAX) -> SecondKind:
    """Rows r^m = 1/|log a_(1/m)|; subalgebra: every row norm <= 1, ideal: some row norm < 1."""
    a = a or infra_exp_scale()
    f = as_seq(f)
    rows = [scale_from_asymptotic(a, 1.0 / m) for m in range(1, m_max + 1)]
    norms = tuple(norm_exact(f, r).value for r in rows)
    lg = _lead(f)
    rate = -INF if lg is None else lg.limit_over(1.0, Monomial.of(n=1.0))
    if any(v < 1 for v in norms):
        kind = "InIdeal"
    elif all(v <= 1 for v in norms):
        kind = "InSubalgebra"
    else:
        kind = "Neither"
    return SecondKind(kind, rate, norms)
