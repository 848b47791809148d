"""Exact asymptotic comparison of log-exp growth expressions.

Every symbolic sequence in this package is described by the logarithm of its
absolute value, written as a finite sum ``sum_i c_i * M_i(n)`` of monomials
over the ordered basis

    exp3(n) > exp2(n) > exp1(n) > n > log n > log log n

(``exp_k`` is the k-fold iterated exponential).  Monomials with real exponents
over this basis are totally ordered by lexicographic comparison of exponent
vectors, which is what makes all the limits below exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

BASIS = ("exp3", "exp2", "exp1", "n", "log", "loglog")
_DIM = len(BASIS)

COEF_TOL = 1e-12
_EXP_DIGITS = 12

INF = math.inf


def _clean(x: float) -> float:
    x = round(float(x), _EXP_DIGITS)
    return 0.0 if x == 0 else x


def _log_basis(i: int, n: float) -> float:
    """log of the i-th basis function at n (may be +inf)."""
    name = BASIS[i]
    try:
        if name == "exp3":
            return math.exp(math.exp(n))
        if name == "exp2":
            return math.exp(n)
    except OverflowError:
        return INF
    if name == "exp1":
        return float(n)
    if name == "n":
        return math.log(n)
    if name == "log":
        return math.log(math.log(n))
    return math.log(math.log(math.log(n)))


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of basis functions raised to real exponents."""

    exps: tuple = (0.0,) * _DIM

    def __post_init__(self):
        if len(self.exps) != _DIM:
            raise ValueError(f"monomial needs {_DIM} exponents")
        object.__setattr__(self, "exps", tuple(_clean(e) for e in self.exps))

    @classmethod
    def of(cls, **powers) -> "Monomial":
        exps = [0.0] * _DIM
        for name, p in powers.items():
            exps[BASIS.index(name)] = p
        return cls(tuple(exps))

    @property
    def is_one(self) -> bool:
        return not any(self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a - b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, p: float) -> "Monomial":
        return Monomial(tuple(a * p for a in self.exps))

    def growth(self) -> int:
        """+1 if the monomial tends to infinity, -1 if to zero, 0 if constant."""
        for e in self.exps:
            if e > 0:
                return 1
            if e < 0:
                return -1
        return 0

    def log(self) -> "LogGrowth":
        """log of the monomial, itself a LogGrowth."""
        if self.exps[-1] != 0:
            raise ValueError("log of a (log log n)-power leaves the basis")
        terms = {}
        for i, e in enumerate(self.exps[:-1]):
            if e:
                terms[unit(BASIS[i + 1])] = e
        return LogGrowth.from_dict(terms)

    def log_value(self, n: float) -> float:
        total = 0.0
        for i, e in enumerate(self.exps):
            if e:
                total += e * _log_basis(i, n)
        return total

    def value(self, n: float) -> float:
        lv = self.log_value(n)
        if lv > 709:
            return INF
        return math.exp(lv)

    def __str__(self):
        parts = []
        for name, e in zip(BASIS, self.exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e:g}")
        return "*".join(parts) or "1"


ONE = Monomial()


def unit(name: str) -> Monomial:
    return Monomial.of(**{name: 1.0})


@dataclass(frozen=True)
class LogGrowth:
    """Finite sum of coefficient * monomial, kept sorted by decreasing growth."""

    terms: tuple = ()

    @classmethod
    def from_dict(cls, d: dict) -> "LogGrowth":
        items = [(m, float(c)) for m, c in d.items() if abs(c) > COEF_TOL]
        items.sort(key=lambda mc: mc[0].exps, reverse=True)
        return cls(tuple(items))

    @classmethod
    def const(cls, c: float) -> "LogGrowth":
        return cls.from_dict({ONE: c})

    @classmethod
    def term(cls, m: Monomial, c: float = 1.0) -> "LogGrowth":
        return cls.from_dict({m: c})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "LogGrowth") -> "LogGrowth":
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0.0) + c
        return LogGrowth.from_dict(d)

    def __neg__(self) -> "LogGrowth":
        return self.scaled(-1.0)

    def __sub__(self, other: "LogGrowth") -> "LogGrowth":
        return self + (-other)

    def scaled(self, k: float) -> "LogGrowth":
        return LogGrowth.from_dict({m: c * k for m, c in self.terms})

    def __mul__(self, other: "LogGrowth") -> "LogGrowth":
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 * m2
                d[m] = d.get(m, 0.0) + c1 * c2
        return LogGrowth.from_dict(d)

    def times_monomial(self, m: Monomial, k: float = 1.0) -> "LogGrowth":
        return LogGrowth.from_dict({m1 * m: c * k for m1, c in self.terms})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant(self) -> float:
        return self.as_dict().get(ONE, 0.0)

    @property
    def shape(self) -> "LogGrowth":
        """The expression without its constant term."""
        return LogGrowth(tuple((m, c) for m, c in self.terms if not m.is_one))

    def dominant(self):
        """(monomial, coefficient) of the fastest-growing term, or None."""
        return self.terms[0] if self.terms else None

    def limit(self) -> float:
        """Exact limit as n -> infinity, in the extended reals."""
        for m, c in self.terms:
            g = m.growth()
            if g > 0:
                return INF if c > 0 else -INF
            if g == 0:
                return c
            break
        return 0.0

    def limit_over(self, coef: float, m: Monomial) -> float:
        """lim self(n) / (coef * m(n)) for a monomial m tending to infinity."""
        return self.times_monomial(m ** -1, 1.0 / coef).limit()

    def tends_to_minus_inf(self) -> bool:
        return self.limit() == -INF

    def bounded_above(self) -> bool:
        return self.limit() < INF

    def value(self, n: float) -> float:
        total = 0.0
        for m, c in self.terms:
            v = m.value(n)
            if v == INF:
                total += INF if c > 0 else -INF
            else:
                total += c * v
        return total

    def exp_of(self):
        """Write exp(self) as c * Monomial if possible, else None.

        Possible exactly when self is a constant plus first-degree logs of basis
        functions, e.g. 2*n + 3*log n  ->  exp1^2 * n^3.
        """
        exps = [0.0] * _DIM
        c = 0.0
        for m, coef in self.terms:
            if m.is_one:
                c = coef
                continue
            nz = [i for i, e in enumerate(m.exps) if e]
            if len(nz) != 1 or m.exps[nz[0]] != 1 or nz[0] == 0:
                return None
            exps[nz[0] - 1] += coef
        return math.exp(c), Monomial(tuple(exps))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c:g}*{m}" if not m.is_one else f"{c:g}" for m, c in self.terms)


ZERO_LG = LogGrowth()
LOG_N = LogGrowth.term(unit("log"))
LOGLOG_N = LogGrowth.term(unit("loglog"))


def total(items: Iterable[LogGrowth]) -> LogGrowth:
    out = ZERO_LG
    for lg in items:
        out = out + lg
    return out
