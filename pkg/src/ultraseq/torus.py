"""Generalized functions on the unit circle through their Fourier coefficients.

Closed-form coefficient families are all of the profile

    amp * q^|k| * (1+|k|)^alpha * exp(beta sqrt|k|)

(geometric, constant, power-law and sub-exponential are special cases), so
truncated sums and tails have closed-form growth up to bounded factors.  A
sequence Theta-equivalent to such a sum has the same ultranorm and the same
null behaviour as the sum itself, which is what the symbolic side relies on.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import mpmath
import numpy as np

from .errors import InvalidParameter, NotModerate, ScaleMismatch, Unsupported
from .gnum import GenNumber
from .growth import GrowthClass, SymbolicSeq
from .loggrowth import INF, LogGrowth, Monomial
from .scales import Scale, ladder, make_log_scale, make_power_scale
from .ultranorm import (ABS, Classification, Seminorm, UltraNormValue, classify_value, norm_estimate,
                        norm_exact)

BOUNDARY_POINTS = 4096


@dataclass(frozen=True)
class CoeffFamily:
    form: str  # "finite" or "closed"
    q: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    amp: float = 1.0
    support: tuple = ()  # ((k, c), ...) for finite families
    label: str = ""

    @property
    def finite(self) -> bool:
        return self.form == "finite"

    @property
    def degree(self) -> int:
        if not self.finite:
            return INF
        return max((abs(k) for k, _ in self.support), default=0)

    def coeff(self, k: int) -> complex:
        if self.finite:
            return dict(self.support).get(k, 0)
        a = abs(k)
        return self.amp * self.q**a * (1 + a) ** self.alpha * math.exp(self.beta * math.sqrt(a))

    def array(self, K: int) -> np.ndarray:
        """Coefficients for k = -K..K."""
        out = np.zeros(2 * K + 1, dtype=complex)
        if self.finite:
            for k, c in self.support:
                if abs(k) <= K:
                    out[k + K] = c
            return out
        a = np.abs(np.arange(-K, K + 1)).astype(float)
        with np.errstate(over="ignore", under="ignore"):
            logs = a * math.log(self.q) + self.alpha * np.log1p(a) + self.beta * np.sqrt(a)
            out[:] = self.amp * np.exp(logs)
        return out

    @property
    def nonneg(self) -> bool:
        if self.finite:
            return all(complex(c).imag == 0 and complex(c).real >= 0 for _, c in self.support)
        return self.amp > 0

    def times(self, other: "CoeffFamily") -> "CoeffFamily":
        """Pointwise product k -> c_k d_k of symmetric closed forms."""
        if self.finite or other.finite:
            ks = {k for k, _ in (self.support if self.finite else other.support)}
            return finite({k: self.coeff(k) * other.coeff(k) for k in ks})
        return CoeffFamily("closed", self.q * other.q, self.alpha + other.alpha, self.beta + other.beta,
                           self.amp * other.amp, label=f"{self.label}*{other.label}")

    def to_json(self) -> dict:
        if self.finite:
            return {"form": "finite", "support": [[k, complex(c).real, complex(c).imag] for k, c in self.support]}
        return {"form": "closed", "label": self.label, "q": self.q, "alpha": self.alpha, "beta": self.beta,
                "amp": self.amp}


def finite(coeffs: dict) -> CoeffFamily:
    sup = tuple(sorted((int(k), complex(c)) for k, c in coeffs.items() if c != 0))
    return CoeffFamily("finite", support=sup, label="finite")


def monomial(k: int, c: complex = 1.0) -> CoeffFamily:
    """The Laurent monomial c z^k."""
    return finite({k: c})


def geometric(rho: float) -> CoeffFamily:
    if rho <= 0:
        raise InvalidParameter("rho must be positive")
    return CoeffFamily("closed", q=float(rho), label=f"geometric({rho:g})")


def constant_coeffs() -> CoeffFamily:
    """All coefficients 1: the Dirac delta."""
    return CoeffFamily("closed", label="constant")


def powerlaw(alpha: float) -> CoeffFamily:
    return CoeffFamily("closed", alpha=float(alpha), label=f"powerlaw({alpha:g})")


def subexp(beta: float) -> CoeffFamily:
    return CoeffFamily("closed", beta=float(beta), label=f"subexp({beta:g})")


def coeff_from_json(d: dict) -> CoeffFamily:
    form = d.get("form")
    if form == "geometric":
        return geometric(float(d["rho"]))
    if form == "constant":
        return constant_coeffs()
    if form == "powerlaw":
        return powerlaw(float(d["alpha"]))
    if form == "subexp":
        return subexp(float(d["beta"]))
    if form == "closed":
        return CoeffFamily("closed", q=float(d.get("q", 1.0)), alpha=float(d.get("alpha", 0.0)),
                           beta=float(d.get("beta", 0.0)), amp=float(d.get("amp", 1.0)), label=d.get("label", "closed"))
    if form == "finite":
        return finite({int(row[0]): complex(row[1], row[2] if len(row) > 2 else 0.0) for row in d["support"]})
    raise InvalidParameter(f"unknown coefficient form {form!r}")


# -- seminorms on single families ----------------------------------------------


def _k_growth(c: CoeffFamily, lam: float = 1.0) -> LogGrowth:
    """log(lam^|k| |c_k|) as a LogGrowth in the variable k."""
    return LogGrowth.from_dict({Monomial.of(n=1.0): math.log(c.q * lam), Monomial.of(n=0.5): c.beta,
                                Monomial.of(log=1.0): c.alpha, Monomial(): math.log(c.amp)})


def qhat_lambda(c: CoeffFamily, lam: float) -> float:
    """sup_k lam^|k| |c_k|."""
    if lam <= 0:
        raise InvalidParameter("lambda must be positive")
    if c.finite:
        return max((lam ** abs(k) * abs(v) for k, v in c.support), default=0.0)
    if _k_growth(c, lam).shape.limit() == INF:
        return INF
    # bounded profile: the sup is attained at a finite k; scan far past the turning point
    top = 2**12
    while True:
        vals = CoeffFamily("closed", c.q * lam, c.alpha, c.beta, c.amp).array(top)[top:]
        best = float(np.max(np.abs(vals)))
        if np.argmax(np.abs(vals)) < top // 2 or top >= 2**22:
            return best
        top *= 4


def q_lambda_numeric(c: CoeffFamily, lam: float, points: int = BOUNDARY_POINTS) -> float:
    """sup of |sum c_k z^k| over the annulus 1/lam < |z| < lam, from its boundary circles."""
    if not c.finite:
        raise Unsupported("numeric annulus sup needs a finite family")
    if not c.support:
        return 0.0
    t = np.linspace(0, 2 * np.pi, points, endpoint=False)
    best = 0.0
    for radius in {lam, 1 / lam}:
        z = radius * np.exp(1j * t)
        vals = sum(v * z**k for k, v in c.support)
        best = max(best, float(np.max(np.abs(vals))))
    return best


def pm_norm(c: CoeffFamily, r: Scale) -> UltraNormValue:
    """max of the one-sided ultranorms of k -> |c_k| and k -> |c_-k|.

    Closed forms are symmetric, so both sides agree; finite families are
    eventually zero and have norm 0.
    """
    if c.finite:
        return UltraNormValue(0.0)
    return norm_exact(GrowthClass(scale=r, extra=_k_growth(c)), r)


@dataclass(frozen=True)
class CoeffClass:
    label: Optional[str]
    analytic: bool
    distribution: bool
    hyperfunction: bool
    norms: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"label": self.label or "None", "analytic": self.analytic, "distribution": self.distribution,
                "hyperfunction": self.hyperfunction,
                "norms": {k: ("inf" if v == INF else v) for k, v in self.norms.items()}}


def classify_coefficients(c: CoeffFamily) -> CoeffClass:
    """Analytic: norm < 1 at r_k = 1/k.  Distribution: norm < inf at 1/log k.
    Hyperfunction: norm <= 1 at 1/k."""
    n_inv = pm_norm(c, make_power_scale(1)).value
    n_log = pm_norm(c, make_log_scale()).value
    analytic, dist, hyper = n_inv < 1, n_log < INF, n_inv <= 1
    label = "Analytic" if analytic else "Distribution" if dist else "Hyperfunction" if hyper else None
    return CoeffClass(label, analytic, dist, hyper, {"inverse": n_inv, "log": n_log})


# -- closed-form growth of truncated sums --------------------------------------


def truncation(r: Scale, n: int) -> int:
    """K_n = floor(1/r_n)."""
    rv = r.eval(n)
    return 0 if rv == 0 else int(math.floor(1.0 / rv + 1e-12))


def _theta(amp: float, q: float, alpha: float, beta: float, r: Scale) -> GrowthClass:
    """A sequence within bounded factors of amp q^K (1+K)^alpha e^(beta sqrt K), K = K_n."""
    if not r.symbolic:
        raise Unsupported("closed-form growth needs a scale with closed form")
    coef, mono = r.recip
    extra = LogGrowth()
    if alpha:
        try:
            extra = extra + (LogGrowth.const(math.log(coef)) + mono.log()).scaled(alpha)
        except ValueError as exc:
            raise Unsupported(str(exc)) from exc
    if beta:
        extra = extra + LogGrowth.term(mono ** 0.5, beta * math.sqrt(coef))
    return GrowthClass(c0=math.log(amp), s=math.log(q), scale=r, extra=extra)


def _full_sum(c: CoeffFamily, j: int = 0) -> Optional[complex]:
    """sum_k (ik)^j c_k, or None if divergent."""
    if c.finite:
        return sum((1j * k) ** j * v for k, v in c.support)
    if j % 2:
        return 0.0
    if not _converges(c.q, c.alpha + j, c.beta):
        return None
    if j == 0 and c.alpha == 0 and c.beta == 0:
        s = 1 + 2 * c.q / (1 - c.q)
    else:
        f = lambda k: k**j * c.q**k * (1 + k) ** c.alpha * mpmath.exp(c.beta * mpmath.sqrt(k))
        s = float(2 * mpmath.nsum(f, [1, mpmath.inf])) + (1.0 if j == 0 else 0.0)
    return c.amp * s * (1j) ** j


def _converges(q, alpha, beta) -> bool:
    if q != 1:
        return q < 1
    if beta != 0:
        return beta < 0
    return alpha < -1


def partial_sum_theta(c: CoeffFamily, r: Scale, j: int = 0) -> SymbolicSeq:
    """Symbolic sequence Theta-equivalent (termwise) to S_n = sum_{|k|<=K_n} (ik)^j c_k.

    Convergent sums are written S - tail with an exact constant S, so that
    differences against the full sum cancel syntactically.
    """
    if c.finite:
        return _const_seq(_full_sum(c, j), r)
    if j % 2:
        return SymbolicSeq()
    q, a, b = c.q, c.alpha + j, c.beta
    phase = (1j) ** j
    if _converges(q, a, b):
        if q < 1:
            tail = _theta(2 * c.amp * q / (1 - q), q, a, b, r)
        elif b < 0:
            tail = _theta(4 * c.amp / abs(b), q, a + 0.5, b, r)
        else:
            tail = _theta(2 * c.amp / abs(a + 1), q, a + 1, b, r)
        return _const_seq(_full_sum(c, j), r) - SymbolicSeq((tail.times(phase),))
    if q > 1:
        lead = _theta(c.amp * q / (q - 1), q, a, b, r)
    elif b > 0:
        lead = _theta(4 * c.amp / b, q, a + 0.5, b, r)
    elif a > -1:
        lead = _theta(2 * c.amp / (a + 1), q, a + 1, b, r)
    else:
        raise Unsupported("partial sums growing like log K are outside the symbolic class")
    return SymbolicSeq((lead.times(phase),))


def _max_theta(c: CoeffFamily, r: Scale, j: int = 0) -> SymbolicSeq:
    """Theta-equivalent of max_{|k|<=K_n} |k^j c_k|."""
    if c.finite:
        m = max((abs(k**j * v) for k, v in c.support), default=0.0)
        return _const_seq(m, r)
    g = _k_growth(replace(c, alpha=c.alpha + j)).shape.limit()
    if g == INF:
        return SymbolicSeq((_theta(c.amp, c.q, c.alpha + j, c.beta, r),))
    return _const_seq(1.0, r)


def _const_seq(v: complex, r: Scale) -> SymbolicSeq:
    if v is None:
        raise NotModerate("divergent pairing")
    if abs(v) < 1e-300:
        return SymbolicSeq()
    return SymbolicSeq((GrowthClass(scale=r).times(v),))


# -- generalized functions -----------------------------------------------------


@dataclass(frozen=True)
class Part:
    """weight_n * (d/dx)^deriv applied to the truncation (or full series) of fam."""

    weight: SymbolicSeq
    kind: str  # "embed" or "full"
    fam: CoeffFamily
    deriv: int = 0


def _sup_numeric(K: int, arr: np.ndarray) -> float:
    if arr.size == 0:
        return 0.0
    if np.all(arr.imag == 0) and np.all(arr.real >= 0):
        return float(arr.real.sum())
    size = max(BOUNDARY_POINTS, 1 << int(math.ceil(math.log2(4 * arr.size))))
    return float(np.max(np.abs(np.fft.fft(arr, size))))


@dataclass(frozen=True)
class TorusGF:
    """Index n -> Fourier coefficients (k = -K..K) of a function on the circle.

    Linear combinations of embedded families keep their ``parts`` so that
    pairings and sup-norms have closed-form growth.  Products are materialized
    through ``coeffs`` and carry only envelopes (lower, upper) of the sup-norm.
    """

    scale: Scale
    parts: Optional[tuple] = None
    coeffs: Optional[Callable[[int], tuple]] = field(default=None, compare=False, repr=False)
    envelope: Optional[tuple] = field(default=None, compare=False, repr=False)
    nonneg: bool = False
    name: str = ""

    def at(self, n: int) -> tuple:
        """(K, array of coefficients for k = -K..K) at index n."""
        if self.coeffs is not None:
            return self.coeffs(n)
        K_n = truncation(self.scale, n)
        pieces = []
        for p in self.parts:
            if p.kind == "full" and not p.fam.finite:
                raise Unsupported("untruncated closed-form series has infinite support")
            K = K_n if p.kind == "embed" else p.fam.degree
            arr = p.fam.array(K)
            if p.deriv:
                arr = arr * (1j * np.arange(-K, K + 1)) ** p.deriv
            pieces.append((K, complex(p.weight.eval(n)) * arr))
        return _sum_arrays(pieces)

    def coefficient(self, n: int, k: int) -> complex:
        K, arr = self.at(n)
        return arr[k + K] if abs(k) <= K else 0.0

    def sup(self, n: int) -> float:
        return _sup_numeric(*self.at(n))

    def sup_envelope(self) -> Optional[tuple]:
        if self.envelope is not None:
            return self.envelope
        if self.parts is None:
            return None
        uppers, lowers = [], []
        for p in self.parts:
            if p.kind == "full" and not p.fam.finite:
                return None
            w = _abs_weight(p.weight)
            if w is None:
                return None
            fam = p.fam if p.fam.nonneg or p.fam.finite else None
            if fam is None:
                return None
            if fam.finite:
                K = fam.degree
                ell1 = float(np.sum(np.abs(fam.array(K) * (np.arange(-K, K + 1) ** p.deriv if p.deriv else 1))))
                up = _const_seq(ell1, self.scale)
            else:
                up = _abs_sum_theta(fam, self.scale, p.deriv)
            uppers.append(w * up)
            lowers.append(w * _max_theta(fam, self.scale, p.deriv))
        upper = sum(uppers[1:], uppers[0]) if uppers else SymbolicSeq()
        if self.nonneg:
            return upper, upper
        lower = lowers[0] if len(lowers) == 1 else None
        return lower, upper

    def ultranorm(self, r: Optional[Scale] = None, p: Seminorm = None, lad=None) -> UltraNormValue:
        """Ultranorm for the sup-seminorm on the circle."""
        r = r or self.scale
        env = self.sup_envelope()
        if env is not None:
            lower, upper = env
            hi = norm_exact(upper, r)
            lo = norm_exact(lower, r) if lower is not None else UltraNormValue(0.0)
            if "inconclusive" not in (hi.mode, lo.mode):
                if lo.value == hi.value:
                    return UltraNormValue(hi.value)
                return UltraNormValue(hi.value, "bounds", (lo.value, hi.value))
        return norm_estimate(self.sup, r, lad, ABS)

    def classification(self, lad=None) -> Classification:
        return classify_value(self.ultranorm(lad=lad))

    def __add__(self, other: "TorusGF") -> "TorusGF":
        return _lin(self, other, 1.0)

    def __sub__(self, other: "TorusGF") -> "TorusGF":
        return _lin(self, other, -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.times(other)
        return gf_mul(self, other)

    def times(self, lam) -> "TorusGF":
        """Multiply by a scalar or a scalar sequence (SymbolicSeq/GrowthClass)."""
        w = lam if isinstance(lam, SymbolicSeq) else (
            SymbolicSeq((lam,)) if isinstance(lam, GrowthClass) else _const_seq(complex(lam), self.scale))
        if self.parts is not None:
            parts = tuple(replace(p, weight=p.weight * w) for p in self.parts)
            return TorusGF(self.scale, parts, nonneg=self.nonneg and _abs_weight(w) is not None
                           and _positive(w), name=self.name)
        f = self.coeffs
        return TorusGF(self.scale, coeffs=lambda n: (lambda K, a: (K, complex(w.eval(n)) * a))(*f(n)),
                       name=self.name)

    def __neg__(self) -> "TorusGF":
        return self.times(-1.0)


def _positive(w: SymbolicSeq) -> bool:
    return all(t.sign == 1 and not t.alternating for t in w.terms)


def _abs_weight(w: SymbolicSeq) -> Optional[SymbolicSeq]:
    if len(w.terms) == 1:
        t = w.terms[0]
        return SymbolicSeq((replace(t, sign=1.0, phase="pos"),))
    return None


def _abs_sum_theta(c: CoeffFamily, r: Scale, j: int) -> SymbolicSeq:
    if j == 0:
        return partial_sum_theta(c, r)
    return partial_sum_theta(replace(c, alpha=c.alpha + j), r)


def _sum_arrays(pieces) -> tuple:
    if not pieces:
        return 0, np.zeros(1, dtype=complex)
    K = max(k for k, _ in pieces)
    out = np.zeros(2 * K + 1, dtype=complex)
    for k, a in pieces:
        out[K - k: K + k + 1] += a
    return K, out


def _lin(a: TorusGF, b: TorusGF, sign: float) -> TorusGF:
    if a.scale != b.scale:
        raise ScaleMismatch(f"{a.scale} vs {b.scale}")
    if a.parts is not None and b.parts is not None:
        bparts = tuple(replace(p, weight=p.weight.times(sign)) for p in b.parts)
        return TorusGF(a.scale, a.parts + bparts, nonneg=a.nonneg and b.nonneg and sign > 0)
    up = None
    ea, eb = a.sup_envelope(), b.sup_envelope()
    if ea is not None and eb is not None:
        up = (None, ea[1] + eb[1])
    return TorusGF(a.scale, coeffs=lambda n: _sum_arrays([a.at(n), (lambda K, x: (K, sign * x))(*b.at(n))]),
                   envelope=up, nonneg=False)


def embed(c: CoeffFamily, r: Scale) -> TorusGF:
    """Convolution with the mollifier sum_{|k| <= 1/r_n} z^k: Fourier truncation at K_n."""
    return TorusGF(r, (Part(_const_seq(1.0, r), "embed", c),), nonneg=c.nonneg, name=f"embed({c.label})")


def full(c: CoeffFamily, r: Scale) -> TorusGF:
    """The untruncated series as a constant family (only pairings are available)."""
    return TorusGF(r, (Part(_const_seq(1.0, r), "full", c),), nonneg=c.nonneg and c.finite, name=f"full({c.label})")


def zero_gf(r: Scale) -> TorusGF:
    return TorusGF(r, (), nonneg=True, name="0")


def gf_mul(f: TorusGF, g: TorusGF) -> TorusGF:
    """Product: per-index convolution of coefficient sequences."""
    if f.scale != g.scale:
        raise ScaleMismatch(f"{f.scale} vs {g.scale}")

    def coeffs(n):
        (K1, a), (K2, b) = f.at(n), g.at(n)
        return K1 + K2, np.convolve(a, b)
    env = None
    ef, eg = f.sup_envelope(), g.sup_envelope()
    if ef is not None and eg is not None:
        upper = ef[1] * eg[1]
        lower = ef[0] * eg[0] if f.nonneg and g.nonneg else None
        env = (lower, upper)
    return TorusGF(f.scale, coeffs=coeffs, envelope=env, nonneg=f.nonneg and g.nonneg,
                   name=f"({f.name})*({g.name})")


def derivative(f: TorusGF) -> TorusGF:
    """Coefficient k multiplied by i k at every index."""
    if f.parts is not None:
        return TorusGF(f.scale, tuple(replace(p, deriv=p.deriv + 1) for p in f.parts), name=f"d({f.name})")

    def coeffs(n):
        K, a = f.at(n)
        return K, a * (1j * np.arange(-K, K + 1))
    return TorusGF(f.scale, coeffs=coeffs, name=f"d({f.name})")


def trig_poly_product(p: CoeffFamily, q: CoeffFamily) -> CoeffFamily:
    """Product of two Laurent polynomials."""
    out: dict = {}
    for k1, c1 in p.support:
        for k2, c2 in q.support:
            out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
    return finite(out)


# -- pairing -------------------------------------------------------------------


def _psi_reflect(psi: CoeffFamily) -> CoeffFamily:
    if psi.finite:
        return finite({-k: v for k, v in psi.support})
    return psi


def _pair_part_value(p: Part, psi: CoeffFamily, n: int, K_n: int) -> complex:
    fam = p.fam.times(_psi_reflect(psi))
    if p.kind == "full":
        s = _full_sum(fam, p.deriv)
        if s is None:
            raise NotModerate(f"pairing of {p.fam.label} with {psi.label} diverges")
        return s
    K = K_n if not fam.finite else min(K_n, fam.degree)
    arr = fam.array(K)
    if p.deriv:
        arr = arr * (1j * np.arange(-K, K + 1)) ** p.deriv
    return complex(arr.sum())


def pair(f: TorusGF, psi: CoeffFamily, lad=None) -> GenNumber:
    """<f, psi>: the generalized number n -> sum_k f_n(k) psi(-k)."""
    r = f.scale
    if f.parts is not None:
        asym = SymbolicSeq()
        for p in f.parts:
            fam = p.fam.times(_psi_reflect(psi))
            if p.kind == "full":
                s = _full_sum(fam, p.deriv)
                if s is None:
                    raise NotModerate(f"pairing of {p.fam.label} with {psi.label} diverges")
                piece = _const_seq(s, r)
            else:
                piece = partial_sum_theta(fam, r, p.deriv)
            asym = asym + p.weight * piece
        parts = f.parts

        def rep(n):
            K_n = truncation(r, n)
            return sum((complex(p.weight.eval(n)) * _pair_part_value(p, psi, n, K_n) for p in parts), 0j)
        return GenNumber(rep, r, asymptotic=asym)

    def rep_num(n):
        K, arr = f.at(n)
        ps = np.array([psi.coeff(-k) for k in range(-K, K + 1)])
        return complex(np.dot(arr, ps))
    return GenNumber(rep_num, r)


# -- traces --------------------------------------------------------------------


def delta_unboundedness_trace(r: Scale, lad=None) -> list:
    """Rows (n, sup-norm of embed(delta) at n) = (n, 2 K_n + 1)."""
    return [(n, 2 * truncation(r, n) + 1) for n in (lad or ladder()) if n >= r.domain_start]


def write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
