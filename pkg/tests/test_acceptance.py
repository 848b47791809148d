"""Acceptance suite: one marked group per criterion; a summary line per criterion is printed at the end."""
import math
import random
import subprocess
import sys

import numpy as np
import pytest

from ultraseq.association import boundary_witness, chain_on_reps, implication_chain, s_assoc, strong_weak_single, weak_assoc
from ultraseq.asymptotic import classify_A_secondkind, family_agreement
from ultraseq.errors import NotCauchy
from ultraseq.functorial import check_temperate, exp_spec, extend, linear_spec, square_spec
from ultraseq.gnum import GenNumber, eq_quotient, maddox_c0_test, maddox_linf_test
from ultraseq.growth import GrowthClass, SymbolicSeq, seq_from_json
from ultraseq.scales import (exp_iter_asymptotic_scale, is_big_O, make_log_power_scale, make_log_scale,
                             make_power_scale, polynomial_asymptotic_scale)
from ultraseq.torus import (classify_coefficients, constant_coeffs, embed, finite, full, geometric, gf_mul,
                            pair, q_lambda_numeric, qhat_lambda, subexp, trig_poly_product, truncation)
from ultraseq.ultranorm import INF, Classification, classify, diagonal_limit, norm_estimate, norm_exact

LOG = make_log_scale()
SCALES = [LOG, make_power_scale(1), make_power_scale(2), make_power_scale(3)]
RTOL = 1e-9


def crit(n, text):
    return pytest.mark.criterion(n, text)


def rel_le(a, b):
    return a <= b * (1 + RTOL) or a == b


def rel_eq(a, b):
    if a in (0.0, INF) or b in (0.0, INF):
        return a == b
    return math.isclose(a, b, rel_tol=RTOL)


def rand_gc(rng, scale, grid=True):
    """Grid values make equal-growth sums (and exact cancellations) common."""
    if grid:
        pick = rng.choice
        return GrowthClass(c0=pick([-1.0, 0.0, math.log(2), 1.5]), s=pick([-1.0, -0.5, 0.0, 0.5, 1.0]),
                           gamma=pick([-2.0, -1.0, 0.0, 1.0, 2.0]), delta=pick([-1.0, 0.0, 1.0]), scale=scale,
                           phase=pick(["pos", "alt"]), sign=pick([1.0, -1.0]))
    return GrowthClass(c0=rng.uniform(-3, 3), s=rng.uniform(-2, 2), gamma=rng.uniform(-3, 3),
                       delta=rng.uniform(-2, 2), scale=scale, phase=rng.choice(["pos", "alt"]))


def nval(f, r):
    v = norm_exact(f, r)
    assert v.mode == "exact", v
    return v.value


# -- 1 ------------------------------------------------------------------------------


@crit(1, "ultrametric axioms, exact on 500 random pairs/triples")
def test_c01_ultrametric_axioms():
    rng = random.Random(1)
    for i in range(500):
        r = SCALES[i % len(SCALES)]
        f, g, h = (SymbolicSeq.of(rand_gc(rng, r)) for _ in range(3))
        nf, ng, nh = nval(f, r), nval(g, r), nval(h, r)
        assert rel_le(nval(f + g, r), max(nf, ng))
        if i % 2:
            assert rel_le(nval(f + g + h, r), max(nf, ng, nh))
        for lam in (-3, 0.01, 7):
            assert rel_eq(nval(f.times(lam), r), nf)
        assert rel_le(nval(f * g, r), nf * ng)


@crit(1, "ultrametric axioms, exact on 500 random pairs/triples")
def test_c01_bounded_away_has_norm_one():
    rng = random.Random(11)
    for _ in range(100):
        r = rng.choice(SCALES)
        a = rng.uniform(0.5, 5)
        b = rng.uniform(0, a * 0.9)
        f = SymbolicSeq.of(GrowthClass(c0=math.log(a), scale=r), GrowthClass(c0=math.log(b), phase="alt", scale=r))
        assert norm_exact(f, r).value == 1.0


# -- 2 ------------------------------------------------------------------------------


@crit(2, "estimator interval contains the symbolic norm on >= 95/100 inputs")
def test_c02_estimator_soundness():
    rng = random.Random(2)
    hits, misses = 0, []
    for i in range(100):
        r = SCALES[i % len(SCALES)]
        gc = rand_gc(rng, r, grid=False)
        if i % 10 == 0:  # a few inputs with norm 0 or infinity
            gc = GrowthClass(gamma=gc.gamma, scale=r, extra=seq_from_json({"log2": rng.choice([-1, 1])}).terms[0].extra)
        f = SymbolicSeq.of(gc)
        exact = norm_exact(f, r).value
        est = norm_estimate(f, r)
        if est.ci is not None and est.low <= exact <= est.high:
            hits += 1
        else:
            misses.append((str(gc), exact, est.to_json()))
    print(f"estimator coverage {hits}/100")
    assert hits >= 95, misses[:5]


# -- 3 ------------------------------------------------------------------------------


@crit(3, "equivalent scales: ||f||_s = ||f||_r^C; inclusion for s = O(r)")
def test_c03_power_law():
    rng = random.Random(3)
    for i in range(200):
        r = SCALES[i % len(SCALES)]
        f = SymbolicSeq.of(rand_gc(rng, r))
        base = nval(f, r)
        for C in (0.5, 2, 3):
            assert rel_eq(nval(f, r.scaled(C)), base**C)


@crit(3, "equivalent scales: ||f||_s = ||f||_r^C; inclusion for s = O(r)")
def test_c03_inclusion():
    pairs = [(make_power_scale(2), LOG), (make_log_power_scale(2), LOG), (LOG.scaled(2), LOG),
             (make_power_scale(1), make_power_scale(2))]
    rng = random.Random(33)
    for s, r in pairs:
        assert is_big_O(s, r).held
        for _ in range(50):
            f = SymbolicSeq.of(rand_gc(rng, r))
            if classify(f, r).is_moderate:
                assert classify(f, s).is_moderate


# -- 4 / 5 --------------------------------------------------------------------------

GRID = [(s, g) for s in (-2, -1, 0, 1, 2) for g in (-2, -1, 0, 1, 2)]
OWN_SCALES = {"1/log n": LOG, "1/log^2 n": make_log_power_scale(2)}


def _poly_criterion(s, g, own):
    """Closed-form o(n^c) test for e^(s/rho_n) n^g; returns (some c works, every c works)."""
    # log|f| / log n = s (1/rho_n)/log n + g, and (1/rho_n)/log n -> 1 or log n
    if own == "1/log n":
        return True, False
    return s <= 0, s < 0


@crit(4, "Colombeau characterization on the 25-point (s, gamma) grid")
@pytest.mark.parametrize("own", sorted(OWN_SCALES))
def test_c04_colombeau(own):
    for s, g in GRID:
        f = SymbolicSeq.of(GrowthClass(s=s, gamma=g, scale=OWN_SCALES[own]))
        mod, neg = _poly_criterion(s, g, own)
        c = classify(f, LOG)
        assert c.is_moderate == mod, (s, g, c)
        assert (c is Classification.NEGLIGIBLE) == neg, (s, g, c)


@crit(5, "Maddox tests agree with Moderate / Negligible on the grid")
@pytest.mark.parametrize("own", sorted(OWN_SCALES))
def test_c05_maddox(own):
    for s, g in GRID:
        f = SymbolicSeq.of(GrowthClass(s=s, gamma=g, scale=OWN_SCALES[own]))
        c = classify(f, LOG)
        assert maddox_linf_test(f, LOG).held == c.is_moderate, (s, g)
        assert maddox_c0_test(f, LOG).held == (c is Classification.NEGLIGIBLE), (s, g)


# -- 6 ------------------------------------------------------------------------------


@crit(6, "Fourier trichotomy with thresholds < 1, < inf, <= 1")
def test_c06_trichotomy():
    a = classify_coefficients(geometric(0.5))
    assert a.label == "Analytic" and a.norms["inverse"] == pytest.approx(0.5)
    d = classify_coefficients(constant_coeffs())
    assert d.label == "Distribution" and not d.analytic and d.norms["inverse"] == 1.0
    h = classify_coefficients(subexp(1))
    assert h.label == "Hyperfunction" and h.hyperfunction and not h.distribution
    assert h.norms["inverse"] == 1.0 and h.norms["log"] == INF


# -- 7 ------------------------------------------------------------------------------


@crit(7, "Cauchy bound and q-hat / q comparison on 100 finite families")
def test_c07_seminorm_comparison():
    rng = random.Random(7)
    for _ in range(100):
        deg = rng.randint(0, 8)
        coeffs = {k: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for k in range(-deg, deg + 1) if rng.random() < 0.7}
        coeffs = coeffs or {0: 1.0}
        c = finite(coeffs)
        for lam in (1.1, 1.5, 2.0):
            q = q_lambda_numeric(c, lam)
            for k, v in c.support:
                assert abs(v) <= q * lam ** -abs(k) * (1 + 1e-6)
            qhat = qhat_lambda(c, lam)
            assert qhat <= (2 * c.degree + 1) * q * (1 + 1e-6)
            assert q <= sum(abs(v) * lam ** abs(k) for k, v in c.support) * (1 + 1e-6)


# -- 8 ------------------------------------------------------------------------------


@crit(8, "embed(delta) and its square: moderate with sup norm exactly 1; products respected")
def test_c08_delta_and_square():
    d = embed(constant_coeffs(), LOG)
    for F in (d, gf_mul(d, d)):
        v = F.ultranorm()
        assert v.value == 1.0 and v.mode == "exact"
        assert F.classification() is Classification.MODERATE


@crit(8, "embed(delta) and its square: moderate with sup norm exactly 1; products respected")
def test_c08_products_of_trig_polys():
    rng = random.Random(8)
    for _ in range(20):
        p = finite({k: rng.uniform(-1, 1) for k in range(-rng.randint(0, 4), rng.randint(1, 5))})
        q = finite({k: rng.uniform(-1, 1) for k in range(-rng.randint(0, 4), rng.randint(1, 5))})
        lhs, rhs = gf_mul(embed(p, LOG), embed(q, LOG)), embed(trig_poly_product(p, q), LOG)
        deg = p.degree + q.degree
        for n in (2**12, 2**16, 2**20):  # K_n >= 8 >= deg here: eventually zero difference
            assert truncation(LOG, n) >= deg
            (K1, a), (K2, b) = lhs.at(n), rhs.at(n)
            K = max(K1, K2)
            assert np.allclose(np.pad(a, K - K1), np.pad(b, K - K2), atol=1e-12)


# -- 9 ------------------------------------------------------------------------------


@crit(9, "delta pairing error s-associated to 0 at s = 0.5, not at s = 0.8")
def test_c09_weak_rate():
    F, G, psi = embed(constant_coeffs(), LOG), full(constant_coeffs(), LOG), geometric(0.5)
    assert weak_assoc(F, G, 0.5, [psi]).held
    assert weak_assoc(F, G, 0.8, [psi]).failed
    err = pair(F - G, psi)
    for n in (2**8, 2**12, 2**16, 2**20):
        ratio = abs(err.value(n)) / (2 * n ** -math.log(2))
        assert 1 - 1e-12 <= ratio < 2  # 2^(1 - floor(log n)) against 2 n^(-log 2)


# -- 10 -----------------------------------------------------------------------------


@crit(10, "StrongWeak(s) => Weak(s) => StrongWeak(s'), zero violations; boundary witness")
def test_c10_chain():
    rng = random.Random(10)
    reps = []
    for _ in range(200):
        gc = GrowthClass(c0=rng.uniform(-2, 2), s=rng.uniform(-2, 0.3), gamma=rng.choice([-1.0, 0.0, 1.0]),
                         delta=rng.choice([-1.0, 0.0, 1.0]))
        reps.append(GenNumber(SymbolicSeq.of(gc), LOG))
    total = 0
    for s, sp in ((0.5, 0.2), (1.0, 0.9), (0.3, 0.0), (1.5, 0.5)):
        rep = chain_on_reps(reps, s, sp)
        assert rep.ok, rep.violations[:3]
        total += rep.checked
    assert total == 800
    F = embed(constant_coeffs(), LOG)
    assert implication_chain(F, full(constant_coeffs(), LOG), 0.5, 0.3).ok


@crit(10, "StrongWeak(s) => Weak(s) => StrongWeak(s'), zero violations; boundary witness")
def test_c10_boundary_witness():
    for s in (0.2, 0.5, 1.0):
        w = boundary_witness(LOG, s)
        assert w.ultranorm().value == pytest.approx(math.exp(-s))
        assert s_assoc(w, None, s).held
        assert strong_weak_single(w, s).failed


# -- 11 -----------------------------------------------------------------------------


@crit(11, "family classification agrees with A_(a) classification on 100 probes")
def test_c11_family_vs_asymptotic_classes():
    rng = random.Random(11)
    scales = [polynomial_asymptotic_scale(), exp_iter_asymptotic_scale()]
    vals = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
    for _ in range(100):
        f = seq_from_json({"c0": rng.uniform(-2, 2), "gamma": rng.choice(vals), "delta": rng.choice(vals),
                           "log2": rng.choice(vals), "exp": {"coef": rng.choice(vals), "p": rng.choice([0.5, 1.0])}})
        for a in scales:
            v = family_agreement(f, a)
            assert v.held, (str(f), a.kind, v.detail)


# -- 12 -----------------------------------------------------------------------------


@crit(12, "second-kind classification matches limsup |f_n|^(1/n) <= 1 / < 1")
def test_c12_second_kind():
    for c in (-1.0, -0.5, -1 / 3, 0.0, 0.5, 1.0, 2.0):
        for extra in ({}, {"gamma": 2.0}, {"gamma": -2.0}, {"exp_sqrt": 1.0}, {"exp_sqrt": -1.0}):
            terms = {"gamma": extra.get("gamma", 0.0)}
            lg = seq_from_json({**terms, "exp": {"coef": c, "p": 1.0}}).terms[0].extra
            if "exp_sqrt" in extra:
                lg = lg + seq_from_json({"exp": {"coef": extra["exp_sqrt"], "p": 0.5}}).terms[0].extra
            f = SymbolicSeq.of(GrowthClass(gamma=terms["gamma"], extra=lg))
            root = math.exp(c)  # limsup |f_n|^(1/n), closed form
            sk = classify_A_secondkind(f)
            assert sk.in_subalgebra == (root <= 1), (c, extra, sk)
            assert (sk.kind == "InIdeal") == (root < 1), (c, extra, sk)


# -- 13 -----------------------------------------------------------------------------


@crit(13, "square and linear maps temperate and well defined; exp fails with a witness")
def test_c13_functorial():
    x = GenNumber(SymbolicSeq.of(GrowthClass(gamma=1)), LOG)
    k = GenNumber(seq_from_json({"log2": -1}), LOG)
    for spec in (square_spec(), linear_spec(0.5), linear_spec(2.0)):
        assert check_temperate(spec).held
        d = extend(spec, x + k) - extend(spec, x)
        v = d.ultranorm()
        assert v.mode == "exact" and v.value == 0.0
        assert eq_quotient(extend(spec, x + k), extend(spec, x)).held
    v = check_temperate(exp_spec())
    assert v.failed and v.detail["witness"]["probe"]


# -- 14 -----------------------------------------------------------------------------


def _check_diagonal(fam):
    res = diagonal_limit(fam, [], LOG)
    for mu in range(1, 9):
        for m, d in res.distances[mu]:
            assert d.high < 2.0**-mu, (mu, m, d)
    return res


@crit(14, "diagonal limit within 2^-mu of the mu-tail for mu <= 8")
def test_c14_literal_family():
    # n + 2^-m: members differ by nonzero constants, so the distance is exactly 1
    def fam(m):
        return SymbolicSeq.of(GrowthClass(gamma=1), GrowthClass(c0=-m * math.log(2)))
    try:
        _check_diagonal(fam)
    except NotCauchy as exc:
        pytest.fail(f"family is not Cauchy: {exc} {exc.witness}")


@crit(14, "diagonal limit within 2^-mu of the mu-tail for mu <= 8")
def test_c14_negligible_increments():
    def fam(m):
        terms = [GrowthClass(gamma=1)]
        terms += [GrowthClass(c0=-k * math.log(2), extra=seq_from_json({"log2": -k}).terms[0].extra)
                  for k in range(1, m + 1)]
        return SymbolicSeq(tuple(terms))
    res = _check_diagonal(fam)
    assert res(2**10) == pytest.approx(2**10)


def test_c14_companion_scaled_increments():
    """n + 2^(-m/r_n) = n + n^(-m log 2): distances 2^-m, genuinely Cauchy."""
    def fam(m):
        return SymbolicSeq.of(GrowthClass(gamma=1), GrowthClass(gamma=-m * math.log(2)))
    _check_diagonal(fam)


# -- 15 -----------------------------------------------------------------------------


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "ultraseq.cli", *args], capture_output=True, cwd=cwd).stdout


@crit(15, "demo-delta2 and norm reports are byte-identical across runs")
def test_c15_determinism(tmp_path):
    for args in (("--csv", "trace.csv", "demo-delta2"), ("norm", '{"gamma": 2}', '{"kind": "log"}'),
                 ("norm", '{"callable": "n**2 + 3"}')):
        a, csv_a = _cli(*args, cwd=tmp_path), (tmp_path / "trace.csv").read_bytes() if "--csv" in args else b""
        b, csv_b = _cli(*args, cwd=tmp_path), (tmp_path / "trace.csv").read_bytes() if "--csv" in args else b""
        assert a and a == b and csv_a == csv_b
