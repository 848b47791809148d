import math

import pytest
from hypothesis import given, settings, strategies as st

from ultraseq.errors import PreconditionFailed
from ultraseq.growth import GrowthClass, SymbolicSeq, seq_from_json
from ultraseq.scales import custom_scale, egorov_row, make_log_scale, make_power_scale
from ultraseq.ultranorm import (INF, Classification, classify, diagonal_limit, distance, norm, norm_estimate,
                                norm_exact, scale_power_law)

LOG = make_log_scale()
E = math.e


def seq(**kw):
    return SymbolicSeq.of(GrowthClass(**kw))


def test_exact_examples():
    assert norm_exact(seq(gamma=2), LOG).value == pytest.approx(E**2)
    assert norm_exact(seq(c0=math.log(5)), LOG).value == 1.0
    assert norm_exact(seq(gamma=7), make_power_scale(2)).value == 1.0
    assert norm_exact(seq(s=1), LOG).value == pytest.approx(E)
    assert norm_exact(seq(gamma=-3), LOG).value == pytest.approx(E**-3)


def test_alternating_bounded_away():
    f = SymbolicSeq.of(GrowthClass(c0=math.log(2)), GrowthClass(phase="alt"))  # 2 + (-1)^n
    assert norm_exact(f, LOG).value == 1.0
    est = norm_estimate(lambda n: 2 + (-1) ** n, LOG)
    assert est.low <= 1.0 <= est.high


def test_zero_and_infinity():
    assert norm_exact(SymbolicSeq(), LOG).value == 0.0
    assert norm_exact(seq(log2=0) if False else seq_from_json({"log2": -1}), LOG).value == 0.0
    assert norm_exact(seq_from_json({"exp": {"coef": 1}}), LOG).value == INF


def test_egorov_row_norm():
    assert norm_exact(seq(gamma=4), egorov_row(3)).value == 1.0
    assert norm_exact(SymbolicSeq(), egorov_row(3)).value == 0.0


def test_estimator_examples():
    est = norm_estimate(lambda n: float(n) ** 2, LOG)
    assert 7.0 <= est.value <= 7.8 and est.low <= E**2 <= est.high
    assert norm_estimate(lambda n: math.exp(-math.log(n) ** 2), LOG).value == 0.0
    assert norm_estimate(lambda n: math.exp(min(n, 700)), LOG).value == INF


def test_custom_scale_falls_back_to_estimate():
    r = custom_scale(lambda n: 1 / math.log(n))
    v = norm(seq(gamma=1), r)
    assert v.mode == "estimated" and v.low <= E <= v.high


def test_distance():
    assert distance(seq(gamma=2), seq(gamma=2), LOG).value == 0.0
    assert distance(seq(gamma=2), seq(gamma=1), LOG).value == pytest.approx(E**2)


def test_classify():
    assert classify(seq(gamma=5), LOG) is Classification.MODERATE
    assert classify(seq_from_json({"log2": -1}), LOG) is Classification.NEGLIGIBLE
    assert classify(seq_from_json({"exp": {"coef": 1}}), LOG) is Classification.UNBOUNDED


@pytest.mark.parametrize("f,C", [(seq(gamma=1), 2.0), (seq(c0=1.3), 2.0), (seq(s=1), 3.0)])
def test_power_law(f, C):
    assert scale_power_law(f, LOG, LOG.scaled(C), C).held


def test_power_law_precondition():
    with pytest.raises(PreconditionFailed):
        scale_power_law(seq(gamma=1), LOG, make_power_scale(2), 2.0)


grid = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(grid, grid, grid, grid)
def test_ultrametric_triangle(s1, g1, s2, g2):
    f, g = seq(s=s1, gamma=g1), seq(s=s2, gamma=g2, phase="alt")
    nf, ng = norm_exact(f, LOG).value, norm_exact(g, LOG).value
    assert norm_exact(f + g, LOG).value <= max(nf, ng) * (1 + 1e-9)
    assert norm_exact(f * g, LOG).value <= nf * ng * (1 + 1e-9)


def test_diagonal_constant_family():
    c = seq(c0=math.log(3))
    res = diagonal_limit(lambda m: c, [], LOG)
    assert res(1000) == pytest.approx(3)


def test_diagonal_negligible_partial_sums():
    def fam(m):
        return SymbolicSeq(tuple(GrowthClass(c0=-k * math.log(2), gamma=0, scale=LOG,
                                             extra=seq_from_json({"log2": -k}).terms[0].extra)
                                 for k in range(1, m + 1)))
    res = diagonal_limit(fam, [], LOG, mu_max=4)
    for mu, rows in res.distances.items():
        assert all(v.high < 2.0**-mu for _, v in rows)


@settings(max_examples=40, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.sampled_from([0, 1, 2]))
def test_estimate_interval_covers_exact(s, gamma, delta, which):
    r = [LOG, make_power_scale(2), make_power_scale(3)][which]
    f = seq(s=s, gamma=gamma, delta=delta, scale=r)
    exact = norm_exact(f, r).value
    est = norm_estimate(f, r)
    assert est.low <= exact <= est.high


def test_norm_ignores_shrinking_scalars():
    f = seq(gamma=1)
    assert [norm_exact(f.times(10.0**-k), LOG).value for k in (1, 5, 50)] == [pytest.approx(E)] * 3
