import math

import pytest

from ultraseq.errors import NotModerate
from ultraseq.gnum import (GenNumber, const, eq_quotient, gen_from_json, maddox_c0_test, maddox_linf_test,
                           unit_e_r, zero)
from ultraseq.growth import GrowthClass, SymbolicSeq, seq_from_json
from ultraseq.scales import make_log_scale
from ultraseq.ultranorm import Classification

LOG = make_log_scale()


def g(**kw):
    return GenNumber(SymbolicSeq.of(GrowthClass(**kw)), LOG)


def neg_log():
    return GenNumber(seq_from_json({"log2": -1}), LOG)  # n^(-log n)


def test_unbounded_rep_rejected():
    with pytest.raises(NotModerate):
        GenNumber(seq_from_json({"exp": {"coef": 1}}), LOG)


def test_ring_examples():
    n = g(gamma=1)
    assert eq_quotient(n + (-n), zero(LOG)).held
    assert (n * n).ultranorm().value == pytest.approx(math.e**2)
    assert (n * n).classification() is Classification.MODERATE
    e = unit_e_r(LOG)
    assert eq_quotient(e * e.inverse(), const(1, LOG)).held
    assert e.ultranorm().value == pytest.approx(math.e)
    assert eq_quotient(e, n).held


def test_eq_quotient_examples():
    n = g(gamma=1)
    assert eq_quotient(n, n + neg_log()).held
    assert eq_quotient(n, n.times(2)).failed
    assert eq_quotient(n, n).held


def test_black_box_equality_is_not_claimed():
    bb = GenNumber(lambda k: float(k), LOG)
    v = eq_quotient(bb, g(gamma=1))
    assert not v.failed


def test_maddox_linf():
    v = maddox_linf_test(SymbolicSeq.of(GrowthClass(gamma=3)), LOG)
    assert v.held and v.detail["k"] == 21  # smallest integer k with log k >= 3
    assert maddox_linf_test(seq_from_json({"exp": {"coef": 1}}), LOG).failed
    z = maddox_linf_test(SymbolicSeq(), LOG)
    assert z.held and z.detail["k"] == 1


def test_maddox_c0():
    v = maddox_c0_test(SymbolicSeq.of(GrowthClass(gamma=-5)), LOG)
    assert v.failed and v.detail["k"] == 149  # first k with log k > 5
    assert maddox_c0_test(seq_from_json({"log2": -1}), LOG).held
    assert maddox_c0_test(SymbolicSeq(), LOG).held


def test_json_roundtrip():
    x = gen_from_json({"gamma": 2, "scale": {"kind": "log"}})
    assert x.value(3) == pytest.approx(9)
