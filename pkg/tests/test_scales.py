import math

import pytest

from ultraseq.errors import DegenerateScale, InvalidParameter
from ultraseq.scales import (ASYMPTOTIC_KINDS, asymptotic_family, check_family_direction, egorov_row,
                             equivalence_constant, exp_iter_asymptotic_scale, infra_exp_scale, is_big_O, ladder,
                             make_colombeau_family, make_log_scale, make_power_family, make_power_scale,
                             polynomial_asymptotic_scale, scale_from_asymptotic, scale_from_json)


def test_ladder():
    lad = ladder()
    assert lad[0] == 2 and lad[-1] == 2**20 and len(lad) == 20


def test_log_scale_values():
    r = make_log_scale()
    assert r.eval(100) == pytest.approx(0.2171, abs=1e-4)
    assert r.L == 1.0


def test_power_scale_values():
    assert make_power_scale(2).eval(16) == pytest.approx(0.25)
    assert make_power_scale(2).L == 0.0
    assert make_power_scale(1).eval(7) == pytest.approx(1 / 7)
    with pytest.raises(InvalidParameter):
        make_power_scale(0)


def test_egorov_row():
    r = egorov_row(3)
    assert [r.eval(n) for n in range(1, 7)] == [1, 1, 1, 0, 0, 0]


def test_big_O_examples():
    log = make_log_scale()
    assert is_big_O(log.scaled(2), log).held
    assert equivalence_constant(log.scaled(2), log) == pytest.approx(2)
    assert is_big_O(make_power_scale(2), log).held
    assert is_big_O(log, make_power_scale(2)).failed


def test_family_directions():
    assert check_family_direction(make_colombeau_family()).held
    assert check_family_direction(make_power_family()).held


@pytest.mark.parametrize("kind", sorted(ASYMPTOTIC_KINDS))
def test_asymptotic_axioms(kind):
    a = ASYMPTOTIC_KINDS[kind]()
    assert a.check_axioms().held


def test_scale_from_asymptotic_examples():
    r = scale_from_asymptotic(polynomial_asymptotic_scale(), 1)
    assert r.eval(50) == pytest.approx(1 / math.log(50))
    r = scale_from_asymptotic(infra_exp_scale(), 0.5)
    assert r.eval(10) == pytest.approx(0.2)
    r = scale_from_asymptotic(exp_iter_asymptotic_scale(), 2)
    assert r.eval(5) == pytest.approx(math.exp(-5))


def test_degenerate_rows():
    with pytest.raises(DegenerateScale):
        scale_from_asymptotic(polynomial_asymptotic_scale(), 0)
    # a_(-1) = n is a growth row, but |log a_(-1)| = log n is still a scale
    assert scale_from_asymptotic(polynomial_asymptotic_scale(), -1).eval(9) == pytest.approx(1 / math.log(9))


def test_exp_iter_family_is_capped():
    fam = asymptotic_family(exp_iter_asymptotic_scale())
    assert len(fam.rows(8)) == 4


def test_scale_json():
    assert scale_from_json({"kind": "power", "m": 2}).eval(16) == pytest.approx(0.25)
    assert scale_from_json({"kind": "asymptotic", "sigma": 0.5}).eval(10) == pytest.approx(0.2)
    with pytest.raises(InvalidParameter):
        scale_from_json({"kind": "nope"})
