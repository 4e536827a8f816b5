from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import partitions
from zmeasures.partitions import Partition, dim, partitions_of, transpose
from zmeasures.zmeasure import (DegenerateParametersError, Series, ZParams, classify, det_weight,
                                format_scalar, m_coefficient, parse_scalar, transpose_symmetry_check,
                                verify_coherence, verify_m_recurrence, weight)

P = Partition.of


def test_classify_examples():
    assert classify(1 + 1j, 1 - 1j) is Series.PRINCIPAL
    assert classify("1/2", "7/10") is Series.COMPLEMENTARY
    assert classify(2, "1/2") is Series.DEGENERATE
    assert classify("1/2", "3/2") is Series.INVALID
    assert classify(1 + 1j, 2 - 1j) is Series.INVALID
    assert classify("-3/2", "-6/5") is Series.COMPLEMENTARY
    # a real non-integer pair with z = z' is complementary, not principal
    assert classify(0.5, 0.5) is Series.COMPLEMENTARY


def test_parse_scalar():
    assert parse_scalar("7/10") == F(7, 10)
    assert parse_scalar("1+i") == 1 + 1j
    assert parse_scalar("1-2i") == 1 - 2j
    assert parse_scalar("-i") == -1j
    assert parse_scalar("0.5") == 0.5


def test_zparams_modes():
    p = ZParams("1/2", "7/10")
    assert p.exact and p.t == F(7, 20) and p.series is Series.COMPLEMENTARY
    q = ZParams(1 + 1j, 1 - 1j)
    assert not q.exact and q.t == 2
    assert ZParams("1/2", 0.7).mode == "complex"
    assert format_scalar(F(9, 10)) == "9/10"
    assert p.to_json() == {"z": "1/2", "zp": "7/10", "mode": "exact"}


def test_weight_examples(half):
    for method in ("boxes", "rows", "frobenius"):
        assert weight(P(1), half, method) == 1
        assert weight(P(2), half, method) == F(9, 10)
        assert weight(P(1, 1), half, method) == F(1, 10)
        assert weight(Partition(), half, method) == 1


def test_weight_closed_forms_at_level_two(half_seven_tenths):
    z, zp = half_seven_tenths.z, half_seven_tenths.zp
    t = z * zp
    assert weight(P(2), half_seven_tenths) == (z + 1) * (zp + 1) / (2 * (t + 1))
    assert weight(P(1, 1), half_seven_tenths) == (1 - z) * (1 - zp) / (2 * (t + 1))


def test_degenerate_rejected():
    with pytest.raises(DegenerateParametersError):
        weight(P(2), ZParams(2, F(1, 2)))


def test_three_weight_formulas_agree_exactly(half_seven_tenths):
    for n in range(9):
        for lam in partitions_of(n):
            a = weight(lam, half_seven_tenths, "boxes")
            assert a == weight(lam, half_seven_tenths, "rows") == weight(lam, half_seven_tenths, "frobenius")
            assert a > 0


def test_three_weight_formulas_agree_complex(principal):
    for n in range(9):
        for lam in partitions_of(n):
            a = weight(lam, principal, "boxes")
            for m in ("rows", "frobenius"):
                assert abs(a - weight(lam, principal, m)) <= 1e-12 * abs(a)
            assert abs(a.imag) <= 1e-12 * abs(a) and a.real > 0


def test_coherence_and_normalization(half):
    for n in range(7):
        rep = verify_coherence(n, half)
        assert rep.passed and rep.max_violation == 0


def test_coherence_complex(principal):
    for n in range(7):
        rep = verify_coherence(n, principal)
        assert rep.passed and rep.max_violation < 1e-12


def test_determinantal_form(half):
    assert det_weight(P(1), half) == 1
    assert det_weight(P(2), half) == F(9, 10)
    assert det_weight(P(2, 1), half) == weight(P(2, 1), half) / 2
    for n in range(7):
        for lam in partitions_of(n):
            assert det_weight(lam, half) == weight(lam, half) / dim(lam)


def test_recurrence(half, principal):
    assert m_coefficient(0, 0, half) == half.t
    rep = verify_m_recurrence(10, 10, half)
    assert rep.passed and rep.max_violation == 0
    assert verify_m_recurrence(10, 10, principal).passed


def test_transpose_symmetry_examples(half):
    assert weight(P(1, 1), half) == weight(P(2), half.negated()) == F(1, 10)
    assert weight(P(2, 1), half) == weight(P(2, 1), half.negated())


@given(partitions(8), st.sampled_from([("1/2", "1/2"), ("1/2", "7/10"), ("-3/2", "-6/5"), ("5/3", "9/7")]))
def test_transpose_symmetry_property(lam, zz):
    params = ZParams(*zz)
    assert transpose_symmetry_check(lam, params)
    assert weight(transpose(lam), params) == weight(lam, params.negated())


@given(partitions(8), st.fractions(F(-3, 1), F(3, 1), max_denominator=12))
def test_exchange_symmetry(lam, z):
    if z.denominator == 1:
        return
    zp = z + F(1, 97) if (z + F(1, 97)).__floor__() == z.__floor__() else z - F(1, 97)
    a, b = ZParams(z, zp), ZParams(zp, z)
    assert weight(lam, a) == weight(lam, b)


@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0), st.integers(0, 7))
def test_principal_normalization(re, im, n):
    params = ZParams(complex(re, im), complex(re, -im))
    total = sum(weight(lam, params) for lam in partitions_of(n))
    assert abs(total - 1) < 1e-10
