from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given

from conftest import partitions
from zmeasures.ewens_pd import monomial_coefficient
from zmeasures.partitions import (BoxOutOfShapeError, ExponentialForm, FrobeniusCoords,
                                  InvalidSimplexPointError, NotAnEdgeError, Partition, ThomaPoint,
                                  add_boxes, dim, dim0, extended_power_sum, frobenius,
                                  from_frobenius, hook_length, kingman_multiplicity,
                                  parse_partition, partitions_of, remove_boxes, transpose, z_lambda)

P = Partition.of


def test_partition_rejects_increasing_parts():
    with pytest.raises(ValueError):
        P(1, 2)
    with pytest.raises(ValueError):
        P(2, 0)


@pytest.mark.parametrize("lam, p, q", [((), (), ()), ((3, 2), (2, 0), (1, 0)), ((1,), (0,), (0,))])
def test_frobenius_examples(lam, p, q):
    assert frobenius(Partition(lam)) == FrobeniusCoords(p, q)


@pytest.mark.parametrize("lam, expected", [((3, 2), (2, 2, 1)), ((1, 1), (2,)), ((), ())])
def test_transpose_examples(lam, expected):
    assert transpose(Partition(lam)) == Partition(expected)


def test_hook_lengths():
    lam = P(3, 2)
    assert hook_length(lam, 1, 1) == 4
    assert hook_length(lam, 2, 2) == 1
    assert hook_length(P(1), 1, 1) == 1
    with pytest.raises(BoxOutOfShapeError):
        hook_length(lam, 2, 3)


@pytest.mark.parametrize("lam, expected", [((1,), 1), ((2, 1), 2), ((3, 2), 5), ((4, 2, 1), 35)])
def test_dim_examples(lam, expected):
    for method in ("hook", "determinant", "frobenius", "paths"):
        assert dim(Partition(lam), method) == expected


def test_dim_methods_agree_up_to_nine():
    for n in range(10):
        for lam in partitions_of(n):
            ref = dim(lam, "paths")
            assert dim(lam, "hook") == dim(lam, "determinant") == dim(lam, "frobenius") == ref


def test_sum_of_squared_dims_is_factorial():
    for n in range(9):
        assert sum(dim(lam) ** 2 for lam in partitions_of(n)) == factorial(n)


def test_partition_counts():
    assert [len(partitions_of(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_add_and_remove_boxes():
    assert add_boxes(P(1)) == [P(2), P(1, 1)]
    assert set(remove_boxes(P(2, 1))) == {P(2), P(1, 1)}
    assert add_boxes(P(2, 2)) == [P(3, 2), P(2, 2, 1)]
    assert add_boxes(Partition()) == [P(1)]


@given(partitions(12))
def test_add_boxes_count_and_shape(lam):
    grown = add_boxes(lam)
    assert len(grown) == len(set(lam.parts)) + 1
    for g in grown:
        assert g.size == lam.size + 1
        assert lam in remove_boxes(g)


@given(partitions(12))
def test_transpose_is_involution_and_swaps_frobenius(lam):
    lt = transpose(lam)
    assert transpose(lt) == lam
    fc, fct = frobenius(lam), frobenius(lt)
    assert (fc.p, fc.q) == (fct.q, fct.p)
    assert dim(lam) == dim(lt)


@given(partitions(12))
def test_frobenius_round_trip(lam):
    fc = frobenius(lam)
    assert from_frobenius(fc) == lam
    assert sum(fc.p) + sum(fc.q) + fc.d == lam.size


def test_kingman_multiplicity_examples():
    assert kingman_multiplicity(P(2, 1), P(2, 2)) == 2
    assert kingman_multiplicity(P(1), P(2)) == 1
    assert kingman_multiplicity(P(1, 1), P(1, 1, 1)) == 3
    with pytest.raises(NotAnEdgeError):
        kingman_multiplicity(P(2), P(1, 1, 1))
    with pytest.raises(NotAnEdgeError):
        kingman_multiplicity(P(2), P(3, 1))


def test_dim0_examples_and_recurrence():
    assert dim0(P(2, 1)) == 3
    assert dim0(P(1)) == 1
    assert dim0(P(2, 2)) == 6
    for n in range(11):
        for lam in partitions_of(n):
            assert dim0(lam, "recurrence") == dim0(lam, "closed_form")


def test_dim0_is_monomial_coefficient_of_p1_power():
    for n in range(1, 7):
        for lam in partitions_of(n):
            assert dim0(lam) == monomial_coefficient([0] * n, lam)


def test_z_lambda_examples():
    assert z_lambda(P(2)) == 2
    assert z_lambda(P(1, 1)) == 2
    assert z_lambda(P(2, 2, 1)) == 8


def test_exponential_form():
    e = ExponentialForm.of(P(3, 1, 1))
    assert e.multiplicity(1) == 2 and e.multiplicity(3) == 1 and e.multiplicity(2) == 0


def test_extended_power_sums():
    F = Fraction
    omega = ThomaPoint((F(1, 2), F(1, 4)), (F(1, 8),), F(1, 8))
    assert extended_power_sum(omega, 1) == 1
    assert extended_power_sum(omega, 2) == F(19, 64)
    assert extended_power_sum(omega, 3) == F(1, 8) + F(1, 64) + F(1, 512)
    assert extended_power_sum(ThomaPoint((), (), 1), 2) == 0


def test_thoma_point_validation():
    with pytest.raises(InvalidSimplexPointError):
        ThomaPoint((Fraction(1, 2),), (), Fraction(1, 4))
    with pytest.raises(InvalidSimplexPointError):
        ThomaPoint((0.2, 0.3), (), 0.5)
    ThomaPoint((0.5, 0.25), (0.125,), 0.125 + 1e-14)


def test_parse_partition():
    assert parse_partition("[3, 1, 2]") == P(3, 2, 1)
    assert parse_partition([0, 1, 2]) == P(2, 1)
    assert P(3, 2).to_json() == [3, 2]
