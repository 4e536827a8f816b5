import json
from collections import Counter
from fractions import Fraction as F
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import partitions
from zmeasures.partitions import Partition, ThomaPoint, partitions_of
from zmeasures.sampling import (Configuration, EmptySampleError, embed_configuration, embed_rows,
                                empirical_density, exact_law_table, make_bins, path_product_law,
                                sample_partition, sample_partitions_batch, sample_record,
                                sample_rows_batch, up_transition)
from zmeasures.zmeasure import ZParams

P = Partition.of


def test_up_transition_examples(half):
    assert up_transition(P(1), half) == {P(2): F(9, 10), P(1, 1): F(1, 10)}
    assert up_transition(Partition(), half) == {P(1): 1}


def test_up_transition_sums_to_one_exactly(half_seven_tenths):
    for n in range(9):
        for mu in partitions_of(n):
            probs = up_transition(mu, half_seven_tenths)
            assert sum(probs.values()) == 1
            assert all(p > 0 for p in probs.values())


def test_content_form_equals_coherence_ratio(half_seven_tenths):
    for n in range(7):
        for mu in partitions_of(n):
            assert up_transition(mu, half_seven_tenths, "contents") == up_transition(mu, half_seven_tenths)


def test_path_products_reproduce_weights(half, half_seven_tenths):
    for params in (half, half_seven_tenths):
        for n in range(5):
            assert path_product_law(n, params) == exact_law_table(n, params)


def test_empty_growth():
    assert sample_partition(0, ZParams("1/2", "1/2"), 5) == Partition()


def test_reproducible_and_single_equals_first_of_batch(half):
    a = sample_partitions_batch(30, half, 50, seed=11)
    b = sample_partitions_batch(30, half, 50, seed=11)
    assert a == b
    assert sample_partition(30, half, 11) == a[0]
    assert all(lam.size == 30 for lam in a)


def _frequencies_within(params, n, samples, seed, sigmas=3.0):
    counts = Counter(sample_partitions_batch(n, params, samples, seed))
    for lam, w in exact_law_table(n, params).items():
        p = complex(w).real
        se = sqrt(p * (1 - p) / samples)
        assert abs(counts[lam] / samples - p) <= sigmas * se, (lam, counts[lam] / samples, p)


def test_monte_carlo_level_two(half, principal):
    _frequencies_within(half, 2, 100_000, seed=1)
    _frequencies_within(principal, 2, 100_000, seed=2)


def test_embedding_examples():
    assert embed_configuration(P(1), 1).points == (0.5, -0.5)
    assert embed_configuration(P(3, 2), 5).points == (0.5, 0.1, -0.3, -0.1)
    with pytest.raises(ValueError):
        embed_configuration(P(3, 2), 4)


@given(partitions(14).filter(lambda lam: lam.size > 0))
def test_embedding_properties(lam):
    n = lam.size
    conf = embed_configuration(lam, n)
    d = len(conf.points) // 2
    assert sum(abs(x) for x in conf.points) <= 1 + d / n + 1e-12
    for eps in (0.05, 0.1, 0.25, 0.5):
        assert conf.count_outside(eps) <= 1 / eps + 2 * d / n / eps


@settings(max_examples=20)
@given(st.integers(1, 40), st.integers(0, 10_000))
def test_vectorised_embedding_matches_per_diagram(n, seed):
    params = ZParams("1/2", "7/10")
    rows = sample_rows_batch(n, params, 5, seed)
    pts, owner = embed_rows(rows, n)
    for k in range(5):
        lam = Partition(tuple(int(v) for v in rows[k] if v))
        assert sorted(pts[owner == k]) == pytest.approx(sorted(embed_configuration(lam, n).points))


def test_configuration_rejects_zero():
    with pytest.raises(ValueError):
        Configuration((0.0, 0.5))


def test_empirical_density_basic():
    h = empirical_density([Configuration()], [(0.1, 0.2), (-0.2, -0.1)])
    assert np.all(h.estimate == 0)
    with pytest.raises(EmptySampleError):
        empirical_density([], [(0.1, 0.2)])
    with pytest.raises(ValueError):
        empirical_density([Configuration()], [(-0.1, 0.1)])
    h = empirical_density([Configuration((0.15, 0.16)), Configuration((0.15,))], [(0.1, 0.2)])
    assert h.estimate[0] == pytest.approx(15.0)
    assert h.stderr[0] == pytest.approx(np.std([2, 1], ddof=1) / sqrt(2) / 0.1)
    rows = list(h.to_csv_rows())
    assert rows[0] == ("bin_lo", "bin_hi", "estimate", "stderr")


def test_make_bins():
    assert np.allclose(make_bins(0.1, 0.3, 0.1), [(0.1, 0.2), (0.2, 0.3)])


def test_sample_record_is_json():
    rec = sample_record(3, P(2, 1), 9)
    assert json.loads(json.dumps(rec)) == {"n": 3, "lambda": [2, 1], "seed": 9}


def test_thoma_point_reexported():
    assert ThomaPoint((0.5,), (0.25,), 0.25).gamma == 0.25
