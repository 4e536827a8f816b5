import itertools
from collections import Counter
from fractions import Fraction as F
from itertools import permutations
from math import factorial, sqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zmeasures.characters import SizeMismatchError
from zmeasures.density import MomentSpec
from zmeasures.ewens_pd import (EwensParams, SetPartition, component_moment_by_quadrature,
                                components, diagonal_component_check, ewens_weight,
                                first_moment_beta, monomial_coefficient, sample_ewens,
                                sample_ewens_batch, sample_pd, sample_pd_batch, set_partitions,
                                sigma_t_n_moment, verify_kingman_coherence, watterson_rho)
from zmeasures.partitions import Partition, partitions_of

P = Partition.of
T_VALUES = [F(1, 2), F(1), F(2)]

# E[alpha_1] under PD(1), the Golomb-Dickman constant
GOLOMB_DICKMAN = 0.6243299885435508


def _cycle_type(perm):
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            k += 1
        out.append(k)
    return Partition(tuple(sorted(out, reverse=True)))


def test_params_validation():
    assert EwensParams("1/2").exact
    assert not EwensParams(0.5).exact
    with pytest.raises(ValueError):
        EwensParams(0)


def test_weight_examples():
    t = F(3, 7)
    p = EwensParams(t)
    assert ewens_weight(P(2), p) == 1 / (t + 1)
    assert ewens_weight(P(1, 1), p) == t / (t + 1)
    assert ewens_weight(P(1), p) == 1


def test_t_one_is_cycle_type_of_uniform_permutation():
    p = EwensParams(1)
    for n in range(1, 7):
        counts = Counter(_cycle_type(perm) for perm in permutations(range(n)))
        for lam in partitions_of(n):
            assert ewens_weight(lam, p) == F(counts[lam], factorial(n))


def test_normalization_up_to_ten():
    for t in T_VALUES + [F(5, 3)]:
        p = EwensParams(t)
        for n in range(11):
            assert sum(ewens_weight(lam, p) for lam in partitions_of(n)) == 1


def test_kingman_coherence():
    for t in T_VALUES:
        for n in range(7):
            rep = verify_kingman_coherence(n, EwensParams(t))
            assert rep.passed and rep.max_violation == 0


def test_set_partitions_are_bell_numbers():
    assert [len(set_partitions(n)) for n in range(9)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    with pytest.raises(ValueError):
        set_partitions(11)
    with pytest.raises(ValueError):
        SetPartition(((1, 2), (2, 3)))


def _brute_monomial(l, lam):
    """Count maps from factors to variables 1..r giving x_1^lam_1 ... x_r^lam_r."""
    r = lam.length
    hits = 0
    for f in itertools.product(range(r), repeat=len(l)):
        expo = [0] * r
        for j, v in enumerate(f):
            expo[v] += l[j] + 1
        hits += expo == list(lam.parts)
    return hits


def test_monomial_coefficient_examples():
    assert monomial_coefficient([0, 0], P(1, 1)) == 2
    assert monomial_coefficient([0, 0], P(2)) == 1
    assert monomial_coefficient([1, 0], P(2, 1)) == 1
    assert monomial_coefficient([1, 0], P(3)) == 1
    for l in range(5):
        for lam in partitions_of(l + 1):
            assert monomial_coefficient([l], lam) == (1 if lam == P(l + 1) else 0)
    with pytest.raises(SizeMismatchError):
        monomial_coefficient([1, 1], P(3))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_monomial_coefficient_matches_brute_force(l):
    for lam in partitions_of(sum(l) + len(l)):
        if lam.length <= len(l):
            assert monomial_coefficient(l, lam) == _brute_monomial(l, lam)


def test_dual_route_moments():
    for t in T_VALUES:
        p = EwensParams(t)
        for n in (1, 2, 3):
            for l in itertools.product(range(5), repeat=n):
                a = sigma_t_n_moment(MomentSpec(l), p, "coefficient_sum")
                assert a == sigma_t_n_moment(l, p, "set_partition_sum")


def test_first_moment_closed_form_and_beta_integral():
    for t in T_VALUES:
        p = EwensParams(t)
        assert sigma_t_n_moment([0], p) == 1
        for l in range(9):
            exact = t * factorial(l) / _poch(t, l + 1)
            assert sigma_t_n_moment([l], p) == exact
            assert abs(float(exact) - first_moment_beta(l, p)) < 1e-8


def _poch(a, n):
    out = F(1)
    for k in range(n):
        out *= a + k
    return out


def test_diagonal_component_is_y_times_sigma1():
    for t in T_VALUES:
        assert diagonal_component_check(4, EwensParams(t))


def test_components_at_three():
    comps = components(3)
    assert [c.r for c in comps] == [1, 2, 2, 2, 3]
    # three singleton blocks: absolutely continuous, t^3 density
    free = comps[-1]
    assert free.delta_count == 0 and free.describe().startswith("t^3 (1-x1-x2-x3)")
    # one block: concentrated on the full diagonal with weight x^2
    diag = comps[0]
    assert diag.delta_count == 2 and "x1^2" in diag.describe()
    assert comps[1].describe() == "t^2 x2^1 (1-x1-x2)_+^(t-1) delta(x2-x3)"


def test_components_match_watterson_decomposition():
    for t in T_VALUES:
        p = EwensParams(t)
        for n in (2, 3):
            for sp in set_partitions(n):
                if sp.r > 2:
                    continue
                for l in [(0,) * n, (1,) + (2,) * (n - 1), (3,) * n]:
                    q = component_moment_by_quadrature(sp, l, p)
                    assert abs(q - float(sigma_t_n_moment_component(sp, l, p))) < 1e-9


def sigma_t_n_moment_component(sp, l, p):
    return next(c for c in components(sp.n) if c.partition == sp).moment(l, p)


def test_component_density_vs_watterson():
    p = EwensParams(F(1, 2))
    diag2 = SetPartition(((1, 2),))
    comp = next(c for c in components(2) if c.partition == diag2)
    for y in (0.1, 0.4, 0.8):
        assert comp.density([y], p) == pytest.approx(y ** 2 * watterson_rho([y], p))


def test_watterson_examples():
    assert watterson_rho([0.25], EwensParams(1)) == pytest.approx(4.0)
    assert watterson_rho([0.6, 0.5], EwensParams(2)) == 0
    assert watterson_rho([0.2, 0.3], EwensParams(2)) == pytest.approx(100 / 3)
    with pytest.raises(ValueError):
        watterson_rho([0.0], EwensParams(1))


def test_pd_reproducible_and_valid():
    p = EwensParams(F(1, 2))
    a = sample_pd(p, 3)
    b = sample_pd(p, 3)
    assert a == b
    assert list(a.alpha) == sorted(a.alpha, reverse=True)
    assert abs(sum(a.alpha) + a.gamma - 1) < 1e-12 and a.gamma < 1e-12


def test_pd_truncation_warning():
    with pytest.warns(UserWarning):
        sample_pd_batch(EwensParams(2), 10, 0, truncation=5)


def test_pd_mean_largest_atom():
    alphas, _ = sample_pd_batch(EwensParams(1), 100_000, 0, keep=1)
    mean, se = alphas[:, 0].mean(), alphas[:, 0].std(ddof=1) / sqrt(len(alphas))
    assert abs(mean - GOLOMB_DICKMAN) <= 3 * se


def test_crp_basic():
    assert sample_ewens(1, EwensParams(2), 0) == P(1)
    assert sample_ewens_batch(5, EwensParams(1), 20, 4) == sample_ewens_batch(5, EwensParams(1), 20, 4)
    lams = sample_ewens_batch(2, EwensParams(1), 100_000, 5)
    freq = sum(lam == P(2) for lam in lams) / 1e5
    assert abs(freq - 0.5) <= 3 * sqrt(0.25 / 1e5)


def test_crp_frequencies_at_six():
    p = EwensParams(F(1, 2))
    counts = Counter(sample_ewens_batch(6, p, 100_000, 6))
    for lam in partitions_of(6):
        w = float(ewens_weight(lam, p))
        assert abs(counts[lam] / 1e5 - w) <= 3 * sqrt(w * (1 - w) / 1e5)


def test_pd_histogram_against_watterson():
    for t in (0.5, 1.0, 2.0):
        p = EwensParams(t)
        alphas, _ = sample_pd_batch(p, 100_000, 7, keep=25)
        edges = np.linspace(0.05, 0.95, 10)
        _check_histogram(alphas, edges, p)


def _check_histogram(alphas, edges, p):
    n = len(alphas)
    for lo, hi in zip(edges[:-1], edges[1:]):
        per_sample = ((alphas >= lo) & (alphas < hi)).sum(axis=1)
        est = per_sample.mean()
        se = per_sample.std(ddof=1) / sqrt(n)
        xs = np.linspace(lo, hi, 201)
        ref = np.trapezoid([watterson_rho([x], p) for x in xs], xs)
        assert abs(est - ref) <= 3 * se + 1e-6
