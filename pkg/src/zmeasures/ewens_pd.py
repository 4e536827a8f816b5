"""Ewens partition structures on the Kingman graph, the Poisson-Dirichlet
controlling measures and correlation functions, and PD(t) / Chinese
restaurant samplers.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, prod
from typing import Iterator, Sequence

import numpy as np

from .characters import SizeMismatchError
from .density import MomentSpec
from .partitions import (Partition, ThomaPoint, dim0, kingman_multiplicity, partitions_of,
                         remove_boxes, z_lambda)
from .special import pochhammer, quad_endpoint
from .zmeasure import CheckReport, parse_scalar

SET_PARTITION_CAP = 10
PD_RESIDUAL_TARGET = 1e-12


@dataclass(frozen=True)
class EwensParams:
    t: Fraction | float

    def __post_init__(self):
        t = parse_scalar(self.t)
        if not isinstance(t, Fraction):
            if t.imag != 0:
                raise ValueError(f"t must be real, got {t}")
            t = t.real
        if t <= 0:
            raise ValueError(f"t must be positive, got {t}")
        object.__setattr__(self, "t", t)

    @property
    def exact(self) -> bool:
        return isinstance(self.t, Fraction)


@dataclass(frozen=True)
class SetPartition:
    """Blocks of {1..n}, each sorted, listed by smallest element."""
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        elems = [e for b in blocks for e in b]
        if any(not b for b in blocks) or sorted(elems) != list(range(1, len(elems) + 1)):
            raise ValueError(f"not a set partition of 1..n: {self.blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def r(self) -> int:
        return len(self.blocks)

    def orderings(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        """The r! ordered set partitions over this one."""
        return permutations(self.blocks)

    def __str__(self):
        return " | ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


def _restricted_growth_strings(n: int) -> Iterator[list[int]]:
    a = [0] * n
    def rec(i, top):
        if i == n:
            yield list(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))
    if n == 0:
        yield []
        return
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def set_partitions(n: int) -> tuple[SetPartition, ...]:
    """All set partitions of {1..n}; there are Bell(n) of them, so n is capped at 10."""
    if n < 0 or n > SET_PARTITION_CAP:
        raise ValueError(f"set partitions enumerated only for 0 <= n <= {SET_PARTITION_CAP}")
    out = []
    for rgs in _restricted_growth_strings(n):
        blocks: dict[int, list[int]] = {}
        for j, b in enumerate(rgs, start=1):
            blocks.setdefault(b, []).append(j)
        out.append(SetPartition(tuple(tuple(v) for v in blocks.values())))
    return tuple(out)


def ewens_weight(lam: Partition, params: EwensParams):
    """t^l(lam) n! / ((t)_n z_lam)."""
    t, n = params.t, lam.size
    return t ** lam.length * Fraction(factorial(n), z_lambda(lam)) / pochhammer(t, n)


def verify_kingman_coherence(n: int, params: EwensParams, rtol: float = 1e-12) -> CheckReport:
    """M_n(mu) = sum over lam covering mu of dim0(mu) kappa(mu,lam) / dim0(lam) * M_{n+1}(lam),
    plus normalization at levels n and n+1."""
    upper = {lam: ewens_weight(lam, params) for lam in partitions_of(n + 1)}
    covers: dict[Partition, list[Partition]] = {}
    for lam in upper:
        for mu in remove_boxes(lam):
            covers.setdefault(mu, []).append(lam)
    worst, worst_v = None, 0
    for mu in partitions_of(n):
        lhs = ewens_weight(mu, params)
        d = dim0(mu)
        rhs = sum((Fraction(d * kingman_multiplicity(mu, lam), dim0(lam)) * upper[lam]
                   for lam in covers.get(mu, [])), start=0)
        v = abs(lhs - rhs)
        if worst is None or v > worst_v:
            worst, worst_v = mu, v
    norms = {n: abs(sum(ewens_weight(mu, params) for mu in partitions_of(n)) - 1),
             n + 1: abs(sum(upper.values()) - 1)}
    total = max(worst_v, *norms.values())
    ok = total == 0 if params.exact else total <= rtol
    return CheckReport(ok, total, worst, {"normalization": norms})


def _set_partitions_into(n: int, r: int) -> list[SetPartition]:
    return [sp for sp in set_partitions(n) if sp.r == r]


def monomial_coefficient(l: Sequence[int], lam: Partition) -> int:
    """Coefficient of m_lam in p_{l_1+1} ... p_{l_n+1}.

    Choosing variable i in factor j for every j gives an ordered set
    partition; it produces x_1^lam_1 ... x_r^lam_r exactly when block i
    has weight lam_i.  Unordered partitions whose block weights form the
    multiset lam therefore count prod_k r_k! times.
    """
    l = [int(v) for v in l]
    if sum(v + 1 for v in l) != lam.size:
        raise SizeMismatchError(f"sum of (l_i + 1) is {sum(v + 1 for v in l)}, |lambda| = {lam.size}")
    r = lam.length
    if r > len(l):
        return 0
    target = sorted(lam.parts)
    mult = prod(factorial(v) for v in Counter(lam.parts).values())
    hits = 0
    for sp in _set_partitions_into(len(l), r):
        if sorted(sum(l[j - 1] + 1 for j in b) for b in sp.blocks) == target:
            hits += 1
    return hits * mult


def block_moment(sp: SetPartition, l: Sequence[int], params: EwensParams):
    """Moment of the component of sigma_n living on the diagonal section of sp:
    t^r prod_i (m_i + |block_i| - 1)! / (t)_{|l|+n}, m_i the exponent sum over block i."""
    t = params.t
    total = sum(l) + len(l)
    num = prod(factorial(sum(l[j - 1] for j in b) + len(b) - 1) for b in sp.blocks)
    return t ** sp.r * num / pochhammer(t, total)


def sigma_t_n_moment(spec: MomentSpec | Sequence[int], params: EwensParams,
                     route: str = "coefficient_sum"):
    """Moment of sigma^(t)_n with exponents l_1..l_n.

    ``coefficient_sum`` expands the product of power sums in monomials and
    pairs each m_lam with M(lam)/dim0(lam); ``set_partition_sum`` sums the Dirichlet
    block moments over set partitions.
    """
    l = list(spec.exponents) if isinstance(spec, MomentSpec) else [int(v) for v in spec]
    n = len(l)
    if n < 1:
        raise ValueError("need at least one exponent")
    if route == "coefficient_sum":
        size = sum(l) + n
        out = 0
        for lam in partitions_of(size):
            if lam.length > n:
                continue
            c = monomial_coefficient(l, lam)
            if c:
                out += c * ewens_weight(lam, params) / dim0(lam)
        return out
    if route == "set_partition_sum":
        return sum((block_moment(sp, l, params) for sp in set_partitions(n)), start=0)
    raise ValueError(f"unknown route {route!r}")


def first_moment_beta(l: int, params: EwensParams, tol: float = 1e-12) -> float:
    """Integral of x^l t (1-x)^(t-1) over (0,1) by quadrature."""
    t = float(params.t)
    return t * quad_endpoint(lambda x: 1.0, (0.0, 1.0), (l, t - 1), tol=tol)


def watterson_rho(x: Sequence[float], params: EwensParams) -> float:
    """t^n (1 - sum x)_+^(t-1) / prod x."""
    x = [float(v) for v in np.atleast_1d(x)]
    if any(v <= 0 for v in x):
        raise ValueError("Watterson density needs positive coordinates")
    rest = 1 - sum(x)
    if rest <= 0:
        return 0.0
    t = float(params.t)
    return t ** len(x) * rest ** (t - 1) / prod(x)


@dataclass(frozen=True)
class BlockComponent:
    partition: SetPartition

    @property
    def r(self) -> int:
        return self.partition.r

    @property
    def delta_count(self) -> int:
        return self.partition.n - self.r

    def describe(self) -> str:
        """Density on the section, written with the smallest index of each block as coordinate."""
        reps = [b[0] for b in self.partition.blocks]
        factors = [f"t^{self.r}"]
        for b in self.partition.blocks:
            if len(b) > 1:
                factors.append(f"x{b[0]}^{len(b) - 1}")
        factors.append("(1-" + "-".join(f"x{i}" for i in reps) + ")_+^(t-1)")
        for b in self.partition.blocks:
            factors += [f"delta(x{b[0]}-x{j})" for j in b[1:]]
        return " ".join(factors)

    def density(self, y: Sequence[float], params: EwensParams) -> float:
        """Density in the block coordinates y_1..y_r."""
        y = [float(v) for v in y]
        rest = 1 - sum(y)
        if rest <= 0:
            return 0.0
        t = float(params.t)
        return t ** self.r * prod(v ** (len(b) - 1) for v, b in zip(y, self.partition.blocks)) * rest ** (t - 1)

    def moment(self, l: Sequence[int], params: EwensParams):
        return block_moment(self.partition, l, params)


def components(n: int) -> list[BlockComponent]:
    """Components of sigma^(t)_n, one per set partition, ordered by number of blocks."""
    return sorted((BlockComponent(sp) for sp in set_partitions(n)), key=lambda c: (c.r, c.partition.blocks))


def diagonal_component_check(l_max: int, params: EwensParams) -> bool:
    """At n = 2 the diagonal component equals y * sigma_1(dy): its (l1, l2) moment is
    the (l1 + l2 + 1) moment of sigma_1."""
    diag = SetPartition(((1, 2),))
    for l1 in range(l_max + 1):
        for l2 in range(l_max + 1):
            lhs = block_moment(diag, (l1, l2), params)
            if lhs != sigma_t_n_moment([l1 + l2 + 1], params, "set_partition_sum"):
                return False
    return True


def component_moment_by_quadrature(sp: SetPartition, l: Sequence[int], params: EwensParams,
                                   tol: float = 1e-10) -> float:
    """Integral of prod_i y_i^(m_i + |block_i|) * watterson_rho(y) over the simplex, for r <= 2.

    This is the decomposition of a controlling measure into products of
    y's against correlation functions, evaluated numerically.
    """
    t = float(params.t)
    ex = [sum(l[j - 1] for j in b) + len(b) for b in sp.blocks]
    if sp.r == 1:
        # y^e * t (1-y)^(t-1) / y
        return t * quad_endpoint(lambda y: 1.0, (0.0, 1.0), (ex[0] - 1, t - 1), tol=tol)
    if sp.r == 2:
        def inner(y1):
            top = 1 - y1
            if top <= 0:
                return 0.0
            return quad_endpoint(lambda y2: 1.0, (0.0, top), (ex[1] - 1, t - 1), tol=tol / 10)
        return t * t * quad_endpoint(inner, (0.0, 1.0), (ex[0] - 1, 0.0), tol=tol)
    raise ValueError("quadrature check implemented for at most two blocks")


def default_truncation(params: EwensParams) -> int:
    return int(math.ceil(10 * max(float(params.t), 1.0) * math.log(1 / PD_RESIDUAL_TARGET)))


def sample_pd_batch(params: EwensParams, samples: int, seed: int, truncation: int | None = None,
                    keep: int | None = None, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Stick-breaking draws of PD(t), sorted in decreasing order.

    Returns (alphas, residuals): alphas has shape (samples, keep) with the
    ``keep`` largest atoms (all of them by default) and residuals is the
    unallocated mass, reported as gamma.  Draws are taken chunk by chunk
    from one ``default_rng(seed)`` stream.
    """
    t = float(params.t)
    k = truncation or default_truncation(params)
    keep = k if keep is None else min(keep, k)
    rng = np.random.default_rng(seed)
    alphas = np.empty((samples, keep))
    residuals = np.empty(samples)
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        v = rng.beta(1.0, t, size=(m, k))
        # remaining stick before each break
        left = np.concatenate([np.ones((m, 1)), np.cumprod(1 - v, axis=1)[:, :-1]], axis=1)
        a = v * left
        residuals[start:start + m] = left[:, -1] * (1 - v[:, -1])
        alphas[start:start + m] = -np.sort(-a, axis=1)[:, :keep]
    worst = residuals.max()
    if worst > PD_RESIDUAL_TARGET:
        warnings.warn(f"PD truncation at {k} sticks leaves residual mass up to {worst:.3g}")
    return alphas, residuals


def sample_pd(params: EwensParams, seed: int, truncation: int | None = None) -> ThomaPoint:
    alphas, residuals = sample_pd_batch(params, 1, seed, truncation)
    a = alphas[0]
    return ThomaPoint(tuple(a.tolist()), (), float(residuals[0]))


def sample_ewens_batch(n: int, params: EwensParams, samples: int, seed: int) -> list[Partition]:
    """Chinese restaurant process: customer k+1 opens a table with probability t/(t+k),
    otherwise joins an existing table with probability proportional to its size.
    One uniform per customer, rows of a (samples, n) block."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = float(params.t)
    rng = np.random.default_rng(seed)
    u = rng.random((samples, n))
    out = []
    for row in u:
        tables: list[int] = []
        for k in range(n):
            x = row[k] * (t + k)
            if x < t or not tables:
                tables.append(1)
                continue
            x -= t
            # table j occupies an interval of length tables[j]
            acc = 0
            for j, size in enumerate(tables):
                acc += size
                if x < acc or j == len(tables) - 1:
                    tables[j] += 1
                    break
        out.append(Partition(tuple(sorted(tables, reverse=True))))
    return out


def sample_ewens(n: int, params: EwensParams, seed: int) -> Partition:
    return sample_ewens_batch(n, params, 1, seed)[0]
