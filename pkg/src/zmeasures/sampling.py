"""Sequential growth sampling of z-distributed Young diagrams.

A diagram of size n is grown one box at a time.  With x_1..x_k the
contents of the addable boxes of mu and y_1..y_{k-1} those of the
removable ones, the box of content x_i is added with probability

    (x_i^2 + (z+z') x_i + zz') / (zz' + n) * prod_j (x_i - y_j) / prod_{j!=i} (x_i - x_j)

which is the coherence ratio (dim mu / dim lam) M(lam) / M(mu) written in
contents.  Both (z+z') and zz' are real on the principal and
complementary series, so the batch kernel runs in float64.

RNG layout: ``np.random.default_rng(seed)`` (PCG64) draws one
``(samples, n)`` block of uniforms; sample i consumes row i, one uniform
per growth step.  A single draw with the same seed equals row 0 of the batch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numba
import numpy as np

# skip the probe of an outdated system TBB, which only produces a warning
if numba.config.THREADING_LAYER == "default":
    numba.config.THREADING_LAYER = "omp"

from .partitions import Partition, ThomaPoint, add_boxes, dim, frobenius, partitions_of
from .zmeasure import Scalar, ZParams, require_valid, weight

__all__ = [
    "ThomaPoint", "Configuration", "Histogram", "EmptySampleError",
    "up_transition", "path_product_law", "sample_partition", "sample_partitions_batch",
    "embed_configuration", "embed_rows", "empirical_density", "make_bins", "sample_record",
    "sample_rows_batch", "exact_law_table",
]


class EmptySampleError(ValueError):
    pass


def _content_of_new_box(mu: Partition, lam: Partition) -> int:
    for i in range(1, lam.length + 1):
        if lam.row(i) != mu.row(i):
            return lam.row(i) - i
    raise ValueError(f"{lam} does not cover {mu}")


def up_transition(mu: Partition, params: ZParams, method: str = "coherence") -> dict[Partition, Scalar]:
    """Probabilities of mu -> lam over add_boxes(mu).

    ``coherence`` divides weights, ``contents`` uses the closed form in the
    module docstring; both are exact for rational parameters.
    """
    require_valid(params)
    n = mu.size
    out = {}
    if method == "coherence":
        base = weight(mu, params)
        dmu = dim(mu)
        for lam in add_boxes(mu):
            out[lam] = Fraction(dmu, dim(lam)) * weight(lam, params) / base
    elif method == "contents":
        s, t = params.z + params.zp, params.t
        dmu = dim(mu)
        for lam in add_boxes(mu):
            c = _content_of_new_box(mu, lam)
            out[lam] = (c * c + s * c + t) / (t + n) * Fraction(dim(lam), (n + 1) * dmu)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out


def path_product_law(n: int, params: ZParams) -> dict[Partition, Scalar]:
    """Law of the grown diagram obtained by summing transition products over all paths."""
    law = {Partition(): Fraction(1) if params.exact else 1}
    for _ in range(n):
        nxt: dict[Partition, Scalar] = {}
        for mu, p in law.items():
            for lam, q in up_transition(mu, params).items():
                nxt[lam] = nxt.get(lam, 0) + p * q
        law = nxt
    return law


def _real_params(params: ZParams) -> tuple[float, float]:
    require_valid(params)
    s, t = complex(params.z + params.zp), complex(params.t)
    return s.real, t.real


@numba.njit(cache=True, parallel=True)
def _grow_batch(uniforms, s, t):
    n_samples, n = uniforms.shape
    rows = np.zeros((n_samples, n + 1), dtype=np.int64)
    for k in numba.prange(n_samples):
        r = rows[k]
        xs = np.empty(n + 2, dtype=np.float64)
        at = np.empty(n + 2, dtype=np.int64)
        ys = np.empty(n + 2, dtype=np.float64)
        nrows = 0
        for step in range(n):
            # addable and removable corners of the current diagram
            na = 0
            nr = 0
            for i in range(nrows + 1):
                prev = r[i - 1] if i > 0 else n + 1
                if r[i] < prev:
                    xs[na] = r[i] - i
                    at[na] = i
                    na += 1
                if i < nrows and r[i] > r[i + 1]:
                    ys[nr] = r[i] - 1 - i
                    nr += 1
            u = uniforms[k, step]
            cum = 0.0
            choice = at[na - 1]
            for a in range(na - 1):
                x = xs[a]
                p = 1.0
                for b in range(nr):
                    p *= x - ys[b]
                for b in range(na):
                    if b != a:
                        p /= x - xs[b]
                cum += (x * x + s * x + t) / (t + step) * p
                if u < cum:
                    choice = at[a]
                    break
            r[choice] += 1
            if choice == nrows:
                nrows += 1
    return rows


def _rows_to_partition(row) -> Partition:
    return Partition(tuple(int(v) for v in row if v > 0))


def sample_rows_batch(n: int, params: ZParams, samples: int, seed: int) -> np.ndarray:
    """Row lengths of ``samples`` independent diagrams of size n, shape (samples, n+1)."""
    if n < 0 or samples < 1:
        raise ValueError("need n >= 0 and samples >= 1")
    s, t = _real_params(params)
    rng = np.random.default_rng(seed)
    uniforms = rng.random((samples, n))
    return _grow_batch(uniforms, s, t)


def sample_partitions_batch(n: int, params: ZParams, samples: int, seed: int) -> list[Partition]:
    return [_rows_to_partition(r) for r in sample_rows_batch(n, params, samples, seed)]


def sample_partition(n: int, params: ZParams, seed: int) -> Partition:
    return sample_partitions_batch(n, params, 1, seed)[0]


@dataclass(frozen=True)
class Configuration:
    """Finite point configuration in [-1, 1] without 0."""
    points: tuple[float, ...] = ()

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        if any(x == 0 or abs(x) > 1 for x in pts):
            raise ValueError("points must lie in [-1, 1] minus {0}")
        object.__setattr__(self, "points", pts)

    def count_outside(self, eps: float) -> int:
        return sum(1 for x in self.points if abs(x) >= eps)


def embed_configuration(lam: Partition, n: int) -> Configuration:
    """Points (p_i + 1/2)/n and -(q_i + 1/2)/n from the Frobenius coordinates."""
    if n < 1 or lam.size != n:
        raise ValueError(f"need |lambda| = n >= 1, got |lambda|={lam.size}, n={n}")
    fc = frobenius(lam)
    return Configuration(tuple((p + 0.5) / n for p in fc.p) + tuple(-(q + 0.5) / n for q in fc.q))


@numba.njit(cache=True)
def _embed_kernel(rows, n):
    n_samples, width = rows.shape
    pts = np.empty(n_samples * 2 * width, dtype=np.float64)
    owner = np.empty(n_samples * 2 * width, dtype=np.int64)
    k = 0
    for s in range(n_samples):
        r = rows[s]
        i = 0
        while i < width and r[i] > i:
            # column i has length = number of rows longer than i
            col = 0
            while col < width and r[col] > i:
                col += 1
            pts[k] = (r[i] - i - 0.5) / n
            owner[k] = s
            pts[k + 1] = -(col - i - 0.5) / n
            owner[k + 1] = s
            k += 2
            i += 1
    return pts[:k], owner[:k]


def embed_rows(rows: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised embedding of a row-length batch.

    Returns (points, owner) with owner[k] the sample index of points[k].
    """
    return _embed_kernel(np.ascontiguousarray(rows, dtype=np.int64), n)


@dataclass
class Histogram:
    bin_lo: np.ndarray
    bin_hi: np.ndarray
    estimate: np.ndarray
    stderr: np.ndarray
    samples: int

    @property
    def centers(self):
        return 0.5 * (self.bin_lo + self.bin_hi)

    def to_csv_rows(self):
        yield ("bin_lo", "bin_hi", "estimate", "stderr")
        for row in zip(self.bin_lo, self.bin_hi, self.estimate, self.stderr):
            yield tuple(float(v) for v in row)


def make_bins(lo: float, hi: float, width: float) -> list[tuple[float, float]]:
    k = int(round((hi - lo) / width))
    return [(lo + i * width, lo + (i + 1) * width) for i in range(k)]


def _check_bins(bins) -> tuple[np.ndarray, np.ndarray]:
    b = np.asarray(bins, dtype=float).reshape(-1, 2)
    lo, hi = b[:, 0], b[:, 1]
    if np.any(hi <= lo):
        raise ValueError("each bin needs lo < hi")
    if np.any((lo <= 0) & (hi >= 0)):
        raise ValueError("bins must stay away from 0")
    return lo, hi


def empirical_density(samples: Sequence[Configuration] | tuple[np.ndarray, np.ndarray, int],
                      bins: Iterable[tuple[float, float]]) -> Histogram:
    """Mean count per bin divided by bin width.

    ``samples`` is either a list of configurations or the triple
    (points, owner, number_of_samples) produced by ``embed_rows``.  The
    standard error is the sample standard deviation of the per-sample
    counts over sqrt(N), divided by the width.
    """
    lo, hi = _check_bins(list(bins))
    if isinstance(samples, tuple):
        pts, owner, n_samples = samples
    else:
        n_samples = len(samples)
        pts = np.array([x for c in samples for x in c.points], dtype=float)
        owner = np.array([k for k, c in enumerate(samples) for _ in c.points], dtype=np.int64)
    if n_samples < 1:
        raise EmptySampleError("no samples")
    width = hi - lo
    est = np.zeros(len(lo))
    err = np.zeros(len(lo))
    for b in range(len(lo)):
        mask = (pts >= lo[b]) & (pts < hi[b])
        counts = np.bincount(owner[mask], minlength=n_samples)
        est[b] = counts.mean() / width[b]
        if n_samples > 1:
            err[b] = counts.std(ddof=1) / math.sqrt(n_samples) / width[b]
    return Histogram(lo, hi, est, err, n_samples)


def sample_record(n: int, lam: Partition, seed: int) -> dict:
    return {"n": n, "lambda": lam.to_json(), "seed": seed}


def exact_law_table(n: int, params: ZParams) -> dict[Partition, Scalar]:
    return {lam: weight(lam, params) for lam in partitions_of(n)}
