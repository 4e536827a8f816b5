"""Controlling-measure moments and the first correlation function rho_1
of the z-process.

The density is evaluated from the triangle integral

    rho_1(x) = Gamma(t+1) / (Gamma(z+1) Gamma(z'+1)) (1-x)^(t-z-z') <A, Psi>,

with A = phi_{-z}(u) phi_{-z'}(v) phi_{t-2}(w) on the simplex u+v+w = 1.
When an exponent d_k of A has real part below -1/2, it is raised by one
with the identity

    <A_d, Psi> = <A_{d+e_k}, (sum(d) + 3) Psi + E_k Psi>,

where E_k is the Euler field centred at the vertex u_k = 1.  (Integrate
by parts against phi_{d_k+1}; no boundary terms appear because all
factors are compactly supported distributions.)  Once every exponent
exceeds -1/2 the integral converges absolutely and a tensor tanh-sinh
rule on collapsed coordinates handles the remaining endpoint powers.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Callable, Sequence

import numpy as np

from .characters import chi
from .partitions import (FrobeniusCoords, Partition, diagonal_length, dim,
                         from_frobenius, partitions_of)
from .special import (DomainError, gamma, kummer_phi, lauricella_fb3,
                      phi_ab_moment, pochhammer, quad_endpoint, rgamma,
                      tanh_sinh_nodes)
from .zmeasure import Scalar, ZParams, require_valid, weight

X_MIN_SERIES = 1e-3
X_MIN_INTEGRAL = 1e-12
X_MAX = 1 - 1e-9
SHIFT_THRESHOLD = -0.5


class DiagonalPointError(ValueError):
    pass


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class MomentSpec:
    exponents: tuple[int, ...]

    def __post_init__(self):
        ex = tuple(int(v) for v in self.exponents)
        if not ex or any(v < 0 for v in ex):
            raise ValueError("need at least one nonnegative exponent")
        object.__setattr__(self, "exponents", ex)

    @property
    def order(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        """Total size sum(l_i + 1) of the diagrams that contribute."""
        return sum(self.exponents) + len(self.exponents)

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.exponents)


@dataclass(frozen=True)
class DensityPoint:
    x: float
    value: float
    method: str
    tol_achieved: float
    imag_residue: float = 0.0


# ---------------------------------------------------------------- moments

def _hook_factor(p: int, q: int, params: ZParams) -> Scalar:
    z, zp = params.z, params.zp
    return (pochhammer(z + 1, p) * pochhammer(-z + 1, q) * pochhammer(zp + 1, p)
            * pochhammer(-zp + 1, q))


def sigma1_moment(l: int, params: ZParams) -> Scalar:
    """l-th moment of sigma_1, a finite sum over hooks (p|q) with p+q = l."""
    require_valid(params)
    t = params.t
    total = 0
    for p in range(l + 1):
        q = l - p
        total += ((-1) ** q * t * _hook_factor(p, q, params)
                  / (pochhammer(t, l + 1) * (l + 1) * factorial(p) * factorial(q)))
    return total


def _strict_sequences(d: int, total: int):
    """Strictly decreasing d-tuples of nonnegative integers with the given sum."""
    for combo in combinations(range(total + 1), d):
        if sum(combo) == total:
            yield tuple(reversed(combo))


def _frobenius_phi(p: Sequence[int], q: Sequence[int], params: ZParams) -> Scalar:
    """M/dim for the diagram (p|q), written directly in Frobenius coordinates."""
    d = len(p)
    n = sum(p) + sum(q) + d
    t = params.t
    val = t ** d / pochhammer(t, n)
    for i in range(d):
        val *= _hook_factor(p[i], q[i], params) / (factorial(p[i]) * factorial(q[i]))
    num = prod((p[i] - p[j]) * (q[i] - q[j]) for i in range(d) for j in range(i + 1, d))
    den = prod(p[i] + q[j] + 1 for i in range(d) for j in range(d))
    return val * Fraction(num, den)


def sigma_n_moment(spec: MomentSpec, params: ZParams, route: str = "frobenius_sum") -> Scalar:
    """Mixed moment of sigma_n, summed over diagrams whose diagonal is at most n."""
    require_valid(params)
    n, size, rho = spec.order, spec.degree, spec.cycle_type
    total = 0
    if route == "character_sum":
        for lam in partitions_of(size):
            if diagonal_length(lam) <= n:
                total += chi(lam, rho) * weight(lam, params) / dim(lam)
        return total
    if route == "frobenius_sum":
        for d in range(1, n + 1):
            for ps in range(size - d + 1):
                for p in _strict_sequences(d, ps):
                    for q in _strict_sequences(d, size - d - ps):
                        lam = from_frobenius(FrobeniusCoords(p, q))
                        total += chi(lam, rho) * _frobenius_phi(p, q, params)
        return total
    raise ValueError(f"unknown route {route!r}")


def convolution_moment(l: int, params: ZParams) -> complex:
    """l-th moment of sigma_1 from its factorization into the additive
    convolution of phi_{z,-z} with the reflected phi_{-z',z'}, followed by
    the multiplicative convolution with phi_{1,t-2}."""
    z, zp, t = complex(params.z), complex(params.zp), complex(params.t)
    conv = sum(comb(l, k) * (-1) ** (l - k) * phi_ab_moment(z, -z, k, 0)
               * phi_ab_moment(-zp, zp, l - k, 0) for k in range(l + 1))
    return gamma(t + 1) * phi_ab_moment(1, t - 2, l, 0) * conv


def pseudoconvolution_moment(factors: Sequence[tuple], n: int):
    """n-th moment of phi_{a1,b1} (.) phi_{a2,b2} (.) ...: the product of the
    factors' n-th moments."""
    return prod((phi_ab_moment(a, b, n, 0) for a, b in factors), start=1)


# ------------------------------------------------------ triangle integral

def _euler_shift(terms: dict, k: int, gam, e, c) -> dict:
    """Apply Psi -> c Psi + E_k Psi to a sum of terms coef * u^alpha * prod_j L_j^(e_j - n_j).

    E_k = sum_{i != k} u_i (d_i - d_k) and L_j = sum_i gam[j][i] u_i.
    """
    out: dict = defaultdict(complex)
    others = [i for i in range(3) if i != k]
    for (alpha, nshift), coef in terms.items():
        out[alpha, nshift] += c * coef
        for i in others:
            if alpha[i]:
                out[alpha, nshift] += coef * alpha[i]
            if alpha[k]:
                a2 = list(alpha)
                a2[k] -= 1
                a2[i] += 1
                out[tuple(a2), nshift] -= coef * alpha[k]
        for j in range(3):
            f = e[j] - nshift[j]
            n2 = list(nshift)
            n2[j] += 1
            n2 = tuple(n2)
            for i in others:
                g = gam[j][i] - gam[j][k]
                if g != 0:
                    a2 = list(alpha)
                    a2[i] += 1
                    out[tuple(a2), n2] += coef * f * g
    return {key: v for key, v in out.items() if v != 0}


def _sigma1_positive(x: float, y: float, z: complex, zp: complex, h: float) -> complex:
    """x * rho_1(x) for 0 < x < 1, with y = 1 - x supplied separately."""
    t = z * zp
    d = [-z, -zp, t - 2]
    e = (z, zp, -t)
    gam = ((x, 1.0, 1.0), (1.0, x, 1.0), (x, x, 1.0))
    terms = {((0, 0, 0), (0, 0, 0)): 1 + 0j}
    for k in range(3):
        while d[k].real < SHIFT_THRESHOLD:
            terms = _euler_shift(terms, k, gam, e, sum(d) + 3)
            d[k] += 1

    s, sm, w = tanh_sinh_nodes(h)
    # collapsed coordinates: u = xi, v = (1-xi) eta, w = (1-xi)(1-eta)
    xi, xim = s[:, None], sm[:, None]
    eta, etam = s[None, :], sm[None, :]
    U = (xi, xim * eta, xim * etam)
    # L_j written as positive combinations so nothing cancels near x = 0
    logL = (np.log(x * U[0] + xim), np.log(U[0] + x * U[1] + U[2]), np.log(x * (U[0] + U[1]) + U[2]))

    by_shift: dict = defaultdict(list)
    for (alpha, nshift), coef in terms.items():
        by_shift[nshift].append((alpha, coef))
    G = 0
    for nshift, polys in by_shift.items():
        poly = sum(coef * U[0] ** a[0] * U[1] ** a[1] * U[2] ** a[2] for a, coef in polys)
        G = G + poly * np.exp(sum((e[j] - nshift[j]) * logL[j] for j in range(3)))

    wx = w * s ** d[0] * sm ** (d[1] + d[2] + 1)
    we = w * s ** d[1] * sm ** d[2]
    val = np.einsum("i,ij,j->", wx, G, we)
    val *= rgamma(d[0] + 1) * rgamma(d[1] + 1) * rgamma(d[2] + 1)
    pref = gamma(t + 1) * rgamma(z + 1) * rgamma(zp + 1)
    return complex(x * pref * y ** (t - z - zp) * val)


_H_LEVELS = (1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128)


@lru_cache(maxsize=200_000)
def _sigma1_cached(x: float, y: float, z: complex, zp: complex, tol: float):
    prev = None
    for h in _H_LEVELS:
        cur = _sigma1_positive(x, y, z, zp, h)
        if prev is not None:
            err = abs(cur - prev)
            if err <= tol * max(1.0, abs(cur)):
                return cur, err
        prev = cur
    return cur, err


def sigma1_value(x: float, params: ZParams, tol: float = 1e-10, y: float | None = None):
    """|x| rho_1(x) by the triangle integral, with a step-halving error estimate.

    ``y`` may carry 1 - |x| computed without cancellation.  Negative x goes
    through the (-z, -z') reflection.
    """
    z, zp = complex(params.z), complex(params.zp)
    ax = abs(x)
    if y is None:
        y = 1.0 - ax
    if not (0 < ax <= 1 and y > 0):
        raise DomainError(f"x = {x} outside (-1, 0) U (0, 1)")
    if x < 0:
        z, zp = -z, -zp
    return _sigma1_cached(float(ax), float(y), z, zp, float(tol))


def _rho1_series(x: float, params: ZParams, tol: float, corrected: bool):
    z, zp = complex(params.z), complex(params.zp)
    if x < 0:
        z, zp = -z, -zp
    ax = abs(x)
    y = 1.0 - ax
    t = z * zp
    c = t - z - zp + 1
    pref = gamma(t + 1) * rgamma(z + 1) * rgamma(zp + 1) * y ** (c - 1) * rgamma(c)
    if corrected:
        # expansion of (x + y w)^(-t) = x^(-t) (1 + (y/x) w)^(-t): converges for |x| > 1/2
        res = lauricella_fb3((-z, -zp, t), (1 - z, 1 - zp, t - 1), c, (y, y, -y / ax), tol=tol)
        val = pref * ax ** (-t) * res.value
    else:
        res = lauricella_fb3((-z, -zp, t - 1), (1 - z, 1 - zp, t), c, (y, y, y), tol=tol)
        val = pref * res.value
    return complex(val), abs(pref) * res.tail_bound


def rho1(x: float, params: ZParams, method: str = "integral", tol: float = 1e-10) -> DensityPoint:
    """First correlation function at x.

    method "lauricella" sums the three-variable F_B with arguments
    (1-x, 1-x, 1-x); "lauricella_corrected"
    uses (1-x, 1-x, (x-1)/x) with the extra factor x^(-t), which is what the
    triangle integral expands to and converges only for |x| > 1/2;
    "integral" evaluates the triangle integral.
    """
    require_valid(params)
    ax = abs(x)
    lo = X_MIN_INTEGRAL if method == "integral" else X_MIN_SERIES
    if not lo <= ax <= X_MAX:
        raise DomainError(f"|x| = {ax} outside [{lo}, {X_MAX}] for method {method!r}")
    if method == "integral":
        val, err = sigma1_value(x, params, tol)
        val, err = val / ax, err / ax
    elif method in ("lauricella", "lauricella_corrected"):
        if method == "lauricella_corrected" and ax <= 0.5:
            raise DomainError("corrected series converges only for |x| > 1/2")
        val, err = _rho1_series(x, params, tol, corrected=(method == "lauricella_corrected"))
    else:
        raise ValueError(f"unknown method {method!r}")
    return DensityPoint(float(x), float(val.real), method, float(err), float(abs(val.imag)))


# ------------------------------------------------- integrals against sigma_1

@lru_cache(maxsize=64)
def _sigma1_nodes(z: complex, zp: complex, hx: float, tol: float):
    s, sm, w = tanh_sinh_nodes(hx, 4.5)
    keep = s >= X_MIN_INTEGRAL
    s, sm, w = s[keep], sm[keep], w[keep]
    params = ZParams(z, zp)
    xs, ws, vals = [], [], []
    for sign in (1.0, -1.0):
        for xi, yi, wi in zip(s, sm, w):
            v, _ = sigma1_value(sign * xi, params, tol, y=yi)
            xs.append(sign * xi)
            ws.append(wi)
            vals.append(v)
    return np.array(xs), np.array(ws), np.array(vals)


def integrate_sigma1(f: Callable[[np.ndarray], np.ndarray], params: ZParams,
                     hx: float = 1 / 8, tol: float = 1e-11) -> tuple[complex, float]:
    """Integral of f(x) sigma_1(dx) over (-1, 1) by tanh-sinh on each half.

    Returns (value, error estimate from the rule with twice the step).
    """
    require_valid(params)
    z, zp = complex(params.z), complex(params.zp)
    out = []
    for step in (2 * hx, hx):
        xs, ws, vals = _sigma1_nodes(z, zp, step, tol)
        out.append(complex(np.sum(ws * f(xs) * vals)))
    return out[1], abs(out[1] - out[0])


def quadrature_moment(l: int, params: ZParams, hx: float = 1 / 8) -> tuple[complex, float]:
    return integrate_sigma1(lambda x: x ** l, params, hx)


def total_mass(params: ZParams, hx: float = 1 / 8) -> tuple[complex, float]:
    return integrate_sigma1(lambda x: np.ones_like(x), params, hx)


# --------------------------------------------------------- Laplace identity

def laplace_factorization_gap(zeta, params: ZParams) -> float:
    """Relative gap between the two product forms of the Laplace transform."""
    z, zp = complex(params.z), complex(params.zp)
    first = kummer_phi(z, zeta).value * kummer_phi(-zp, -zeta).value
    second = kummer_phi(zp, zeta).value * kummer_phi(-z, -zeta).value
    return abs(first - second) / max(abs(first), 1e-300)


def laplace_identity_residual(zeta, params: ZParams, tol: float = 1e-10,
                              hx: float = 1 / 8) -> float:
    """|integral of Phi(t+1; zeta x) sigma_1(dx) - Phi(z+1; zeta) Phi(1-z'; -zeta)|.

    Raises VerificationError when the two product forms disagree beyond tol.
    """
    require_valid(params)
    zeta = complex(zeta)
    if abs(zeta) > 5:
        raise DomainError("|zeta| must be <= 5")
    gap = laplace_factorization_gap(zeta, params)
    if gap > tol:
        raise VerificationError(f"product forms differ by {gap:.3g}")
    t = complex(params.t)
    z, zp = complex(params.z), complex(params.zp)
    kummer = np.vectorize(lambda v: kummer_phi(t, zeta * v).value, otypes=[complex])
    lhs, _ = integrate_sigma1(kummer, params, hx)
    rhs = kummer_phi(z, zeta).value * kummer_phi(-zp, -zeta).value
    return float(abs(lhs - rhs))


# ------------------------------------------------------------ t = 1 case

def t1_convolution_sigma1(x: float, z: complex, tol: float = 1e-10) -> float:
    """sigma_1(x) for t = 1 as the additive convolution of phi_{z,-z} on [0,1]
    with phi_{-z',z'} reflected onto [-1,0], by direct quadrature."""
    z = complex(z)
    if abs(abs(z) - 1) > 1e-12 or (z.imag == 0 and z.real == round(z.real)):
        raise DomainError("need |z| = 1 and z not an integer")
    zp = z.conjugate()
    norm = rgamma(1 + z) * rgamma(1 - z) * rgamma(1 - zp) * rgamma(1 + zp)
    if x > 0:
        # u in [x, 1]; (u-x)^(-z') at the left end, (1-u)^(-z) at the right
        val = quad_endpoint(lambda u: u ** z * (1 - u + x) ** zp, (x, 1.0), (-zp, -z), tol)
    else:
        # u in [0, 1+x]; u^z at the left end, (1+x-u)^(z') at the right
        val = quad_endpoint(lambda u: (1 - u) ** (-z) * (u - x) ** (-zp), (0.0, 1.0 + x), (z, zp), tol)
    return complex(norm * val)


def t_equals_one_convolution(x: float, z_on_unit_circle: complex, tol: float = 1e-5) -> float:
    """Absolute deviation between the convolution value and |x| rho_1(x)."""
    ax = abs(x)
    if not X_MIN_SERIES <= ax <= X_MAX:
        raise DomainError(f"|x| = {ax} outside [{X_MIN_SERIES}, {X_MAX}]")
    z = complex(z_on_unit_circle)
    conv = t1_convolution_sigma1(x, z, min(tol, 1e-10) / 10)
    direct = rho1(x, ZParams(z, z.conjugate()), "integral", 1e-10).value * ax
    return abs(conv.real - direct)


def t1_convolution_mass(z: complex, hx: float = 1 / 8, tol: float = 1e-8) -> float:
    """Total mass of the t = 1 convolution over (-1, 1).

    Nodes with |x| < 1e-8 are dropped; the density is bounded near 0, so
    they carry less than 1e-7 of mass.
    """
    s, sm, w = tanh_sinh_nodes(hx, 4.5)
    keep = (s >= 1e-8) & (sm >= 1e-12)
    total = 0.0
    for sign in (1.0, -1.0):
        for xi, wi in zip(s[keep], w[keep]):
            total += wi * t1_convolution_sigma1(sign * xi, z, tol).real
    return total


# --------------------------------------------------------- correlations

def correlation_from_controlling(points, sigma_values) -> np.ndarray:
    """rho_n = sigma_n / |x_1 ... x_n| on off-diagonal points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 1 and np.ndim(points) == 1:
        pts = pts.T
    vals = np.asarray(sigma_values, dtype=float).reshape(pts.shape[0])
    for row in pts:
        if np.any(row == 0):
            raise DiagonalPointError("coordinate equal to 0")
        if len(set(row.tolist())) != len(row):
            raise DiagonalPointError(f"repeated coordinate in {row.tolist()}")
    return vals / np.abs(np.prod(pts, axis=1))
