"""Pochhammer symbols, the Kummer function Phi(a+1; z) = 1F1(a+1; 2; z),
the three-variable Lauricella series F_B, beta-type moments and
quadrature for integrands with algebraic endpoint singularities.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate, special

DEFAULT_TERM_CAP = 10000


class SeriesNotConvergedError(RuntimeError):
    pass


class DomainError(ValueError):
    pass


class PoleError(ValueError):
    pass


class NonIntegrableSingularityError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    tail_bound: float


def pochhammer(a, n: int):
    """Rising factorial a(a+1)...(a+n-1); exact for ints and Fractions."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = Fraction(1) if isinstance(a, (int, Fraction)) else 1
    for k in range(n):
        out *= a + k
    return out


def _is_nonpositive_integer(c) -> bool:
    c = complex(c)
    return c.imag == 0 and c.real <= 0 and c.real == math.floor(c.real)


def gamma(x):
    return special.gamma(x)


def rgamma(x):
    """1/Gamma, zero at the poles."""
    return special.rgamma(x)


def _exact_complex(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    x = complex(x)
    return Fraction(x.real), Fraction(x.imag)


def kummer_phi(a, zeta, tol: float = 1e-15, max_terms: int = DEFAULT_TERM_CAP,
               exact_sum: bool = False) -> SeriesResult:
    """Phi(a+1; zeta) = sum_k (a+1)_k zeta^k / ((k+1)! k!).

    Tail bound: the term ratio is majorised by
    rho_k = (|a+1| + k)|zeta| / ((k+1)(k+2)), which does not increase for
    k >= 1, so once rho_k < 1 the remainder after term k is at most
    |term_k| rho_k / (1 - rho_k).

    With ``exact_sum`` the inputs are taken as the exact binary rationals
    they hold and the partial sum is formed in rational arithmetic, so
    the only rounding is the final conversion.  This matters when the
    series cancels heavily (large negative real zeta).
    """
    A = abs(complex(a) + 1)
    az = abs(complex(zeta))
    if exact_sum:
        ar, ai = _exact_complex(a)
        ar += 1
        zr, zi = _exact_complex(zeta)
        tr, ti = Fraction(1), Fraction(0)
        sr, si = Fraction(1), Fraction(0)
    else:
        a1 = complex(a) + 1
        zeta = complex(zeta)
        term = 1 + 0j
        total = term
    for k in range(max_terms):
        rho = (A + k) * az / ((k + 1) * (k + 2))
        if k >= 1 and rho < 1:
            mag = math.hypot(float(tr), float(ti)) if exact_sum else abs(term)
            bound = mag * rho / (1 - rho)
            if bound <= tol:
                value = complex(float(sr), float(si)) if exact_sum else total
                return SeriesResult(value, k + 1, bound)
        if exact_sum:
            # term *= (a+1+k) zeta / ((k+2)(k+1))
            fr, fi = ar + k, ai
            pr, pi = fr * zr - fi * zi, fr * zi + fi * zr
            d = (k + 2) * (k + 1)
            tr, ti = (tr * pr - ti * pi) / d, (tr * pi + ti * pr) / d
            sr += tr
            si += ti
        else:
            term = term * (a1 + k) * zeta / ((k + 2) * (k + 1))
            total += term
    raise SeriesNotConvergedError(f"Kummer series did not converge within {max_terms} terms")


def kummer_transform_check(a, zeta, tol: float = 1e-17) -> float:
    """|Phi(a+1; zeta) - e^zeta Phi(1-a; -zeta)|, both series summed exactly."""
    lhs = kummer_phi(a, zeta, tol, exact_sum=True).value
    rhs = np.exp(complex(zeta)) * kummer_phi(-complex(a), -complex(zeta), tol, exact_sum=True).value
    return abs(lhs - rhs)


def _scaled_coeffs(a, b, y, n):
    """(a)_m (b)_m y^m / (m!)^2 for m = 0..n."""
    m = np.arange(n, dtype=float)
    ratios = (a + m) * (b + m) * y / (m + 1) ** 2
    return np.concatenate([[1 + 0j], np.cumprod(ratios.astype(complex))])


def _fb3_tail_bound(a, b, c, y, M0, coeffs):
    """Bound on sum over total order M > M0 of the F_B terms.

    Each term equals prod_i At_i(m_i) * M!/(c)_M / multinomial(M; m), with
    At_i(m) = (a_i)_m (b_i)_m y_i^m / (m!)^2.  Dropping the multinomial
    (it is >= 1) and using geometric majorants At_i(m) <= K_i Q_i^m gives
    |S_M| <= K * |M0!/(c)_M0| * gamma^(M-M0) * C(M+2, 2) * Q^M.
    """
    Qs, logK = [], 0.0
    for ai, bi, yi, At in zip(a, b, y, coeffs):
        Q = abs(yi) * (1 + max(abs(ai) - 1, 0) / (M0 + 1)) * (1 + max(abs(bi) - 1, 0) / (M0 + 1))
        if Q == 0:
            Qs.append(0.0)
            continue
        if Q >= 1:
            return math.inf
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(At[: M0 + 1]))
        logK += float(np.max(la - np.arange(M0 + 1) * math.log(Q)))
        Qs.append(Q)
    Q = max(Qs)
    if Q == 0:
        return 0.0
    rc = complex(c).real
    if M0 + rc <= 0:
        return math.inf
    gam = max(1.0, (M0 + 1) / (M0 + rc))
    s = Q * gam
    if s >= 1:
        return math.inf
    log_g0 = math.lgamma(M0 + 1) - sum(math.log(abs(complex(c) + k)) for k in range(M0))
    S0, S1, S2 = s / (1 - s), s / (1 - s) ** 2, s * (1 + s) / (1 - s) ** 3
    poly = (S2 + (2 * M0 + 3) * S1 + (M0 + 2) * (M0 + 1) * S0) / 2
    return math.exp(logK + log_g0 + M0 * math.log(Q)) * poly


def lauricella_fb3(a, b, c, y, tol: float = 1e-14, max_terms: int = DEFAULT_TERM_CAP) -> SeriesResult:
    """Lauricella F_B in three variables:
    sum over m of prod_i (a_i)_{m_i} (b_i)_{m_i} y_i^{m_i} / m_i!  /  (c)_{|m|}.

    Summed by total order |m| = M; terms_used counts orders.
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    y = [complex(x) for x in y]
    c = complex(c)
    if len(a) != 3 or len(b) != 3 or len(y) != 3:
        raise ValueError("a, b and y must be triples")
    if any(abs(v) >= 1 for v in y):
        raise DomainError(f"F_B series needs |y_i| < 1, got {y}")
    if _is_nonpositive_integer(c):
        raise PoleError(f"c = {c} is a nonpositive integer")

    M0, bound = 16, math.inf
    while True:
        coeffs = [_scaled_coeffs(ai, bi, yi, M0) for ai, bi, yi in zip(a, b, y)]
        bound = _fb3_tail_bound(a, b, c, y, M0, coeffs)
        if bound <= tol:
            break
        if M0 >= max_terms:
            raise SeriesNotConvergedError(
                f"F_B tail bound {bound:.3g} above tol after {max_terms} orders")
        M0 = min(2 * M0, max_terms)

    lf = special.gammaln(np.arange(M0 + 1) + 1.0)
    A1, A2, A3 = coeffs
    inner = np.empty(M0 + 1, dtype=complex)
    outer = np.empty(M0 + 1, dtype=complex)
    for K in range(M0 + 1):
        w = np.exp(lf[: K + 1] + lf[K::-1] - lf[K])
        inner[K] = np.sum(A1[: K + 1] * A2[K::-1] * w)
    for M in range(M0 + 1):
        w = np.exp(lf[: M + 1] + lf[M::-1] - lf[M])
        outer[M] = np.sum(inner[: M + 1] * A3[M::-1] * w)
    k = np.arange(M0, dtype=float)
    fact_over_poch = np.concatenate([[1 + 0j], np.cumprod((k + 1) / (c + k))])
    return SeriesResult(complex(np.sum(outer * fact_over_poch)), M0 + 1, bound)


def phi_ab_moment(a, b, p: int, q: int):
    """Integral of u^p (1-u)^q against u^a (1-u)^b / (Gamma(a+1) Gamma(b+1)),
    continued analytically in a and b."""
    s = a + b + p + q + 2
    if _is_nonpositive_integer(s):
        raise PoleError(f"a+b+p+q+2 = {s} is a nonpositive integer")
    num = pochhammer(a + 1, p) * pochhammer(b + 1, q)
    if isinstance(num, Fraction) and isinstance(s, (int, Fraction)) and Fraction(s).denominator == 1:
        return num / math.factorial(int(s) - 1)
    val = complex(num) * complex(rgamma(complex(s)))
    if all(isinstance(v, (int, float, Fraction)) for v in (a, b)):
        return val.real
    return val


@lru_cache(maxsize=32)
def tanh_sinh_nodes(h: float, tmax: float = 4.5):
    """Double-exponential nodes on (0, 1).

    Returns (s, 1 - s, weights); the complement is computed directly so that
    nodes clustered at either endpoint keep full relative precision.
    """
    k = np.arange(-int(round(tmax / h)), int(round(tmax / h)) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    s = special.expit(2 * u)
    sm = special.expit(-2 * u)
    w = h * np.pi * np.cosh(t) * s * sm
    keep = (s > 0) & (sm > 0)
    out = (s[keep], sm[keep], w[keep])
    for arr in out:
        arr.setflags(write=False)
    return out


def quad_endpoint(f, interval, exponents, tol: float = 1e-8):
    """Integral over [lo, hi] of (x-lo)^e0 (hi-x)^e1 f(x), with f regular.

    Each half of the interval is mapped by x - lo = s^(1/(1+Re e0)) (and the
    mirror image at hi).  The power weight is evaluated from s directly, so
    the mapped integrand is bounded and free of cancellation near the
    endpoints; the result goes to adaptive Gauss-Kronrod (QUADPACK).
    """
    lo, hi = (float(v) for v in interval)
    e0, e1 = (complex(e) for e in exponents)
    if e0.real <= -1 or e1.real <= -1:
        raise NonIntegrableSingularityError(f"endpoint powers {exponents} are not integrable")
    mid = 0.5 * (lo + hi)
    half = mid - lo
    k0, k1 = 1 / (1 + e0.real), 1 / (1 + e1.real)

    def left(s):
        d = s ** k0
        return k0 * s ** (k0 * (1 + e0) - 1) * (2 * half - d) ** e1 * f(lo + d)

    def right(s):
        d = s ** k1
        return k1 * s ** (k1 * (1 + e1) - 1) * (2 * half - d) ** e0 * f(hi - d)

    pieces = [(left, half ** (1 + e0.real)), (right, half ** (1 + e1.real))]
    total, err_total = 0j, 0.0
    for g, top in pieces:
        for part in (np.real, np.imag):
            # QUADPACK's own warnings are superseded by the error check below
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, err = integrate.quad(lambda s: float(part(complex(g(s)))), 0.0, top,
                                          epsabs=tol / 8, epsrel=0, limit=400)
            total += val if part is np.real else 1j * val
            err_total += err
    if err_total > tol:
        raise QuadratureError(f"error estimate {err_total:.3g} above tol {tol:.3g}")
    if e0.imag == 0 and e1.imag == 0 and not np.iscomplexobj(f(mid)):
        return total.real
    return total
