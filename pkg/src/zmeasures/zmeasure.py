"""The two-parameter z-measures M_{z,z'} on the Young graph.

Rational real parameters give exact ``Fraction`` arithmetic; anything
else is evaluated in complex double precision.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Union

from .partitions import (Partition, add_boxes, dim, frobenius, partitions_of,
                         transpose)
from .special import pochhammer

Scalar = Union[Fraction, complex]

COMPLEX_RTOL = 1e-10


class DegenerateParametersError(ValueError):
    pass


class Series(enum.Enum):
    PRINCIPAL = "Principal"
    COMPLEMENTARY = "Complementary"
    DEGENERATE = "Degenerate"
    INVALID = "Invalid"


_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_scalar(value) -> Scalar:
    """Parse "p/q" or an integer as a Fraction, anything else ("a+bi", "0.5") as complex."""
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, (float, complex)):
        return complex(value)
    s = str(value).strip()
    if _RATIONAL.match(s):
        return Fraction(s.replace(" ", ""))
    s = s.replace(" ", "").replace("i", "j")
    if s.endswith("j") and s[:-1] in ("", "+", "-"):
        s = s[:-1] + "1j"
    s = re.sub(r"([+-])j", r"\g<1>1j", s)
    return complex(s)


def _real_value(x):
    if isinstance(x, Fraction):
        return x
    x = complex(x)
    return x.real if x.imag == 0 else None


def classify(z, zp) -> Series:
    """Complementary takes precedence for real pairs (z = z' real non-integer
    also satisfies the conjugate condition)."""
    z, zp = parse_scalar(z), parse_scalar(zp)
    rz, rzp = _real_value(z), _real_value(zp)
    if (rz is not None and rz == math.floor(rz)) or (rzp is not None and rzp == math.floor(rzp)):
        return Series.DEGENERATE
    if rz is not None and rzp is not None:
        if math.floor(rz) == math.floor(rzp):
            return Series.COMPLEMENTARY
        return Series.INVALID
    if complex(zp) == complex(z).conjugate():
        return Series.PRINCIPAL
    return Series.INVALID


@dataclass(frozen=True)
class ZParams:
    z: Scalar
    zp: Scalar

    def __post_init__(self):
        z, zp = parse_scalar(self.z), parse_scalar(self.zp)
        if isinstance(z, Fraction) != isinstance(zp, Fraction):
            z, zp = complex(z), complex(zp)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "zp", zp)

    @property
    def exact(self) -> bool:
        return isinstance(self.z, Fraction)

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "complex"

    @property
    def t(self) -> Scalar:
        return self.z * self.zp

    @property
    def series(self) -> Series:
        return classify(self.z, self.zp)

    @property
    def valid(self) -> bool:
        return self.series in (Series.PRINCIPAL, Series.COMPLEMENTARY)

    def as_complex(self) -> "ZParams":
        return ZParams(complex(self.z), complex(self.zp))

    def negated(self) -> "ZParams":
        return ZParams(-self.z, -self.zp)

    def to_json(self) -> dict:
        return {"z": format_scalar(self.z), "zp": format_scalar(self.zp), "mode": self.mode}


def format_scalar(x) -> str | float:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    x = complex(x)
    if x.imag == 0:
        return x.real
    return f"{x.real!r}{x.imag:+}i"


def require_valid(params: ZParams):
    if not params.valid:
        raise DegenerateParametersError(
            f"z={params.z}, z'={params.zp} is {params.series.value}; need principal or complementary series")


def _close(a: Scalar, b: Scalar, rtol: float = COMPLEX_RTOL) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(complex(a) - complex(b)) <= rtol * max(abs(complex(a)), abs(complex(b)), 1e-300)


def _weight_boxes(lam: Partition, params: ZParams) -> Scalar:
    z, zp, t = params.z, params.zp, params.t
    n = lam.size
    content = prod(((z + j - i) * (zp + j - i) for i, j in lam.boxes()), start=Fraction(1) if params.exact else 1)
    d = dim(lam)
    return content / pochhammer(t, n) * Fraction(d * d, factorial(n))


def _weight_rows(lam: Partition, params: ZParams, l: int | None = None) -> Scalar:
    z, zp, t = params.z, params.zp, params.t
    n = lam.size
    l = lam.length if l is None else l
    rows = [lam.row(i) for i in range(1, l + 1)]
    val = Fraction(factorial(n)) / pochhammer(t, n)
    for i in range(1, l + 1):
        val *= pochhammer(z - i + 1, rows[i - 1]) * pochhammer(zp - i + 1, rows[i - 1])
    num = prod((rows[i] - rows[j] + j - i) ** 2 for i in range(l) for j in range(i + 1, l))
    den = prod(factorial(rows[i] + l - i - 1) ** 2 for i in range(l))
    return val * Fraction(num, den)


def _weight_frobenius(lam: Partition, params: ZParams) -> Scalar:
    z, zp, t = params.z, params.zp, params.t
    fc = frobenius(lam)
    p, q, d = fc.p, fc.q, fc.d
    n = lam.size
    val = factorial(n) * t ** d / pochhammer(t, n)
    for i in range(d):
        val *= (pochhammer(z + 1, p[i]) * pochhammer(zp + 1, p[i])
                * pochhammer(-z + 1, q[i]) * pochhammer(-zp + 1, q[i]))
        val /= (factorial(p[i]) ** 2) * (factorial(q[i]) ** 2)
    num = prod(((p[i] - p[j]) * (q[i] - q[j])) ** 2 for i in range(d) for j in range(i + 1, d))
    den = prod((p[i] + q[j] + 1) ** 2 for i in range(d) for j in range(d))
    return val * Fraction(num, den)


def weight(lam: Partition, params: ZParams, method: str = "frobenius") -> Scalar:
    """M_{z,z'}(lam): exact Fraction or complex double."""
    require_valid(params)
    if method == "boxes":
        return _weight_boxes(lam, params)
    if method == "rows":
        return _weight_rows(lam, params)
    if method == "frobenius":
        return _weight_frobenius(lam, params)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class CheckReport:
    passed: bool
    max_violation: float | Fraction
    worst: object = None
    detail: dict | None = None


def _violation(lhs: Scalar, rhs: Scalar):
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return abs(lhs - rhs)
    scale = max(abs(complex(lhs)), abs(complex(rhs)), 1e-300)
    return abs(complex(lhs) - complex(rhs)) / scale


def verify_coherence(n: int, params: ZParams, method: str = "frobenius",
                     rtol: float = COMPLEX_RTOL) -> CheckReport:
    """Check M_n(mu) = sum over lam covering mu of (dim mu / dim lam) M_{n+1}(lam)
    and normalization at levels n and n+1."""
    require_valid(params)
    upper = {lam: weight(lam, params, method) for lam in partitions_of(n + 1)}
    worst, worst_v = None, 0
    for mu in partitions_of(n):
        lhs = weight(mu, params, method)
        dmu = dim(mu)
        rhs = sum((Fraction(dmu, dim(lam)) * upper[lam] for lam in add_boxes(mu)), start=0)
        v = _violation(lhs, rhs)
        if v > worst_v or worst is None:
            worst, worst_v = mu, v
    norms = {}
    for level, vals in ((n, [weight(mu, params, method) for mu in partitions_of(n)]),
                        (n + 1, list(upper.values()))):
        norms[level] = _violation(sum(vals, start=0), Fraction(1) if params.exact else 1)
    total = max([worst_v, *norms.values()])
    ok = total == 0 if params.exact else total <= rtol
    return CheckReport(ok, total, worst, {"normalization": norms})


def m_coefficient(p: int, q: int, params: ZParams) -> Scalar:
    """Entry m_{p,q} of the determinantal form of M/dim."""
    z, zp, t = params.z, params.zp, params.t
    return t * (pochhammer(z + 1, p) * pochhammer(zp + 1, p) * pochhammer(-z + 1, q)
                * pochhammer(-zp + 1, q)) / (factorial(p) * factorial(q) * (p + q + 1))


def determinant(matrix):
    """Gaussian elimination over any field (Fractions stay exact)."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    det = 1
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(complex(a[r][col])))
        if a[pivot][col] == 0:
            return 0 * a[0][0]
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] = a[r][c] - f * a[col][c]
    return det


def det_weight(lam: Partition, params: ZParams) -> Scalar:
    """det[m_{p_i q_j}] / (t)_n, which equals M(lam)/dim(lam)."""
    require_valid(params)
    fc = frobenius(lam)
    mat = [[m_coefficient(p, q, params) for q in fc.q] for p in fc.p]
    return determinant(mat) / pochhammer(params.t, lam.size)


def verify_m_recurrence(p_max: int, q_max: int, params: ZParams,
                         rtol: float = COMPLEX_RTOL) -> CheckReport:
    """m_{p+1,q} + m_{p,q+1} - (p+q+1) m_{p,q} = m_{p,0} m_{0,q}, m_{0,0} = t."""
    require_valid(params)
    m = {(p, q): m_coefficient(p, q, params) for p in range(p_max + 2) for q in range(q_max + 2)}
    worst, worst_v = (0, 0), _violation(m[0, 0], params.t)
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            lhs = m[p + 1, q] + m[p, q + 1] - (p + q + 1) * m[p, q]
            v = _violation(lhs, m[p, 0] * m[0, q])
            if v > worst_v:
                worst, worst_v = (p, q), v
    ok = worst_v == 0 if params.exact else worst_v <= rtol
    return CheckReport(ok, worst_v, worst)


def transpose_symmetry_check(lam: Partition, params: ZParams, rtol: float = COMPLEX_RTOL) -> bool:
    """M_{z,z'}(lam^t) == M_{-z,-z'}(lam)."""
    return _close(weight(transpose(lam), params), weight(lam, params.negated()), rtol)
