"""Young diagrams, Frobenius coordinates, the Young and Kingman graphs,
and the dimension functions on both.

Box indices are 1-based: row ``i``, column ``j``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence


class BoxOutOfShapeError(ValueError):
    pass


class NotAnEdgeError(ValueError):
    pass


class InvalidSimplexPointError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 1 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, k):
        return self.parts[k]

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def row(self, i: int) -> int:
        """Length of row ``i`` (1-based); 0 beyond the last row."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, r in enumerate(self.parts, start=1):
            for j in range(1, r + 1):
                yield i, j

    def to_json(self) -> list[int]:
        return list(self.parts)


@dataclass(frozen=True)
class FrobeniusCoords:
    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        p, q = tuple(self.p), tuple(self.q)
        if len(p) != len(q):
            raise ValueError("p and q must have equal length")
        for seq in (p, q):
            if any(x < 0 for x in seq) or any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError(f"Frobenius coordinates must be strictly decreasing and >= 0: {seq}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def d(self) -> int:
        return len(self.p)

    def to_json(self) -> dict:
        return {"p": list(self.p), "q": list(self.q)}


@dataclass(frozen=True)
class ExponentialForm:
    """Multiplicities r_k of each part k."""
    r: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, lam: Partition) -> "ExponentialForm":
        return cls(tuple(sorted(Counter(lam.parts).items())))

    def multiplicity(self, k: int) -> int:
        return dict(self.r).get(k, 0)


@dataclass(frozen=True)
class ThomaPoint:
    """A point (alpha, beta, gamma) of the Thoma simplex.

    Coordinates may be Fractions, in which case the sum constraint is
    checked exactly; floats are checked to 1e-12.
    """
    alpha: tuple = ()
    beta: tuple = ()
    gamma: object = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "beta", tuple(self.beta))
        self.validate()

    def validate(self, tol: float = 1e-12):
        coords = [*self.alpha, *self.beta, self.gamma]
        exact = all(isinstance(c, (int, Fraction)) for c in coords)
        slack = 0 if exact else tol
        if any(c < -slack for c in coords):
            raise InvalidSimplexPointError("coordinates must be nonnegative")
        for seq in (self.alpha, self.beta):
            if any(seq[i] < seq[i + 1] - slack for i in range(len(seq) - 1)):
                raise InvalidSimplexPointError("alpha and beta must be weakly decreasing")
        total = sum(coords)
        if (total != 1) if exact else abs(total - 1) > tol:
            raise InvalidSimplexPointError(f"coordinates sum to {total}, not 1")


def transpose(lam: Partition) -> Partition:
    if not lam.parts:
        return lam
    return Partition(tuple(sum(1 for r in lam.parts if r >= j) for j in range(1, lam.parts[0] + 1)))


def diagonal_length(lam: Partition) -> int:
    return sum(1 for i, r in enumerate(lam.parts, start=1) if r >= i)


def frobenius(lam: Partition) -> FrobeniusCoords:
    d = diagonal_length(lam)
    lt = transpose(lam)
    return FrobeniusCoords(tuple(lam.parts[i] - i - 1 for i in range(d)),
                           tuple(lt.parts[i] - i - 1 for i in range(d)))


def from_frobenius(fc: FrobeniusCoords) -> Partition:
    d = fc.d
    if d == 0:
        return Partition()
    # rows 1..d come from p; rows below the diagonal from the column lengths q
    rows = [fc.p[i] + i + 1 for i in range(d)]
    cols = [fc.q[i] + i + 1 for i in range(d)]
    below = []
    for i in range(d + 1, cols[0] + 1):
        below.append(sum(1 for c in cols if c >= i))
    return Partition(tuple(rows + below))


def hook_length(lam: Partition, i: int, j: int) -> int:
    if not (1 <= i <= lam.length and 1 <= j <= lam.row(i)):
        raise BoxOutOfShapeError(f"box ({i},{j}) is not in {lam}")
    lt = transpose(lam)
    return (lam.row(i) - j) + (lt.row(j) - i) + 1


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in reverse lexicographic order."""
    return [Partition(p) for p in _partitions_tuple(n)]


@lru_cache(maxsize=None)
def _partitions_tuple(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions_tuple(n - k, k):
            out.append((k, *rest))
    return tuple(out)


def add_boxes(mu: Partition) -> list[Partition]:
    """Diagrams obtained by adding one box, ordered by the row of the new box."""
    parts = list(mu.parts)
    out = []
    for i in range(len(parts) + 1):
        if i == 0 or parts[i - 1] > (parts[i] if i < len(parts) else 0):
            new = parts.copy()
            if i < len(parts):
                new[i] += 1
            else:
                new.append(1)
            out.append(Partition(tuple(new)))
    return out


def remove_boxes(lam: Partition) -> list[Partition]:
    parts = list(lam.parts)
    out = []
    for i in range(len(parts)):
        nxt = parts[i + 1] if i + 1 < len(parts) else 0
        if parts[i] > nxt:
            new = parts.copy()
            new[i] -= 1
            out.append(Partition(tuple(x for x in new if x)))
    return out


def _dim_hook(lam: Partition) -> int:
    hooks = prod(hook_length(lam, i, j) for i, j in lam.boxes())
    return factorial(lam.size) // hooks


def _dim_determinant(lam: Partition, l: int | None = None) -> int:
    l = lam.length if l is None else l
    rows = [lam.row(i) for i in range(1, l + 1)]
    num = prod(rows[i] - rows[j] + j - i for i in range(l) for j in range(i + 1, l))
    den = prod(factorial(rows[i] + l - i - 1) for i in range(l))
    val = Fraction(factorial(lam.size) * num, den)
    assert val.denominator == 1
    return int(val)


def _dim_frobenius(lam: Partition) -> int:
    fc = frobenius(lam)
    p, q, d = fc.p, fc.q, fc.d
    num = prod((p[i] - p[j]) * (q[i] - q[j]) for i in range(d) for j in range(i + 1, d))
    den = prod(p[i] + q[j] + 1 for i in range(d) for j in range(d))
    den *= prod(factorial(p[i]) * factorial(q[i]) for i in range(d))
    val = Fraction(factorial(lam.size) * num, den)
    assert val.denominator == 1
    return int(val)


@lru_cache(maxsize=None)
def _dim_paths(parts: tuple[int, ...]) -> int:
    if not parts:
        return 1
    return sum(_dim_paths(mu.parts) for mu in remove_boxes(Partition(parts)))


def dim(lam: Partition, method: str = "hook") -> int:
    """Number of standard tableaux of shape lam, i.e. paths from the empty diagram."""
    if method == "hook":
        return _dim_hook(lam)
    if method == "determinant":
        return _dim_determinant(lam)
    if method == "frobenius":
        return _dim_frobenius(lam)
    if method == "paths":
        return _dim_paths(lam.parts)
    raise ValueError(f"unknown method {method!r}")


def kingman_multiplicity(mu: Partition, lam: Partition) -> int:
    """Edge multiplicity in the Kingman graph: how often the grown part occurs in lam."""
    if lam.size != mu.size + 1:
        raise NotAnEdgeError(f"{lam} does not cover {mu}")
    diff = Counter(lam.parts)
    diff.subtract(Counter(mu.parts))
    grown = [k for k, v in diff.items() if v > 0]
    shrunk = [k for k, v in diff.items() if v < 0]
    # adding a box turns one part k-1 into k (or creates a part 1)
    ok = len(grown) == 1 and diff[grown[0]] == 1 and (
        (grown[0] == 1 and not shrunk) or (shrunk == [grown[0] - 1] and diff[shrunk[0]] == -1))
    if not ok:
        raise NotAnEdgeError(f"{lam} does not cover {mu}")
    return lam.parts.count(grown[0])


@lru_cache(maxsize=None)
def _dim0_recurrence(parts: tuple[int, ...]) -> int:
    if not parts:
        return 1
    lam = Partition(parts)
    return sum(_dim0_recurrence(mu.parts) * kingman_multiplicity(mu, lam) for mu in remove_boxes(lam))


def dim0(lam: Partition, method: str = "closed_form") -> int:
    """Number of paths to lam in the Kingman graph, counted with edge multiplicities."""
    if method == "closed_form":
        return factorial(lam.size) // prod(factorial(x) for x in lam.parts)
    if method == "recurrence":
        return _dim0_recurrence(lam.parts)
    raise ValueError(f"unknown method {method!r}")


def z_lambda(lam: Partition) -> int:
    return prod(lam.parts) * prod(factorial(r) for r in Counter(lam.parts).values())


def extended_power_sum(omega: ThomaPoint, n: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1
    sign = 1 if n % 2 == 1 else -1
    return sum(a ** n for a in omega.alpha) + sign * sum(b ** n for b in omega.beta)


def parse_partition(parts: Sequence[int] | str) -> Partition:
    if isinstance(parts, str):
        s = parts.strip().strip("[]()")
        parts = [int(x) for x in s.replace(" ", "").split(",") if x]
    return Partition(tuple(sorted((int(x) for x in parts if int(x) > 0), reverse=True)))
