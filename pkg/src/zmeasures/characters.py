"""Irreducible characters of the symmetric group by rim-hook removal."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .partitions import Partition, diagonal_length


class SizeMismatchError(ValueError):
    pass


def _beta_set(parts: tuple[int, ...]) -> tuple[int, ...]:
    l = len(parts)
    return tuple(parts[i] + l - 1 - i for i in range(l))


def _from_beta(beta: Sequence[int]) -> tuple[int, ...]:
    b = sorted(beta, reverse=True)
    l = len(b)
    return tuple(x for x in (b[i] - (l - 1 - i) for i in range(l)) if x > 0)


@lru_cache(maxsize=None)
def _chi(parts: tuple[int, ...], rho: tuple[int, ...]) -> int:
    if not rho:
        return 1 if not parts else 0
    r, rest = rho[0], rho[1:]
    beta = _beta_set(parts)
    occupied = set(beta)
    total = 0
    # moving a bead from b to b-r removes a rim hook of length r;
    # its height is the number of beads jumped over
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        height = sum(1 for c in beta if target < c < b)
        new_beta = [c for c in beta if c != b] + [target]
        total += (-1) ** height * _chi(_from_beta(new_beta), rest)
    return total


def chi(lam: Partition, rho: Sequence[int]) -> int:
    """Character value chi^lam at a permutation of cycle type rho."""
    rho = tuple(int(x) for x in rho)
    if sum(rho) != lam.size or any(x < 1 for x in rho):
        raise SizeMismatchError(f"cycle type {rho} does not match |lambda| = {lam.size}")
    # longest cycle first; order is irrelevant to the value so the key is sorted
    return _chi(lam.parts, tuple(sorted(rho, reverse=True)))


def chi_vanishing_check(lam: Partition, n_cycles: int) -> bool:
    """True when the diagonal is longer than the number of cycles, forcing chi = 0."""
    return diagonal_length(lam) > n_cycles
