"""Catalan numbers and interleavings of two sequences."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("Catalan numbers are defined for n >= 0")
    return comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _catalan_rec(n: int) -> int:
    if n == 0:
        return 1
    return sum(_catalan_rec(n - 1 - k) * _catalan_rec(k) for k in range(n))


def catalan_convolution(n: int) -> int:
    """C_n computed from the convolution recurrence (independent of the closed form)."""
    return _catalan_rec(n)


def interleavings(n: int, m: int) -> Iterator[tuple]:
    """Nondecreasing maps alpha: {0..n+m} -> {0..n} with alpha(0)=0, alpha(n+m)=n, steps <= 1.

    ``alpha(i)`` is how many steps of the first sequence were taken after
    ``i`` steps in total; the rest, ``i - alpha(i)``, come from the second.
    """
    total = n + m
    for firsts in combinations(range(total), n):
        alpha = [0] * (total + 1)
        chosen = set(firsts)
        for i in range(total):
            alpha[i + 1] = alpha[i] + (i in chosen)
        yield tuple(alpha)


def interleaving_weight_sum(a: Sequence, b: Sequence) -> Fraction:
    """Sum over interleavings of prod_{i<n+m} 1/(a[alpha(i)] + b[i - alpha(i)]).

    ``a`` has n+1 entries and ``b`` has m+1 entries; by convention the last
    entries (the lengths of the null sequence) are zero.
    """
    n, m = len(a) - 1, len(b) - 1
    total = Fraction(0)
    for alpha in interleavings(n, m):
        w = Fraction(1)
        for i in range(n + m):
            w /= a[alpha[i]] + b[i - alpha[i]]
        total += w
    return total


def interleaving_weight_closed(a: Sequence, b: Sequence) -> Fraction:
    """Right side of the interleaving identity, 1/(prod a[:n] * prod b[:m])."""
    out = Fraction(1)
    for v in list(a[:-1]) + list(b[:-1]):
        out /= v
    return out
