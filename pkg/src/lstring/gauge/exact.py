"""Exact single-plaquette moments for SU(N) under exp(N beta Re Tr U) dU.

In two dimensions with free boundary the plaquette variables of a box are
independent, each distributed like one such U, so these moments are exact
values of <W_p>/N and friends on any 2D free box.

Uses Z(a, b) = int exp(a Tr U + b Tr U^*) dU = sum_q det[c_{q+j-k}(a, b)],
c_n = sum_m a^{m+n} b^m / ((m+n)! m!), and differentiates at a = b = N beta / 2.
"""

from __future__ import annotations

import mpmath


def _c(n: int, a, b):
    """c_n(a, b), summed until the terms drop below working precision."""
    m = max(0, -n)
    term = a ** (m + n) * b ** m / (mpmath.factorial(m + n) * mpmath.factorial(m))
    total = term
    while True:
        m += 1
        term = term * a * b / ((m + n) * m)
        total += term
        if abs(term) <= abs(total) * mpmath.eps and m > abs(a * b):
            return total


def partition_function(N: int, a, b, qmax: int | None = None):
    """Sum over q of det[c_{q+j-k}]; without ``qmax`` the q sum runs until it converges."""
    cache: dict = {}

    def c(n):
        if n not in cache:
            cache[n] = _c(n, a, b)
        return cache[n]

    def det(q):
        M = mpmath.matrix(N, N)
        for j in range(N):
            for k in range(N):
                M[j, k] = c(q + j - k)
        return mpmath.det(M)

    total = det(0)
    q = 0
    while True:
        q += 1
        step = det(q) + det(-q)
        total += step
        if qmax is not None:
            if q >= qmax:
                return total
        elif abs(step) <= abs(total) * mpmath.eps and q > abs(a) + abs(b):
            return total


def _moments(N: int, beta: float, qmax: int | None = None) -> dict:
    x = mpmath.mpf(N) * mpmath.mpf(beta) / 2

    def Z(a, b):
        return partition_function(N, a, b, qmax)

    z0 = Z(x, x)
    d_a = mpmath.diff(Z, (x, x), (1, 0))
    d_aa = mpmath.diff(Z, (x, x), (2, 0))
    d_ab = mpmath.diff(Z, (x, x), (1, 1))
    return {"W": d_a / z0 / N, "W2": d_aa / z0 / N ** 2, "absW2": d_ab / z0 / N ** 2}


def su_plaquette_moments(N: int, beta: float, dps: int = 40, qmax: int | None = None) -> dict:
    """<Tr U>/N, <(Tr U)^2>/N^2 and <|Tr U|^2>/N^2 for one SU(N) plaquette."""
    with mpmath.workdps(dps):
        return {k: float(v) for k, v in _moments(N, beta, qmax).items()}


def factorization_deficit(N: int, beta: float, dps: int = 60) -> float:
    """|<W_p^2>/N^2 - (<W_p>/N)^2|, with the difference taken at high precision."""
    with mpmath.workdps(dps):
        m = _moments(N, beta)
        return float(abs(m["W2"] - m["W"] ** 2))
