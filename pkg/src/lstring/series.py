"""Truncated power series f_{2k}(s) = sum_i a_{i,k}(s) beta^i with certified tails,
and residuals of the limiting loop equations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import mpmath

from .combinatorics import catalan
from .coefficients import a_coefficient, bound_constant
from .lattice import LoopSequence
from .ops import Kind, first_edge_terms
from .trajectories import grouped_transitions

PRECISION_DIGITS = 50


def _mpf(x) -> mpmath.mpf:
    # strings and Fractions convert at working precision, so "1e-4" is not rounded through a double
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass
class SeriesValue:
    k: int
    beta: float
    i_max: int
    value: mpmath.mpf
    tail_bound: mpmath.mpf
    certified: bool
    coefficients: list = field(default_factory=list)

    def report(self) -> dict:
        return {
            "k": self.k,
            "beta": self.beta,
            "i_max": self.i_max,
            "value": mpmath.nstr(self.value, 30),
            "tail_bound": "inf" if mpmath.isinf(self.tail_bound) else mpmath.nstr(self.tail_bound, 17),
            "certified": self.certified,
        }


def ratio(k: int, beta, d: int) -> mpmath.mpf:
    """Geometric ratio |beta| K^{5+2k} of the coefficient bound."""
    with mpmath.workdps(PRECISION_DIGITS):
        return abs(_mpf(beta)) * mpmath.mpf(bound_constant(d)) ** (5 + 2 * k)


def is_certified(k: int, beta, d: int) -> bool:
    with mpmath.workdps(PRECISION_DIGITS):
        return 2 * ratio(k, beta, d) < 1


def tail_bound(k: int, s: LoopSequence, beta, i_max: int, d: int) -> mpmath.mpf:
    """Closed-form bound on sum_{i > i_max} |a_{i,k}(s)| |beta|^i."""
    if not s:
        return mpmath.mpf(0)
    with mpmath.workdps(PRECISION_DIGITS):
        r = ratio(k, beta, d)
        if r == 0:
            return mpmath.mpf(0)
        if r >= 1:
            return mpmath.inf
        K = mpmath.mpf(bound_constant(d))
        front = K ** s.index * mpmath.mpf(s.length) ** (3 * k) * prod(catalan(n - 1) for n in s.degrees)
        return front * r ** (i_max + 1) / (1 - r)


def series_coefficients(k: int, s: LoopSequence, i_max: int) -> list:
    return [a_coefficient(i, k, s) for i in range(i_max + 1)]


def f_value(k: int, s: LoopSequence, beta, i_max: int, d: int | None = None) -> SeriesValue:
    """Truncated f_k(s) at ``beta`` with a certified tail bound when available."""
    d = d or s.dim or 2
    coeffs = series_coefficients(k, s, i_max) if s else [Fraction(int(i == 0 and k == 0)) for i in range(i_max + 1)]
    with mpmath.workdps(PRECISION_DIGITS):
        b = _mpf(beta)
        value = mpmath.fsum(_mpf(c) * b ** i for i, c in enumerate(coeffs) if c)
        tb = tail_bound(k, s, beta, i_max, d)
    certified = (not s) or is_certified(k, beta, d)
    return SeriesValue(k, float(beta), i_max, value, tb, certified, coeffs)


def f2k_magnitude_bound(k: int, s: LoopSequence, d: int) -> int:
    return (2 ** (3 * k + 12) * d) ** s.length


# -- loop-equation residuals ------------------------------------------------


@dataclass
class Residual:
    residual: mpmath.mpf
    budget: mpmath.mpf
    exact_coefficients: list
    certified: bool

    @property
    def within_budget(self) -> bool:
        return abs(self.residual) <= self.budget

    def report(self) -> dict:
        return {
            "residual": mpmath.nstr(self.residual, 17),
            "budget": "inf" if mpmath.isinf(self.budget) else mpmath.nstr(self.budget, 17),
            "within_budget": bool(self.within_budget),
            "certified": self.certified,
            "exact_coefficients": [str(c) for c in self.exact_coefficients],
        }


def _terms(s: LoopSequence, k: int) -> list:
    """Right side of the symmetric equation as (factor, beta_power, grade k', sequence).

    ``factor`` is an exact rational; the term is factor * beta^power * f_{2k'}.
    """
    out = []
    if s.ell and k >= 1:
        out.append((Fraction(s.ell), 0, k - 1, s))
    for kind, res, mult in grouped_transitions(s, "MSDE"):
        sgn = -kind.sign
        if kind in (Kind.POS_MERGER, Kind.NEG_MERGER):
            if k >= 1:
                out.append((Fraction(sgn * mult), 0, k - 1, res))
        elif kind in (Kind.POS_SPLIT, Kind.NEG_SPLIT):
            out.append((Fraction(sgn * mult), 0, k, res))
        else:
            out.append((Fraction(sgn * mult, 2), 1, k, res))
    return out


def _coeff(i: int, k: int, s: LoopSequence) -> Fraction:
    if i < 0:
        return Fraction(0)
    if not s:
        return Fraction(int(i == 0 and k == 0))
    return a_coefficient(i, k, s)


def master_residual_limit(s: LoopSequence, k: int, beta, i_max: int, d: int | None = None) -> Residual:
    """Residual of |s| f_{2k}(s) = ell f_{2k-2}(s) + M-, M+, S-, S+ sums + beta/2 (D-, D+, E-, E+ sums),
    every f evaluated as a truncated series.

    ``exact_coefficients[j]`` is the rational coefficient of beta^j in the
    residual of the truncated series for j <= i_max; these vanish exactly when
    the coefficients satisfy the equation order by order.
    """
    if not s:
        raise ValueError("the equation is stated for non-null sequences")
    d = d or s.dim or 2
    terms = _terms(s, k)
    exact = []
    for j in range(i_max + 1):
        c = s.length * _coeff(j, k, s)
        for factor, power, kk, res in terms:
            c -= factor * _coeff(j - power, kk, res)
        exact.append(c)
    with mpmath.workdps(PRECISION_DIGITS):
        b = _mpf(beta)
        lhs = s.length * f_value(k, s, beta, i_max, d).value
        budget = s.length * tail_bound(k, s, beta, i_max, d)
        rhs = mpmath.mpf(0)
        for factor, power, kk, res in terms:
            fv = f_value(kk, res, beta, i_max, d)
            scale = _mpf(factor) * b ** power
            rhs += scale * fv.value
            budget += abs(scale) * fv.tail_bound
    certified = is_certified(k, beta, d) and is_certified(max(k - 1, 0), beta, d)
    return Residual(lhs - rhs, budget, exact, certified)


def reduced_f0_residual(s: LoopSequence, beta, i_max: int, d: int | None = None) -> Residual:
    """Residual of m g(s) = sum_split g + beta sum_deform g with g = f_0 at coupling 2 beta.

    The sums are the signed first-edge sums; the expansion sum is absent
    because it cancels in the limit.
    """
    if not s:
        raise ValueError("the equation is stated for non-null sequences")
    d = d or s.dim or 2
    T = first_edge_terms(s, "SD")

    def g_coeff(j: int, seq: LoopSequence) -> Fraction:
        return _coeff(j, 0, seq) * 2 ** j if j >= 0 else Fraction(0)

    exact = []
    for j in range(i_max + 1):
        c = T.m * g_coeff(j, s)
        for sgn, res in T.split:
            c -= sgn * g_coeff(j, res)
        for sgn, res in T.deform:
            c -= sgn * g_coeff(j - 1, res)
        exact.append(c)
    with mpmath.workdps(PRECISION_DIGITS):
        b = _mpf(beta)
        two_b = 2 * b

        def g(seq):
            return f_value(0, seq, two_b, i_max, d)

        main = g(s)
        lhs = T.m * main.value
        budget = T.m * main.tail_bound
        rhs = mpmath.mpf(0)
        for sgn, res in T.split:
            v = g(res)
            rhs += sgn * v.value
            budget += v.tail_bound
        for sgn, res in T.deform:
            v = g(res)
            rhs += sgn * b * v.value
            budget += abs(b) * v.tail_bound
    return Residual(lhs - rhs, budget, exact, is_certified(0, 2 * _mpf(beta), d))


def expansion_cancellation(s: LoopSequence, i_max: int) -> list:
    """Coefficients of sum_{p in P(e)} f_0(s,p) - sum_{p in P(e^-1)} f_0(s,p) along the
    first-edge expansion terms; all vanish when f_0 factorizes."""
    T = first_edge_terms(s, "E")
    out = []
    for j in range(i_max + 1):
        c = Fraction(0)
        for sgn, res in T.expand:
            c += sgn * _coeff(j, 0, res)
        out.append(c)
    return out
