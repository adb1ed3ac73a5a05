from fractions import Fraction

import mpmath
import pytest

from lstring.lattice import NULL_SEQUENCE
from lstring.series import (expansion_cancellation, f2k_magnitude_bound, f_value, is_certified,
                            master_residual_limit, reduced_f0_residual, tail_bound)

# smallest-scale couplings inside the certified region for d = 2
CERT_BETA = {0: "1e-19", 1: "1e-24", 2: "1e-31"}


def test_empty_sequence_is_one():
    for beta in ("0", "0.3", "1e-4"):
        v = f_value(0, NULL_SEQUENCE, beta, 3, 2)
        assert v.value == 1 and v.tail_bound == 0 and v.certified


def test_plaquette_value_at_small_beta(small_sequences):
    v = f_value(0, small_sequences["p"], "1e-4", 3, 2)
    with mpmath.workdps(50):
        assert v.value == mpmath.mpf("5e-5")
    assert v.coefficients == [0, Fraction(1, 2), 0, 0]
    # the geometric ratio exceeds one here, so the tail is not certified
    assert not v.certified and mpmath.isinf(v.tail_bound)


def test_certification_threshold():
    # 2 |beta| (2048)^5 < 1 iff |beta| < 1/(2 * 2048^5)
    edge = Fraction(1, 2 * 2048 ** 5)
    assert is_certified(0, edge * Fraction(999, 1000), 2)
    assert not is_certified(0, edge, 2)
    assert not is_certified(1, edge * Fraction(999, 1000), 2)


def test_certified_value_and_tail(small_sequences):
    s = small_sequences["p"]
    v = f_value(0, s, CERT_BETA[0], 1, 2)
    # the bound carries K^iota C_3, so it is finite but far from tight
    assert v.certified and 0 < v.tail_bound < mpmath.inf
    with mpmath.workdps(50):
        assert abs(v.value - mpmath.mpf("1e-19") / 2) <= v.tail_bound
    assert tail_bound(0, s, 0, 1, 2) == 0


@pytest.mark.parametrize("k", [0, 1, 2])
def test_magnitude_bound(small_sequences, k):
    for s in small_sequences.values():
        v = f_value(k, s, CERT_BETA[k], 3, 2)
        assert v.certified
        assert abs(v.value) + v.tail_bound <= f2k_magnitude_bound(k, s, 2)


@pytest.mark.parametrize("k", [0, 1])
def test_symmetric_residual_coefficients_vanish(small_sequences, k):
    r = master_residual_limit(small_sequences["p"], k, "1e-4", 3, 2)
    assert all(c == 0 for c in r.exact_coefficients)
    assert r.within_budget


@pytest.mark.parametrize("k", [0, 1])
def test_symmetric_residual_certified(small_sequences, k):
    r = master_residual_limit(small_sequences["p"], k, CERT_BETA[k], 3, 2)
    assert r.certified and r.within_budget and mpmath.isfinite(r.budget)


def test_residual_at_zero_coupling_is_exact(small_sequences):
    for s in small_sequences.values():
        r = master_residual_limit(s, 0, 0, 3, 2)
        assert r.residual == 0 and r.budget == 0
        red = reduced_f0_residual(s, 0, 3, 2)
        assert red.residual == 0 and red.budget == 0


def test_reduced_residual(small_sequences):
    for s in small_sequences.values():
        red = reduced_f0_residual(s, "1e-20", 3, 2)
        assert all(c == 0 for c in red.exact_coefficients)
        assert red.certified and red.within_budget


def test_expansion_terms_cancel(small_sequences):
    for s in small_sequences.values():
        assert expansion_cancellation(s, 3) == [0, 0, 0, 0]


def test_residual_needs_non_null():
    with pytest.raises(ValueError):
        master_residual_limit(NULL_SEQUENCE, 0, "0.1", 1, 2)
