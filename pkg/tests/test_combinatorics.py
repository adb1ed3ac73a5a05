from fractions import Fraction
from math import comb

from hypothesis import given, strategies as st

from lstring.combinatorics import (catalan, catalan_convolution, interleaving_weight_closed, interleaving_weight_sum,
                                   interleavings)


def test_catalan_values():
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]


def test_catalan_growth():
    for n in range(51):
        assert catalan(n + 1) <= 4 * catalan(n)


def test_catalan_convolution_and_product_bound():
    for n in range(1, 41):
        assert catalan(n) == catalan_convolution(n) == sum(catalan(n - 1 - k) * catalan(k) for k in range(n))
    for n in range(1, 21):
        for m in range(1, 21):
            assert catalan(n + m - 1) <= (n + m) ** 2 * catalan(n - 1) * catalan(m - 1)


def test_interleaving_count():
    for n in range(5):
        for m in range(5):
            alphas = list(interleavings(n, m))
            assert len(alphas) == comb(n + m, n) == len(set(alphas))
            for a in alphas:
                assert a[0] == 0 and a[-1] == n
                assert all(a[i + 1] - a[i] in (0, 1) for i in range(n + m))


def test_interleaving_identity_one_step_each():
    a0, b0 = Fraction(4), Fraction(6)
    # two orders: first X then Y, or first Y then X
    direct = 1 / ((a0 + b0) * (0 + b0)) + 1 / ((a0 + b0) * (a0 + 0))
    assert direct == interleaving_weight_sum([a0, 0], [b0, 0]) == 1 / (a0 * b0)


@given(st.lists(st.integers(1, 30), min_size=0, max_size=4), st.lists(st.integers(1, 30), min_size=0, max_size=4))
def test_interleaving_identity(a, b):
    a, b = a + [0], b + [0]
    assert interleaving_weight_sum(a, b) == interleaving_weight_closed(a, b)
