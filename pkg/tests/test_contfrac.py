import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbsums.contfrac import (
    apply_T,
    as_fraction,
    cell_of,
    cf_expand,
    gauss_map,
    gauss_measure,
    wilton_partial_L,
)
from nbsums.errors import DomainError

PHI_M1 = (math.sqrt(5) - 1) / 2


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


rationals = st.builds(
    lambda k, h: Fraction(h % k or 1, k),
    st.integers(min_value=2, max_value=10**18),
    st.integers(min_value=1, max_value=10**18),
)


def test_expand_five_eighths():
    cf = cf_expand(Fraction(5, 8))
    assert cf.quotients == (1, 1, 1, 2)
    assert cf.convergents == ((1, 1), (1, 2), (2, 3), (5, 8))
    assert cf.terminated and not cf.truncated


def test_expand_one_third():
    cf = cf_expand(Fraction(1, 3))
    assert cf.quotients == (3,)
    assert cf.depth == 1
    assert cf.gamma(0) == pytest.approx(math.log(3), abs=1e-15)


def test_fibonacci_ratio_all_ones():
    cf = cf_expand(Fraction(fib(40), fib(41)))
    assert set(cf.quotients[:-1]) == {1}
    # the last quotient of F_n/F_{n+1} is 2 when the expansion is written canonically
    assert cf.quotients[-1] == 2


def test_x_equal_one_is_depth_one():
    cf = cf_expand(1)
    assert cf.quotients == (1,)
    assert cf.alpha(1) == 0


@pytest.mark.parametrize("bad", [0, Fraction(-1, 2), Fraction(3, 2)])
def test_expand_domain(bad):
    with pytest.raises(DomainError):
        cf_expand(bad)


def test_truncation_flag():
    cf = cf_expand(Fraction(fib(60), fib(61)), max_depth=10)
    assert cf.truncated and cf.depth == 10
    assert len(cf.gammas) == 11


def test_gauss_map():
    assert gauss_map(Fraction(3, 7)) == Fraction(1, 3)
    assert gauss_map(1) == 0
    with pytest.raises(DomainError):
        gauss_map(0)


def test_as_fraction_float_is_exact():
    assert as_fraction(0.1) == Fraction(0.1)
    assert as_fraction((2, 6)) == Fraction(1, 3)


@settings(max_examples=200, deadline=None)
@given(rationals)
def test_expansion_invariants(x):
    cf = cf_expand(x)
    assert Fraction(cf.p[-1], cf.q[-1]) == x
    for l in range(1, cf.depth):
        a = cf.quotients[l]
        assert cf.p[l + 1] == a * cf.p[l] + cf.p[l - 1]
        assert cf.q[l + 1] == a * cf.q[l] + cf.q[l - 1]
    prod = Fraction(1)
    for l, alpha in enumerate(cf.alphas):
        prod *= alpha
        assert cf.beta(l) == prod
    # beta_s = 1/(q_{s+1} + alpha_{s+1} q_s), exact
    for s in range(cf.depth):
        assert cf.beta(s) == 1 / (cf.q[s + 1] + cf.alpha(s + 1) * cf.q[s])
    # alpha_s alpha_{s+1} <= 1/2 and log q_s <= 2 sum log b + s log 2
    for s in range(cf.depth):
        assert cf.alpha(s) * cf.alpha(s + 1) <= Fraction(1, 2)
    prod_b = 1
    for s in range(1, cf.depth + 1):
        prod_b *= cf.quotients[s - 1]
        assert cf.q[s] <= 2**s * prod_b**2


def test_alpha_product_random_64bit():
    rng = random.Random(7)
    for _ in range(500):
        den = rng.getrandbits(64) | (1 << 63)
        cf = cf_expand(Fraction(rng.randrange(1, den), den))
        for s in range(cf.depth):
            assert 2 * cf.alpha(s) * cf.alpha(s + 1) <= 1


@pytest.mark.parametrize(
    "b, ends, length",
    [
        ([2], (Fraction(1, 3), Fraction(1, 2)), Fraction(1, 6)),
        ([1], (Fraction(1, 2), Fraction(1)), Fraction(1, 2)),
        ([1, 1], (Fraction(1, 2), Fraction(2, 3)), Fraction(1, 6)),
    ],
)
def test_cells(b, ends, length):
    c = cell_of(b)
    assert (c.endpoint_low, c.endpoint_high) == ends
    assert c.length == length == c.endpoint_high - c.endpoint_low


def test_cell_errors():
    with pytest.raises(DomainError):
        cell_of([])
    with pytest.raises(DomainError):
        cell_of([1, 0])


def test_cell_length_bound():
    rng = random.Random(3)
    for _ in range(300):
        b = [rng.randint(1, 50) for _ in range(rng.randint(1, 6))]
        c = cell_of(b)
        assert c.length * math.prod(b) ** 2 <= 1


def test_unique_cell_matches_expansion():
    rng = random.Random(11)
    for _ in range(10_000):
        den = rng.getrandbits(128) | (1 << 127)
        x = Fraction(rng.randrange(1, den), den)
        cf = cf_expand(x, max_depth=6)
        s = min(5, cf.depth)
        assert x in cell_of(cf.quotients[:s])


@pytest.mark.parametrize(
    "a, b, expected",
    [(0, 1, 1.0), (0, 0.5, math.log(1.5) / math.log(2)), (0.3, 0.3, 0.0)],
)
def test_gauss_measure(a, b, expected):
    assert gauss_measure(a, b) == pytest.approx(expected, abs=1e-15)


def test_gauss_measure_order():
    with pytest.raises(DomainError):
        gauss_measure(0.6, 0.5)


def test_wilton_partial():
    assert wilton_partial_L(Fraction(1, 3), 0) == pytest.approx(math.log(3), abs=1e-15)
    x = Fraction(fib(50), fib(51))
    # all tails equal phi - 1, so gamma_0 - gamma_1 = log(1/g) - g log(1/g)
    g = PHI_M1
    assert wilton_partial_L(x, 1) == pytest.approx((1 - g) * math.log(1 / g), abs=1e-14)
    with pytest.raises(DomainError):
        wilton_partial_L(Fraction(1, 3), 2)


@settings(max_examples=100, deadline=None)
@given(rationals)
def test_partial_L_at_zero_is_log(x):
    assert wilton_partial_L(x, 0) == pytest.approx(math.log(1 / x), rel=1e-14)


def test_apply_T_gives_gammas():
    x = Fraction(355, 1133)
    cf = cf_expand(x)
    for s in range(cf.depth):
        val = apply_T(lambda y: -math.log(y), x, s)
        assert val == pytest.approx(cf.gamma(s), rel=1e-13)
