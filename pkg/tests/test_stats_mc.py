import math
from fractions import Fraction

import pytest
from scipy.special import gammaincc
from scipy.stats import binomtest

from nbsums.contfrac import cell_of
from nbsums.errors import DomainError, ResourceError
from nbsums.stats_mc import (
    L2_NORM_SQ,
    MCConfig,
    check_alpha_product,
    exhaustive_cell_check,
    gamma_tail,
    image_measure,
    mc_contraction,
    mc_invariance,
    mc_tail_qs,
    required_bits,
    tail_C2,
    wilson_interval,
)

SMALL = MCConfig(samples=200_000, batch_size=50_000)


def test_config_validation():
    with pytest.raises(DomainError):
        MCConfig(samples=0)
    with pytest.raises(DomainError):
        MCConfig(seed=-1)
    assert MCConfig(samples=250, batch_size=100).batches() == [(0, 100), (1, 100), (2, 50)]


def test_invariance_full_interval():
    r = mc_invariance((0, 1), SMALL)
    assert r.measure == 1.0 and r.preimage_estimate == pytest.approx(1.0, abs=1e-5)


def test_invariance_half():
    r = mc_invariance((0, 0.5), MCConfig(samples=1_000_000))
    assert r.measure == pytest.approx(math.log(1.5) / math.log(2), abs=1e-15)
    assert r.within_3sigma
    # image form: alpha((0, 1/2)) is all of (0, 1)
    assert r.image_measure == 1.0


def test_invariance_deterministic():
    assert mc_invariance((0.1, 0.3), SMALL) == mc_invariance((0.1, 0.3), SMALL)


def test_image_measure_branches():
    # (1/3, 1/2) maps onto (1, 2) - 1 = (0, 1)
    assert image_measure(1 / 3, 1 / 2) == pytest.approx(1.0, abs=1e-12)
    # (0.4, 0.5) maps to (2, 2.5) - 2 = (0, 0.5)
    assert image_measure(0.4, 0.5) == pytest.approx(math.log(1.5) / math.log(2), abs=1e-12)


def test_contraction_s1_and_oracle():
    r = mc_contraction(1, 2.0, SMALL)
    assert r.bound == 1.0 and r.passes
    assert r.rhs_integral == pytest.approx(L2_NORM_SQ, rel=0.02)


def test_contraction_s5():
    r = mc_contraction(5, 2.0, MCConfig(samples=1_000_000))
    assert r.bound == pytest.approx(((math.sqrt(5) - 1) / 2) ** 8)
    assert r.passes


def test_contraction_decreasing():
    ratios = [mc_contraction(s, 2.0, SMALL).ratio for s in range(1, 11)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_gamma_tail_oracle():
    assert gamma_tail(10, 10) == pytest.approx(gammaincc(10, 10), rel=1e-13)
    for s, x in [(1, 2.0), (5, 3.3), (25, 25.0)]:
        assert gamma_tail(s, x) == pytest.approx(gammaincc(s, x), rel=1e-12)


def test_C2():
    assert tail_C2(2.0) == pytest.approx(0.0, abs=1e-15)
    assert tail_C2(5.0) == pytest.approx(2.5 - math.log(5) - 1 + math.log(2))


def test_wilson_contains_estimate():
    lo, hi = wilson_interval(30, 1000)
    assert lo < 0.03 < hi
    ci = binomtest(30, 1000).proportion_ci(confidence_level=0.9973, method="wilson")
    assert lo == pytest.approx(ci.low, rel=1e-3) and hi == pytest.approx(ci.high, rel=1e-3)


def test_tail_s10():
    cfg = MCConfig(samples=100_000, bits=256)
    rep = mc_tail_qs(2.0, [10], cfg)
    row = rep.rows[0]
    assert row.estimate <= math.exp(-(rep.C2 - 0.1) * 10) + 3 * row.stderr
    assert row.wilson_low <= row.estimate <= row.wilson_high
    assert row.gamma_bound == pytest.approx(2**10 * gammaincc(10, 10))


def test_tail_preconditions():
    with pytest.raises(DomainError):
        mc_tail_qs(1.5, [10])
    with pytest.raises(DomainError):
        mc_tail_qs(2.0, [25], MCConfig(bits=64))
    assert required_bits(25, 2.0) <= 256


def test_tail_deterministic_across_workers():
    cfg = MCConfig(samples=4_000, batch_size=1_000, bits=128)
    a = mc_tail_qs(2.0, [10, 12], cfg, workers=1)
    b = mc_tail_qs(2.0, [10, 12], cfg, workers=2)
    assert a == b


def test_alpha_product_exact():
    r = check_alpha_product(MCConfig(samples=10_000, bits=128))
    assert r.violations == 0
    assert r.max_product <= Fraction(1, 2)


def test_cells_s2():
    r = exhaustive_cell_check(2, 30)
    assert r.cells == 900
    assert r.measure_failures == 0 and r.logq_failures == 0
    assert r.total_length <= 1


def test_cells_fibonacci_slack():
    for s in range(1, 20):
        c = cell_of([1] * s)
        a, b = 0, 1
        for _ in range(s + 1):
            a, b = b, a + b
        assert c.q_s == a  # F_{s+1}
        slack = s * math.log(2) - math.log(c.q_s)
        assert slack > 0


def test_cells_budget():
    with pytest.raises(ResourceError):
        exhaustive_cell_check(8, 10)
