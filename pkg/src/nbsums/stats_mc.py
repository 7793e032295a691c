"""Monte-Carlo and exhaustive checks of the Gauss-measure lemmas.

Float experiments draw x from the Gauss measure m by inverse CDF, x = 2**u - 1.
Experiments that need exact continued-fraction data draw random rationals with a
big-integer denominator and run the Euclidean algorithm on them.

Every experiment is split into batches; batch ``i`` of a run with seed ``s``
uses its own generator seeded by ``(s, i)``, so results do not depend on how
the batches are scheduled.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import zeta

from .constants import GOLDEN
from .errors import DomainError, ResourceError

__all__ = [
    "MCConfig",
    "InvarianceReport",
    "ContractionReport",
    "TailRow",
    "TailReport",
    "CellCheckReport",
    "AlphaProductReport",
    "tail_C2",
    "gamma_tail",
    "wilson_interval",
    "image_measure",
    "mc_invariance",
    "mc_contraction",
    "mc_tail_qs",
    "check_alpha_product",
    "exhaustive_cell_check",
    "required_bits",
]

LOG2 = math.log(2.0)
G_CONTRACT = (math.sqrt(5.0) - 1.0) / 2.0
CELL_BUDGET = 10_000_000
# integral of log(1/x)^2 against dm
L2_NORM_SQ = 1.5 * float(zeta(3.0)) / LOG2


@dataclass(frozen=True)
class MCConfig:
    seed: int = 20240611
    samples: int = 1_000_000
    batch_size: int = 100_000
    bits: int = 128

    def __post_init__(self):
        if self.samples < 1 or self.batch_size < 1:
            raise DomainError("samples and batch_size must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.bits < 8:
            raise DomainError("bits must be at least 8")

    def batches(self):
        """(batch index, batch size) pairs covering ``samples``."""
        full, rest = divmod(self.samples, self.batch_size)
        sizes = [self.batch_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def numpy_rng(self, batch: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, batch])

    def python_rng(self, batch: int) -> random.Random:
        return random.Random(f"{self.seed}:{batch}")


def _gauss_sample(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.exp2(rng.random(n)) - 1.0


def wilson_interval(hits: int, n: int, z: float = 3.0) -> tuple[float, float]:
    if n <= 0:
        raise DomainError("n must be positive")
    p = hits / n
    den = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


def _gauss_m(a: float, b: float) -> float:
    return (math.log1p(b) - math.log1p(a)) / LOG2


def image_measure(a: float, b: float) -> float:
    """m(alpha((a, b))) in closed form.

    On the branch (1/(n+1), 1/n) the map is x -> 1/x - n, so the image is a union
    of at most finitely many subintervals, or all of (0, 1) once a full branch
    fits inside (a, b).
    """
    if not 0 <= a < b <= 1:
        raise DomainError("need 0 <= a < b <= 1")
    if a == 0:
        return 1.0
    pieces = []
    n_lo, n_hi = math.floor(1 / b), math.floor(1 / a)
    for n in range(max(n_lo, 1), n_hi + 1):
        lo, hi = max(a, 1 / (n + 1)), min(b, 1 / n)
        if lo < hi:
            pieces.append((1 / hi - n, 1 / lo - n))
    pieces.sort()
    total, cur_lo, cur_hi = 0.0, None, None
    for lo, hi in pieces:
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += _gauss_m(cur_lo, cur_hi)
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += _gauss_m(cur_lo, cur_hi)
    return total


@dataclass(frozen=True)
class InvarianceReport:
    a: float
    b: float
    samples: int
    measure: float
    preimage_estimate: float
    stderr: float
    z_score: float
    within_3sigma: bool
    image_measure: float
    image_discrepancy: float


def mc_invariance(interval: tuple[float, float], cfg: MCConfig = MCConfig()) -> InvarianceReport:
    """Estimate m(alpha^{-1}(a, b)) and compare with m((a, b)).

    The image form m(alpha(E)) - m(E) is computed exactly and reported alongside.
    """
    a, b = map(float, interval)
    if not 0 <= a < b <= 1:
        raise DomainError("interval must satisfy 0 <= a < b <= 1")
    hits = 0
    for i, n in cfg.batches():
        x = _gauss_sample(cfg.numpy_rng(i), n)
        x = x[x > 0]
        alpha = np.mod(1.0 / x, 1.0)
        hits += int(np.count_nonzero((alpha > a) & (alpha < b)))
    p = hits / cfg.samples
    exact = _gauss_m(a, b)
    se = math.sqrt(max(exact * (1 - exact), 1e-300) / cfg.samples)
    z = (p - exact) / se if exact not in (0.0, 1.0) else 0.0 if p == exact else math.inf
    img = image_measure(a, b)
    return InvarianceReport(
        a=a,
        b=b,
        samples=cfg.samples,
        measure=exact,
        preimage_estimate=p,
        stderr=se,
        z_score=z,
        within_3sigma=abs(p - exact) <= 3 * se,
        image_measure=img,
        image_discrepancy=img - exact,
    )


@dataclass(frozen=True)
class ContractionReport:
    s: int
    p: float
    samples: int
    lhs: float
    rhs_integral: float
    ratio: float
    ratio_stderr: float
    bound: float
    passes: bool


def _gamma_s(x: np.ndarray, s: int) -> np.ndarray:
    """gamma_s(x) = beta_{s-1}(x) log(1/alpha_s(x)) by iterating the float Gauss map."""
    alpha = x.copy()
    beta = np.ones_like(x)
    for _ in range(s):
        beta *= alpha
        with np.errstate(divide="ignore"):
            alpha = np.mod(1.0 / alpha, 1.0)
    # beta now holds beta_{s-1}
    with np.errstate(divide="ignore"):
        return beta * -np.log(alpha)


def mc_contraction(s: int, p: float = 2.0, cfg: MCConfig = MCConfig()) -> ContractionReport:
    """Compare the m-integral of |T^s l|^p with g^{(s-1)p} times that of |l|^p, l = log(1/x).

    T^s l equals gamma_s. Both integrals use the same samples, and the ratio's
    standard error comes from the delta method.
    """
    if s < 1:
        raise DomainError("s must be positive")
    if not p > 1:
        raise DomainError("p must exceed 1")
    sums = np.zeros(5)  # sum A, sum B, sum A^2, sum B^2, sum AB
    n_used = 0
    for i, n in cfg.batches():
        x = _gauss_sample(cfg.numpy_rng(i), n)
        x = x[x > 0]
        A = np.abs(_gamma_s(x, s)) ** p
        B = np.abs(np.log(x)) ** p
        ok = np.isfinite(A)
        A, B = A[ok], B[ok]
        n_used += len(A)
        sums += [A.sum(), B.sum(), (A * A).sum(), (B * B).sum(), (A * B).sum()]
    mA, mB = sums[0] / n_used, sums[1] / n_used
    vA = sums[2] / n_used - mA * mA
    vB = sums[3] / n_used - mB * mB
    cAB = sums[4] / n_used - mA * mB
    ratio = mA / mB
    var_ratio = (vA / mB**2 - 2 * mA * cAB / mB**3 + mA**2 * vB / mB**4) / n_used
    rel_se = math.sqrt(max(var_ratio, 0.0)) / ratio if ratio > 0 else 0.0
    bound = G_CONTRACT ** ((s - 1) * p)
    return ContractionReport(
        s=s,
        p=p,
        samples=n_used,
        lhs=mA,
        rhs_integral=mB,
        ratio=ratio,
        ratio_stderr=rel_se * ratio,
        bound=bound,
        passes=ratio <= bound * (1.0 + 5.0 * rel_se),
    )


def tail_C2(C1: float) -> float:
    return 0.5 * C1 - math.log(C1) - 1.0 + LOG2


def gamma_tail(s: int, x: float) -> float:
    """P(X_1 + ... + X_s >= x) for i.i.d. rate-1 exponentials: e^{-x} sum_{j<s} x^j / j!."""
    if s < 1:
        raise DomainError("s must be positive")
    if x <= 0:
        return 1.0
    term, total = 1.0, 1.0
    for j in range(1, s):
        term *= x / j
        total += term
    return math.exp(-x) * total


def required_bits(s: int, C1: float) -> int:
    """Denominator size that keeps q_s exact: roughly 2.9 s log2(e^{C1})."""
    return math.ceil(2.9 * s * C1 / LOG2)


@dataclass(frozen=True)
class TailRow:
    s: int
    C1: float
    hits: int
    samples: int
    estimate: float
    stderr: float
    wilson_low: float
    wilson_high: float
    bound: float
    gamma_bound: float
    passes: bool


@dataclass(frozen=True)
class TailReport:
    C1: float
    C2: float
    eps: float
    bits: int
    rows: tuple[TailRow, ...] = field(default_factory=tuple)


def _q_levels(num: int, den: int, levels: list[int]) -> list[int]:
    """q_s of num/den at each s in ``levels`` (sorted); the final q if the expansion ends first."""
    out = []
    q_prev, q = 0, 1
    prev, cur = den, num
    depth = 0
    for s in levels:
        while depth < s and cur:
            a, rem = divmod(prev, cur)
            q_prev, q = q, a * q + q_prev
            prev, cur = cur, rem
            depth += 1
        out.append(q)
    return out


def _tail_batch(args) -> list[int]:
    seed, batch, n, bits, levels, thresholds = args
    rng = random.Random(f"{seed}:{batch}")
    hits = [0] * len(levels)
    top = 1 << (bits - 1)
    for _ in range(n):
        den = top | rng.getrandbits(bits - 1)
        num = 1 + rng.randrange(den - 1)
        for j, q in enumerate(_q_levels(num, den, levels)):
            if q >= thresholds[j]:
                hits[j] += 1
    return hits


def mc_tail_qs(
    C1: float,
    s_values,
    cfg: MCConfig = MCConfig(),
    eps: float = 0.1,
    workers: int = 1,
) -> TailReport:
    """Lebesgue measure of {x : q_s(x) >= exp(C1 s)} from exact random rationals.

    ``bound`` is exp(-(C2 - eps) s); ``gamma_bound`` is the cell-sum bound
    2^s P(Gamma(s, 1) >= C1 s / 2) that the estimate is derived from.
    """
    if C1 < GOLDEN:
        raise DomainError(f"C1 = {C1} is below the golden ratio")
    levels = sorted({int(s) for s in s_values})
    if not levels or levels[0] < 1:
        raise DomainError("s values must be positive")
    need = required_bits(levels[-1], C1)
    if cfg.bits < need:
        raise DomainError(f"{cfg.bits}-bit denominators too small for s = {levels[-1]}; need {need}")
    thresholds = [math.ceil(math.exp(C1 * s)) for s in levels]
    jobs = [(cfg.seed, i, n, cfg.bits, levels, thresholds) for i, n in cfg.batches()]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_tail_batch, jobs))
    else:
        results = [_tail_batch(j) for j in jobs]
    totals = np.sum(results, axis=0)
    C2 = tail_C2(C1)
    rows = []
    N = cfg.samples
    for s, hits in zip(levels, totals):
        hits = int(hits)
        est = hits / N
        se = math.sqrt(est * (1 - est) / N)
        lo, hi = wilson_interval(hits, N)
        bound = math.exp(-(C2 - eps) * s)
        rows.append(
            TailRow(
                s=s,
                C1=C1,
                hits=hits,
                samples=N,
                estimate=est,
                stderr=se,
                wilson_low=lo,
                wilson_high=hi,
                bound=bound,
                gamma_bound=2.0**s * gamma_tail(s, 0.5 * C1 * s),
                passes=est <= bound + 3 * se,
            )
        )
    return TailReport(C1=C1, C2=C2, eps=eps, bits=cfg.bits, rows=tuple(rows))


@dataclass(frozen=True)
class AlphaProductReport:
    samples: int
    bits: int
    levels_checked: int
    violations: int
    max_product: Fraction


def check_alpha_product(cfg: MCConfig = MCConfig(samples=10_000)) -> AlphaProductReport:
    """alpha_s alpha_{s+1} <= 1/2 at every level of exact random rationals.

    With Euclidean remainders r_l this reads 2 r_{s+1} <= r_{s-1}, an integer test.
    """
    levels = violations = 0
    worst = Fraction(0)
    top = 1 << (cfg.bits - 1)
    for i, n in cfg.batches():
        rng = cfg.python_rng(i)
        for _ in range(n):
            den = top | rng.getrandbits(cfg.bits - 1)
            r = [den, 1 + rng.randrange(den - 1)]
            while r[-1]:
                r.append(r[-2] % r[-1])
            # pairs (r_{s-1}, r_{s+1}) while alpha_{s+1} is defined
            for j in range(len(r) - 2):
                levels += 1
                if 2 * r[j + 2] > r[j]:
                    violations += 1
                if r[j + 2] * worst.denominator > worst.numerator * r[j]:
                    worst = Fraction(r[j + 2], r[j])
    return AlphaProductReport(cfg.samples, cfg.bits, levels, violations, worst)


@dataclass(frozen=True)
class CellCheckReport:
    s: int
    b_max: int
    cells: int
    measure_failures: int
    logq_failures: int
    total_length: Fraction
    min_measure_slack: float
    min_logq_slack: float


def exhaustive_cell_check(s: int, b_max: int) -> CellCheckReport:
    """Check both cell lemmas on every depth-s cell with quotients <= b_max.

    meas C(b) <= prod b_j^{-2} becomes prod b_j^2 <= q_s (q_s + q_{s-1}), and
    log q_s <= 2 sum log b_j + s log 2 becomes q_s <= 2^s prod b_j^2.
    """
    if s < 1 or b_max < 1:
        raise DomainError("s and b_max must be positive")
    if b_max**s > CELL_BUDGET:
        raise ResourceError(f"{b_max}^{s} cells exceed the budget of {CELL_BUDGET}")
    cells = m_fail = q_fail = 0
    total = Fraction(0)
    m_slack = q_slack = math.inf
    two_s = 1 << s
    for b in itertools.product(range(1, b_max + 1), repeat=s):
        q_prev, q = 0, 1
        prod = 1
        for bj in b:
            q_prev, q = q, bj * q + q_prev
            prod *= bj
        prod2 = prod * prod
        size = q * (q + q_prev)
        cells += 1
        total += Fraction(1, size)
        if prod2 > size:
            m_fail += 1
        if q > two_s * prod2:
            q_fail += 1
        m_slack = min(m_slack, math.log(size) - math.log(prod2))
        q_slack = min(q_slack, math.log(two_s * prod2) - math.log(q))
    return CellCheckReport(s, b_max, cells, m_fail, q_fail, total, m_slack, q_slack)
