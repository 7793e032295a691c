"""Finite sums at rationals h/k: cotangent sums, Vasyunin sums, Estermann partial
sums, g at rational points, the Nyman-Beurling Gram entries b_{h,k} and the
Moebius-weighted sums sum_{k^D <= n < 2k^D} mu(n) g(n/k) with their Vaughan split.

Conventions (fixed numerically, see the tests):

* ``c0(h/k) = sum_{l<k} (l/k) cot(pi h l / k)``.
* ``V(h/k) = sum_{m<k} {m h / k} cot(pi m / k)``.  With this definition
  V(h/k) = +c0(h-bar/k) for every coprime pair.
* The regularised value of g(x) = sum_l (1 - 2{lx})/l at x = h/k (terms with
  lx an integer counted as 0) is ``-(pi/k) c0(h-bar/k)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import digamma

from .arith import MoebiusTable, mod_inverse, sieve, vaughan_c1_split, vaughan_decompose
from .constants import solve_theorem_constants
from .errors import DomainError, IntegrityError, ResourceError

__all__ = [
    "RationalPoint",
    "cotangent_c0",
    "vasyunin_V",
    "vasyunin_row",
    "estermann_partial",
    "calibrated_sign",
    "g_rational",
    "g_sawtooth",
    "g_residues",
    "vasyunin_orientation",
    "gram_b",
    "gram_matrix",
    "TheoremSumReport",
    "theorem_sum",
    "theorem_sweep",
]

EULER_GAMMA = 0.57721566490153286061
LOG_2PI_MINUS_GAMMA = math.log(2.0 * math.pi) - EULER_GAMMA


@dataclass(frozen=True)
class RationalPoint:
    """Reduced residue h/k with k >= 2, 1 <= h <= k-1, gcd(h, k) = 1."""

    h: int
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"denominator must be >= 2, got {self.k}")
        if not 1 <= self.h <= self.k - 1 or math.gcd(self.h, self.k) != 1:
            raise DomainError(f"{self.h}/{self.k} is not a reduced residue")

    @classmethod
    def of(cls, p) -> "RationalPoint":
        if isinstance(p, RationalPoint):
            return p
        h, k = p
        return cls(int(h), int(k))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.h, self.k)


def _point(h, k=None) -> RationalPoint:
    return RationalPoint.of(h if k is None else (h, k))


def cotangent_c0(h, k=None) -> float:
    """c0(h/k); terms l and k-l are combined before summation."""
    p = _point(h, k)
    h, k = p.h, p.k
    l = np.arange(1, (k - 1) // 2 + 1)
    # cot(pi h (k - l)/k) = -cot(pi h l / k)
    angle = np.pi * ((h * l) % k) / k
    return math.fsum((2 * l - k) / k / np.tan(angle))


def vasyunin_row(k: int) -> np.ndarray:
    """V(h/k) for h = 0..k-1 (entries with gcd(h, k) > 1 follow the same formula)."""
    if k < 2:
        return np.zeros(max(k, 1))
    m = np.arange(1, (k - 1) // 2 + 1)
    cot = 1.0 / np.tan(np.pi * m / k)
    h = np.arange(k)[:, None]
    frac_m = ((h * m[None, :]) % k) / k
    frac_km = ((h * (k - m[None, :])) % k) / k
    # pair m with k - m: cot(pi (k - m)/k) = -cot(pi m / k)
    return ((frac_m - frac_km) * cot[None, :]).sum(axis=1)


def vasyunin_V(h, k=None) -> float:
    """Vasyunin's sum V(h/k) = sum_{m=1}^{k-1} {mh/k} cot(pi m / k)."""
    p = _point(h, k)
    h, k = p.h, p.k
    m = np.arange(1, (k - 1) // 2 + 1)
    frac_m = ((h * m) % k) / k
    frac_km = ((h * (k - m)) % k) / k
    return math.fsum((frac_m - frac_km) / np.tan(np.pi * m / k))


def estermann_partial(s_param: float, h, k=None, terms: int = 100_000, d: np.ndarray | None = None) -> float:
    """sum_{n <= N} d(n) sin(2 pi n h/k) / n^s, with N the largest multiple of k <= terms."""
    p = _point(h, k)
    if terms < p.k:
        raise DomainError("need at least one full period of terms")
    N = (terms // p.k) * p.k
    if d is None or len(d) <= N:
        d = sieve(N).d
    # sine table odd by construction so that h and k - h give exactly opposite sums
    r = np.arange(p.k)
    sin_r = np.sin(2.0 * np.pi * np.minimum(r, p.k - r) / p.k)
    sin_r[r > p.k - r] *= -1.0
    n = np.arange(1, N + 1)
    vals = d[1 : N + 1] * sin_r[(n * p.h) % p.k] / n.astype(float) ** s_param
    return math.fsum(vals)


def g_sawtooth(h, k=None) -> float:
    """Regularised sum_l (1 - 2{l h/k})/l through digamma values.

    With ((y)) = {y} - 1/2 (and 0 at integers) the series is -2 sum_l ((lh/k))/l,
    and grouping l by residue r mod k gives (2/k) sum_r ((rh/k)) psi(r/k).
    """
    p = _point(h, k)
    r = np.arange(1, p.k)
    saw = ((r * p.h) % p.k) / p.k - 0.5
    saw[(r * p.h) % p.k == 0] = 0.0
    return 2.0 / p.k * math.fsum(saw * digamma(r / p.k))


def _g_cot_unsigned(h: int, k: int) -> float:
    return -(math.pi / k) * cotangent_c0(mod_inverse(h, k), k)


@lru_cache(maxsize=1)
def calibrated_sign() -> int:
    """Sign of the cotangent route, fixed once against the Wilton route at 1/3.

    Raises IntegrityError unless the two routes agree up to sign (to 1e-6).
    """
    from .special_fn import g_wilton

    ref = g_wilton(Fraction(1, 3))
    cot = _g_cot_unsigned(1, 3)
    for sign in (1, -1):
        if abs(ref - sign * cot) <= 1e-6:
            return sign
    raise IntegrityError(f"cotangent route {cot} does not match Wilton route {ref} up to sign")


def g_rational(h, k=None, sign_convention: int | None = None) -> float:
    """g(h/k) via the cotangent route, sign_convention * (-(pi/k)) c0(h-bar/k)."""
    p = _point(h, k)
    sign = calibrated_sign() if sign_convention is None else sign_convention
    if sign not in (1, -1):
        raise DomainError("sign_convention must be +1 or -1")
    return sign * _g_cot_unsigned(p.h, p.k)


@lru_cache(maxsize=4096)
def _g_residues(k: int, sign: int) -> np.ndarray:
    out = np.zeros(k)
    for r in range(1, k):
        d = math.gcd(r, k)
        kk = k // d
        if kk >= 2:
            out[r] = g_rational(r // d, kk, sign)
    out.setflags(write=False)
    return out


def g_residues(k: int, sign_convention: int | None = None) -> np.ndarray:
    """g(r/k) for r = 0..k-1, non-reduced r/k evaluated at the reduced fraction, g(0) = 0."""
    sign = calibrated_sign() if sign_convention is None else sign_convention
    return _g_residues(int(k), sign)


def vasyunin_orientation(kmax: int = 200, tol: float = 1e-9) -> dict:
    """Which sign relates V(h/k) and c0(h-bar/k) over all coprime pairs k <= kmax."""
    counts = {1: 0, -1: 0}
    worst = {1: 0.0, -1: 0.0}
    n_pairs = 0
    for k in range(2, kmax + 1):
        row = vasyunin_row(k)
        for h in range(1, k):
            if math.gcd(h, k) != 1:
                continue
            n_pairs += 1
            v = row[h]
            c = cotangent_c0(mod_inverse(h, k), k)
            for s in (1, -1):
                err = abs(v - s * c)
                worst[s] = max(worst[s], err)
                if err <= tol:
                    counts[s] += 1
    uniform = [s for s in (1, -1) if counts[s] == n_pairs]
    return {
        "pairs": n_pairs,
        "orientation": uniform[0] if len(uniform) == 1 else 0,
        "matches_plus": counts[1],
        "matches_minus": counts[-1],
        "max_err_plus": worst[1],
        "max_err_minus": worst[-1],
    }


def _gram_coprime(h: int, k: int, V_hk: float, V_kh: float) -> float:
    return (
        0.5 * LOG_2PI_MINUS_GAMMA * (1.0 / h + 1.0 / k)
        + (k - h) / (2.0 * h * k) * math.log(h / k)
        - math.pi / (2.0 * h * k) * (V_hk + V_kh)
    )


def gram_b(h: int, k: int) -> float:
    """b_{h,k} in closed form.

    The closed form holds for coprime (h, k); in general b_{h,k} = b_{h/d,k/d} / d
    with d = gcd(h, k), because the defining integral only sees h/k and 1/sqrt(hk).
    """
    h, k = int(h), int(k)
    if h < 1 or k < 1:
        raise DomainError("gram_b needs positive indices")
    d = math.gcd(h, k)
    h, k = h // d, k // d
    V_hk = vasyunin_V(h % k, k) if k >= 2 else 0.0
    V_kh = vasyunin_V(k % h, h) if h >= 2 else 0.0
    return _gram_coprime(h, k, V_hk, V_kh) / d


def gram_matrix(N: int) -> np.ndarray:
    """Symmetric N x N matrix with entry [h-1, k-1] = b_{h,k}."""
    if N < 1:
        raise DomainError("N must be positive")
    V = np.zeros((N + 1, N + 1))
    for k in range(2, N + 1):
        V[k, :k] = vasyunin_row(k)
    idx = np.arange(1, N + 1)
    H, K = np.meshgrid(idx, idx, indexing="ij")
    D = np.gcd(H, K)
    h, k = H // D, K // D
    V_hk = V[k, h % k]
    V_kh = V[h, k % h]
    B = (
        0.5 * LOG_2PI_MINUS_GAMMA * (1.0 / h + 1.0 / k)
        + (k - h) / (2.0 * h * k) * np.log(h / k)
        - np.pi / (2.0 * h * k) * (V_hk + V_kh)
    ) / D
    return 0.5 * (B + B.T)


@dataclass(frozen=True)
class TheoremSumReport:
    k: int
    D: float
    n_lo: int
    n_hi: int
    w: float
    threshold: float
    delta0: float
    v0: float
    z0: float
    S: float
    sigma1: float
    sigma2: float
    sigma3: float
    sigma11: float
    sigma12: float
    normalized: float
    abs_scale: float

    def as_dict(self) -> dict:
        return asdict(self)


def _default_constants():
    return solve_theorem_constants()["equation_root"]


def _power(k: int, D: float) -> float:
    return float(k ** int(D)) if float(D).is_integer() else float(k) ** D


def theorem_sum(
    k: int,
    D: float = 2.0,
    delta0: float = 0.25,
    v0: float | None = None,
    mu_table: MoebiusTable | None = None,
    z0: float | None = None,
    sign_convention: int | None = None,
) -> TheoremSumReport:
    """S = sum_{k^D <= n < 2k^D} mu(n) g(n/k) and its Vaughan split with w = k^(2 delta0).

    sigma1 is further split at the bilinear size st >= k^(4 delta0 + 4 v0).
    ``abs_scale`` is sum |g(n/k)| over the range, the scale for relative checks.
    """
    if k < 2:
        raise DomainError("k must be >= 2")
    if D < 2:
        raise DomainError("D must be >= 2")
    if delta0 <= 0:
        raise DomainError("delta0 must be positive")
    consts = _default_constants()
    v0 = consts.v0 if v0 is None else v0
    z0 = consts.z0 if z0 is None else z0

    kD = _power(k, D)
    n_lo = math.ceil(kD)
    n_hi = math.ceil(2.0 * kD)  # exclusive
    if n_hi > 2**62:
        raise ResourceError("k^D exceeds the integer index range")
    N = n_hi - 1
    if mu_table is None:
        mu_table = sieve(N)
    elif mu_table.limit < N:
        raise DomainError(f"sieve limit {mu_table.limit} < 2k^D = {N}")

    w = float(k) ** (2.0 * delta0)
    threshold = float(k) ** (4.0 * delta0 + 4.0 * v0)
    vd = vaughan_decompose(N, w, mu_table)
    c11, c12 = vaughan_c1_split(N, w, threshold, mu_table)

    gres = g_residues(k, sign_convention)
    n = np.arange(n_lo, n_hi)
    gv = gres[n % k]

    def weighted(c: np.ndarray) -> float:
        return math.fsum(c[n_lo:n_hi] * gv)

    S = weighted(mu_table.mu)
    return TheoremSumReport(
        k=k,
        D=float(D),
        n_lo=n_lo,
        n_hi=n_hi,
        w=w,
        threshold=threshold,
        delta0=delta0,
        v0=v0,
        z0=z0,
        S=S,
        sigma1=weighted(vd.c1),
        sigma2=weighted(vd.c2),
        sigma3=weighted(vd.c3),
        sigma11=weighted(c11),
        sigma12=weighted(c12),
        normalized=S / kD * float(k) ** z0,
        abs_scale=math.fsum(np.abs(gv)),
    )


def _sweep_one(args) -> TheoremSumReport:
    k, D, delta0, v0, z0, sign = args
    return theorem_sum(k, D, delta0, v0, None, z0, sign)


def theorem_sweep(
    ks,
    D: float = 2.0,
    delta0: float = 0.25,
    v0: float | None = None,
    z0: float | None = None,
    workers: int = 1,
) -> list[TheoremSumReport]:
    """theorem_sum over several k; results come back in the order of ``ks``."""
    sign = calibrated_sign()
    jobs = [(int(k), D, delta0, v0, z0, sign) for k in ks]
    if workers <= 1:
        return [_sweep_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_one, jobs))
