"""Integer tables: Moebius and divisor sieves, modular inverses, Vaughan's identity.

Arrays are 1-indexed in the arithmetic sense: ``table.mu[n]`` is mu(n) and
index 0 is unused (set to 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError

__all__ = [
    "MoebiusTable",
    "VaughanDecomposition",
    "sieve",
    "dirichlet_convolve",
    "mod_inverse",
    "vaughan_decompose",
    "vaughan_F",
    "vaughan_F_table",
    "vaughan_c1_split",
]

SIEVE_LIMIT = 50_000_000


@dataclass(frozen=True)
class MoebiusTable:
    limit: int
    mu: np.ndarray
    d: np.ndarray
    d4: np.ndarray


def dirichlet_convolve(f: np.ndarray, g: np.ndarray, N: int | None = None) -> np.ndarray:
    """(f * g)(n) = sum_{ab = n} f(a) g(b) for n <= N, O(N log N)."""
    if N is None:
        N = min(len(f), len(g)) - 1
    dtype = np.result_type(f.dtype, g.dtype)
    h = np.zeros(N + 1, dtype=dtype)
    for a in np.flatnonzero(f[1 : N + 1]) + 1:
        top = N // a
        h[a : a * top + 1 : a] += f[a] * g[1 : top + 1]
    return h


def _mobius(N: int) -> np.ndarray:
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p :: p] = True
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p :: p * p] = 0
    return mu


def sieve(N: int) -> MoebiusTable:
    """mu, d and d_4 = d * d on 1..N."""
    N = int(N)
    if N < 1:
        raise DomainError("sieve limit must be >= 1")
    if N > SIEVE_LIMIT:
        raise ResourceError(f"sieve limit {N} exceeds budget {SIEVE_LIMIT}")
    mu = _mobius(N)
    d = np.zeros(N + 1, dtype=np.int64)
    for a in range(1, N + 1):
        d[a::a] += 1
    d4 = dirichlet_convolve(d, d, N)
    return MoebiusTable(limit=N, mu=mu, d=d, d4=d4)


def mod_inverse(h: int, k: int) -> int:
    """h-bar in [1, k-1] with h * h-bar = 1 mod k."""
    if k < 2:
        raise DomainError("modulus must be >= 2")
    if math.gcd(h, k) != 1:
        raise DomainError(f"{h} is not invertible mod {k}")
    return pow(h, -1, k)


@dataclass(frozen=True)
class VaughanDecomposition:
    """mu = c1 + c2 + c3 on 1..N for the cutoff w; c4 as in the identity."""

    w: float
    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray

    @property
    def limit(self) -> int:
        return len(self.c1) - 1


def _cutoffs(w: float) -> tuple[int, int]:
    """(largest integer <= w, smallest integer >= w)."""
    lo = math.floor(w)
    hi = lo if lo == w else lo + 1
    return lo, hi


def _c4(N: int, w: float, mu: np.ndarray) -> np.ndarray:
    lo, _ = _cutoffs(w)
    trunc = np.zeros(N + 1, dtype=np.int64)
    top = min(lo, N)
    trunc[1 : top + 1] = mu[1 : top + 1]
    ones = np.ones(N + 1, dtype=np.int64)
    ones[0] = 0
    return -dirichlet_convolve(trunc, ones, N)


def vaughan_decompose(N: int, w: float, mu_table: MoebiusTable | None = None) -> VaughanDecomposition:
    """Coefficients c1, c2, c3, c4 of Vaughan's identity for n <= N."""
    if not w > 1:
        raise DomainError("Vaughan cutoff must satisfy w > 1")
    if mu_table is None or mu_table.limit < N:
        mu_table = sieve(N)
    mu = mu_table.mu[: N + 1]
    lo, hi = _cutoffs(w)

    c4 = _c4(N, w, mu)
    big = c4.copy()
    big[: min(hi, N + 1)] = 0  # alpha >= w
    c1 = dirichlet_convolve(mu, dirichlet_convolve(big, big, N), N)

    c2 = np.zeros(N + 1, dtype=np.int64)
    top = min(lo, N)
    c2[1 : top + 1] = 2 * mu[1 : top + 1]

    small = np.zeros(N + 1, dtype=np.int64)
    small[1 : top + 1] = mu[1 : top + 1]
    ones = np.ones(N + 1, dtype=np.int64)
    ones[0] = 0
    c3 = -dirichlet_convolve(dirichlet_convolve(small, small, N), ones, N)
    return VaughanDecomposition(w=float(w), c1=c1, c2=c2, c3=c3, c4=c4)


def vaughan_F_table(N: int, w: float, mu_table: MoebiusTable | None = None) -> np.ndarray:
    """F(u) = sum_{st = u} (sum_{d | s, d <= w} mu(d)) (sum_{e | t, e <= w} mu(e)), u <= N."""
    if mu_table is None or mu_table.limit < N:
        mu_table = sieve(N)
    c4 = _c4(N, w, mu_table.mu[: N + 1])
    return dirichlet_convolve(c4, c4, N)


def vaughan_F(u: int, w: float) -> int:
    """F(u) by direct divisor enumeration."""
    if u < 1:
        raise DomainError("u must be positive")

    def mu(n: int) -> int:
        res, m, p = 1, n, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                res = -res
            p += 1
        return -res if m > 1 else res

    def inner(s: int) -> int:
        return sum(mu(d) for d in range(1, s + 1) if s % d == 0 and d <= w)

    return sum(inner(s) * inner(u // s) for s in range(1, u + 1) if u % s == 0)


def vaughan_c1_split(
    N: int, w: float, threshold: float, mu_table: MoebiusTable | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Split c1 by the size of the bilinear product u = alpha * beta.

    Returns ``(c1_large, c1_small)`` with u >= threshold in the first part and
    u < threshold in the second; their sum is c1.
    """
    if mu_table is None or mu_table.limit < N:
        mu_table = sieve(N)
    mu = mu_table.mu[: N + 1]
    _, hi = _cutoffs(w)
    big = _c4(N, w, mu)
    big[: min(hi, N + 1)] = 0
    P = dirichlet_convolve(big, big, N)
    u = np.arange(N + 1)
    large = np.where(u >= threshold, P, 0)
    small = P - large
    return dirichlet_convolve(mu, large, N), dirichlet_convolve(mu, small, N)
