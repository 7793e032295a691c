"""Nyman-Beurling distance on the critical line.

zeta(1/2 + it) is evaluated by Euler-Maclaurin summation. Integrals against
dt/(1/4 + t^2) use a cached grid of Gauss-Legendre panels on [0, T]: every
panel carries an n-point and a 2n-point rule, and their difference is the
panel's error estimate. All integrands here are even in t, so the grid only
covers the positive half-line.

Truncation tails use the twisted mean value of |zeta|^2. For coprime h, k,
|zeta(1/2+it)|^2 (h/k)^{it} averages to (hk)^{-1/2} (log(t/(2 pi hk)) + 2 gamma).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
from scipy.special import bernoulli

from .arith import MoebiusTable, sieve
from .errors import AccuracyError, DomainError
from .sums import EULER_GAMMA, LOG_2PI_MINUS_GAMMA, gram_b, gram_matrix

__all__ = [
    "CriticalLineValue",
    "GramSystem",
    "QuadratureResult",
    "zeta_half",
    "zeta_half_array",
    "verify_bhk_integral",
    "vn_coefficients",
    "linear_terms",
    "linear_terms_closed",
    "dn_squared",
    "gram_minimize",
    "nb_asymptotic",
]

T_MAX = 1.0e4
_EM_TERMS = 10
_B2J = bernoulli(2 * _EM_TERMS + 2)[2::2]  # B_2, B_4, ...
_EM_COEF = np.array([_B2J[j] / math.factorial(2 * j + 2) for j in range(_EM_TERMS + 1)])
_CHUNK = 512


@dataclass(frozen=True)
class CriticalLineValue:
    t: float
    re: float
    im: float
    err_est: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def _em_cutoff(t_abs: float) -> int:
    return max(30, math.ceil(t_abs / 2.0))


def _zeta_chunk(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    N = _em_cutoff(float(np.max(np.abs(t))))
    s = 0.5 + 1j * t
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    head = np.exp(-1j * np.outer(t, logn)) @ (n**-0.5)
    Ns = np.exp(-s * math.log(N))  # N^{-s}
    val = head + N * Ns / (s - 1.0) + 0.5 * Ns
    poch = s.copy()  # s (s+1) ... (s + 2j - 2)
    power = Ns / N  # N^{-s-2j+1} for j = 1
    last = np.zeros_like(s)
    for j in range(_EM_TERMS + 1):
        term = _EM_COEF[j] * poch * power
        if j < _EM_TERMS:
            val += term
            poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
            power = power / (N * N)
        else:
            last = term
    return val, np.abs(last)


def zeta_half_array(t) -> tuple[np.ndarray, np.ndarray]:
    """zeta(1/2 + it) and an error estimate for an array of t."""
    t = np.asarray(t, dtype=float)
    if t.size and np.max(np.abs(t)) > T_MAX:
        raise AccuracyError(f"|t| beyond the validated range {T_MAX:g}")
    flat = t.ravel()
    order = np.argsort(np.abs(flat), kind="stable")
    vals = np.empty(flat.size, dtype=complex)
    errs = np.empty(flat.size)
    for start in range(0, flat.size, _CHUNK):
        idx = order[start : start + _CHUNK]
        vals[idx], errs[idx] = _zeta_chunk(flat[idx])
    return vals.reshape(t.shape), errs.reshape(t.shape)


def zeta_half(t: float) -> CriticalLineValue:
    """zeta(1/2 + it) by Euler-Maclaurin with N = max(30, |t|/2) terms."""
    v, e = zeta_half_array(np.array([float(t)]))
    return CriticalLineValue(float(t), float(v[0].real), float(v[0].imag), float(e[0]))


class _PanelGrid:
    """zeta on Gauss-Legendre nodes of fixed panels covering [0, T]."""

    def __init__(self, T: float, order: int = 12, width: float = 0.5):
        if not 0 < T <= T_MAX:
            raise DomainError(f"T must lie in (0, {T_MAX:g}]")
        self.T = float(T)
        self.order = order
        n_pan = max(1, math.ceil(T / width))
        edges = np.linspace(0.0, T, n_pan + 1)
        a, b = edges[:-1, None], edges[1:, None]
        x1, w1 = np.polynomial.legendre.leggauss(order)
        x2, w2 = np.polynomial.legendre.leggauss(2 * order)
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        self.t1, self.w1 = mid + half * x1, half * w1
        self.t2, self.w2 = mid + half * x2, half * w2
        self.z1, e1 = zeta_half_array(self.t1)
        self.z2, e2 = zeta_half_array(self.t2)
        self.zeta_err = float(max(e1.max(), e2.max()))
        self.weight1 = 1.0 / (0.25 + self.t1**2)
        self.weight2 = 1.0 / (0.25 + self.t2**2)

    def integrate(self, f) -> tuple[float, float]:
        """int_0^T f(t, zeta) dt/(1/4 + t^2) and the summed panel error estimate.

        ``f`` maps (t array, zeta array) to a real array of the same shape.
        """
        p1 = (f(self.t1, self.z1) * self.weight1 * self.w1).sum(axis=1)
        p2 = (f(self.t2, self.z2) * self.weight2 * self.w2).sum(axis=1)
        return math.fsum(p2), math.fsum(np.abs(p2 - p1))


@lru_cache(maxsize=4)
def _grid(T: float) -> _PanelGrid:
    return _PanelGrid(T)


def _bhk_tail(h: int, k: int, T: float) -> float:
    """Contribution of |t| > T to b_{h,k} from the twisted mean value (h, k coprime)."""
    return (math.log(T / (2.0 * math.pi * h * k)) + 2.0 * EULER_GAMMA + 1.0) / (math.pi * h * k * T)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    truncated: float
    tail: float
    quad_err: float
    T: float

    @property
    def err_est(self) -> float:
        # the mean-value tail is a heuristic, half its size is charged as error
        return self.quad_err + 0.5 * abs(self.tail)


@dataclass(frozen=True)
class BhkReport:
    h: int
    k: int
    quadrature: QuadratureResult
    closed_form: float
    difference: float
    tol: float
    passes: bool


def _bhk_quadrature(h: int, k: int, T: float) -> QuadratureResult:
    d = math.gcd(h, k)
    hr, kr = h // d, k // d
    omega = math.log(hr / kr)
    grid = _grid(float(T))
    val, err = grid.integrate(lambda t, z: (z.real**2 + z.imag**2) * np.cos(omega * t))
    truncated = val / (math.pi * math.sqrt(h * k))
    tail = _bhk_tail(hr, kr, T) / d
    return QuadratureResult(truncated + tail, truncated, tail, err / (math.pi * math.sqrt(h * k)) + grid.zeta_err, T)


def verify_bhk_integral(h: int, k: int, T: float = 2000.0, tol: float = 1e-2) -> BhkReport:
    """Defining integral of b_{h,k} on |t| <= T plus mean-value tail, against the closed form."""
    if not (1 <= h <= 50 and 1 <= k <= 50):
        raise DomainError("h and k must lie in [1, 50]")
    if T > 5000:
        raise DomainError("T must not exceed 5000")
    q = _bhk_quadrature(int(h), int(k), T)
    closed = gram_b(h, k)
    diff = q.value - closed
    return BhkReport(int(h), int(k), q, closed, diff, tol, abs(diff) <= tol + q.err_est)


def vn_coefficients(N: int, mu: MoebiusTable | None = None) -> np.ndarray:
    """a_n = (1 - log n / log N) mu(n) for n = 1..N (returned 0-indexed)."""
    if N < 2:
        raise DomainError("N must be at least 2")
    if mu is None:
        mu = sieve(N)
    elif mu.limit < N:
        raise DomainError(f"Moebius table limit {mu.limit} < N = {N}")
    n = np.arange(1, N + 1)
    a = (1.0 - np.log(n) / math.log(N)) * mu.mu[1 : N + 1]
    a[-1] = 0.0
    return a


def linear_terms_closed(N: int) -> np.ndarray:
    """l_n = (gamma - 1 - log n)/n, the residue of zeta(s) n^{-s} / (s(1-s)) at s = 1 with sign flipped."""
    n = np.arange(1, N + 1, dtype=float)
    return (EULER_GAMMA - 1.0 - np.log(n)) / n


def linear_terms(N: int, T: float = 2000.0) -> tuple[np.ndarray, np.ndarray]:
    """l_n = (1/2pi) int Re[zeta(1/2+it) n^{-1/2-it}] dt/(1/4+t^2) by quadrature on |t| <= T.

    Returns values and error estimates. Re zeta(1/2+it) averages to 1, which
    gives l_1 the tail 1/(pi T); for n > 1 the twisted mean vanishes and the
    remaining O(T^{-3/2}) tail is charged to the error.
    """
    if not 1 <= N <= 200:
        raise DomainError("N must lie in [1, 200]")
    grid = _grid(float(T))
    vals = np.empty(N)
    errs = np.empty(N)
    tail = 2.0 / (math.pi * T**1.5)
    for n in range(1, N + 1):
        ln = math.log(n)

        def f(t, z, ln=ln):
            return z.real * np.cos(t * ln) + z.imag * np.sin(t * ln)

        v, e = grid.integrate(f)
        vals[n - 1] = v / (math.pi * math.sqrt(n)) + (1.0 / (math.pi * T) if n == 1 else 0.0)
        errs[n - 1] = (e + tail) / (math.pi * math.sqrt(n)) + grid.zeta_err
    return vals, errs


@dataclass(frozen=True)
class GramSystem:
    N: int
    matrix: np.ndarray
    coefficients: np.ndarray
    linear: np.ndarray
    value: float
    err_est: float
    regularized: bool = False


def _gram_value(a: np.ndarray, B: np.ndarray, ell: np.ndarray) -> float:
    return 1.0 - 2.0 * float(a @ ell) + float(a @ B @ a)


def dn_squared(
    N: int,
    coefficients,
    mode: str = "gram",
    T: float = 2000.0,
    linear: str = "closed",
) -> tuple[float, float]:
    """(value, error estimate) of (1/2pi) int |1 - zeta D_N(1/2+it)|^2 dt/(1/4+t^2).

    ``mode="gram"`` expands the square with the closed-form b_{h,k} and linear
    terms from ``linear`` ("closed" or "quadrature"). ``mode="direct"``
    integrates the square itself on |t| <= T and adds the mean-value tail.
    """
    a = np.asarray(coefficients, dtype=float)
    if a.shape != (N,):
        raise DomainError(f"expected {N} coefficients, got shape {a.shape}")
    if mode == "gram":
        if N > 500:
            raise DomainError("gram mode supports N <= 500")
        if linear == "closed":
            ell, ell_err = linear_terms_closed(N), np.zeros(N)
        elif linear == "quadrature":
            ell, ell_err = linear_terms(N, T)
        else:
            raise DomainError(f"unknown linear-term source {linear!r}")
        B = gram_matrix(N)
        val = _gram_value(a, B, ell)
        err = 2.0 * float(np.abs(a) @ ell_err) + 1e-12 * (1.0 + float(np.abs(a).sum()) ** 2)
        return val, err
    if mode != "direct":
        raise DomainError(f"unknown mode {mode!r}")
    if N > 20:
        raise DomainError("direct mode supports N <= 20")
    grid = _grid(float(T))
    n = np.arange(1, N + 1, dtype=float)
    coef = a / np.sqrt(n)
    logn = np.log(n)

    def f(t, z):
        phase = np.multiply.outer(t, logn)
        D = (np.cos(phase) - 1j * np.sin(phase)) @ coef
        return np.abs(1.0 - z * D) ** 2

    val, err = grid.integrate(f)
    # mean of |1 - zeta D|^2 is 1 - 2 a_1 + sum a_h a_k (twisted |zeta|^2 means)
    tail = (1.0 - 2.0 * a[0]) / (math.pi * T)
    for h in range(1, N + 1):
        for k in range(1, N + 1):
            if a[h - 1] and a[k - 1]:
                d = math.gcd(h, k)
                tail += a[h - 1] * a[k - 1] * _bhk_tail(h // d, k // d, T) / d
    return val / math.pi + tail, err / math.pi + 0.5 * abs(tail) + grid.zeta_err * float(np.abs(coef).sum())


def gram_minimize(N: int, linear: str = "closed", T: float = 2000.0) -> GramSystem:
    """Minimise the Gram form over real coefficient vectors of length N.

    Solves B a = l with a symmetric-indefinite factorisation; if B is numerically
    singular a ridge of 1e-12 is added and ``regularized`` is set.
    """
    if not 1 <= N <= 200:
        raise DomainError("N must lie in [1, 200]")
    B = gram_matrix(N)
    if linear == "closed":
        ell = linear_terms_closed(N)
    else:
        ell, _ = linear_terms(N, T)
    regularized = False
    try:
        a = scipy.linalg.solve(B, ell, assume_a="sym")
        if not np.all(np.isfinite(a)):
            raise np.linalg.LinAlgError("non-finite solution")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
        a = scipy.linalg.solve(B + 1e-12 * np.eye(N), ell, assume_a="sym")
        regularized = True
    val = _gram_value(a, B, ell)
    resid = float(np.abs(B @ a - ell).max())
    return GramSystem(N, B, a, ell, val, resid * float(np.abs(a).sum()), regularized)


def nb_asymptotic(N: int) -> float:
    """(2 + gamma - log 4 pi) / log N."""
    return (2.0 + EULER_GAMMA - math.log(4.0 * math.pi)) / math.log(N)


# b_{1,1} for reference
B11 = LOG_2PI_MINUS_GAMMA
