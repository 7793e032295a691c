"""Analytic functions attached to the Gauss map.

* ``A(lam) = int_0^inf {t}{lam t} dt / t^2``
* ``Q(x) = (x + 1)/2 A(1) - A(x) - (x/2) log x``
* ``G(x) = sum_j (-1)^j beta_{j-1}(x) Q(alpha_j(x))``
* ``delta(x)``, the rational correction ``(-1)^(L+1) A(1) / (2q)``
* Wilton's function ``W(x) = sum_l (-1)^l gamma_l(x)``
* ``g = W - 2G - 2 delta`` and its smooth/singular split.

``A`` is evaluated piecewise in closed form: between consecutive breakpoints of
``{t}`` and ``{lam t}`` the integrand is ``lam - (m + lam n)/t + n m / t^2``.
For rational ``lam = p/q`` the integrand is q-periodic, so the tail past
``M q`` is summed exactly through a moment expansion against Hurwitz zeta values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .contfrac import CFExpansion, as_fraction, cf_expand
from .errors import AccuracyError, DomainError, IntegrityError

__all__ = [
    "A_ONE",
    "eval_A",
    "ATable",
    "default_atable",
    "eval_Q",
    "eval_G",
    "eval_delta",
    "wilton_W",
    "g_wilton",
    "GDecomposition",
    "g_split",
]

#: Rationals with denominator up to this bound go through the exact periodic path.
EXACT_DEN_MAX = 20_000

# moment r of the tail carries 16^-(r+1); 14 terms reach 1e-17 and the
# integrands are polynomials of degree <= 15, integrated exactly by 8 Gauss nodes
_TAIL_PERIODS = 16
_TAIL_TERMS = 14
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

# Sup of |Q| on [0, 1] is about 0.64 (attained at 0); used for truncating G.
_Q_SUP = 1.0


def _piece_integrals(a: np.ndarray, b: np.ndarray, lam: float) -> np.ndarray:
    """Exact integral of {t}{lam t}/t^2 over each [a_i, b_i] (no breakpoint inside)."""
    mid = 0.5 * (a + b)
    n = np.floor(mid)
    m = np.floor(lam * mid)
    out = np.empty_like(a)
    first = a == 0.0
    # on [0, b] with b <= min(1, 1/lam) the integrand is identically lam
    out[first] = lam * b[first]
    rest = ~first
    a, b, n, m = a[rest], b[rest], n[rest], m[rest]
    w = b - a
    out[rest] = lam * w - (lam * n + m) * np.log1p(w / a) + n * m * w / (a * b)
    return out


def _breakpoints(lam: float, T: float, lam_steps: np.ndarray | None = None) -> np.ndarray:
    ints = np.arange(0.0, math.floor(T) + 1.0)
    if lam_steps is None:
        lam_steps = np.arange(0.0, math.floor(lam * T) + 1.0) / lam
    pts = np.unique(np.concatenate([ints, lam_steps[lam_steps <= T], [T]]))
    return pts


@lru_cache(maxsize=200_000)
def _A_rational(p: int, q: int) -> float:
    """A(p/q) for coprime 0 < p <= q, accurate to a few ulps of the result."""
    lam = p / q
    M = _TAIL_PERIODS
    T = M * q
    lam_steps = np.arange(0, M * p + 1, dtype=float) * q / p
    pts = _breakpoints(lam, T, lam_steps)
    head = math.fsum(_piece_integrals(pts[:-1], pts[1:], lam))

    # tail: sum_{j >= M} int_0^q f(u) / (j q + u)^2 du, f(u) = {u}{p u / q};
    # with v = u/q, 1/(jq + u)^2 = q^-2 sum_r (-1)^r (r+1) v^r j^-(r+2)
    vb = np.unique(np.concatenate([np.arange(q + 1) / q, np.arange(p + 1) / p]))
    va, vc = vb[:-1], vb[1:]
    vm = 0.5 * (va + vc)
    half = 0.5 * (vc - va)
    n = np.floor(q * vm)
    m = np.floor(p * vm)
    V = vm[:, None] + half[:, None] * _GL_X[None, :]
    F = (q * V - n[:, None]) * (p * V - m[:, None]) * (half[:, None] * _GL_W[None, :])
    tail = 0.0
    Vr = np.ones_like(V)
    for r in range(_TAIL_TERMS):
        moment = float(np.sum(F * Vr))
        tail += (-1) ** r * (r + 1) * moment * float(hurwitz_zeta(r + 2, M))
        Vr *= V
    return head + tail / q


def _A_float(lam: float, T: float) -> tuple[float, float]:
    """Truncated integral on [0, T] plus a windowed-mean tail; returns (value, err_est)."""
    pts = _breakpoints(lam, T)
    a, b = pts[:-1], pts[1:]
    head = math.fsum(_piece_integrals(a, b, lam))

    # exact integral of {t}{lam t} itself per piece, for the mean over a window
    mid = 0.5 * (a + b)
    n = np.floor(mid)
    m = np.floor(lam * mid)
    ta, tb = a - n, b - n  # local coordinate of {t}
    # {t}{lam t} = (t - n)(lam t - m) = tau * (lam tau + c), tau = t - n, c = lam n - m
    c = lam * n - m
    plain = lam * (tb**3 - ta**3) / 3.0 + c * (tb**2 - ta**2) / 2.0

    def window_mean(lo, hi):
        sel = (a >= lo) & (b <= hi)
        return math.fsum(plain[sel]) / (b[sel][-1] - a[sel][0])

    mu_far = window_mean(T / 2, T)
    mu_near = window_mean(T / 4, T / 2)
    value = head + mu_far / T
    err = 8.0 * abs(mu_far - mu_near) / T + 10.0 / T**2
    return value, err


def eval_A(lam, tol: float = 1e-9, t_max: float | None = None) -> float:
    """A(lam) for lam >= 0.

    Rationals with denominator <= ``EXACT_DEN_MAX`` are evaluated through the
    exact periodic tail (error ~1e-14).  Other arguments use truncation at
    ``t_max`` with a windowed-mean tail correction; if its error estimate exceeds
    ``tol``, :class:`AccuracyError` is raised with the achieved bound.
    """
    if isinstance(lam, float):
        if not math.isfinite(lam) or lam < 0:
            raise DomainError(f"A needs lam >= 0, got {lam}")
        fr = Fraction(lam).limit_denominator(EXACT_DEN_MAX)
        if float(fr) == lam:
            lam = fr
    else:
        lam = as_fraction(lam)
        if lam < 0:
            raise DomainError(f"A needs lam >= 0, got {lam}")
    if tol <= 0:
        raise DomainError("tol must be positive")

    if lam == 0:
        return 0.0
    if lam > 1:
        # t -> t / lam gives A(lam) = lam * A(1 / lam)
        inv = 1 / lam
        return float(lam) * eval_A(inv, tol / float(lam), t_max)

    if isinstance(lam, Fraction) and lam.denominator <= EXACT_DEN_MAX:
        return _A_rational(lam.numerator, lam.denominator)

    lam_f = float(lam)
    T = t_max if t_max is not None else min(4e5, max(2e4, math.sqrt(40.0 / tol)))
    value, err = _A_float(lam_f, T)
    if err > tol:
        raise AccuracyError(
            f"A({lam_f}) reached only {err:.2e} with t_max={T:g} (asked {tol:.2e})", err
        )
    return value


A_ONE = _A_rational(1, 1)


@dataclass
class ATable:
    """Cached evaluator for A.

    Small-denominator rationals always use the exact path (memoised).  Anything
    else is linearly interpolated on the uniform grid i / n_intervals, whose node
    values are themselves exact rational evaluations.  The interpolation error is
    of order (1/2) h log(1/h) with h the grid spacing.  Pass ``tol`` to
    :meth:`__call__` to force direct quadrature when that is too coarse.
    """

    n_intervals: int = 1024
    exact_den_max: int = EXACT_DEN_MAX
    _values: np.ndarray | None = field(default=None, init=False, repr=False)

    @property
    def spacing(self) -> float:
        return 1.0 / self.n_intervals

    @property
    def interpolation_bound(self) -> float:
        h = self.spacing
        return 0.5 * h * math.log(1.0 / h) + 5.0 * h

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n_intervals + 1) / self.n_intervals

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            n = self.n_intervals
            vals = np.empty(n + 1)
            vals[0] = 0.0
            for i in range(1, n + 1):
                fr = Fraction(i, n)
                vals[i] = _A_rational(fr.numerator, fr.denominator)
            self._values = vals
        return self._values

    def __call__(self, lam, tol: float | None = None) -> float:
        if isinstance(lam, Fraction) and lam.denominator <= self.exact_den_max:
            if 0 <= lam <= 1:
                return 0.0 if lam == 0 else _A_rational(lam.numerator, lam.denominator)
            return eval_A(lam)
        lam_f = float(lam)
        if not 0.0 <= lam_f <= 1.0:
            return eval_A(lam_f, tol or 1e-9)
        if tol is not None and tol < self.interpolation_bound:
            return eval_A(lam_f, tol)
        return float(np.interp(lam_f, self.grid, self.values))


_DEFAULT_TABLE: ATable | None = None


def default_atable() -> ATable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = ATable()
    return _DEFAULT_TABLE


def _table(A) -> ATable:
    return default_atable() if A is None else A


def eval_Q(x, A: ATable | None = None) -> float:
    """Q(x) for 0 <= x <= 1, with Q(0) := A(1)/2 by continuity."""
    A = _table(A)
    xf = float(x)
    if not 0.0 <= xf <= 1.0:
        raise DomainError(f"Q needs 0 <= x <= 1, got {x}")
    if x == 0:
        return 0.5 * A_ONE
    return 0.5 * (xf + 1.0) * A_ONE - A(x) - 0.5 * xf * math.log(xf)


def _expansion(x) -> CFExpansion:
    if isinstance(x, CFExpansion):
        return x
    return cf_expand(x)


def eval_G(x, A: ATable | None = None, tol: float = 1e-14) -> float:
    """G(x) = sum_j (-1)^j beta_{j-1} Q(alpha_j).

    Rationals sum over j <= L (alpha_L = 0 contributes Q(0)).  Terms whose weight
    beta_{j-1} * sup|Q| falls below ``tol`` are dropped.
    """
    cf = _expansion(x)
    terms = []
    for j, alpha in enumerate(cf.alphas):
        weight = float(cf.beta(j - 1))
        if weight * _Q_SUP < tol:
            break
        terms.append((-1) ** j * weight * eval_Q(alpha, A))
    return math.fsum(terms)


def eval_delta(x, irrational: bool = False) -> float:
    """(-1)^(L+1) A(1) / (2q) at x = p/q of depth L; 0 for irrational-mode points."""
    cf = _expansion(x)
    if irrational or cf.truncated:
        return 0.0
    L = cf.depth
    return (-1) ** (L + 1) * A_ONE / (2 * cf.x.denominator)


def wilton_W(x, tol: float = 1e-12) -> float:
    """Wilton's function.

    For a terminating expansion of depth L the sum runs over l = 0..L-1 (gamma_L
    would involve log(1/0)).  For a truncated expansion the available terms are
    summed and the remainder beta_D * (|log alpha_D| + 2) is compared with ``tol``.
    """
    if isinstance(x, (int, Fraction)) and x == 0:
        return 0.0
    cf = _expansion(x)
    total = math.fsum((-1) ** l * g for l, g in enumerate(cf.gammas))
    if cf.truncated:
        D = cf.depth
        est = float(cf.beta(D)) * (abs(math.log(float(cf.alpha(D)))) + 2.0)
        if est > tol:
            raise AccuracyError(f"Wilton tail {est:.2e} exceeds tol at depth {D}", est)
    return total


def g_wilton(x, A: ATable | None = None, irrational: bool = False) -> float:
    """g(x) = W(x) - 2 G(x) - 2 delta(x)."""
    cf = _expansion(x)
    return wilton_W(cf) - 2.0 * eval_G(cf, A) - 2.0 * eval_delta(cf, irrational)


@dataclass(frozen=True)
class GDecomposition:
    """g(x) = g_sm(x, s) + g_sing(x, s).

    ``wilton_tail`` is W(x) - g_sm(x, s) = (-1)^(s+1) beta_s W(alpha_{s+1}), the part
    of g_sing that decays geometrically in s; the rest of g_sing is -2G - 2 delta.
    """

    x: Fraction
    s: int
    g_sm: float
    g_sing: float
    g_total: float
    wilton_tail: float


def g_split(x, s: int, A: ATable | None = None, irrational: bool = False) -> GDecomposition:
    """Smooth/singular split with g_sm(x, s) = sum_{nu <= s} (-1)^nu gamma_nu(x)."""
    cf = _expansion(x)
    if s < 0:
        raise DomainError("s must be nonnegative")
    if len(cf.gammas) < s + 1 or (cf.terminated and cf.depth < s + 1):
        raise DomainError(f"depth {cf.depth} too small for s = {s}")
    g_sm = math.fsum((-1) ** nu * cf.gammas[nu] for nu in range(s + 1))
    W = wilton_W(cf)
    g_total = W - 2.0 * eval_G(cf, A) - 2.0 * eval_delta(cf, irrational)

    alpha_next = cf.alpha(s + 1)
    W_next = 0.0 if alpha_next == 0 else wilton_W(cf_expand(alpha_next))
    tail = (-1) ** (s + 1) * float(cf.beta(s)) * W_next
    if abs(g_sm - (W - tail)) > 1e-9:
        raise IntegrityError(f"partial Wilton sum mismatch at s={s}: {g_sm} vs {W - tail}")
    return GDecomposition(
        x=cf.x, s=s, g_sm=g_sm, g_sing=g_total - g_sm, g_total=g_total, wilton_tail=W - g_sm
    )
