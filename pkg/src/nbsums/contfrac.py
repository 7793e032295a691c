"""Exact continued-fraction engine on (0, 1].

All Gauss-map arithmetic is carried out on :class:`fractions.Fraction` values
(unbounded integers), so expansions of rationals with large denominators are
exact to full depth.  "Irrational" test points are represented by rationals with
128-bit or larger denominators.

Indexing follows the usual conventions::

    alpha_0 = x,  alpha_l = {1 / alpha_{l-1}},  a_l = floor(1 / alpha_{l-1})
    beta_{-1} = 1,  beta_l = alpha_0 * ... * alpha_l
    gamma_l = beta_{l-1} * log(1 / alpha_l)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError

__all__ = [
    "CFExpansion",
    "Cell",
    "as_fraction",
    "gauss_map",
    "cf_expand",
    "cell_of",
    "gauss_measure",
    "wilton_partial_L",
    "apply_T",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, strings, floats (exactly) and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite input {x!r}")
        return Fraction(x)
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact number")


def _log_ratio(num: int, den: int) -> float:
    """log(num / den) for positive (possibly huge) integers, in double precision."""
    return math.log(num) - math.log(den)


def gauss_map(x) -> Fraction:
    """alpha(x) = {1/x} for 0 < x <= 1."""
    x = as_fraction(x)
    if not 0 < x <= 1:
        raise DomainError(f"Gauss map needs 0 < x <= 1, got {x}")
    return Fraction(x.denominator % x.numerator, x.numerator)


@dataclass(frozen=True)
class CFExpansion:
    """Continued-fraction data of a point x in (0, 1].

    ``p`` and ``q`` hold p_0..p_L and q_0..q_L (p_0 = 0, q_0 = 1).  ``betas[l + 1]``
    is beta_l, so ``betas[0]`` is beta_{-1} = 1.  ``gammas[l]`` is gamma_l for every
    level with alpha_l != 0.
    """

    x: Fraction
    quotients: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    gammas: tuple[float, ...]
    truncated: bool

    @property
    def depth(self) -> int:
        return len(self.quotients)

    @property
    def terminated(self) -> bool:
        return self.alphas[-1] == 0

    @property
    def convergents(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.p[l], self.q[l]) for l in range(1, len(self.p)))

    def alpha(self, l: int) -> Fraction:
        return self.alphas[l]

    def beta(self, l: int) -> Fraction:
        if l < -1:
            raise IndexError(l)
        return self.betas[l + 1]

    def gamma(self, l: int) -> float:
        return self.gammas[l]


def cf_expand(x, max_depth: int = 10_000) -> CFExpansion:
    """Exact Euclidean expansion of ``x`` in (0, 1].

    Rationals terminate at their depth L with alpha_L = 0 and p_L/q_L = x.
    If ``max_depth`` is hit first, the expansion stops there with
    ``truncated=True``.  x = 1 gives the depth-1 expansion [0; 1].
    """
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("continued-fraction expansion is undefined at 0")
    if x > 1:
        raise DomainError(f"expected x in (0, 1], got {x}")
    if max_depth < 1:
        raise DomainError("max_depth must be positive")

    den = x.denominator
    # Euclidean remainders: alpha_l = r[l] / r[l - 1] with r[-1] = den, r[0] = num,
    # hence beta_l = r[l] / den.
    prev, cur = den, x.numerator
    quotients: list[int] = []
    alphas = [x]
    betas = [Fraction(1), x]
    gammas: list[float] = []
    p = [0]
    q = [1]
    p_prev, q_prev = 1, 0
    while cur and len(quotients) < max_depth:
        gammas.append(float(Fraction(prev, den)) * _log_ratio(prev, cur))
        a, rem = divmod(prev, cur)
        quotients.append(a)
        p_prev, p_cur = p[-1], a * p[-1] + p_prev
        q_prev, q_cur = q[-1], a * q[-1] + q_prev
        p.append(p_cur)
        q.append(q_cur)
        prev, cur = cur, rem
        alphas.append(Fraction(cur, prev))
        betas.append(Fraction(cur, den))
    truncated = cur != 0
    if truncated:
        gammas.append(float(Fraction(prev, den)) * _log_ratio(prev, cur))
    return CFExpansion(
        x=x,
        quotients=tuple(quotients),
        p=tuple(p),
        q=tuple(q),
        alphas=tuple(alphas),
        betas=tuple(betas),
        gammas=tuple(gammas),
        truncated=truncated,
    )


@dataclass(frozen=True)
class Cell:
    """Depth-s cell C(b_1, ..., b_s): the points whose first s quotients are b.

    Endpoints are stored ordered, and membership uses the half-open interval
    [endpoint_low, endpoint_high).
    """

    quotients: tuple[int, ...]
    endpoint_low: Fraction
    endpoint_high: Fraction
    length: Fraction
    q_s: int
    q_prev: int

    @property
    def depth(self) -> int:
        return len(self.quotients)

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        return self.endpoint_low <= x < self.endpoint_high


def _convergent_tail(b: Sequence[int]) -> tuple[int, int, int, int]:
    p_prev, p_cur, q_prev, q_cur = 1, 0, 0, 1
    for bj in b:
        p_prev, p_cur = p_cur, bj * p_cur + p_prev
        q_prev, q_cur = q_cur, bj * q_cur + q_prev
    return p_prev, p_cur, q_prev, q_cur


def cell_of(b: Sequence[int]) -> Cell:
    """Cell with endpoints p_s/q_s and (p_s + p_{s-1})/(q_s + q_{s-1})."""
    b = tuple(int(v) for v in b)
    if not b:
        raise DomainError("a cell needs at least one partial quotient")
    if min(b) < 1:
        raise DomainError("partial quotients must be positive")
    p_prev, p_s, q_prev, q_s = _convergent_tail(b)
    e1 = Fraction(p_s, q_s)
    e2 = Fraction(p_s + p_prev, q_s + q_prev)
    return Cell(
        quotients=b,
        endpoint_low=min(e1, e2),
        endpoint_high=max(e1, e2),
        length=Fraction(1, q_s * (q_s + q_prev)),
        q_s=q_s,
        q_prev=q_prev,
    )


def gauss_measure(a: float, b: float) -> float:
    """Gauss measure of the interval (a, b) inside [0, 1]."""
    if a > b:
        raise DomainError("gauss_measure needs a <= b")
    return (math.log1p(b) - math.log1p(a)) / math.log(2.0)


def _expansion(x) -> CFExpansion:
    if isinstance(x, CFExpansion):
        return x
    return cf_expand(x)


def wilton_partial_L(x, s: int) -> float:
    """Alternating partial sum sum_{nu <= s} (-1)^nu gamma_nu(x).

    This equals sum_{nu <= s} (-1)^nu (T^nu l)(x) with l(x) = log(1/x) and
    T f(x) = x f(alpha(x)).
    """
    if s < 0:
        raise DomainError("s must be nonnegative")
    cf = _expansion(x)
    if s >= len(cf.gammas):
        raise DomainError(f"depth {cf.depth} too small for s = {s}")
    return math.fsum((-1) ** nu * cf.gammas[nu] for nu in range(s + 1))


def apply_T(f: Callable[[Fraction], float], x, s: int) -> float:
    """(T^s f)(x) = beta_{s-1}(x) * f(alpha_s(x))."""
    cf = _expansion(x)
    if s > cf.depth:
        raise DomainError(f"depth {cf.depth} too small for T^{s}")
    return float(cf.beta(s - 1)) * f(cf.alpha(s))
