"""Numerical values of the exponent constants C, v0, z0, C4, C5 and the
exponent functions E(v), H(u*).

Every root is found by plain bisection on an explicit bracket.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, SolverError

__all__ = [
    "GOLDEN",
    "bisect",
    "sign_changes",
    "compose_v0",
    "compose_z0",
    "TheoremConstants",
    "SectionConstants",
    "solve_theorem_constants",
    "solve_section_constants",
]

LOG2 = math.log(2.0)
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-15, max_iter: int = 200) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise SolverError(f"no sign change on [{lo}, {hi}]: f = {flo:.3g}, {fhi:.3g}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo <= tol * max(1.0, abs(mid)):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_changes(f: Callable[[float], float], lo: float, hi: float, points: int = 10_000) -> int:
    xs = np.linspace(lo, hi, points)
    vals = np.sign([f(x) for x in xs])
    vals = vals[vals != 0]
    return int(np.count_nonzero(np.diff(vals)))


def theorem_C_equation(C: float) -> float:
    return 2.0 * C - math.log(C) - 1.0 - 2.0 * LOG2 - 0.5 * LOG2


def compose_v0(C: float) -> float:
    """Solve v0 * (1 - (1 + 2 log2 / (C + log2/2))^-1 + 2 + 4C/log2) = 2."""
    return 2.0 / _v0_factor(C)


def _v0_factor(C: float) -> float:
    return 1.0 - 1.0 / (1.0 + 2.0 * LOG2 / (C + 0.5 * LOG2)) + 2.0 + 4.0 * C / LOG2


def compose_z0(C: float, v0: float) -> float:
    return 2.0 - (2.0 + 4.0 * C / LOG2) * v0


@dataclass(frozen=True)
class TheoremConstants:
    """C, v0, z0 with the residuals of their defining equations.

    ``scenario`` is ``"equation_root"`` for the exact root of the C equation or
    ``"golden_clamped"`` for C replaced by the golden ratio.
    """

    C: float
    v0: float
    z0: float
    residual_C: float
    residual_v0: float
    residual_z0: float
    scenario: str
    root_satisfies_side_condition: bool

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _theorem_constants(C: float, scenario: str, side_ok: bool) -> TheoremConstants:
    v0 = compose_v0(C)
    z0 = compose_z0(C, v0)
    return TheoremConstants(
        C=C,
        v0=v0,
        z0=z0,
        residual_C=theorem_C_equation(C),
        residual_v0=v0 * _v0_factor(C) - 2.0,
        residual_z0=z0 - (2.0 - (2.0 + 4.0 / LOG2 * C) * v0),
        scenario=scenario,
        root_satisfies_side_condition=side_ok,
    )


def solve_theorem_constants(tol: float = 1e-12) -> dict[str, TheoremConstants]:
    """Both readings of C: the equation root and the golden-ratio clamp.

    2C - log C is strictly increasing for C > 1/2, so the root on [1, 3] is unique.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    root = bisect(theorem_C_equation, 1.0, 3.0)
    if abs(theorem_C_equation(root)) > tol:
        raise SolverError(f"C residual {theorem_C_equation(root):.2e} above {tol:.1e}")
    side_ok = root >= GOLDEN
    return {
        "equation_root": _theorem_constants(root, "equation_root", side_ok),
        "golden_clamped": _theorem_constants(max(root, GOLDEN), "golden_clamped", True),
    }


def section_C4_equation(x: float) -> float:
    return 0.25 * x - math.log(x) - 1.0 + LOG2 - 0.5 * LOG2


@dataclass(frozen=True)
class SectionConstants:
    C4: float
    C5: float
    residual_C4: float
    bracket: tuple[float, float]
    bracket_sign_changes: int
    E: Callable[[float], float] = field(repr=False)
    H: Callable[[float], float] = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "C4": self.C4,
            "C5": self.C5,
            "residual_C4": self.residual_C4,
            "bracket": list(self.bracket),
            "bracket_sign_changes": self.bracket_sign_changes,
        }


def solve_section_constants(tol: float = 1e-12, bracket: tuple[float, float] = (4.0, 50.0)) -> SectionConstants:
    """C4 from (1/4)C4 - log C4 - 1 + log 2 = (1/2) log 2 on its increasing branch.

    The left side decreases up to x = 4 and increases afterwards, so the bracket
    starts at 4.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = bracket
    C4 = bisect(section_C4_equation, lo, hi)
    res = section_C4_equation(C4)
    if abs(res) > tol:
        raise SolverError(f"C4 residual {res:.2e} above {tol:.1e}")
    C5 = 0.5 * C4 - math.log(C4) - 1.0 + LOG2
    shrink = 1.0 - 1.0 / (1.0 + 2.0 * LOG2 / (C4 + 0.5 * LOG2))

    def E(v: float) -> float:
        return v * shrink

    def H(u_star: float) -> float:
        return 0.5 - (0.5 + C4 / LOG2) * u_star

    return SectionConstants(
        C4=C4,
        C5=C5,
        residual_C4=res,
        bracket=(lo, hi),
        bracket_sign_changes=sign_changes(section_C4_equation, lo, hi),
        E=E,
        H=H,
    )


def exponent_balance(v0: float, delta0: float = 0.0, section: SectionConstants | None = None) -> dict:
    """E(v0) against H(u*) with u* = 4 v0 + 4 delta0; reported, never asserted."""
    section = section or solve_section_constants()
    u_star = 4.0 * v0 + 4.0 * delta0
    e, h = section.E(v0), section.H(u_star)
    return {"v0": v0, "delta0": delta0, "u_star": u_star, "E": e, "H": h, "residual": e - h}
