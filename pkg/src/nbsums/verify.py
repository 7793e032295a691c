"""Identity and property suite behind ``nbsums verify``.

Each check returns a :class:`CheckResult`; ``quick=True`` shrinks the sizes so
the whole suite finishes in well under two minutes.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import stats_mc as mc
from .arith import sieve, vaughan_decompose
from .constants import solve_section_constants, solve_theorem_constants
from .nb import dn_squared, gram_minimize, verify_bhk_integral, vn_coefficients
from .special_fn import A_ONE, default_atable, g_wilton
from .sums import g_rational, gram_b, vasyunin_orientation, theorem_sweep

LOG_2PI_MINUS_GAMMA = math.log(2 * math.pi) - 0.57721566490153286061


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_vaughan(N: int = 100_000, ws=(2, 10, 50, 316)) -> CheckResult:
    table = sieve(N)
    bad = []
    for w in ws:
        vd = vaughan_decompose(N, w, table)
        diff = vd.c1 + vd.c2 + vd.c3 - table.mu
        if np.any(diff[1:] != 0):
            bad.append(w)
    return CheckResult("vaughan_identity", not bad, f"N={N} w={list(ws)} failing={bad}")


def check_g_routes(kmax: int = 200, tol: float = 1e-8) -> CheckResult:
    A = default_atable()
    worst, n = 0.0, 0
    for k in range(2, kmax + 1):
        for h in range(1, k):
            if math.gcd(h, k) == 1:
                worst = max(worst, abs(g_wilton(Fraction(h, k), A) - g_rational(h, k)))
                n += 1
    return CheckResult("g_two_routes", worst <= tol, f"pairs={n} max_diff={worst:.3e}")


def check_gram_quadrature(hk_max: int = 10, T: float = 2000.0) -> CheckResult:
    worst = 0.0
    fails = []
    for h in range(1, hk_max + 1):
        for k in range(1, hk_max + 1):
            r = verify_bhk_integral(h, k, T, 1e-2)
            worst = max(worst, abs(r.difference))
            if abs(r.difference) > 1e-2:
                fails.append((h, k))
    b11 = verify_bhk_integral(1, 1, T).quadrature.value
    ok11 = abs(b11 - LOG_2PI_MINUS_GAMMA) <= 1e-3
    return CheckResult(
        "gram_vs_quadrature",
        not fails and ok11,
        f"h,k<={hk_max} max_diff={worst:.3e} b11_err={b11 - LOG_2PI_MINUS_GAMMA:.3e}",
    )


def check_orientation(kmax: int = 200) -> CheckResult:
    o = vasyunin_orientation(kmax)
    return CheckResult(
        "vasyunin_orientation",
        o["orientation"] != 0,
        f"pairs={o['pairs']} orientation={o['orientation']:+d} max_err={o['max_err_plus' if o['orientation'] > 0 else 'max_err_minus']:.2e}",
    )


def check_measure(quick: bool, workers: int = 1) -> list[CheckResult]:
    big = 100_000 if quick else 1_000_000
    out = []
    r = mc.check_alpha_product(mc.MCConfig(samples=1_000 if quick else 10_000, bits=128))
    out.append(CheckResult("alpha_product", r.violations == 0, f"levels={r.levels_checked} violations={r.violations}"))
    inv = mc.mc_invariance((0.0, 0.5), mc.MCConfig(samples=big))
    out.append(CheckResult("gauss_invariance", inv.within_3sigma, f"z={inv.z_score:.2f}"))
    worst = []
    for s in range(1, 11):
        c = mc.mc_contraction(s, 2.0, mc.MCConfig(samples=big))
        worst.append(c.passes)
    out.append(CheckResult("transfer_contraction", all(worst), f"s=1..10 passing={sum(worst)}"))
    tail = mc.mc_tail_qs(2.0, [10, 15, 20, 25], mc.MCConfig(samples=big, bits=256), workers=workers)
    out.append(CheckResult("qs_tail_bound", all(r.passes for r in tail.rows), " ".join(f"s={r.s}:{r.estimate:.2e}" for r in tail.rows)))
    return out


def check_constants() -> CheckResult:
    th = solve_theorem_constants()
    sec = solve_section_constants()
    res = [abs(getattr(c, f)) for c in th.values() for f in ("residual_v0", "residual_z0")]
    res += [abs(th["equation_root"].residual_C), abs(sec.residual_C4)]
    ok = max(res) <= 1e-12 and th["equation_root"].z0 > 0 and sec.bracket_sign_changes == 1
    return CheckResult(
        "constants",
        ok,
        f"max_residual={max(res):.1e} z0={th['equation_root'].z0:.6f} C4={sec.C4:.6f} sign_changes={sec.bracket_sign_changes}",
    )


def check_theorem_sweep(ks, workers: int = 1) -> CheckResult:
    reps = theorem_sweep(ks, 2.0, workers=workers)
    norm = [abs(r.normalized) for r in reps]
    split_ok = all(abs(r.sigma1 + r.sigma2 + r.sigma3 - r.S) <= 1e-9 * max(1.0, r.abs_scale) for r in reps)
    finite = all(math.isfinite(v) for v in norm)
    med = statistics.median(norm)
    spread = max(norm) / med if med > 0 else math.inf
    return CheckResult(
        "theorem_sum_property",
        finite and split_ok and spread <= 10,
        f"k={ks[0]}..{ks[-1]} max/median={spread:.2f} split_ok={split_ok}",
    )


def check_nb(N_grid, opt_N) -> CheckResult:
    agree = True
    for N in range(1, 6):
        a = np.ones(1) if N == 1 else vn_coefficients(N)
        g, ge = dn_squared(N, a, "gram")
        d, de = dn_squared(N, a, "direct")
        agree &= abs(g - d) <= ge + de
    mu = sieve(max(N_grid))
    opt_ok = all(gram_minimize(N).value <= dn_squared(N, vn_coefficients(N, mu))[0] + 1e-10 for N in opt_N)
    vals = [dn_squared(N, vn_coefficients(N, mu))[0] for N in N_grid]
    decreasing = all(b < a for a, b in zip(vals, vals[1:]))
    return CheckResult("nb_distance", agree and opt_ok and decreasing, f"routes={agree} optimal={opt_ok} decreasing={decreasing}")


def run_checks(quick: bool = False, workers: int = 1) -> list[CheckResult]:
    results = [
        check_vaughan(10_000 if quick else 100_000),
        check_g_routes(60 if quick else 200),
        check_gram_quadrature(4 if quick else 10),
        check_orientation(60 if quick else 200),
    ]
    results += check_measure(quick, workers)
    results.append(check_constants())
    ks = list(range(20, 61, 10)) if quick else list(range(20, 151, 10))
    results.append(check_theorem_sweep(ks, workers))
    grid = [10, 20, 50, 100, 200] if quick else [10, 20, 50, 100, 200, 300, 400, 500]
    results.append(check_nb(grid, [10, 50] if quick else [10, 50, 100]))
    # sanity of the shared constant
    results.append(CheckResult("A_at_one", abs(A_ONE - LOG_2PI_MINUS_GAMMA) <= 1e-12, f"A(1)={A_ONE:.15f}"))
    results.append(CheckResult("gram_b11", abs(gram_b(1, 1) - LOG_2PI_MINUS_GAMMA) <= 1e-14, f"b11={gram_b(1, 1):.15f}"))
    return results
