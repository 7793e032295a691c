"""Command-line front end: ``nbsums <command> [options]``.

Every command writes CSV (or JSON for ``constants``) to ``--output`` or stdout.
CSV files start with ``#`` comment lines carrying the run configuration, its
hash, the git revision and the seeds, followed by one header row. Floats are
written with 17 significant digits.

Options may also come from a JSON file given with ``--config``; flags on the
command line take precedence. The worker count defaults to ``$NBSUMS_THREADS``.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DomainError

THREADS_ENV = "NBSUMS_THREADS"


def _git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short=12", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


class RunConfig:
    """Command name plus resolved options; serialised into every output."""

    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = {k: v for k, v in sorted(params.items()) if k not in ("func", "output", "config", "command")}

    def as_dict(self) -> dict:
        return {"command": self.command, "params": _jsonable(self.params)}

    def canonical(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    @property
    def seeds(self) -> str:
        seed = self.params.get("seed")
        return "none" if seed is None else str(seed)


def _write_csv(cfg: RunConfig, columns, rows, out) -> None:
    buf = io.StringIO()
    buf.write(f"# nbsums {cfg.command} config_hash={cfg.digest} git={_git_revision()} seeds={cfg.seeds}\n")
    buf.write(f"# config={cfg.canonical()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    out.write(buf.getvalue())


def _write_json(cfg: RunConfig, payload: dict, out) -> None:
    doc = {"config": cfg.as_dict(), "config_hash": cfg.digest, "git": _git_revision(), "seeds": cfg.seeds}
    doc.update(_jsonable(payload))
    out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return int(args.threads)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- commands


def cmd_expand(args, cfg, out) -> int:
    from .contfrac import cf_expand

    cf = cf_expand(Fraction(args.x), max_depth=args.max_depth)
    rows = []
    for l in range(cf.depth + 1):
        rows.append(
            (
                l,
                cf.quotients[l - 1] if l else 0,
                cf.p[l],
                cf.q[l],
                cf.alphas[l],
                cf.betas[l + 1] if l + 1 < len(cf.betas) else "",
                cf.gammas[l] if l < len(cf.gammas) else "",
            )
        )
    _write_csv(cfg, ["level", "a", "p", "q", "alpha", "beta", "gamma"], rows, out)
    return 0


def cmd_gvalue(args, cfg, out) -> int:
    from .special_fn import g_wilton
    from .sums import g_rational, g_sawtooth

    h, k = args.h, args.k
    gw = g_wilton(Fraction(h, k))
    gr = g_rational(h, k)
    gs = g_sawtooth(h, k)
    _write_csv(cfg, ["h", "k", "g_wilton", "g_cotangent", "g_digamma", "difference"], [(h, k, gw, gr, gs, gw - gr)], out)
    return 0


def cmd_vasyunin(args, cfg, out) -> int:
    from .arith import mod_inverse
    from .sums import cotangent_c0, vasyunin_V

    hs = [args.h] if args.h else [h for h in range(1, args.k) if math.gcd(h, args.k) == 1]
    rows = []
    for h in hs:
        hbar = mod_inverse(h, args.k)
        rows.append((h, args.k, hbar, vasyunin_V(h, args.k), cotangent_c0(h, args.k), cotangent_c0(hbar, args.k)))
    _write_csv(cfg, ["h", "k", "h_bar", "V", "c0", "c0_hbar"], rows, out)
    return 0


def cmd_gram(args, cfg, out) -> int:
    from .sums import gram_matrix

    B = gram_matrix(args.N)
    rows = [(h, k, B[h - 1, k - 1]) for h in range(1, args.N + 1) for k in range(1, args.N + 1)]
    _write_csv(cfg, ["h", "k", "b"], rows, out)
    return 0


def cmd_theorem_sweep(args, cfg, out) -> int:
    from .constants import solve_theorem_constants
    from .sums import theorem_sweep

    consts = solve_theorem_constants()[args.scenario]
    ks = list(range(args.k_min, args.k_max + 1, args.k_step))
    reports = theorem_sweep(ks, args.D, args.delta0, consts.v0, consts.z0, workers=_threads(args))
    rows = [(r.k, r.D, r.S, r.normalized, r.sigma1, r.sigma2, r.sigma3, r.sigma11, r.sigma12) for r in reports]
    _write_csv(cfg, ["k", "D", "S", "S_normalized", "sigma1", "sigma2", "sigma3", "sigma11", "sigma12"], rows, out)
    return 0


def cmd_constants(args, cfg, out) -> int:
    from .constants import exponent_balance, solve_section_constants, solve_theorem_constants

    th = solve_theorem_constants(args.tol)
    sec = solve_section_constants(args.tol)
    payload = {
        "theorem": {name: c.as_dict() for name, c in th.items()},
        "section": sec.as_dict(),
        "exponent_balance": exponent_balance(th["equation_root"].v0, 0.0, sec),
    }
    _write_json(cfg, payload, out)
    return 0


def cmd_mc(args, cfg, out) -> int:
    from . import stats_mc as mc

    c = mc.MCConfig(seed=args.seed, samples=args.samples, bits=args.bits)
    if args.experiment == "invariance":
        r = mc.mc_invariance((args.a, args.b), c)
        _write_csv(
            cfg,
            ["a", "b", "measure", "preimage_estimate", "stderr", "image_measure"],
            [(r.a, r.b, r.measure, r.preimage_estimate, r.stderr, r.image_measure)],
            out,
        )
    elif args.experiment == "contraction":
        rows = []
        for s in range(1, args.s_max + 1):
            r = mc.mc_contraction(s, args.p, c)
            rows.append((s, r.ratio, r.bound, r.ratio_stderr))
        _write_csv(cfg, ["s", "estimate", "bound", "stderr"], rows, out)
    elif args.experiment == "tail":
        s_values = [int(v) for v in args.s_values.split(",")]
        rep = mc.mc_tail_qs(args.C1, s_values, c, workers=_threads(args))
        rows = [(r.s, r.estimate, r.bound, r.stderr, r.wilson_low, r.wilson_high, r.gamma_bound) for r in rep.rows]
        _write_csv(cfg, ["s", "estimate", "bound", "stderr", "wilson_low", "wilson_high", "gamma_bound"], rows, out)
    elif args.experiment == "alpha-product":
        r = mc.check_alpha_product(c)
        _write_csv(cfg, ["samples", "levels", "violations", "max_product"], [(r.samples, r.levels_checked, r.violations, float(r.max_product))], out)
    else:  # cells
        r = mc.exhaustive_cell_check(args.s_max, args.b_max)
        _write_csv(
            cfg,
            ["s", "b_max", "cells", "measure_failures", "logq_failures", "total_length"],
            [(r.s, r.b_max, r.cells, r.measure_failures, r.logq_failures, float(r.total_length))],
            out,
        )
    return 0


def cmd_nbdist(args, cfg, out) -> int:
    from .arith import sieve
    from .nb import dn_squared, gram_minimize, nb_asymptotic, vn_coefficients

    Ns = [int(v) for v in args.N_values.split(",")]
    mu = sieve(max(Ns))
    rows = []
    for N in Ns:
        vn = dn_squared(N, vn_coefficients(N, mu))[0]
        opt = gram_minimize(N).value if N <= 200 else float("nan")
        asym = nb_asymptotic(N)
        rows.append((N, vn, opt, asym, vn / asym, opt / asym))
    _write_csv(cfg, ["N", "dn2_vn", "dn2_opt", "asymptotic", "ratio", "ratio_opt"], rows, out)
    return 0


def cmd_verify(args, cfg, out) -> int:
    from .verify import run_checks

    results = run_checks(quick=args.quick, workers=_threads(args))
    _write_csv(cfg, ["check", "passed", "detail"], [(r.name, r.passed, r.detail) for r in results], out)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------- parser


def _positive_int(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nbsums", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--output", "-o", help="output file (default: stdout)")
        sp.add_argument("--config", help="JSON file with option values")
        sp.set_defaults(func=func)
        return sp

    sp = add("expand", cmd_expand, "continued-fraction data of a rational")
    sp.add_argument("--x", required=True, help="rational in (0, 1], e.g. 5/13")
    sp.add_argument("--max-depth", type=_positive_int, default=10_000)

    sp = add("gvalue", cmd_gvalue, "g(h/k) by the Wilton, cotangent and digamma routes")
    sp.add_argument("--h", type=_positive_int, required=True)
    sp.add_argument("--k", type=_positive_int, required=True)

    sp = add("vasyunin", cmd_vasyunin, "Vasyunin and cotangent sums for one k")
    sp.add_argument("--k", type=_positive_int, required=True)
    sp.add_argument("--h", type=_positive_int)

    sp = add("gram", cmd_gram, "Gram matrix b_{h,k}")
    sp.add_argument("--N", type=_positive_int, required=True)

    sp = add("theorem-sweep", cmd_theorem_sweep, "Moebius-weighted sums over a range of k")
    sp.add_argument("--k-min", type=_positive_int, default=20)
    sp.add_argument("--k-max", type=_positive_int, default=150)
    sp.add_argument("--k-step", type=_positive_int, default=10)
    sp.add_argument("--D", type=float, default=2.0)
    sp.add_argument("--delta0", type=float, default=0.25)
    sp.add_argument("--scenario", choices=["equation_root", "golden_clamped"], default="equation_root")
    sp.add_argument("--threads", type=_positive_int)

    sp = add("constants", cmd_constants, "solve the exponent constants (JSON)")
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = add("mc", cmd_mc, "Monte-Carlo and exhaustive measure experiments")
    sp.add_argument("--experiment", choices=["invariance", "contraction", "tail", "alpha-product", "cells"], required=True)
    sp.add_argument("--seed", type=int, default=20240611)
    sp.add_argument("--samples", type=_positive_int, default=1_000_000)
    sp.add_argument("--bits", type=_positive_int, default=256)
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--b", type=float, default=0.5)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--s-max", type=_positive_int, default=10)
    sp.add_argument("--s-values", default="10,15,20,25")
    sp.add_argument("--C1", type=float, default=2.0)
    sp.add_argument("--b-max", type=_positive_int, default=30)
    sp.add_argument("--threads", type=_positive_int)

    sp = add("nbdist", cmd_nbdist, "d_N^2 sweep for the V_N coefficients and the optimum")
    sp.add_argument("--N-values", default="10,20,50,100,200,300,400,500")

    sp = add("verify", cmd_verify, "run the identity and property suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--threads", type=_positive_int)
    return p


def _config_path(argv: list[str]) -> str | None:
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    path = _config_path(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    subparsers = parser._subparsers._group_actions[0].choices if parser._subparsers else {}
    if path is None or command not in subparsers:
        return parser.parse_args(argv)
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        parser.error("config file must hold a JSON object")
    sub = subparsers[command]
    actions = {a.dest: a for a in sub._actions}
    values = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = [k for k in values if k not in actions or k in ("help", "config", "output", "func")]
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    # file values act as defaults; explicit flags still win
    for dest in values:
        actions[dest].required = False
    sub.set_defaults(**values)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    args = _apply_config_file(parser, argv)
    cfg = RunConfig(args.command, vars(args))
    try:
        if args.output:
            with open(args.output, "w", newline="") as fh:
                return args.func(args, cfg, fh)
        return args.func(args, cfg, sys.stdout)
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"nbsums: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
