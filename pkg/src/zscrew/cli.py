"""Command-line surface: batch evaluation, scans, spectra, reports.

Subcommands: psi, psi-omega, scan-sign, moments, li, hankel, spectrum,
weil-check, chi-check, report.  Configuration precedence is flags over
ZSCREW_* environment variables over a key=value config file over
defaults.  Output is CSV (versioned header comment) or JSON lines, to
stdout or atomically to --out.  Identical configuration and datasets
produce byte-identical output.

Exit codes: 0 ok, 1 configuration error, 2 data error, 3 numerical
failure (including failed report criteria).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import mangoldt as mg
from . import moments as mo
from . import operator as op
from . import report as rp
from . import weil
from . import zerotable as zt
from .errors import DataFormatError, DomainError, RangeError, TruncationError

ENV_PREFIX = "ZSCREW_"
CSV_VERSION_LINE = "# zscrew-csv v1"

EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    zeros_path: str = ""
    zeros_limit: int = 100_000
    prime_limit: int = 10_000_000
    abs_tol: float = 1e-9
    t_cut: float = 60.0
    output_format: str = "csv"
    threads: int = 1

    def validate(self):
        if self.zeros_limit < 100:
            raise ConfigError("zeros_limit must be >= 100")
        if self.prime_limit < 10_000:
            raise ConfigError("prime_limit must be >= 1e4")
        if not (0 < self.abs_tol <= 1e-2):
            raise ConfigError("abs_tol must lie in (0, 1e-2]")
        if self.output_format not in ("csv", "jsonl"):
            raise ConfigError("output_format must be csv or jsonl")
        return self


_CONFIG_FIELDS = {
    "zeros_path": str, "zeros_limit": int, "prime_limit": int,
    "abs_tol": float, "t_cut": float, "output_format": str, "threads": int,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """flags > environment (ZSCREW_) > config file (key=value) > defaults."""
    cfg = RunConfig()
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as f:
                for lineno, line in enumerate(f, 1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    if "=" not in line:
                        raise ConfigError(
                            "%s:%d: expected key=value" % (path, lineno))
                    key, _, val = line.partition("=")
                    key = key.strip()
                    if key not in _CONFIG_FIELDS:
                        raise ConfigError(
                            "%s:%d: unknown key %r" % (path, lineno, key))
                    setattr(cfg, key, _CONFIG_FIELDS[key](val.strip()))
        except OSError as e:
            raise ConfigError("cannot read config file: %s" % e)
    for key, typ in _CONFIG_FIELDS.items():
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is None and key == "zeros_path":
            env = os.environ.get(ENV_PREFIX + "ZEROS")
        if env is not None:
            setattr(cfg, key, typ(env))
    for key, typ in _CONFIG_FIELDS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, key, typ(flag))
    return cfg.validate()


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.15g" % v
    return str(v)


def _emit(rows, columns, cfg: RunConfig, out_path: str | None) -> None:
    """Rows to CSV (versioned header) or JSONL; atomic when writing a file."""
    lines = []
    if cfg.output_format == "csv":
        lines.append(CSV_VERSION_LINE)
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
    else:
        for row in rows:
            lines.append(json.dumps(dict(zip(columns, row)), sort_keys=True))
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".zscrew-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_tables(cfg: RunConfig, need_zeros=True, need_primes=True):
    ztab = None
    mtab = None
    if need_zeros:
        if not cfg.zeros_path:
            raise DataFormatError(
                "no zeros file configured (--zeros or ZSCREW_ZEROS)")
        if not os.path.exists(cfg.zeros_path):
            raise DataFormatError("zeros file not found: %s" % cfg.zeros_path)
        ztab = zt.load_zeros(cfg.zeros_path, cfg.zeros_limit)
    if need_primes:
        mtab = mg.build_table(cfg.prime_limit)
    return mtab, ztab


def cmd_psi(args, cfg: RunConfig) -> int:
    mtab, ztab = _load_tables(
        cfg, need_zeros=args.side in ("zeros", "both"),
        need_primes=args.side in ("prime", "both") or args.figure1)
    if args.figure1:
        ts = np.linspace(0.0, math.log(10), 1000)
    else:
        lo, hi = args.t
        if hi < lo or args.step <= 0:
            raise ConfigError("need t_lo <= t_hi and step > 0")
        ts = np.arange(lo, hi + args.step / 2, args.step)
    columns = ["t"]
    cols = []
    if args.side in ("prime", "both") or args.figure1:
        columns.append("psi_prime")
        cols.append(mg.psi_values(ts, mtab))
    if args.side in ("zeros", "both"):
        tail = zt.TailModel.for_table(ztab)
        los, his = [], []
        for t in ts:
            lo_v, hi_v = zt.psi_zero_side(float(t), ztab, tail)
            los.append(lo_v)
            his.append(hi_v)
        columns += ["psi_zero_lo", "psi_zero_hi"]
        cols += [np.asarray(los), np.asarray(his)]
    if args.side == "both":
        agree = (cols[1] - 1e-12 <= cols[0]) & (cols[0] <= cols[2] + 1e-12)
        columns.append("agree_flag")
        cols.append(agree.astype(int))
    if args.figure1:
        marker = np.zeros(len(ts), dtype=int)
        marker[int(np.argmin(np.abs(ts - math.log(2))))] = 1
        columns.append("log2_marker")
        cols.append(marker)
    rows = list(zip(ts.tolist(), *(c.tolist() for c in cols)))
    _emit(rows, columns, cfg, args.out)
    return 0


def cmd_psi_omega(args, cfg: RunConfig) -> int:
    mtab, _ = _load_tables(cfg, need_zeros=False)
    lo, hi = args.t
    ts = np.arange(lo, hi + args.step / 2, args.step)
    rows = []
    for t in ts:
        r = mg.psi_omega_prime_side(float(t), args.omega, mtab)
        rows.append((float(t), r.value, r.est_error))
    _emit(rows, ["t", "psi_omega", "est_error"], cfg, args.out)
    return 0


def cmd_scan_sign(args, cfg: RunConfig) -> int:
    if not (-1.0 <= args.omega <= 1.0):
        raise ConfigError("omega must lie in [-1, 1]")
    mtab, _ = _load_tables(cfg, need_zeros=False)
    t_max = args.t_max
    if math.exp(t_max) > cfg.prime_limit:
        raise RangeError("e^{t_max} exceeds prime_limit %d" % cfg.prime_limit)
    t = rp.scan_sign_change(args.omega, t_max, mtab)
    if t is None:
        _emit([("none", args.omega, t_max)],
              ["first_sign_change", "omega", "t_max"], cfg, args.out)
    else:
        _emit([(t, args.omega, t_max)],
              ["first_sign_change", "omega", "t_max"], cfg, args.out)
    return 0


def _moment_sequence(cfg: RunConfig):
    mtab, ztab = _load_tables(cfg)
    hyb = mo.HybridPsi(mg.PsiPrime(mtab), ztab)
    return mtab, ztab, mo.moment_sequence(hyb, 13, t_cut=cfg.t_cut)


def cmd_moments(args, cfg: RunConfig) -> int:
    if args.n_max > 13:
        raise ConfigError("n_max <= 13 for the bundled engine")
    _, _, mus = _moment_sequence(cfg)
    rows = [(n, mus[n], float(mus.est_errors[n]), mus.method)
            for n in range(args.n_max + 1)]
    _emit(rows, ["n", "value", "est_error", "method"], cfg, args.out)
    return 0


def cmd_li(args, cfg: RunConfig) -> int:
    if args.method == "zeros":
        _, ztab = _load_tables(cfg, need_primes=False)
        tail = zt.TailModel.for_table(ztab)
        rows = [(n, zt.li_from_zeros(n, ztab, tail), 0.0, "zero-sum")
                for n in range(1, args.n_max + 1)]
    else:
        if args.n_max > 13:
            raise ConfigError("n_max <= 13 for the moments route")
        _, _, mus = _moment_sequence(cfg)
        rows = [(n, mo.li_from_moments(mus, n), 0.0, "from-moments")
                for n in range(1, args.n_max + 1)]
    _emit(rows, ["n", "value", "est_error", "method"], cfg, args.out)
    return 0


def cmd_hankel(args, cfg: RunConfig) -> int:
    if 2 * args.n_max + 1 > 13:
        raise ConfigError("n_max <= 6 (needs mu through 2n+1)")
    _, _, mus = _moment_sequence(cfg)
    rows = []
    for n in range(args.n_max + 1):
        h = mo.hankel_det(mus, n)
        h1 = mo.hankel_det(mus, n, shifted=True)
        rows.append((n, h.det, h.err_bound, h1.det, h1.err_bound,
                     int(h.positive_definite and h1.positive_definite)))
    _emit(rows, ["n", "det", "det_err", "det_shifted", "det_shifted_err",
                 "positive_definite"], cfg, args.out)
    return 0


def cmd_spectrum(args, cfg: RunConfig) -> int:
    mtab, ztab = _load_tables(cfg, need_zeros=args.zero_system > 0)
    psi = mg.PsiPrime(mtab)
    rows = []
    if args.zero_system > 0:
        eig = op.zero_system_spectrum(args.a, ztab, args.zero_system,
                                      tail_correct=True)
        rows = [(i, float(v)) for i, v in enumerate(eig)]
    else:
        rep = op.spectrum(op.discretize(args.a, args.nodes, psi))
        rows = [(i, float(v)) for i, v in enumerate(rep.eigenvalues)]
    _emit(rows, ["index", "eigenvalue"], cfg, args.out)
    return 0


def cmd_weil_check(args, cfg: RunConfig) -> int:
    mtab, ztab = _load_tables(cfg)
    rep = weil.weil_check(weil.triangle(args.t), mtab, ztab)
    rows = [(args.t, rep.lhs, rep.rhs, rep.residual, rep.pole_terms,
             rep.prime_side, rep.archimedean)]
    _emit(rows, ["t", "lhs", "rhs", "residual", "pole_terms", "prime_side",
                 "archimedean"], cfg, args.out)
    return 0


def cmd_chi_check(args, cfg: RunConfig) -> int:
    mtab, ztab = _load_tables(cfg)
    tail = zt.TailModel.for_table(ztab)
    l1, l2 = weil.chi_pairing_lhs(args.k, args.a, ztab, tail)
    r1, r2 = weil.chi_pairing_rhs(args.k, args.a, mtab)
    rows = [(args.a, args.k, l1, r1, l2, r2,
             max(abs(l1 - r1), abs(l2 - r2)))]
    _emit(rows, ["a", "k", "sum1_zeros", "sum1_closed", "sum2_zeros",
                 "sum2_closed", "max_residual"], cfg, args.out)
    return 0


def cmd_report(args, cfg: RunConfig) -> int:
    """One JSON line per criterion; exit 3 if any asserted criterion fails."""
    mtab, ztab = _load_tables(cfg)
    big = None
    if args.suite == "all" and args.big_prime_limit:
        big = mg.build_table(args.big_prime_limit)
    ds = rp.Datasets(mang=mtab, zeros=ztab, big_mang=big)
    records = rp.run_suite(args.suite, ds, t_cut=cfg.t_cut)
    lines = []
    failed = 0
    for r in records:
        d = r.as_json_dict()
        if isinstance(d["computed"], float) and math.isnan(d["computed"]):
            d["pass"] = None      # skipped tier
            d["computed"] = None
        elif not r.passed:
            failed += 1
        lines.append(json.dumps(d, sort_keys=True))
    text = "\n".join(lines) + "\n"
    if args.out:
        d = os.path.dirname(os.path.abspath(args.out))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".zscrew-")
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, args.out)
    else:
        sys.stdout.write(text)
    return EXIT_NUMERICAL if failed else 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--zeros", dest="zeros_path", help="zero-ordinates file")
    common.add_argument("--zeros-limit", dest="zeros_limit", type=int)
    common.add_argument("--prime-limit", dest="prime_limit", type=int)
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--t-cut", dest="t_cut", type=float)
    common.add_argument("--format", dest="output_format",
                        choices=["csv", "jsonl"])
    common.add_argument("--threads", dest="threads", type=int)
    common.add_argument("--out", help="output path (atomic write)")

    p = argparse.ArgumentParser(
        prog="zscrew", parents=[common], allow_abbrev=False,
        description="screw-function diagnostics for the Riemann xi-function")
    sub = p.add_subparsers(dest="command", required=True)

    def add_cmd(name, **kw):
        return sub.add_parser(name, parents=[common], allow_abbrev=False, **kw)

    q = add_cmd("psi", help="tabulate Psi(t)")
    q.add_argument("--t", nargs=2, type=float, default=(0.0, 1.0),
                   metavar=("LO", "HI"))
    q.add_argument("--step", type=float, default=0.01)
    q.add_argument("--side", choices=["prime", "zeros", "both"],
                   default="prime")
    q.add_argument("--figure1", action="store_true",
                   help="preset: 1000 rows on [0, log 10] with log-2 marker")
    q.set_defaults(fn=cmd_psi)

    q = add_cmd("psi-omega", help="tabulate the shifted variant")
    q.add_argument("--omega", type=float, required=True)
    q.add_argument("--t", nargs=2, type=float, default=(0.0, 1.0))
    q.add_argument("--step", type=float, default=0.01)
    q.set_defaults(fn=cmd_psi_omega)

    q = add_cmd("scan-sign", help="first sign change of Psi_omega")
    q.add_argument("--omega", type=float, required=True)
    q.add_argument("--t-max", dest="t_max", type=float, default=15.0)
    q.set_defaults(fn=cmd_scan_sign)

    q = add_cmd("moments", help="moment sequence mu_n")
    q.add_argument("--n-max", dest="n_max", type=int, default=10)
    q.set_defaults(fn=cmd_moments)

    q = add_cmd("li", help="Li coefficients lambda_n")
    q.add_argument("--n-max", dest="n_max", type=int, default=8)
    q.add_argument("--method", choices=["zeros", "moments"], default="zeros")
    q.set_defaults(fn=cmd_li)

    q = add_cmd("hankel", help="Hankel determinants of the moments")
    q.add_argument("--n-max", dest="n_max", type=int, default=5)
    q.set_defaults(fn=cmd_hankel)

    q = add_cmd("spectrum", help="integral-operator spectrum")
    q.add_argument("--a", type=float, default=1.0)
    q.add_argument("--nodes", type=int, default=200)
    q.add_argument("--zero-system", dest="zero_system", type=int, default=0,
                   metavar="M", help="use the zero-indexed system over M ordinates")
    q.set_defaults(fn=cmd_spectrum)

    q = add_cmd("weil-check", help="explicit formula at a triangle")
    q.add_argument("--t", type=float, required=True)
    q.set_defaults(fn=cmd_weil_check)

    q = add_cmd("chi-check", help="trigonometric pairing identity")
    q.add_argument("--a", type=float, required=True)
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(fn=cmd_chi_check)

    q = add_cmd("report", help="run a criteria suite")
    q.add_argument("--suite", choices=sorted(rp.SUITES), default="identities")
    q.add_argument("--big-prime-limit", dest="big_prime_limit", type=int,
                   default=0, help="large sieve for the scan/asymptotic tiers")
    q.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ConfigError, ValueError) as e:
        print("configuration error: %s" % e, file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(args, cfg)
    except ConfigError as e:
        print("configuration error: %s" % e, file=sys.stderr)
        return EXIT_CONFIG
    except (DataFormatError, FileNotFoundError) as e:
        print("data error: %s" % e, file=sys.stderr)
        return EXIT_DATA
    except (DomainError, RangeError, TruncationError, ArithmeticError) as e:
        print("numerical error: %s" % e, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
