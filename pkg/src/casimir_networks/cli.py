"""Command-line front end: ``casimir-net {force,sweep,reflectivity,plasmon-scan,validate}``.

Exit codes: 0 success, 1 validation failure, 2 configuration or input error,
3 quadrature failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from . import __version__, validate
from .casimir import CavityConfig, force, sweep_length
from .config import FORMATS, RunConfig, load_config
from .constants import C
from .errors import CasimirError, ConfigError, QuadratureError
from .media import Axis, FrequencyPoint, Pol, TransverseMode
from .netalg import HalfSpace, PerfectMirror, bulk_reflection, stack_scattering
from .qnoise import plasmon_scan

EXIT_OK, EXIT_VALIDATE, EXIT_CONFIG, EXIT_QUADRATURE = 0, 1, 2, 3

FORCE_COLUMNS = ["L", "A", "F", "pressure", "eta", "err_estimate", "evaluations", "F_TE", "F_TM", "converged"]
SWEEP_COLUMNS = ["L", "F", "pressure", "eta", "dFdL", "err_estimate", "monotone"]
REFLECTIVITY_COLUMNS = ["freq", "k", "pol", "re_r", "im_r", "abs_r", "abs_t"]
PLASMON_COLUMNS = ["omega", "k", "abs_r_tm"]


# ----------------------------------------------------------------- output

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


def _plain(v):
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def render(rows: list, columns: list, fmt: str, timestamp: bool, meta: dict | None = None) -> str:
    """CSV (17 significant digits, header row) or JSON text for a list of records."""
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    if fmt == "json":
        doc = {"version": __version__}
        if stamp:
            doc["generated"] = stamp
        doc.update(meta or {})
        doc["columns"] = columns
        doc["rows"] = [{c: _plain(r[c]) for c in columns} for r in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated {stamp} by casimir-net {__version__}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text: str, out_path: str | None) -> None:
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


# ----------------------------------------------------------------- commands

def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    quad = cfg.quadrature
    try:
        if args.rel_tol is not None:
            quad = replace(quad, rel_tol=args.rel_tol)
        if args.threads is not None:
            quad = replace(quad, threads=args.threads)
    except ValueError as exc:
        raise ConfigError(str(exc), "--rel-tol" if args.rel_tol is not None else "--threads") from None
    cfg.quadrature = quad
    return cfg


def _format(args, cfg: RunConfig | None) -> str:
    return args.format or (cfg.output_format if cfg else "csv")


def _out(args, cfg: RunConfig | None) -> str | None:
    return args.out or (cfg.output_path if cfg else None)


def _cavity(cfg: RunConfig, L: float) -> CavityConfig:
    return CavityConfig(cfg.mirror(cfg.mirror1), cfg.mirror(cfg.mirror2), L, cfg.area, cfg.quadrature)


def cmd_force(args) -> int:
    cfg = _load(args)
    if cfg.gap is None:
        raise ConfigError("force needs a single gap length", "cavity.gap_m")
    res = force(_cavity(cfg, cfg.gap))
    meta = {"mirror1": cfg.mirror1, "mirror2": cfg.mirror2}
    _emit(render([res.as_dict()], FORCE_COLUMNS, _format(args, cfg), not args.no_header_timestamp, meta),
          _out(args, cfg))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    if not cfg.gaps:
        raise ConfigError("sweep needs a non-empty gap grid ('gaps_m' or 'gap_grid')", "cavity.gaps_m")
    try:
        table = sweep_length(_cavity(cfg, cfg.gaps[0]), cfg.gaps)
    except ValueError as exc:
        raise ConfigError(str(exc), "cavity.gaps_m") from None
    meta = {"mirror1": cfg.mirror1, "mirror2": cfg.mirror2, "monotone": table.monotone}
    _emit(render(table.as_records(), SWEEP_COLUMNS, _format(args, cfg), not args.no_header_timestamp, meta),
          _out(args, cfg))
    if not table.monotone:
        print("warning: force is not strictly decreasing over the sweep (see 'monotone' column)",
              file=sys.stderr)
    return EXIT_OK


def _grid(lo, hi, n, log):
    if n < 1 or hi < lo or (log and lo <= 0):
        raise ConfigError("invalid grid bounds", "--freq-min/--freq-max/--k-min/--k-max")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


def cmd_reflectivity(args) -> int:
    cfg = _load(args)
    mirror = cfg.mirror(args.mirror)
    axis = Axis.IMAGINARY if args.axis == "imaginary" else Axis.REAL
    freqs = _grid(args.freq_min, args.freq_max, args.n_freq, args.log_freq)
    ks = _grid(args.k_min, args.k_max, args.n_k, False)
    F, K = np.meshgrid(freqs, ks, indexing="ij")
    F, K = F.ravel(), K.ravel()
    if axis is Axis.REAL and args.sector != "all":
        keep = F > C * K if args.sector == "ordinary" else F < C * K
        F, K = F[keep], K[keep]
    pols = [Pol.TE, Pol.TM] if args.pol == "both" else [Pol[args.pol]]
    rows = []
    for pol in pols:
        mode = TransverseMode(FrequencyPoint(axis, F), K, pol)
        if isinstance(mirror, PerfectMirror):
            r, t = -np.ones_like(F), np.zeros_like(F)
        elif isinstance(mirror, HalfSpace):
            r, t = np.asarray(bulk_reflection(mirror.medium, mode)), np.zeros_like(F)
        else:
            S = stack_scattering(mirror, mode)
            r, t = np.broadcast_to(S.r, F.shape), np.broadcast_to(S.t, F.shape)
        r = np.asarray(r, dtype=complex)
        for i in range(len(F)):
            rows.append({"freq": F[i], "k": K[i], "pol": pol.name, "re_r": r[i].real, "im_r": r[i].imag,
                         "abs_r": abs(r[i]), "abs_t": abs(complex(t[i]))})
    rows.sort(key=lambda row: (row["pol"], row["freq"], row["k"]))
    meta = {"mirror": args.mirror, "axis": args.axis}
    _emit(render(rows, REFLECTIVITY_COLUMNS, _format(args, cfg), not args.no_header_timestamp, meta),
          _out(args, cfg))
    return EXIT_OK


def cmd_plasmon_scan(args) -> int:
    cfg = _load(args)
    mirror = cfg.mirror(args.mirror)
    if not isinstance(mirror, HalfSpace):
        raise ConfigError(f"plasmon-scan needs a bulk mirror, {args.mirror!r} is not", f"mirrors.{args.mirror}")
    try:
        scan = plasmon_scan(mirror.medium, (args.omega_min, args.omega_max), (args.k_min, args.k_max),
                            args.n_omega, args.n_k, Pol[args.pol])
    except ValueError as exc:
        raise ConfigError(str(exc), "--omega-min/--omega-max/--k-min/--k-max") from None
    rows = [{"omega": w, "k": k, "abs_r_tm": a} for w, k, a in scan.points]
    meta = {"mirror": args.mirror, "pol": args.pol, "sampled": scan.sampled,
            "maximum": list(scan.maximum) if scan.maximum else None,
            "resonances": [list(r) for r in scan.resonances]}
    _emit(render(rows, PLASMON_COLUMNS, _format(args, cfg), not args.no_header_timestamp, meta),
          _out(args, cfg))
    if scan.maximum:
        w, k, a = scan.maximum
        print(f"max |r| = {a:.6g} at omega = {w:.6g} rad/s, k = {k:.6g} 1/m", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validate.run_checks()
    text = validate.report(results) + "\n"
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATE


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out", help="output file (default: config 'output.path' or stdout)")
    common.add_argument("--format", choices=FORMATS, help="output format (default: config or csv)")
    common.add_argument("--rel-tol", type=float, help="override quadrature rel_tol")
    common.add_argument("--threads", type=int, help="integrand worker threads")
    common.add_argument("--no-header-timestamp", action="store_true",
                        help="omit the generation timestamp (byte-stable output)")

    p = argparse.ArgumentParser(prog="casimir-net", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("force", parents=[common], help="force at the configured gap").set_defaults(func=cmd_force)
    sub.add_parser("sweep", parents=[common], help="force over the gap grid").set_defaults(func=cmd_sweep)

    r = sub.add_parser("reflectivity", parents=[common], help="reflection spectrum of one mirror")
    r.add_argument("--mirror", required=True)
    r.add_argument("--axis", choices=["imaginary", "real"], default="imaginary")
    r.add_argument("--freq-min", type=float, required=True, help="xi or omega, rad/s")
    r.add_argument("--freq-max", type=float, required=True)
    r.add_argument("--n-freq", type=int, default=50)
    r.add_argument("--log-freq", action="store_true", help="log-spaced frequency grid")
    r.add_argument("--k-min", type=float, default=0.0, help="transverse wavevector, 1/m")
    r.add_argument("--k-max", type=float, default=0.0)
    r.add_argument("--n-k", type=int, default=1)
    r.add_argument("--pol", choices=["TE", "TM", "both"], default="both")
    r.add_argument("--sector", choices=["all", "ordinary", "evanescent"], default="all",
                   help="real axis only: keep omega > ck, omega < ck, or both")
    r.set_defaults(func=cmd_reflectivity)

    s = sub.add_parser("plasmon-scan", parents=[common], help="|r| > 1 search in the evanescent sector")
    s.add_argument("--mirror", required=True, help="name of a bulk mirror")
    s.add_argument("--omega-min", type=float, required=True)
    s.add_argument("--omega-max", type=float, required=True)
    s.add_argument("--k-min", type=float, required=True)
    s.add_argument("--k-max", type=float, required=True)
    s.add_argument("--n-omega", type=int, default=200)
    s.add_argument("--n-k", type=int, default=50)
    s.add_argument("--pol", choices=["TE", "TM"], default="TM",
                   help="scanned polarisation (the abs_r_tm column then holds |r| of this one)")
    s.set_defaults(func=cmd_plasmon_scan)

    v = sub.add_parser("validate", help="run the invariant self-check suite")
    v.add_argument("--out", help="report file (default stdout)")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (CasimirError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
