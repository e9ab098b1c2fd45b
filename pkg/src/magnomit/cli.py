"""Command-line interface.

Subcommands: ``spectrum`` (full response table), ``delay`` (group delay,
with per-point step checks at requested probe detunings), ``steady-state``
(raw-drive fixed point), ``windows`` (transparency-window detection),
``compare`` (closed-form vs solver audit).

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 singular system or pole.  Errors print one machine-parseable line to
stderr: ``error code=<n> kind=<ClassName> detail=<message>``.
"""

from __future__ import annotations

import argparse
import sys

from . import config as cfgmod
from .params import NoConvergence, ParamError, solve_magnon_steady_state
from .response import (PoleEncountered, find_transparency_windows,
                       group_delay)
from .sideband import SingularSystem
from .sweep import (ENGINES, compare_engines, run_sweep, write_comparison_csv,
                    write_csv, write_json)

EXIT_CONFIG = 2
EXIT_NOCONV = 3
EXIT_SINGULAR = 4


def _fail(code: int, exc: BaseException) -> int:
    print(f"error code={code} kind={type(exc).__name__} detail={exc}",
          file=sys.stderr)
    return code


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="path to a .preset/config file")
    sub.add_argument("--engine", choices=ENGINES, default=None,
                     help="response engine (default: config or oracle)")
    sub.add_argument("--gc", type=float, default=None, metavar="HZ",
                     help="override G_c, ordinary frequency in Hz")
    sub.add_argument("--gn", type=float, default=None, metavar="HZ",
                     help="override G_n, ordinary frequency in Hz")
    sub.add_argument("--points", type=int, default=None, metavar="N",
                     help="override the sweep grid size")
    sub.add_argument("--out", default=None, help="output file path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--threads", type=int, default=1,
                     help="parallel evaluation bound (output is deterministic)")


def _load(args) -> cfgmod.RunConfig:
    return cfgmod.load_config(args.config, engine=args.engine, gc_hz=args.gc,
                              gn_hz=args.gn, n_points=args.points)


def _cmd_spectrum(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg.params, cfg.sweep, threads=args.threads)
    out = args.out or "spectrum.csv"
    (write_json if args.format == "json" else write_csv)(result, out)
    print(f"wrote {len(result.points)} rows to {out} "
          f"(engine={cfg.sweep.engine}, max_residual={result.max_residual:.3e})")
    return 0


def _cmd_delay(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg.params, cfg.sweep, threads=args.threads)
    out = args.out or "delay.csv"
    (write_json if args.format == "json" else write_csv)(result, out)
    print(f"wrote {len(result.points)} rows to {out}")
    for delta in args.at or []:
        g = group_delay(cfg.params, delta, fd_step=cfg.sweep.fd_step,
                        engine=cfg.sweep.engine, check_step=True)
        flag = "" if g.step_ok else "  [STEP CHECK FAILED]"
        print(f"tau({delta:.6g} rad/s) = {g.tau_s:+.6e} s "
              f"(step-halving change {g.rel_step_change:.2e}){flag}")
    return 0


def _cmd_steady_state(args) -> int:
    cfg = _load(args)
    if cfg.raw_params is None:
        raise cfgmod.ConfigError(
            "steady-state requires a raw-drive configuration "
            "(g_n_bare / omega_L_rabi / delta_n_bare)")
    ss = solve_magnon_steady_state(cfg.raw_params)
    print(f"n0 = {ss.n0.real:+.6e}{ss.n0.imag:+.6e}j")
    print(f"q0 = {ss.q0:+.6e}")
    print(f"delta_c_eff = {ss.delta_c_eff:+.6e} rad/s")
    print(f"delta_n_eff = {ss.delta_n_eff:+.6e} rad/s")
    print(f"residual = {ss.residual:.3e}")
    print(f"multiple_roots = {ss.multiple_roots}")
    return 0


def _cmd_windows(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg.params, cfg.sweep, threads=args.threads)
    spectrum = list(zip(result.column("delta_rad_s"), result.column("eps_R")))
    wins = find_transparency_windows(spectrum, cfg.sweep.prominence)
    print(f"{len(wins)} window(s) at prominence {cfg.sweep.prominence}")
    for w in wins:
        print(f"delta_min={w.delta_min:.6e} rad/s  eps_R={w.eps_r_min:+.4f}  "
              f"depth={w.depth:.4f}  width={w.width:.6e} rad/s")
    if args.out:
        import csv as _csv
        with open(args.out, "w", newline="") as fh:
            wr = _csv.writer(fh)
            wr.writerow(["delta_min_rad_s", "eps_R_min", "depth", "width_rad_s"])
            for w in wins:
                wr.writerow([repr(w.delta_min), repr(w.eps_r_min),
                             repr(w.depth), repr(w.width)])
        print(f"wrote {args.out}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load(args)
    cmp = compare_engines(cfg.params, cfg.sweep)
    out = args.out or "compare.csv"
    write_comparison_csv(cmp, out)
    print(f"wrote per-delta differences to {out}")
    print(f"printed   vs oracle: max {cmp.max_printed:.3e}  mean {cmp.mean_printed:.3e}")
    print(f"corrected vs oracle: max {cmp.max_corrected:.3e}  mean {cmp.mean_corrected:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magnomit",
        description="Probe-field response of an atom-opto-magnomechanical cavity")
    subs = ap.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="absorption/dispersion/transmission sweep")
    _add_common(sp)
    sp.set_defaults(func=_cmd_spectrum)

    dl = subs.add_parser("delay", help="group-delay sweep and probe points")
    _add_common(dl)
    dl.add_argument("--at", type=float, action="append", metavar="RAD_S",
                    help="also report tau at this detuning (repeatable)")
    dl.set_defaults(func=_cmd_delay)

    ss = subs.add_parser("steady-state", help="raw-drive magnon/mechanics fixed point")
    _add_common(ss)
    ss.set_defaults(func=_cmd_steady_state)

    wd = subs.add_parser("windows", help="transparency-window detection")
    _add_common(wd)
    wd.set_defaults(func=_cmd_windows)

    cp = subs.add_parser("compare", help="closed-form vs solver audit")
    _add_common(cp)
    cp.set_defaults(func=_cmd_compare)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (cfgmod.ConfigError, ParamError, FileNotFoundError, ValueError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except NoConvergence as exc:
        return _fail(EXIT_NOCONV, exc)
    except (SingularSystem, PoleEncountered) as exc:
        return _fail(EXIT_SINGULAR, exc)


if __name__ == "__main__":
    sys.exit(main())
