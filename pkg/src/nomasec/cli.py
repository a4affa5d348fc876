"""``nomasec`` command line: validate, sweep, optimize and outage-check runs."""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .harness import MODES, load_run_config, run_optimize, run_outage_check, run_sweep, run_validate

log = logging.getLogger("nomasec")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nomasec", description=__doc__)
    p.add_argument("--config", required=True, help="INI-style run configuration")
    p.add_argument("--mode", choices=MODES, help="overrides [run] mode")
    p.add_argument("--seed", type=int, help="master seed (u64)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--calibrate-snr", action="store_true", help="solve P_t from the target SNR range")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    overrides = {
        "mode": args.mode,
        "seed": args.seed,
        "trials": args.trials,
        "out": args.out,
        "workers": args.workers,
        "calibrate_snr": args.calibrate_snr,
    }
    try:
        run = load_run_config(args.config, overrides)
        if run.mode == "validate":
            results = run_validate(run)
            for r in results:
                print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
            return 0 if all(r.passed for r in results) else 1
        if run.mode == "sweep":
            print(run_sweep(run))
        elif run.mode == "optimize":
            out = run_optimize(run)
            b = out.result.best
            print(
                f"best rho={b.tx.rho:g} theta_g={b.tx.theta_g:g} beta_g={b.tx.beta_g:g} N_g={b.tx.N_g} "
                f"Rs_u={b.mean_Rs_u:.4g} Rs_g={b.mean_Rs_g:.4g} feasible={out.result.feasible}"
            )
            if out.report is not None:
                print(f"reference optimum not reproduced; see {out.report}")
        else:
            print(run_outage_check(run))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
