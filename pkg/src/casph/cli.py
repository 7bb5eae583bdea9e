"""Command-line driver.

Subcommands:
  sweep     run a sweep from a config file (flags override file values)
  fig1      theta for perfect reflectors vs L, several radii (+PFA, dipole)
  fig2      theta for the Drude model vs L, several radii (+PFA)
  fig3      plasma/Drude force ratio vs L, several radii (+PFA ratio)
  validate  run the acceptance oracle suite

Lengths accept um/nm suffixes (0.5um, 500nm, plain numbers are um);
temperatures are in K.  Sign convention: reported forces are attraction-
positive, i.e. the magnitude of -dF/dL for the (negative) free energy.
"""

from __future__ import annotations

import argparse
import sys

from .sweep import SweepSpec, default_workers, log_grid, run_sweep
from .validation import run_all

FIG_RADII = (0.1, 0.2, 0.5, 1.0, 2.0)  # um, representative set


def parse_length_um(text):
    s = str(text).strip().lower()
    if s.endswith("nm"):
        return float(s[:-2]) * 1e-3
    if s.endswith("um"):
        return float(s[:-2])
    return float(s)


def _add_common(p):
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--tol", type=float, help="relative tolerance")
    p.add_argument("--lmax", type=int, help="multipole truncation override")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: CASPH_WORKERS or all)")


def _apply_overrides(spec, args):
    if args.out:
        spec.out = args.out
    if args.tol:
        spec.tol = args.tol
    if args.lmax:
        spec.lmax = args.lmax
    return spec


def _fig_spec(fig, n_points, l_min, l_max, radii):
    gaps = log_grid(l_min, l_max, n_points)
    if fig == 1:
        return SweepSpec(models=("perfect",), gaps_um=gaps, radii_um=radii,
                         temperatures_K=(300.0,), with_theta=True,
                         tol=1e-5, out="fig1.csv")
    if fig == 2:
        return SweepSpec(models=("drude",), gaps_um=gaps, radii_um=radii,
                         temperatures_K=(300.0,), with_theta=True,
                         tol=1e-5, out="fig2.csv")
    return SweepSpec(models=("plasma", "drude"), gaps_um=gaps,
                     radii_um=radii, temperatures_K=(300.0,),
                     with_theta=False, with_ratio=True, tol=1e-5,
                     out="fig3.csv")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="casph",
        description="Thermal Casimir effect in the plane-sphere geometry")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config file")
    p_sweep.add_argument("--config", required=True)
    _add_common(p_sweep)

    for fig in (1, 2, 3):
        p = sub.add_parser(f"fig{fig}",
                           help=f"regenerate the data behind figure {fig}")
        p.add_argument("--points", type=int, default=13)
        p.add_argument("--l-min", default=None,
                       help="smallest gap (default 0.25um; 2um for fig3)")
        p.add_argument("--l-max", default=None,
                       help="largest gap (default 20um; 50um for fig3)")
        p.add_argument("--radii", default=None,
                       help="comma list of radii (default representative "
                            "set 0.1,0.2,0.5,1,2 um)")
        _add_common(p)

    p_val = sub.add_parser("validate", help="run the acceptance oracles")
    p_val.add_argument("--criteria", default=None,
                       help="comma list of criterion numbers to run")

    args = parser.parse_args(argv)

    if args.command == "sweep":
        with open(args.config, encoding="utf-8") as fh:
            spec = SweepSpec.from_config(fh.read())
        spec = _apply_overrides(spec, args)
        _, failed = run_sweep(spec, workers=args.workers)
        return 1 if failed else 0

    if args.command in ("fig1", "fig2", "fig3"):
        fig = int(args.command[-1])
        lo = parse_length_um(args.l_min) if args.l_min else (
            2.0 if fig == 3 else 0.25)
        hi = parse_length_um(args.l_max) if args.l_max else (
            50.0 if fig == 3 else 20.0)
        radii = tuple(sorted(parse_length_um(r)
                             for r in args.radii.split(","))) \
            if args.radii else FIG_RADII
        spec = _fig_spec(fig, args.points, lo, hi, radii)
        spec = _apply_overrides(spec, args)
        _, failed = run_sweep(spec, workers=args.workers)
        return 1 if failed else 0

    if args.command == "validate":
        if args.criteria:
            from . import validation
            wanted = {int(x) for x in args.criteria.split(",")}
            ok = True
            for fn in validation.CRITERIA:
                num = int(fn.__name__.split("_")[1])
                if num in wanted:
                    for c in fn():
                        print(c.line())
                        ok &= c.passed
            return 0 if ok else 1
        _, passed = run_all()
        return 0 if passed else 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
