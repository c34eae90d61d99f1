"""
Command-line front end.

    pinwheels state | fan | map | pinwheel | spectrum | validate [options]

Options mirror the configuration keys; ``--config FILE`` loads a flat
``key = value`` file first and flags override it. Exit status is 0 on
success, 1 on a runtime failure and 2 on a configuration error.
"""

import argparse
import logging
import sys

from . import io, pipeline, validation
from .config import RunConfig, from_mapping, load
from .errors import ConfigurationError
from .orientation import WORKERS_ENV

log = logging.getLogger("pinwheels")

COMMANDS = ("state", "fan", "map", "pinwheel", "spectrum", "validate")

# flag dest -> config key
FLAG_KEYS = {
    "omega": "omega", "lam": "lambda", "theta": "theta", "phase": "phase", "phase_c": "phase_c",
    "seed": "seed", "cutoff": "cutoff", "amplitude": "amplitude", "n_orient": "n_orient",
    "half_width": "half_width", "m": "m", "mode": "mode", "estimator": "estimator", "out": "out",
    "formats": "formats", "k_values": "k_values", "s_max": "s_max", "n_steps": "n_steps",
    "q1": "q1", "q2": "q2", "n_bins": "n_bins", "epsilon": "epsilon", "window": "window",
    "n_random": "n_random", "source": "source", "state_csv": "state_csv",
}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", metavar="FILE", help="flat key = value config file")
    g.add_argument("--omega", type=float, help="radius of the Fourier circle (default 1)")
    g.add_argument("--lambda", dest="lam", type=float,
                   help="state sharpness lambda (default 1/(2*omega))")
    g.add_argument("--theta", type=float, help="orientation in radians, reduced mod pi (default 0)")
    g.add_argument("--phase", choices=("zero", "linear", "random"),
                   help="local phase (default: random for pinwheel/spectrum, zero otherwise)")
    g.add_argument("--phase-c", type=float, help="slope of the linear phase (even integer)")
    g.add_argument("--seed", type=int, help="random phase seed (default 0)")
    g.add_argument("--cutoff", type=int, help="random phase mode cutoff (default 4)")
    g.add_argument("--amplitude", type=float, help="random phase peak amplitude (default pi)")
    g.add_argument("--n-orient", type=int, help="orientations in the activity stack (default 8)")
    g.add_argument("--grid-n", type=int, help="grid nodes per axis (default 256)")
    g.add_argument("--nx", type=int, help="grid nodes along x1")
    g.add_argument("--ny", type=int, help="grid nodes along x2")
    g.add_argument("--half-width", type=float, help="grid half width L (default 8*pi/omega)")
    g.add_argument("--m", type=int, help="circle samples M (default 256)")
    g.add_argument("--mode", choices=("real", "modulus", "phase"), help="activity extraction")
    g.add_argument("--estimator", choices=("vector_sum", "argmax"), help="orientation estimator")
    g.add_argument("--out", help="output directory (default ./out)")
    g.add_argument("--formats", help="comma list of csv,pgm,png,svg")
    g.add_argument("--k-values", help="comma list of fan parameters k")
    g.add_argument("--s-max", type=float, help="fan curve length (default pi/2)")
    g.add_argument("--n-steps", type=int, help="RK4 steps per fan curve (default 200)")
    g.add_argument("--q1", type=float, help="fan base point x1")
    g.add_argument("--q2", type=float, help="fan base point x2")
    g.add_argument("--n-bins", type=int, help="radial spectrum bins (default: width pi/L)")
    g.add_argument("--epsilon", type=float, help="relative annulus half width (default 0.15)")
    g.add_argument("--window", choices=("none", "hann"), help="spectrum window (default none)")
    g.add_argument("--bessel", action="store_true", default=None,
                   help="map: synthesize the constant state (lambda -> 0 limit)")
    g.add_argument("--n-random", type=int, help="validate: random states (default 1000)")
    g.add_argument("--source", choices=("zfield", "field", "vector_sum"),
                   help="spectrum: which field to analyze (default zfield)")
    g.add_argument("--state-csv", help="map/spectrum: read the circle state from a phi,re,im CSV")
    g.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(
        prog="pinwheels",
        description="Coherent-state orientation maps on the rototranslation group.",
        epilog=f"Set ${WORKERS_ENV} to cap the synthesis thread count. "
               "Exit codes: 0 success, 1 runtime failure, 2 configuration error.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "state": "write a coherent state and print its uncertainty report",
        "fan": "write the fan of integral curves",
        "map": "synthesize one activity map",
        "pinwheel": "build the orientation map, detect pinwheels, analyze the spectrum",
        "spectrum": "radial power spectrum of a field or orientation map",
        "validate": "run the property suite; exit 0 iff every check passes",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return p


def build_config(args):
    cfg = load(args.config) if args.config else RunConfig()
    overrides = {}
    for dest, key in FLAG_KEYS.items():
        v = getattr(args, dest, None)
        if v is not None:
            overrides[key] = v
    if args.grid_n is not None:
        overrides["nx"] = overrides["ny"] = args.grid_n
    for key in ("nx", "ny"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.bessel:
        overrides["bessel"] = True
    return from_mapping(overrides, cfg).resolved(args.command)


def _emit(doc):
    sys.stdout.write(io.dumps(doc))


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = build_config(args)
        log.info("running %s into %s", args.command, cfg.out)
        if args.command == "validate":
            results = validation.run_all(cfg.omega, cfg.m, cfg.n_random, cfg.seed)
            for c in results:
                log.info(c.line())
            doc = validation.report(results)
            doc["config"] = cfg.to_dict()
            pipeline._out(cfg)
            io.write_json(f"{cfg.out}/validate.json", doc)
            _emit(doc)
            return 0 if doc["passed"] else 1
        run = {
            "state": pipeline.run_state,
            "fan": pipeline.run_fan,
            "map": pipeline.run_map,
            "pinwheel": pipeline.run_pinwheel,
            "spectrum": pipeline.run_spectrum,
        }[args.command]
        doc = run(cfg)
        _emit(doc)
        return 0
    except ConfigurationError as e:
        print(f"pinwheels: configuration error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        log.debug("failure", exc_info=True)
        print(f"pinwheels: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
