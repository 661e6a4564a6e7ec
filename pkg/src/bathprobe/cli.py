"""Command line runner.

    bathprobe <fig3|fig4|fig5|measure|custom> [--config FILE] [--out DIR]
              [--set key=value ...]

Writes one deterministic CSV per experiment into the output directory.
`custom` runs the generic dual-track Bloch comparison with whatever
parameters are configured (same columns as fig3).  Exit codes: 0 success,
1 validation error, 2 numerical failure; diagnostics go to stderr.
"""
import argparse
import sys

from .config import EXPERIMENTS, apply_overrides, default_config, load_config
from .errors import NumericalError, ValidationError
from .experiments import run_experiment


def build_parser():
    parser = argparse.ArgumentParser(prog="bathprobe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--out", default=None, help="output directory (overrides out_dir)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = default_config(args.experiment)
        if args.config:
            cfg = load_config(args.config, base=cfg)
        cfg = apply_overrides(cfg, args.overrides)
        cfg.validate()
        data, path = run_experiment(cfg, out_dir=args.out)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.experiment == "measure":
        print(data.summary())
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
