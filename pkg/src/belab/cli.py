"""belab command line: ``belab run`` and ``belab oracle``."""
import argparse
import json
import sys

from .dist import exact_rademacher_distance
from .experiments import ExperimentConfig, run_experiment, with_overrides
from .montecarlo import default_workers


def _error(kind, message, code=2):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def build_parser():
    ap = argparse.ArgumentParser(prog="belab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment described by a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--workers", type=int, default=None,
                     help="worker processes (default: $BELAB_WORKERS or 1)")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", default=None, help="output directory (overrides output_dir)")

    orc = sub.add_parser("oracle", help="exact distances")
    osub = orc.add_subparsers(dest="oracle", required=True)
    rad = osub.add_parser("rademacher", help="exact D for the scaled Rademacher walk")
    rad.add_argument("--n", type=int, required=True)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "oracle":
            res = exact_rademacher_distance(args.n)
            print(json.dumps(res.to_json()))
            return 0
        cfg = ExperimentConfig.load(args.config)
        workers = args.workers if args.workers is not None else (
            default_workers() if cfg.workers == 1 else cfg.workers)
        cfg = with_overrides(cfg, workers=workers, seed=args.seed, output_dir=args.out)
        ExperimentConfig.from_json({k: getattr(cfg, k) for k in cfg.__dataclass_fields__})
        summary = run_experiment(cfg)
        print(json.dumps({"output_dir": cfg.output_dir, "summary": summary}, sort_keys=True))
        return 0
    except FileNotFoundError as e:
        return _error("config", str(e))
    except (ValueError, TypeError) as e:
        return _error("config", str(e))
    except RuntimeError as e:
        return _error("experiment", str(e))


if __name__ == "__main__":
    sys.exit(main())
