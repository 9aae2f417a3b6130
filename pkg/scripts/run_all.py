"""Run every JSON config in configs/ through the CLI, outputs under out/."""
import argparse
import glob
import os
import sys
import time

from belab.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=os.path.join(ROOT, "out"))
    ap.add_argument("--only", default=None, help="substring filter on config names")
    args = ap.parse_args(argv)
    failed = []
    for cfg in sorted(glob.glob(os.path.join(ROOT, "configs", "*.json"))):
        name = os.path.splitext(os.path.basename(cfg))[0]
        if args.only and args.only not in name:
            continue
        t0 = time.perf_counter()
        code = main(["run", "--config", cfg, "--workers", str(args.workers),
                     "--out", os.path.join(args.out, name)])
        print(f"# {name}: exit {code} in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        if code:
            failed.append(name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(run())
