"""Regenerate the five figure sweeps as CSV and SVG files.

Usage: python3 scripts/reproduce_figures.py [OUTDIR] [--mc N] [--jobs J]

Each preset is evaluated in closed form; ``--mc N`` adds a Monte Carlo column
with N samples per cell.
"""
import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from fsecrecy.sweep import PRESETS, preset, run_sweep


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="figures")
    parser.add_argument("--mc", type=int, default=0, help="Monte Carlo samples per cell (0 = off)")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        cfg = preset(name)
        methods = ("closed", "mc") if args.mc else ("closed",)
        cfg = replace(cfg, methods=methods, jobs=args.jobs, output_path=str(out / f"{name}.csv"),
                      svg_path=str(out / f"{name}.svg"))
        if args.mc:
            cfg = replace(cfg, mc=replace(cfg.mc, n_samples=args.mc))
        start = time.perf_counter()
        rows = run_sweep(cfg)
        print(f"{name}: {len(rows)} rows -> {cfg.output_path} ({time.perf_counter() - start:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
