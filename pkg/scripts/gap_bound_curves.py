#!/usr/bin/env python3
"""Emit gap-versus-bound curve data for a few representative exponent pairs.

Writes one CSV per pair under ./reports, suitable for external plotting.
The (2, 2) pair is the equality witness: its gap and bound columns
coincide for every rho.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from gaussgap.cli import main as cli_main

PAIRS = [
    (1.0, 1.0),    # classic absolute-value pair
    (2.0, 2.0),    # equality witness
    (-0.5, -0.5),  # negative-exponent regime
    (3.0, 1.0),    # mixed-magnitude branch
    (-0.5, 3.0),   # opposite signs: two-sided envelope
]


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--rho-count", type=int, default=200)
    args = ap.parse_args(argv)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for a1, a2 in PAIRS:
        name = f"curve_a1_{a1}_a2_{a2}.csv".replace("-", "m")
        rc = cli_main([
            "curve", "--alpha1", str(a1), "--alpha2", str(a2),
            "--rho-count", str(args.rho_count),
            "--output", str(out / name),
        ])
        if rc:
            return rc
        print(f"wrote {out / name}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
