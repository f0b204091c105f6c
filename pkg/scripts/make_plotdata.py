#!/usr/bin/env python3
"""Emit all CSV plot series (profiles, integrand densities, cutoff sweep)."""

import sys

from kwlab.cli import main

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "plotdata"
    code = 0
    for target in ("profiles", "integrands", "eps-sweep"):
        code = code or main(["plotdata", "--target", target,
                             "--out-dir", out_dir])
    raise SystemExit(code)
