#!/usr/bin/env python3
"""Run the full verification suite with the committed acceptance config."""

import os
import sys

from kwlab.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
CFG = os.path.join(HERE, "..", "configs", "acceptance.cfg")

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "reports/verify-all.json"
    raise SystemExit(main(["verify", "--config", CFG, "--out", out]))
