#!/usr/bin/env python3
"""Run the full invariant suite and write a JSON report."""

import sys

from spherestab.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "verify_report.json"
sys.exit(main(["verify", "--out", out]))
