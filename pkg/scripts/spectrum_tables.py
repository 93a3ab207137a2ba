#!/usr/bin/env python3
"""Dump the eigenspace constant tables for n = 2, 3, 4 as CSV files."""

import pathlib
import sys

from spherestab.cli import main

OUT = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("out")
OUT.mkdir(parents=True, exist_ok=True)

for n, kmax in ((2, 6), (3, 8), (4, 6)):
    path = OUT / f"spectrum_n{n}.csv"
    rc = main(["spectrum", "--n", str(n), "--kmax", str(kmax), "--out", str(path)])
    if rc != 0:
        raise SystemExit(rc)
    print(f"wrote {path}")
