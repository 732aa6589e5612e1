"""Run the full figure matrix and print the summary table.

    python scripts/reproduce_figures.py [out_dir] [threads]

Equivalent to ``singspec repro --out out_dir --threads threads``; exits 1
when any row of the summary is not PASS.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

from singspec.cli import main


def run(out: Path, threads: int) -> int:
    code = main(["repro", "--out", str(out), "--threads", str(threads)])
    with open(out / "summary.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    width = max(len(r["case"]) for r in rows)
    for r in rows:
        print(f"{r['figure']:7s} {r['case']:{width}s} pred={r['predicted_exponent']:>6s} fit={float(r['fitted_exponent']):8.3f} {r['verdict']}")
    passed = sum(r["verdict"] == "PASS" for r in rows)
    print(f"{passed}/{len(rows)} PASS")
    return code


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "out")
    threads = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    sys.exit(run(out, threads))
