#!/usr/bin/env python3
"""Run the desk-scale classification scan and print a readable summary.

Writes the full JSON report next to the summary; equivalent to
`qacm classify --cmax N --seed S --out PATH` plus a console digest.
"""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from qacm.cli import ScanConfig, run_classify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cmax", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="classify_report.json")
    args = ap.parse_args()

    report = run_classify(ScanConfig(args.cmax, args.seed, timestamp=True))
    pathlib.Path(args.out).write_text(json.dumps(report, indent=2) + "\n")

    print(f"{'kind':<14} {'c':>2} {'k':>4} {'z':>4}  acm    ulrich  chern(H1),(H2)")
    for r in report["rows"]:
        c = r["c"] if r["c"] is not None else "-"
        k = r["k"] if r["k"] is not None else "-"
        z = r["z"] if r["z"] is not None else "-"
        extra = " [boundary]" if r.get("boundary") else ""
        print(f"{r['kind']:<14} {c:>2} {k:>4} {z:>4}  {str(r['acm']):<6} "
              f"{str(r['ulrich']):<7} {tuple(r['chern_h1'])},{tuple(r['chern_h2'])}{extra}")
    counts = report["counts"]
    print(f"\nrows: {counts['rows']}  aCM: {counts['acm_true']}  "
          f"Ulrich: {counts['ulrich_true']}")
    print(f"report written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
