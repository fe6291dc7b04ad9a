"""Ideal predictions and residuals for the 40 experimental rows; writes table2_report.json."""

import argparse
from pathlib import Path

from zenoccp.experiment import excess_rows, load_table2, reference_values, reproduce_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("table2_report.json"))
    args = ap.parse_args()

    rep = reproduce_report()
    print(rep.to_text())
    print()
    for k, v in reference_values().items():
        print(f"{k:>20}: {v:.6f}")
    print(f"rows measured above ideal by > 3 error bars: {excess_rows(rep, load_table2()) or 'none'}")
    args.out.write_text(rep.to_json(indent=2))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
