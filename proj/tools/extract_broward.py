#!/usr/bin/env python3
"""Reduce the ProPublica two-year recidivism release to the columns used here.

Usage: extract_broward.py compas-scores-two-years.csv data/broward.csv

The upstream file repeats some column names, so it is read positionally by the
first occurrence of each wanted header.
"""
import csv
import sys

WANTED = ["sex", "age", "juv_fel_count", "juv_misd_count", "juv_other_count",
          "priors_count", "two_year_recid"]


def main(src, dst):
    with open(src, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        idx = [header.index(c) for c in WANTED]
        rows = [[r[i] for i in idx] for r in reader]
    with open(dst, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(WANTED)
        w.writerows(rows)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
