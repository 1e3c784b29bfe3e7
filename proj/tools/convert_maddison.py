#!/usr/bin/env python3
"""Extract one regional GDP row from the Maddison 2010 workbook into year,value CSV.

Usage:
    python3 tools/convert_maddison.py horizontal-file_02-2010.xls \
        --row "Total Latin America" > data/latin_america_gdp.csv

Reads the GDP sheet (levels in millions of 1990 Geary-Khamis dollars). The
year header is the first row whose cells are mostly integer years. Empty
cells are written as empty values so `hypergrowth ingest` counts them as
skipped rows. Reading .xls needs the xlrd package.
"""

import argparse
import csv
import sys

import pandas as pd


def is_year(cell):
    try:
        y = float(cell)
    except (TypeError, ValueError):
        return False
    return y.is_integer() and 1 <= y <= 2100


def find_header(frame):
    for i, row in frame.iterrows():
        cells = row.iloc[1:]
        if sum(is_year(c) for c in cells) >= 0.5 * len(cells):
            return i
    sys.exit("no year header row found")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("workbook")
    parser.add_argument("--sheet", default="GDP")
    parser.add_argument("--row", default="Total Latin America")
    args = parser.parse_args()

    frame = pd.read_excel(args.workbook, sheet_name=args.sheet, header=None)
    header = frame.iloc[find_header(frame)]
    labels = frame.iloc[:, 0].astype(str).str.strip()
    matches = frame[labels == args.row]
    if matches.empty:
        sys.exit(f"row {args.row!r} not found in sheet {args.sheet!r}")
    row = matches.iloc[0]

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["year", "value"])
    for col in range(1, len(header)):
        if not is_year(header.iloc[col]):
            continue
        value = row.iloc[col]
        cell = "" if pd.isna(value) or str(value).strip() == "" else repr(float(value))
        out.writerow([int(float(header.iloc[col])), cell])


if __name__ == "__main__":
    main()
