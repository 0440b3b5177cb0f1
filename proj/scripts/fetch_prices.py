#!/usr/bin/env python3
"""Download daily closes for the manifest tickers into data/prices.csv.

Needs network access and the yfinance package. When data/prices.csv exists the
acceptance suite compares its descriptive statistics against the reference
values instead of using data/prices_synthetic.csv.
"""
import argparse
import csv

import yfinance as yf


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--manifest", default="data/manifest.csv")
    ap.add_argument("--out", default="data/prices.csv")
    ap.add_argument("--start", default="2021-08-06")
    ap.add_argument("--end", default="2022-10-29", help="exclusive")
    args = ap.parse_args()

    with open(args.manifest, newline="") as fh:
        tickers = [row["ticker"] for row in csv.DictReader(fh)]

    rows = []
    for t in tickers:
        hist = yf.Ticker(t).history(start=args.start, end=args.end, auto_adjust=False)
        if hist.empty:
            raise SystemExit(f"no data for {t}")
        for day, close in hist["Close"].dropna().items():
            rows.append((t, day.date().isoformat(), f"{close:.6f}"))

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ticker", "date", "close"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
