#!/usr/bin/env python3
"""Generate data/prices_synthetic.csv, the stand-in price snapshot used by the
test suite when no vendor snapshot is available.

The series are simulated, not market data: a common factor, Student-t noise
and a handful of one-day lead-lag links between instruments, on per-market
trading calendars (weekdays minus a few exchange holidays) for 2021-08-06 to
2022-10-28. The output is deterministic for a given --seed.
"""
import argparse
import csv
import datetime as dt

import numpy as np

TICKERS = ["EART.L", "XCO2", "KLMH.F", "FLRG", "FLMB", "HGGB", "GBNG.L",
           "BGRN", "GRON.MI", "ECBI", "GRNB", "XGBU.SW", "XGBE.DE"]
MARKET = {"FLMB": "US", "BGRN": "US", "GRNB": "US", "XGBU.SW": "US", "HGGB": "Canada"}

HOLIDAYS = {
    "US": ["2021-09-06", "2021-11-25", "2021-12-24", "2022-01-17", "2022-02-21",
           "2022-04-15", "2022-05-30", "2022-06-20", "2022-07-04", "2022-09-05"],
    "Canada": ["2021-09-06", "2021-10-11", "2021-12-27", "2021-12-28", "2022-01-03",
               "2022-02-21", "2022-04-15", "2022-05-23", "2022-07-01", "2022-08-01",
               "2022-09-05", "2022-09-30", "2022-10-10"],
    "Europe": ["2021-12-24", "2021-12-31", "2022-04-15", "2022-04-18", "2022-05-26",
               "2022-06-06", "2022-08-15", "2022-09-19"],
}

# (leader, follower, weight on the leader's previous-day return)
LINKS = [("FLMB", "BGRN", 0.45), ("FLMB", "GRNB", 0.40), ("FLMB", "HGGB", 0.35),
         ("FLMB", "KLMH.F", 0.50), ("HGGB", "EART.L", 0.40), ("HGGB", "KLMH.F", 0.35),
         ("HGGB", "XCO2", 0.30), ("FLRG", "KLMH.F", 0.40), ("GRON.MI", "FLRG", 0.35),
         ("EART.L", "KLMH.F", 0.45), ("XGBE.DE", "ECBI", 0.35), ("BGRN", "XCO2", 0.30)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20221028)
    ap.add_argument("--out", default="data/prices_synthetic.csv")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    start, end = dt.date(2021, 8, 6), dt.date(2022, 10, 28)
    days = []
    d = start
    while d <= end:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    n = len(days)

    factor = 0.002 * rng.standard_t(5, size=n)
    noise = {t: 0.0035 * rng.standard_t(4, size=n) for t in TICKERS}
    beta = {t: rng.uniform(0.3, 0.9) for t in TICKERS}
    drift = {t: rng.uniform(-0.0010, -0.0005) for t in TICKERS}

    # Topological order of LINKS: leaders before followers.
    order = ["FLMB", "GRON.MI", "XGBE.DE", "GBNG.L", "XGBU.SW", "BGRN", "GRNB", "HGGB",
             "FLRG", "ECBI", "EART.L", "XCO2", "KLMH.F"]
    ret = {}
    for t in order:
        r = drift[t] + beta[t] * factor + noise[t]
        for leader, follower, w in LINKS:
            if follower == t and leader in ret:
                r[1:] += w * ret[leader][:-1]
        ret[t] = r

    closes = {t: 50.0 * np.exp(np.cumsum(ret[t])) for t in TICKERS}
    closed = {m: {dt.date.fromisoformat(s) for s in v} for m, v in HOLIDAYS.items()}

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date"] + TICKERS)
        for i, day in enumerate(days):
            row = [day.isoformat()]
            for t in TICKERS:
                market = MARKET.get(t, "Europe")
                row.append("" if day in closed[market] else f"{closes[t][i]:.4f}")
            w.writerow(row)


if __name__ == "__main__":
    main()
