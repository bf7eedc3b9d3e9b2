#!/usr/bin/env python3
"""Write a synthetic daily price file shaped like one year of DJIA closes.

The series is a one-factor model: every stock loads on a common market
factor with its own beta plus idiosyncratic noise. Dates are the 252 NYSE
trading days of 2009. Output is deterministic for a given seed.

    python3 tools/make_synthetic_prices.py data/synthetic_djia_2009.csv
"""

import argparse
import csv

import numpy as np
import pandas as pd

TICKERS = [
    "AA", "AXP", "BA", "BAC", "CAT", "CSCO", "CVX", "DD", "DIS", "GE",
    "HD", "HPQ", "IBM", "INTC", "JNJ", "JPM", "KFT", "KO", "MCD", "MMM",
    "MRK", "MSFT", "PFE", "PG", "T", "TRV", "UTX", "VZ", "WMT", "XOM",
]

NYSE_HOLIDAYS_2009 = [
    "2009-01-01", "2009-01-19", "2009-02-16", "2009-04-10", "2009-05-25",
    "2009-07-03", "2009-09-07", "2009-11-26", "2009-12-25",
]


def trading_days():
    days = pd.bdate_range("2009-01-01", "2009-12-31")
    days = days[~days.isin(pd.to_datetime(NYSE_HOLIDAYS_2009))]
    return [d.strftime("%Y-%m-%d") for d in days]


def simulate(seed):
    rng = np.random.default_rng(seed)
    dates = trading_days()
    n, a = len(dates), len(TICKERS)

    market = rng.standard_t(df=4, size=n) * 0.011 + 0.0008
    beta = rng.uniform(0.45, 1.7, size=a)
    idio_vol = rng.uniform(0.008, 0.022, size=a)
    drift = rng.uniform(0.0002, 0.0012, size=a)

    daily = drift + beta * market[:, None] + rng.standard_normal((n, a)) * idio_vol
    start = rng.uniform(15.0, 120.0, size=a)
    prices = start * np.cumprod(1.0 + daily, axis=0)
    prices[0] = start
    return dates, np.round(prices, 2)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output")
    parser.add_argument("--seed", type=int, default=2009)
    args = parser.parse_args()

    dates, prices = simulate(args.seed)
    with open(args.output, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["date"] + TICKERS)
        for d, row in zip(dates, prices):
            w.writerow([d] + [f"{p:.2f}" for p in row])


if __name__ == "__main__":
    main()
