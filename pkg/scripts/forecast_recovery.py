"""Holdout RMSE of the default forecaster on trend + weekly sinusoid + N(0,1) noise.

    python scripts/forecast_recovery.py --seeds 200
"""
import argparse
from datetime import date

import numpy as np

from retailmine.forecast import ForecastConfig, TimeSeries, backtest


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--days", type=int, default=365)
    ap.add_argument("--holdout-frac", type=float, default=0.2)
    args = ap.parse_args()

    t = np.arange(args.days)
    rmse = []
    for seed in range(args.seeds):
        noise = np.random.default_rng(seed).normal(0, 1, args.days)
        y = 10 + 0.05 * t + 3 * np.sin(2 * np.pi * t / 7) + noise
        m, _ = backtest(TimeSeries(date(2023, 1, 1), y), ForecastConfig(), args.holdout_frac)
        rmse.append(m.rmse)
    rmse = np.array(rmse)
    print(f"seeds={args.seeds} holdout RMSE: mean {rmse.mean():.3f}  median {np.median(rmse):.3f}"
          f"  p95 {np.percentile(rmse, 95):.3f}  max {rmse.max():.3f}")
    print(f"fraction within 2 sigma: {(rmse <= 2).mean():.3f}")


if __name__ == "__main__":
    main()
