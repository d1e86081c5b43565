"""Run the full pipeline on the synthetic dataset and print a short report.

    python scripts/run_pipeline.py --out runs/seed42 --seed 42
"""
import argparse
import csv
import json
import sys
from pathlib import Path

from retailmine.cli import main as cli


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/default")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    out = Path(args.out)
    if cli(["pipeline", "--seed", str(args.seed), "--out", str(out)]) != 0:
        sys.exit("pipeline failed")

    with open(out / "hourly.csv") as fh:
        hourly = [(int(r["hour"]), int(r["count"])) for r in csv.DictReader(fh)]
    with open(out / "daily.csv") as fh:
        daily = [(r["weekday"], int(r["count"])) for r in csv.DictReader(fh)]
    rules = json.loads((out / "rules.json").read_text())
    patterns = json.loads((out / "patterns.json").read_text())
    metrics = json.loads((out / "metrics.json").read_text())

    print(f"busiest hour: {max(hourly, key=lambda x: x[1])}, busiest day: {max(daily, key=lambda x: x[1])}")
    print(f"{len(rules)} rules; top: {rules[0]['antecedent']} -> {rules[0]['consequent']}"
          f" (conf {rules[0]['confidence']:.3f}, lift {rules[0]['lift']:.3f})" if rules else "no rules")
    longest = [p for p in patterns if len(p["pattern"]) == max(len(q["pattern"]) for q in patterns)]
    top = max(longest, key=lambda p: p["count"])
    print(f"{len(patterns)} sequential patterns; most common of length {len(top['pattern'])}: {top}")
    print("holdout metrics: " + ", ".join(f"{k.upper()} {v:.2f}" for k, v in metrics.items()))
    print(f"artifacts in {out}/")


if __name__ == "__main__":
    main()
