"""Command-line entry point: ``retailmine <command> [options]``.

Exit status is 0 on success, 1 on usage errors, 2 on data errors. Every run
that writes files also writes a manifest (``manifest.json`` inside an output
directory, ``<file>.manifest.json`` next to a single output file) which
``retailmine replay`` can re-execute.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from datetime import date
from pathlib import Path

from . import __version__
from .datagen import DEFAULT_SEED, GenConfig, generate
from .errors import DataError
from .forecast import (ForecastConfig, aggregate_daily, backtest, evaluate, fit,
                       percentage_change, predict)
from .freqmine import MiningParams, apriori, fpgrowth, gen_rules
from .predict import combine, predict_next
from .seqmine import SeqParams, prefixspan
from .temporal import daily_histogram, hourly_histogram
from .txstore import build_sequences, read_csv, to_csv

MINERS = {"apriori": apriori, "fpgrowth": fpgrowth}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- output helpers ---------------------------------------------------------

class _Run:
    """Collects inputs/outputs of one command for its manifest."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []

    def read_db(self, path):
        self.inputs[str(path)] = _digest(path)
        return read_csv(path)

    def note_input(self, path):
        self.inputs[str(path)] = _digest(path)

    def write(self, path, text: str):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
        self.outputs.append(str(path))

    def emit(self, text: str):
        """Write to ``--out`` when given, else stdout."""
        if self.args.out:
            self.write(self.args.out, text)
        else:
            sys.stdout.write(text)

    def manifest(self, where: Path | None = None):
        if not self.outputs:
            return
        if where is None:
            out = Path(self.args.out)
            where = out / "manifest.json" if out.is_dir() else out.with_name(out.name + ".manifest.json")
        params = {k: v for k, v in sorted(vars(self.args).items()) if k != "func"}
        body = {
            "command": self.args.command,
            "argv": self.argv,
            "params": params,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": __version__,
        }
        where.write_text(_json(body), encoding="utf-8")


def _digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _f(x: float) -> str:
    return f"{x:.6f}"


# -- commands ---------------------------------------------------------------

def _gen_config(a) -> GenConfig:
    return GenConfig.for_year(
        a.year, n_users=a.n_users, n_transactions=a.n_transactions, n_items=a.n_items,
        min_basket=a.min_basket, max_basket=a.max_basket, seed=a.seed,
    )


def cmd_gen(run: _Run):
    run.emit(to_csv(generate(_gen_config(run.args))))


def cmd_temporal(run: _Run):
    db = run.read_db(run.args.input)
    out = Path(run.args.out)
    out.mkdir(parents=True, exist_ok=True)
    run.write(out / "hourly.csv", hourly_histogram(db).to_csv())
    run.write(out / "daily.csv", daily_histogram(db).to_csv())


def _mining_params(a) -> MiningParams:
    return MiningParams(a.min_support, getattr(a, "min_confidence", 0.3), a.max_len)


def _itemsets_text(freq, fmt) -> str:
    if fmt == "csv":
        return _csv(("items", "count", "support"),
                    ((" ".join(f.items), f.count, _f(f.support)) for f in freq))
    return _json([{"items": list(f.items), "count": f.count, "support": f.support} for f in freq])


def _rules_text(rules, fmt) -> str:
    if fmt == "csv":
        cols = ("antecedent", "consequent", "support", "confidence", "lift",
                "leverage", "conviction", "zhangs_metric")
        rows = []
        for r in rules:
            d = r.to_dict()
            rows.append([" ".join(d["antecedent"]), " ".join(d["consequent"])]
                        + [d[c] if d[c] == "inf" else _f(d[c]) for c in cols[2:]])
        return _csv(cols, rows)
    return _json([r.to_dict() for r in rules])


def cmd_mine_itemsets(run: _Run):
    a = run.args
    db = run.read_db(a.input)
    run.emit(_itemsets_text(MINERS[a.algo](db, _mining_params(a)), a.format))


def _rules(db, a):
    p = _mining_params(a)
    return gen_rules(MINERS[a.algo](db, p), p, len(db))


def cmd_mine_rules(run: _Run):
    a = run.args
    db = run.read_db(a.input)
    run.emit(_rules_text(_rules(db, a), a.format))


def _patterns(db, a):
    return prefixspan(build_sequences(db), SeqParams(a.min_count, a.max_seq_len))


def cmd_mine_seq(run: _Run):
    a = run.args
    pats = _patterns(run.read_db(a.input), a)
    if a.format == "csv":
        run.emit(_csv(("pattern", "count"), ((" ".join(p.elements), p.count) for p in pats)))
    else:
        run.emit(_json([p.to_dict() for p in pats]))


def _predictions(db, a, users):
    sdb = build_sequences(db)
    combined = combine(_rules(db, a), _patterns(db, a), len(sdb))
    histories = sdb.flattened()
    out = []
    for u in users:
        if u not in histories:
            raise DataError(f"unknown user {u!r}")
        out.append(predict_next(combined, histories[u], a.top, user_id=u))
    return out


def cmd_predict(run: _Run):
    a = run.args
    db = run.read_db(a.input)
    (pred,) = _predictions(db, a, [a.user])
    run.emit(_json(pred.to_dict()))


def _forecast_config(a) -> ForecastConfig:
    holidays = ()
    if a.holidays:
        holidays = tuple(_read_holidays(a.holidays))
    return ForecastConfig(
        n_changepoints=a.n_changepoints, changepoint_range=a.changepoint_range,
        weekly_order=a.weekly_order, yearly_order=a.yearly_order,
        ridge_lambda=a.ridge_lambda, holidays=holidays,
    )


def _read_holidays(path):
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line == "ds":
            continue
        try:
            yield date.fromisoformat(line.split(",")[0])
        except ValueError:
            raise DataError(f"{path}: bad holiday date {line!r}") from None


def _run_forecast(run: _Run, db, out: Path):
    a = run.args
    cfg = _forecast_config(a)
    if a.holidays:
        run.note_input(a.holidays)
    ts = aggregate_daily(db)
    metrics, _ = backtest(ts, cfg, a.holdout_frac)
    model = fit(ts, cfg)
    points = predict(model, a.horizon)
    baseline = a.baseline if a.baseline is not None else model.train_mean
    run.write(out / "forecast.csv", _csv(
        ("ds", "yhat", "trend", "seasonal", "holiday"),
        ((p.ds.isoformat(), _f(p.yhat), _f(p.trend_part), _f(p.seasonal_part), _f(p.holiday_part))
         for p in points)))
    run.write(out / "pct_change.csv", _csv(
        ("ds", "percentage_change"),
        ((d.isoformat(), _f(pct)) for d, pct in percentage_change(points, baseline))))
    run.write(out / "metrics.json", _json(metrics._asdict()))


def cmd_forecast(run: _Run):
    db = run.read_db(run.args.input)
    out = Path(run.args.out)
    out.mkdir(parents=True, exist_ok=True)
    _run_forecast(run, db, out)


def _read_values(path) -> list[float]:
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                values.append(float(row[-1]))
            except ValueError:
                if i == 0:
                    continue  # header
                raise DataError(f"{path}: line {i + 1}: not a number: {row[-1]!r}") from None
    return values


def cmd_eval(run: _Run):
    a = run.args
    run.note_input(a.actual)
    run.note_input(a.pred)
    m = evaluate(_read_values(a.actual), _read_values(a.pred))
    run.emit(_json(m._asdict()))


def cmd_pipeline(run: _Run):
    a = run.args
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    data = out / "data.csv"
    run.write(data, to_csv(generate(_gen_config(a))))
    db = read_csv(data)
    run.write(out / "hourly.csv", hourly_histogram(db).to_csv())
    run.write(out / "daily.csv", daily_histogram(db).to_csv())
    p = _mining_params(a)
    freq = MINERS[a.algo](db, p)
    run.write(out / "itemsets.json", _itemsets_text(freq, "json"))
    run.write(out / "rules.json", _rules_text(gen_rules(freq, p, len(db)), "json"))
    run.write(out / "patterns.json", _json([x.to_dict() for x in _patterns(db, a)]))
    preds = _predictions(db, a, db.users())
    run.write(out / "predictions.json", _json([x.to_dict() for x in preds]))
    _run_forecast(run, db, out)


def cmd_replay(run: _Run):
    body = json.loads(Path(run.args.manifest).read_text(encoding="utf-8"))
    return main(body["argv"])


# -- parser -----------------------------------------------------------------

def _add_gen(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n-users", type=int, default=50)
    p.add_argument("--n-transactions", type=int, default=1000)
    p.add_argument("--n-items", type=int, default=20)
    p.add_argument("--min-basket", type=int, default=1)
    p.add_argument("--max-basket", type=int, default=5)
    p.add_argument("--year", type=int, default=2023)


def _add_mining(p, rules=False):
    p.add_argument("--algo", choices=sorted(MINERS), default="apriori")
    p.add_argument("--min-support", type=float, default=0.005)
    p.add_argument("--max-len", type=int, default=None)
    if rules:
        p.add_argument("--min-confidence", type=float, default=0.3)


def _add_seq(p):
    p.add_argument("--min-count", type=int, default=10)
    # per-user sequences are long; unbounded pattern length explodes combinatorially
    p.add_argument("--max-seq-len", type=int, default=3)


def _add_forecast(p):
    p.add_argument("--horizon", type=int, default=30)
    p.add_argument("--holidays", default=None, help="file with one YYYY-MM-DD date per line")
    p.add_argument("--baseline", type=float, default=None,
                   help="percentage-change baseline (default: training mean)")
    p.add_argument("--holdout-frac", type=float, default=0.2)
    p.add_argument("--n-changepoints", type=int, default=25)
    p.add_argument("--changepoint-range", type=float, default=0.8)
    p.add_argument("--weekly-order", type=int, default=3)
    p.add_argument("--yearly-order", type=int, default=10)
    p.add_argument("--ridge-lambda", type=float, default=1e-3)


def _format(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="retailmine", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a synthetic transaction CSV")
    _add_gen(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("temporal", help="hourly and daily transaction histograms")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_temporal)

    p = sub.add_parser("mine-itemsets", help="frequent itemsets")
    p.add_argument("--input", required=True)
    _add_mining(p)
    _format(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mine_itemsets)

    p = sub.add_parser("mine-rules", help="association rules")
    p.add_argument("--input", required=True)
    _add_mining(p, rules=True)
    _format(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mine_rules)

    p = sub.add_parser("mine-seq", help="sequential patterns (PrefixSpan)")
    p.add_argument("--input", required=True)
    _add_seq(p)
    _format(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mine_seq)

    p = sub.add_parser("predict", help="next-purchase prediction for one user")
    p.add_argument("--input", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--top", type=int, default=5)
    _add_mining(p, rules=True)
    _add_seq(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("forecast", help="daily quantity forecast and holdout metrics")
    p.add_argument("--input", required=True)
    _add_forecast(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("eval", help="MAE/MSE/RMSE between two value columns")
    p.add_argument("--actual", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="gen -> temporal -> mine -> seq -> predict -> forecast")
    _add_gen(p)
    _add_mining(p, rules=True)
    _add_seq(p)
    p.add_argument("--top", type=int, default=5)
    _add_forecast(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    run = _Run(args, argv)
    try:
        status = args.func(run)
        if args.command != "replay":
            run.manifest()
    except (DataError, ValueError, OSError) as e:
        print(f"retailmine {args.command}: error: {e}", file=sys.stderr)
        return 2
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
