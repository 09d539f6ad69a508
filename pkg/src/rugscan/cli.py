"""Command-line front end: scan and batch detection plus the downstream
analyses, each stage reading the previous stage's files so any step can be
re-run on a saved report.

Exit codes: 0 success, 2 data error, 3 config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path

import tomli

from . import detector, evaluation, features, naming, profits, syndicates
from .chain import DetectorParams
from .detector import RUG_PULL, Verdict, classify
from .ingest import (
    IngestError,
    SourceClient,
    explorer_source,
    fixture_source,
    rpc_source,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 2
EXIT_CONFIG_ERROR = 3

OUTCOME_UNDECIDED = "Undecided"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    source_spec: str = ""
    rpc_url: str = ""
    explorer_url: str = ""
    explorer_key: str = ""
    cache_dir: str = ""
    params: DetectorParams = None
    out: str = ""
    format: str = "json"
    price_table: str = ""
    refs: str = ""
    jobs: int = 0
    rate_limit: float = 10.0
    min_group_size: int = 50
    ngram: int = 1


def _load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"bad config file {path}: {exc}")


def resolve_config(args) -> RunConfig:
    """Merge settings with precedence flags > environment > config file >
    defaults."""
    file_conf = _load_config_file(args.config) if args.config else {}

    def pick(flag_value, env_name, file_key, default):
        if flag_value is not None:
            return flag_value
        if env_name and os.environ.get(env_name):
            return os.environ[env_name]
        if file_key in file_conf:
            return file_conf[file_key]
        return default

    try:
        params = DetectorParams(
            tau_active=float(pick(args.tau_active, None, "tau_active", 5.0)),
            tau_down=float(pick(args.tau_down, None, "tau_down", 0.73)),
            detection_window_hours=int(pick(args.window_hours, None, "window_hours", 24)),
            post_remove_window_hours=int(
                pick(None, None, "post_remove_window_hours", 24)
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid detector parameters: {exc}")
    jobs = int(pick(args.jobs, None, "jobs", os.cpu_count() or 1))
    if jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    fmt = str(pick(args.format, None, "format", "json"))
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown format {fmt!r}")
    return RunConfig(
        source_spec=str(pick(args.source, None, "source", "")),
        rpc_url=str(pick(None, "RUGSCAN_RPC_URL", "rpc_url", "")),
        explorer_url=str(pick(None, "RUGSCAN_EXPLORER_URL", "explorer_url", "")),
        explorer_key=str(pick(None, "RUGSCAN_EXPLORER_KEY", "explorer_key", "")),
        cache_dir=str(pick(None, "RUGSCAN_CACHE_DIR", "cache_dir", "")),
        params=params,
        out=str(pick(args.out, None, "out", "")),
        format=fmt,
        price_table=str(pick(args.price_table, None, "price_table", "")),
        refs=str(pick(args.refs, None, "refs", "")),
        jobs=jobs,
        rate_limit=float(pick(None, None, "rate_limit", 10.0)),
        min_group_size=int(pick(getattr(args, "min_group_size", None), None, "min_group_size", 50)),
        ngram=int(pick(getattr(args, "ngram", None), None, "ngram", 1)),
    )


def make_client(config: RunConfig) -> SourceClient:
    spec = config.source_spec
    if not spec:
        raise ConfigError("no --source given (rpc | explorer | fixture:<dir>)")
    if spec.startswith("fixture:"):
        directory = spec.split(":", 1)[1]
        if not Path(directory).is_dir():
            raise ConfigError(f"fixture directory not found: {directory}")
        return SourceClient(fixture_source(directory), cache_dir=config.cache_dir or None)
    rpc = rpc_source(config.rpc_url, config.rate_limit) if config.rpc_url else None
    if spec == "explorer":
        if not config.explorer_url:
            raise ConfigError("explorer source needs RUGSCAN_EXPLORER_URL")
        src = explorer_source(config.explorer_url, config.explorer_key, config.rate_limit)
        return SourceClient(src, rpc=rpc, cache_dir=config.cache_dir or None)
    if spec == "rpc":
        if config.explorer_url:
            src = explorer_source(config.explorer_url, config.explorer_key, config.rate_limit)
            return SourceClient(src, rpc=rpc, cache_dir=config.cache_dir or None)
        if not config.rpc_url:
            raise ConfigError("rpc source needs RUGSCAN_RPC_URL")
        return SourceClient(rpc, cache_dir=config.cache_dir or None)
    raise ConfigError(f"unknown source {spec!r}")


# ---------------------------------------------------------------------------
# report serialization


def verdict_to_dict(verdict: Verdict) -> dict:
    ev = verdict.evidence
    return {
        "mint": verdict.mint,
        "outcome": verdict.outcome,
        "kind": verdict.kind,
        "evidence": {
            "matched_rule": ev.matched_rule,
            "trigger_signatures": list(ev.trigger_signatures),
            "trigger_interval": list(ev.trigger_interval) if ev.trigger_interval else None,
            "measured_values": dict(ev.measured_values),
        },
        "params": asdict(verdict.params_used),
    }


def undecided_row(mint: str, error: str) -> dict:
    return {"mint": mint, "outcome": OUTCOME_UNDECIDED, "error": error}


def report_line(row: dict) -> str:
    return json.dumps(row, sort_keys=True)


def load_report(path) -> list[dict]:
    rows = []
    with open(Path(path)) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def flagged_mints(report_rows: list[dict]) -> list[str]:
    return sorted(r["mint"] for r in report_rows if r.get("outcome") == RUG_PULL)


def decided_rows(report_rows: list[dict]) -> list[dict]:
    return [r for r in report_rows if r.get("outcome") != OUTCOME_UNDECIDED]


SUMMARY_COLUMNS = ["mint", "outcome", "kind", "rate_24h", "decline_fraction", "liq_profit"]


def summary_csv_row(row: dict) -> list[str]:
    values = row.get("evidence", {}).get("measured_values", {})

    def fmt(key):
        v = values.get(key)
        return f"{v:.6f}" if v is not None else ""

    return [
        row["mint"],
        row["outcome"],
        row.get("kind") or "",
        fmt("rate_24h"),
        fmt("holder_decline_fraction"),
        fmt("liq_profit"),
    ]


# ---------------------------------------------------------------------------
# commands


def _fetch_records(
    client: SourceClient, mints: list[str], jobs: int
) -> tuple[dict, dict]:
    """Fetch bundles concurrently. Returns (records, errors) keyed by mint;
    the shared client rate-limits across workers."""

    def fetch(mint):
        try:
            return mint, client.fetch_token_bundle(mint), None
        except (IngestError, detector.DetectorError, ValueError) as exc:
            return mint, None, f"{type(exc).__name__}: {exc}"

    records: dict = {}
    errors: dict = {}
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for mint, record, err in pool.map(fetch, mints):
            if record is not None:
                records[mint] = record
            else:
                errors[mint] = err
    return records, errors


def cmd_scan(args, config: RunConfig) -> int:
    client = make_client(config)
    try:
        record = client.fetch_token_bundle(args.mint)
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    verdict = classify(record, config.params)
    row = verdict_to_dict(verdict)
    if config.format == "csv":
        print(",".join(summary_csv_row(row)))
    else:
        print(report_line(row))
    return EXIT_OK


def cmd_batch(args, config: RunConfig) -> int:
    list_path = Path(args.mint_list)
    if not list_path.is_file():
        print(f"error: mint list not found: {list_path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    mints = [line.strip() for line in list_path.read_text().splitlines() if line.strip()]
    client = make_client(config)
    started = time.time()
    records, errors = _fetch_records(client, mints, config.jobs)

    rows: list[dict] = []
    for mint in sorted(set(mints)):
        if mint in errors:
            rows.append(undecided_row(mint, errors[mint]))
            continue
        try:
            verdict = classify(records[mint], config.params)
        except (detector.DetectorError, ValueError) as exc:
            rows.append(undecided_row(mint, f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(verdict_to_dict(verdict))

    out = Path(config.out or "report.jsonl")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        for row in rows:
            fh.write(report_line(row) + "\n")
    csv_path = out.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            if row["outcome"] == OUTCOME_UNDECIDED:
                writer.writerow([row["mint"], OUTCOME_UNDECIDED, "", "", "", ""])
            else:
                writer.writerow(summary_csv_row(row))

    counts: dict = {}
    for row in rows:
        key = row.get("kind") or row["outcome"]
        counts[key] = counts.get(key, 0) + 1
    manifest = {
        "source": client.source.describe(),
        "params": asdict(config.params),
        "total": len(rows),
        "counts": counts,
        "run_seconds": round(time.time() - started, 3),
    }
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    print(f"scanned {len(rows)} tokens -> {out} ({counts})")
    return EXIT_OK


def _labeled_predictions(args, config: RunConfig):
    labels_path = Path(args.labels)
    if not labels_path.is_file():
        raise ConfigError(f"labels file not found: {labels_path}")
    labels = evaluation.LabeledDataset.from_file(labels_path)
    client = make_client(config)
    records, errors = _fetch_records(client, labels.mints(), config.jobs)
    return labels, records, errors


def cmd_eval(args, config: RunConfig) -> int:
    labels, records, errors = _labeled_predictions(args, config)
    predictions = [classify(records[m], config.params) for m in records]
    metrics = evaluation.compute_metrics(predictions, labels, undecided=errors)
    payload = metrics.as_dict()
    print(json.dumps(payload, sort_keys=True, indent=2))
    if config.out:
        Path(config.out).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args, config: RunConfig) -> int:
    labels, records, errors = _labeled_predictions(args, config)
    if errors:
        print(f"warning: {len(errors)} mints undecided, excluded from sweep", file=sys.stderr)
        labels = evaluation.LabeledDataset(
            entries=tuple(e for e in labels.entries if e.mint not in errors)
        )
    rows = evaluation.sweep_tau_down(list(records.values()), labels, params=config.params)
    out = Path(config.out or "sweep.csv")
    evaluation.write_sweep_csv(rows, out)
    print(f"wrote {len(rows)} sweep rows -> {out}")
    return EXIT_OK


def _records_from_report(args, config: RunConfig, mints: list[str]):
    client = make_client(config)
    records, errors = _fetch_records(client, mints, config.jobs)
    for mint, err in sorted(errors.items()):
        print(f"warning: skipping {mint}: {err}", file=sys.stderr)
    return records


def cmd_profits(args, config: RunConfig) -> int:
    report_path = Path(args.report)
    if not report_path.is_file():
        print(f"error: report not found: {report_path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    mints = flagged_mints(load_report(report_path))
    records = _records_from_report(args, config, mints)
    price_table = profits.load_price_table(config.price_table) if config.price_table else None
    all_records: list[profits.ProfitRecord] = []
    for mint in sorted(records):
        all_records.extend(profits.trace_profits(records[mint]))
    try:
        summary = profits.aggregate_losses(all_records, price_table)
    except profits.MissingPrice as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    payload = {
        "summary": profits.loss_summary_to_dict(summary),
        "records": [
            {
                "address": r.address,
                "mint": r.mint,
                "asset": r.asset,
                "net_profit": str(r.net_profit),
                "events": list(r.events),
            }
            for r in all_records
        ],
    }
    out = Path(config.out or "losses.json")
    out.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    csv_path = out.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["asset", "profitable_addresses", "min", "max", "mean", "median", "total"])
        for asset, stats in summary.per_asset.items():
            writer.writerow(
                [asset, stats.profitable_addresses, stats.min, stats.max,
                 stats.mean, stats.median, stats.total]
            )
        writer.writerow(
            ["TOTAL", summary.profitable_addresses, "", "", "", "",
             summary.total_usd if summary.total_usd is not None else ""]
        )
    print(
        f"{summary.profitable_addresses} profitable addresses, "
        f"total USD {summary.total_usd} -> {out}"
    )
    return EXIT_OK


def cmd_syndicates(args, config: RunConfig) -> int:
    report_path = Path(args.report)
    if not report_path.is_file():
        print(f"error: report not found: {report_path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    mints = flagged_mints(load_report(report_path))
    records = _records_from_report(args, config, mints)
    price_table = profits.load_price_table(config.price_table) if config.price_table else None
    all_profits: list[profits.ProfitRecord] = []
    for mint in sorted(records):
        all_profits.extend(profits.trace_profits(records[mint]))
    graph = syndicates.build_address_graph(list(records.values()), all_profits)
    groups = syndicates.extract_groups(
        graph, min_combined_size=config.min_group_size, price_table=price_table
    )
    out = Path(config.out or "groups.jsonl")
    with open(out, "w") as fh:
        for group in groups:
            fh.write(json.dumps(syndicates.group_to_dict(group), sort_keys=True) + "\n")
    dot_path = out.with_suffix(".dot")
    dot_path.write_text(syndicates.graph_to_dot(graph, groups))
    if groups:
        stats = syndicates.group_stats(groups)
        print(json.dumps({"groups": len(groups), "stats": stats}, sort_keys=True,
                         indent=2, default=str))
    else:
        print("no groups above the size threshold")
    return EXIT_OK


def cmd_naming(args, config: RunConfig) -> int:
    report_path = Path(args.report)
    if not report_path.is_file():
        print(f"error: report not found: {report_path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if not config.refs:
        print("error: naming analysis needs --refs <reference list>", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    refs = naming.ReferenceList.from_file(config.refs)
    mints = flagged_mints(load_report(report_path))
    records = _records_from_report(args, config, mints)
    out = Path(config.out or "naming.jsonl")
    flagged = 0
    with open(out, "w") as fh:
        for mint in sorted(records):
            flags = naming.naming_flags(records[mint], refs)
            flagged += flags.inconsistent_metadata or flags.lookalike is not None
            fh.write(json.dumps(naming.flags_to_dict(flags), sort_keys=True) + "\n")
    counts = naming.ngram_counts([records[m].meta.name for m in sorted(records)], config.ngram)
    ngram_path = out.with_suffix(".ngrams.csv")
    with open(ngram_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["term", "count"])
        for term, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            writer.writerow([term, count])
    print(f"{flagged} of {len(records)} tokens have naming flags -> {out}")
    return EXIT_OK


def cmd_stats(args, config: RunConfig) -> int:
    report_path = Path(args.report)
    if not report_path.is_file():
        print(f"error: report not found: {report_path}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    rows = decided_rows(load_report(report_path))
    outcome_by_mint = {r["mint"]: r["outcome"] for r in rows}
    records = _records_from_report(args, config, sorted(outcome_by_mint))
    grouped: dict = {"rug_pull": [], "legitimate": []}
    for mint, record in sorted(records.items()):
        bucket = "rug_pull" if outcome_by_mint[mint] == RUG_PULL else "legitimate"
        grouped[bucket].append(features.token_behavior_stats(record))
    summaries = {
        label: features.dataset_summary(stats) for label, stats in grouped.items() if stats
    }
    out = Path(config.out or "behavior_stats.csv")
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["statistic", "type", *features.COLUMNS])
        for row in features.summary_table_rows(summaries):
            writer.writerow(
                [row["statistic"], row["type"]]
                + [f"{row[col]:.6f}" for col in features.COLUMNS]
            )
    print(f"behavior statistics for {sum(len(v) for v in grouped.values())} tokens -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rugscan",
        description="Rule-based rug-pull detection over raw on-chain token data",
    )
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--source", help="rpc | explorer | fixture:<dir>")
    parser.add_argument("--tau-active", type=float, dest="tau_active",
                        help="activity cutoff, transactions per hour")
    parser.add_argument("--tau-down", type=float, dest="tau_down",
                        help="holder decline threshold in (0, 1]")
    parser.add_argument("--window-hours", type=int, dest="window_hours",
                        help="detection window after creation")
    parser.add_argument("--jobs", type=int, help="worker pool size for batch fetches")
    parser.add_argument("--out", help="output path (command-specific default)")
    parser.add_argument("--format", choices=["json", "csv"], help="primary output format")
    parser.add_argument("--price-table", dest="price_table",
                        help="asset,usd_price file for USD conversion")
    parser.add_argument("--refs", help="reference list for naming analysis")
    parser.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="classify one mint")
    p.add_argument("mint")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("batch", help="classify a file of mints, one per line")
    p.add_argument("mint_list")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", help="score predictions against a labels CSV")
    p.add_argument("labels")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="tau_down sensitivity sweep")
    p.add_argument("labels")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("profits", help="trace attacker cash-outs for flagged tokens")
    p.add_argument("report")
    p.set_defaults(func=cmd_profits)

    p = sub.add_parser("syndicates", help="cluster flagged tokens into fraud groups")
    p.add_argument("report")
    p.add_argument("--min-group-size", type=int, dest="min_group_size",
                   help="members + tokens must exceed this (default 50)")
    p.set_defaults(func=cmd_syndicates)

    p = sub.add_parser("naming", help="naming-deception flags and n-gram counts")
    p.add_argument("report")
    p.add_argument("--ngram", type=int, help="n-gram size (default 1)")
    p.set_defaults(func=cmd_naming)

    p = sub.add_parser("stats", help="behavioral statistics table for a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = resolve_config(args)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except IngestError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
