"""Per-token behavioral statistics for dataset characterization.

Six indicators per token: lifespan, final holder count, liquidity growth
ratio, DeFi transaction count, day-one DeFi concentration, and lifetime
transaction rate. Rug pulls typically show near-zero lifespans, single-digit
holders and all DeFi activity on day one; legitimate tokens the opposite.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .chain import ADD_LIQUIDITY, TokenRecord
from .detector import build_holder_series, primary_pool

COLUMNS = (
    "lifespan_days",
    "holders",
    "liq_growth_ratio",
    "defi_txs",
    "day1_defi_ratio",
    "tx_rate_hr",
)

STATISTICS = ("mean", "p25", "median", "p75")


class EmptyDataset(Exception):
    pass


@dataclass(frozen=True)
class BehaviorStats:
    lifespan_days: float
    holders: int
    liq_growth_ratio: float  # percent growth of pool quote balance over the initial injection
    defi_txs: int
    day1_defi_ratio: float  # percent of DeFi activity within 24h of creation
    tx_rate_hr: float
    no_liquidity: bool = False  # growth ratio undefined, reported as 0

    def as_row(self) -> dict:
        return {col: getattr(self, col) for col in COLUMNS}


def token_behavior_stats(record: TokenRecord) -> BehaviorStats:
    """Compute the six indicators for one token.

    Liquidity growth compares the peak quote balance of the primary pool
    against the initial injection; a token that never saw an AddLiquidity
    reports 0 with the no_liquidity flag set.
    """
    lifespan_s = record.last_event_time() - record.creation_time
    lifespan_days = lifespan_s / 86400.0

    series = build_holder_series(record)
    holders = series.samples[-1].holders

    liq_growth, no_liquidity = _liquidity_growth_pct(record)

    defi_txs = len(record.defi_activities)
    day1_cutoff = record.creation_time + 86400
    if defi_txs:
        day1 = sum(1 for a in record.defi_activities if a.timestamp < day1_cutoff)
        day1_ratio = 100.0 * day1 / defi_txs
    else:
        day1_ratio = 0.0

    tx_rate_hr = len(record.transactions) / (lifespan_s / 3600.0) if lifespan_s > 0 else 0.0

    return BehaviorStats(
        lifespan_days=lifespan_days,
        holders=holders,
        liq_growth_ratio=liq_growth,
        defi_txs=defi_txs,
        day1_defi_ratio=day1_ratio,
        tx_rate_hr=tx_rate_hr,
        no_liquidity=no_liquidity,
    )


def _liquidity_growth_pct(record: TokenRecord) -> tuple[float, bool]:
    """Percent gain of the primary pool's quote balance over its initial
    injection, tracked by replaying quote flows (pool delta is the negative
    of the actor-centric amount)."""
    pool = primary_pool(record)
    if pool is None:
        return 0.0, True
    acts = [a for a in record.defi_activities if a.pool == pool]
    initial = None
    balance = 0.0
    peak = 0.0
    for act in acts:
        balance += float(-act.quote_amount)
        if initial is None and act.kind == ADD_LIQUIDITY:
            initial = balance
            peak = balance
        if initial is not None:
            peak = max(peak, balance)
    if initial is None or initial <= 0:
        return 0.0, True
    return 100.0 * (peak - initial) / initial, False


def dataset_summary(stats: list[BehaviorStats]) -> dict:
    """{column: {mean, p25, median, p75}} with quartiles by linear
    interpolation between order statistics."""
    if not stats:
        raise EmptyDataset("no behavior stats to summarize")
    summary = {}
    for col in COLUMNS:
        values = sorted(float(getattr(s, col)) for s in stats)
        if len(values) == 1:
            v = values[0]
            summary[col] = {"mean": v, "p25": v, "median": v, "p75": v}
            continue
        p25, median, p75 = statistics.quantiles(values, n=4, method="inclusive")
        summary[col] = {
            "mean": statistics.fmean(values),
            "p25": p25,
            "median": median,
            "p75": p75,
        }
    return summary


def summary_table_rows(summaries_by_type: dict) -> list[dict]:
    """Flatten {type: summary} into rows of statistic x type x six columns,
    ready for CSV export."""
    rows = []
    for stat in STATISTICS:
        for type_label, summary in summaries_by_type.items():
            row = {"statistic": stat, "type": type_label}
            for col in COLUMNS:
                row[col] = summary[col][stat]
            rows.append(row)
    return rows
