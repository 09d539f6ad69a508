"""Attacker cash-out quantification from creator-side liquidity flows.

Profit tracing is deliberately conservative: only AddLiquidity and
RemoveLiquidity events by creator-related addresses count, never swaps or
plain transfers, so every figure is backed by a verifiable liquidity
operation. Amounts are fixed-point decimals per quote asset and are never
netted across assets before USD conversion.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .chain import ADD_LIQUIDITY, REMOVE_LIQUIDITY, TokenRecord, quote_decimal
from .detector import creator_addresses

USD_EXPONENT = Decimal("0.01")


class MissingPrice(Exception):
    def __init__(self, asset: str):
        super().__init__(f"no USD price for asset {asset}")
        self.asset = asset


@dataclass(frozen=True)
class ProfitRecord:
    """Net liquidity profit for one (address, quote asset) on one token."""

    address: str
    mint: str
    asset: str
    net_profit: Decimal
    events: tuple[str, ...]  # contributing event ids (tx signatures when known)


@dataclass(frozen=True)
class AssetLossStats:
    profitable_addresses: int
    min: Decimal
    max: Decimal
    mean: Decimal
    median: Decimal
    total: Decimal


@dataclass(frozen=True)
class LossSummary:
    per_asset: dict
    total_usd: Decimal | None  # None when no price table was supplied
    profitable_addresses: int


def _event_id(act) -> str:
    if act.signature is not None:
        return act.signature
    return f"{act.kind.lower()}:{act.timestamp}:{act.pool}"


def trace_profits(record: TokenRecord) -> list[ProfitRecord]:
    """One ProfitRecord per (creator-related address, quote asset) with any
    liquidity activity. The net is the actor-centric quote flow sum, so
    additions count negative and removals positive."""
    out: list[ProfitRecord] = []
    for address in sorted(creator_addresses(record)):
        nets: dict = {}
        events: dict = {}
        for act in record.defi_activities:
            if act.actor != address or act.kind not in (ADD_LIQUIDITY, REMOVE_LIQUIDITY):
                continue
            nets[act.quote_asset] = nets.get(act.quote_asset, Decimal(0)) + act.quote_amount
            events.setdefault(act.quote_asset, []).append(_event_id(act))
        for asset in sorted(nets):
            out.append(
                ProfitRecord(
                    address=address,
                    mint=record.mint_address,
                    asset=asset,
                    net_profit=quote_decimal(nets[asset]),
                    events=tuple(events[asset]),
                )
            )
    return out


def aggregate_losses(records: list[ProfitRecord], price_table: dict | None) -> LossSummary:
    """Per-asset loss statistics over addresses with positive aggregate
    profit, plus the USD total. Requires a price for every asset present;
    pass None to skip USD conversion entirely."""
    if price_table is not None:
        for rec in records:
            if rec.asset not in price_table:
                raise MissingPrice(rec.asset)
    by_address: dict = {}
    for rec in records:
        key = (rec.asset, rec.address)
        by_address[key] = by_address.get(key, Decimal(0)) + rec.net_profit
    positives: dict = {}
    for (asset, _address), net in by_address.items():
        if net > 0:
            positives.setdefault(asset, []).append(net)
    per_asset = {}
    total_usd = Decimal(0)
    profitable = 0
    for asset in sorted(positives):
        values = sorted(positives[asset])
        total = sum(values, Decimal(0))
        per_asset[asset] = AssetLossStats(
            profitable_addresses=len(values),
            min=values[0],
            max=values[-1],
            mean=quote_decimal(total / len(values)),
            median=quote_decimal(statistics.median(values)),
            total=total,
        )
        profitable += len(values)
        if price_table is not None:
            total_usd += total * Decimal(price_table[asset])
    return LossSummary(
        per_asset=per_asset,
        total_usd=total_usd.quantize(USD_EXPONENT) if price_table is not None else None,
        profitable_addresses=profitable,
    )


def load_price_table(path) -> dict:
    """Parse an `asset,usd_price` file into {asset: Decimal}."""
    table: dict = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        asset, _, price = line.partition(",")
        table[asset.strip()] = Decimal(price.strip())
    return table


def loss_summary_to_dict(summary: LossSummary) -> dict:
    return {
        "profitable_addresses": summary.profitable_addresses,
        "total_usd": str(summary.total_usd) if summary.total_usd is not None else None,
        "per_asset": {
            asset: {
                "profitable_addresses": s.profitable_addresses,
                "min": str(s.min),
                "max": str(s.max),
                "mean": str(s.mean),
                "median": str(s.median),
                "total": str(s.total),
            }
            for asset, s in summary.per_asset.items()
        },
    }
