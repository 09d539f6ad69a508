"""Shared builders and independent oracles.

The oracles here deliberately re-derive results the slow way (full
rescans, exhaustive candidate checks, union-find) so the fast
implementations have something honest to disagree with.
"""

from __future__ import annotations

import random
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

import pytest

from rugscan.chain import (
    ADD_LIQUIDITY,
    SOL,
    DefiActivity,
    DetectorParams,
    TokenMeta,
    TokenRecord,
    TransactionRecord,
    TransferEvent,
)
from rugscan.detector import HolderSample, HolderSeries

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SUITE_DIR = FIXTURES / "suite"
SUITE_LABELS = FIXTURES / "suite_labels.csv"
PRICES = FIXTURES / "prices.csv"
REFERENCES = FIXTURES / "references.csv"

CREATION = 1_750_000_000


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def make_meta(**kw) -> TokenMeta:
    defaults = dict(name="Test Token", symbol="TST", creator="CREATORaddr", decimals=9)
    defaults.update(kw)
    return TokenMeta(**defaults)


def make_record(
    mint="MINTaddr",
    creation=CREATION,
    transactions=(),
    defi_activities=(),
    transfers=(),
    **meta_kw,
) -> TokenRecord:
    return TokenRecord(
        mint_address=mint,
        meta=make_meta(**meta_kw),
        creation_time=creation,
        transactions=tuple(transactions),
        defi_activities=tuple(defi_activities),
        transfers=tuple(transfers),
    )


def make_tx(signature, ts, instructions=(), log_lines=(), deltas=()) -> TransactionRecord:
    return TransactionRecord(
        signature=signature,
        timestamp=ts,
        instructions=tuple(instructions),
        log_lines=tuple(log_lines),
        token_balance_deltas=tuple(deltas),
    )


def uniform_txs(t0: int, count: int, span_s: int, prefix="sig") -> list[TransactionRecord]:
    """`count` transactions spread evenly across [t0, t0 + span_s)."""
    step = span_s // count if count else 0
    return [make_tx(f"{prefix}{i:05d}", t0 + i * step) for i in range(count)]


def liquidity_activity(kind, actor, ts, quote, asset=SOL, pool="POOLaddr", base=1000, signature=None):
    if kind == ADD_LIQUIDITY:
        base = -abs(base)
    return DefiActivity(
        kind=kind,
        actor=actor,
        timestamp=ts,
        base_amount=base,
        quote_asset=asset,
        quote_amount=Decimal(quote),
        pool=pool,
        signature=signature,
    )


# ---------------------------------------------------------------------------
# independent oracles


def pump_oracle(series: HolderSeries, params: DetectorParams):
    """Exhaustive scan over every candidate sample time t; returns the
    earliest flagged t's timestamp or None."""
    samples = series.samples
    window_end = samples[0].timestamp + params.detection_window_hours * 3600
    window = [s for s in samples if s.timestamp <= window_end]
    start, end = window[0], window[-1]
    if start.holders == 0:
        return None
    decline = Fraction(start.holders - end.holders, start.holders)
    if decline < Fraction(str(params.tau_down)):
        return None
    for i in range(len(window)):
        if all(
            x.holders < start.holders and x.pool_balance < start.pool_balance
            for x in window[i:]
        ):
            return window[i].timestamp
    return None


def holder_series_oracle(record: TokenRecord) -> list[tuple[int, int, int]]:
    """Naive recount: for every event, rebuild the balance map from scratch
    over the whole prefix, then coalesce per timestamp."""
    from rugscan.detector import primary_pool  # pool choice is part of the contract

    pool = primary_pool(record)
    mint = record.mint_address
    points = [(record.creation_time, 0, 0)]
    for i in range(len(record.transfers)):
        balances: dict = {}
        for ev in record.transfers[: i + 1]:
            if ev.from_addr != mint:
                balances[ev.from_addr] = balances.get(ev.from_addr, 0) - ev.amount
            if ev.to_addr != mint:
                balances[ev.to_addr] = balances.get(ev.to_addr, 0) + ev.amount
        holders = sum(1 for v in balances.values() if v > 0)
        pool_balance = balances.get(pool, 0) if pool else 0
        points.append((record.transfers[i].timestamp, holders, pool_balance))
    coalesced: list[tuple[int, int, int]] = []
    for point in points:
        if coalesced and coalesced[-1][0] == point[0]:
            coalesced[-1] = point
        else:
            coalesced.append(point)
    return coalesced


class UnionFind:
    """Independent partition oracle for component checks."""

    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def partitions(self) -> set[frozenset]:
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return {frozenset(g) for g in groups.values()}


def random_holder_series(rng: random.Random, max_samples=1000) -> HolderSeries:
    """Random walk over holders and pool balance with occasional timestamps
    past the detection window, to exercise the window cutoff."""
    n = rng.randint(1, max_samples)
    ts = CREATION
    holders = rng.randint(0, 50)
    pool = rng.randint(0, 10_000)
    samples = [HolderSample(ts, holders, pool)]
    for _ in range(n - 1):
        ts += rng.randint(1, 7200)
        holders = max(0, holders + rng.randint(-8, 6))
        pool = max(0, pool + rng.randint(-2000, 1500))
        samples.append(HolderSample(ts, holders, pool))
    return HolderSeries(samples=tuple(samples))


def random_transfer_record(rng: random.Random, max_events=500) -> TokenRecord:
    """Random but replayable transfer history: senders only spend what the
    running ledger says they hold, with the mint as the faucet."""
    mint = f"RNDMINT{rng.randint(0, 10**9):010d}"
    addrs = [f"ADDR{i:03d}" for i in range(rng.randint(2, 12))]
    pool = addrs[0]
    balances: dict = {}
    transfers = []
    ts = CREATION
    for _ in range(rng.randint(1, max_events)):
        ts += rng.randint(0, 600)
        holders = [a for a in addrs if balances.get(a, 0) > 0]
        if not holders or rng.random() < 0.35:
            to = rng.choice(addrs)
            amount = rng.randint(1, 5000)
            transfers.append(TransferEvent(mint, to, amount, ts))
            balances[to] = balances.get(to, 0) + amount
        else:
            src = rng.choice(holders)
            to = rng.choice([a for a in addrs if a != src] + [mint])
            amount = rng.randint(1, balances[src])
            transfers.append(TransferEvent(src, to, amount, ts))
            balances[src] -= amount
            if to != mint:
                balances[to] = balances.get(to, 0) + amount
    activities = (
        liquidity_activity(ADD_LIQUIDITY, "LPactor", CREATION, "-1", pool=pool),
    )
    return make_record(
        mint=mint, transfers=transfers, defi_activities=activities
    )
