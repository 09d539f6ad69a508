"""Two-phase rug-pull classification.

Phase 1 screens out tokens whose recent transaction rate shows normal
market activity. Phase 2 matches the remaining candidates against three
fraud patterns, in fixed priority order:

1. Freeze authority abuse: the creator kept the freeze authority and at
   least one transaction both carries a FreezeAccount instruction and logs
   the account as frozen.
2. Liquidity manipulation: a creator-related address nets a positive
   quote-asset profit from liquidity removal and trading dies off in the
   window after its last removal.
3. Pump and dump: within the detection window the holder count and the
   pool's token balance fall below their window-start values and stay
   there, with the overall holder decline at least tau_down.

Every operation here is a pure function of (TokenRecord, DetectorParams);
batch scans can parallelize per token freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .chain import ADD_LIQUIDITY, REMOVE_LIQUIDITY, DetectorParams, TokenRecord

# Verdict outcomes
ACTIVE_TOKEN = "ActiveToken"
NOT_RUG_PULL = "NotRugPull"
RUG_PULL = "RugPull"

# Rug-pull kinds, in rule priority order
FREEZE_ABUSE = "FreezeAbuse"
LIQUIDITY_MANIPULATION = "LiquidityManipulation"
PUMP_AND_DUMP = "PumpAndDump"
RUG_KINDS = (FREEZE_ABUSE, LIQUIDITY_MANIPULATION, PUMP_AND_DUMP)

FREEZE_INSTRUCTION = "FreezeAccount"
# Case-sensitive runtime log marker; upstream log-format drift must be
# absorbed here, not silently fuzzy-matched.
FROZEN_LOG_MARKER = "Account is frozen"


class DetectorError(Exception):
    pass


class InvalidWindow(DetectorError):
    pass


class NegativeBalance(DetectorError):
    """A transfer spends more than the sender holds: corrupt history."""

    def __init__(self, event):
        super().__init__(f"transfer exceeds sender balance: {event}")
        self.event = event


@dataclass(frozen=True)
class Evidence:
    """Audit trail for a verdict: which rule fired and on what numbers."""

    matched_rule: str
    trigger_signatures: tuple[str, ...] = ()
    trigger_interval: tuple[int, int] | None = None
    measured_values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    mint: str
    outcome: str  # ActiveToken | NotRugPull | RugPull
    kind: str | None  # rug-pull kind when outcome == RugPull
    evidence: Evidence
    params_used: DetectorParams

    @property
    def is_rug_pull(self) -> bool:
        return self.outcome == RUG_PULL


@dataclass(frozen=True)
class HolderSample:
    timestamp: int
    holders: int
    pool_balance: int


@dataclass(frozen=True)
class HolderSeries:
    """Holder count and pool token balance at every event timestamp."""

    samples: tuple[HolderSample, ...]


def tx_rate(transactions, window: tuple[int, int]) -> float:
    """Average transactions per hour over [t0, t1)."""
    t0, t1 = window
    if t1 <= t0:
        raise InvalidWindow(f"empty window [{t0}, {t1})")
    count = sum(1 for tx in transactions if t0 <= tx.timestamp < t1)
    return count / ((t1 - t0) / 3600.0)


def recent_rate(record: TokenRecord, params: DetectorParams) -> float:
    """Rate over the trailing window ending at (and including) the newest
    transaction; 0.0 for an empty history."""
    if not record.transactions:
        return 0.0
    newest = record.transactions[-1].timestamp
    t1 = newest + 1
    t0 = t1 - params.detection_window_hours * 3600
    return tx_rate(record.transactions, (t0, t1))


def prefilter(record: TokenRecord, params: DetectorParams) -> tuple[bool, float]:
    """Phase 1. Returns (is_candidate, measured_rate): a token is a
    candidate iff its recent rate is strictly below tau_active. A token
    with no transactions is a candidate at rate 0."""
    rate = recent_rate(record, params)
    return rate < params.tau_active, rate


def detect_freeze_abuse(record: TokenRecord) -> Evidence | None:
    """Freeze authority retained, and some transaction both executes
    FreezeAccount and logs the frozen account."""
    if record.meta.freeze_authority is None:
        return None
    freezing = [
        tx
        for tx in record.transactions
        if any(ins.name == FREEZE_INSTRUCTION for ins in tx.instructions)
        and any(FROZEN_LOG_MARKER in line for line in tx.log_lines)
    ]
    if not freezing:
        return None
    return Evidence(
        matched_rule=FREEZE_ABUSE,
        trigger_signatures=tuple(tx.signature for tx in freezing),
        trigger_interval=(freezing[0].timestamp, freezing[-1].timestamp),
        measured_values={"freeze_event_count": float(len(freezing))},
    )


def creator_addresses(record: TokenRecord) -> set[str]:
    """The mint creator plus the deployer of the initial liquidity pool
    (actor of the earliest AddLiquidity), when there is one."""
    addrs = {record.meta.creator}
    for act in record.defi_activities:
        if act.kind == ADD_LIQUIDITY:
            addrs.add(act.actor)
            break
    return addrs


@dataclass(frozen=True)
class LiquidityProfit:
    """Net quote-asset flow from liquidity operations for one address.

    per_asset nets additions (outflows) against removals (inflows) per
    quote asset, never across assets. `asset`/`net` name the dominant
    asset (the one with the most liquidity events); both are None when
    several assets tie, in which case only the breakdown is meaningful.
    """

    address: str
    per_asset: dict
    asset: str | None
    net: Decimal | None

    @property
    def is_mixed(self) -> bool:
        return len(self.per_asset) > 1 and self.asset is None

    def positive_assets(self) -> dict:
        return {a: v for a, v in self.per_asset.items() if v > 0}


def liq_profit(record: TokenRecord, address: str) -> LiquidityProfit:
    """Removals minus additions for `address`, per quote asset.

    With the actor-centric sign convention the net is simply the sum of
    quote_amount over the address's AddLiquidity / RemoveLiquidity events.
    """
    per_asset: dict = {}
    counts: dict = {}
    for act in record.defi_activities:
        if act.actor != address or act.kind not in (ADD_LIQUIDITY, REMOVE_LIQUIDITY):
            continue
        per_asset[act.quote_asset] = per_asset.get(act.quote_asset, Decimal(0)) + act.quote_amount
        counts[act.quote_asset] = counts.get(act.quote_asset, 0) + 1
    if not per_asset:
        return LiquidityProfit(address, {}, None, Decimal(0))
    ranked = sorted(counts.items(), key=lambda kv: -kv[1])
    if len(ranked) == 1 or ranked[0][1] > ranked[1][1]:
        dominant = ranked[0][0]
        return LiquidityProfit(address, per_asset, dominant, per_asset[dominant])
    return LiquidityProfit(address, per_asset, None, None)


def detect_liquidity_manipulation(
    record: TokenRecord, params: DetectorParams
) -> Evidence | None:
    """Some creator-related address nets a positive liquidity profit in at
    least one quote asset, and the transaction rate in the window after its
    last removal is below tau_active."""
    for address in sorted(creator_addresses(record)):
        profit = liq_profit(record, address)
        positive = profit.positive_assets()
        if not positive:
            continue
        removals = [
            act
            for act in record.defi_activities
            if act.actor == address and act.kind == REMOVE_LIQUIDITY
        ]
        last_remove = removals[-1]
        t0 = last_remove.timestamp + 1
        t1 = t0 + params.post_remove_window_hours * 3600
        rate_after = tx_rate(record.transactions, (t0, t1))
        if rate_after >= params.tau_active:
            continue
        asset, amount = max(positive.items(), key=lambda kv: kv[1])
        return Evidence(
            matched_rule=LIQUIDITY_MANIPULATION,
            trigger_signatures=tuple(
                act.signature for act in removals if act.signature is not None
            ),
            trigger_interval=(last_remove.timestamp, t1 - 1),
            measured_values={
                "liq_profit": float(amount),
                "profit_asset_count": float(len(positive)),
                "post_remove_rate": rate_after,
            },
        )
    return None


def primary_pool(record: TokenRecord) -> str | None:
    """The liquidity pool whose token balance stands in for the token's
    market liquidity: the pool with the largest cumulative AddLiquidity
    volume, ties broken by earliest first injection."""
    volume: dict = {}
    first_seen: dict = {}
    for act in record.defi_activities:
        if act.kind != ADD_LIQUIDITY:
            continue
        volume[act.pool] = volume.get(act.pool, 0) + abs(act.base_amount)
        first_seen.setdefault(act.pool, act.timestamp)
    if volume:
        return min(volume, key=lambda p: (-volume[p], first_seen[p]))
    for act in record.defi_activities:
        if act.pool:
            return act.pool
    return None


def build_holder_series(record: TokenRecord) -> HolderSeries:
    """Replay transfers into per-address balances, emitting one sample per
    event timestamp plus an initial sample at creation_time.

    The mint address acts as issuance source / burn sink and is never
    counted as a holder. Raises NegativeBalance on a transfer that spends
    more than the sender holds.
    """
    mint = record.mint_address
    pool = primary_pool(record)
    balances: dict = {}
    holders = 0
    samples: list[HolderSample] = []

    def snapshot(ts: int):
        bal = balances.get(pool, 0) if pool else 0
        if samples and samples[-1].timestamp == ts:
            samples[-1] = HolderSample(ts, holders, bal)
        else:
            samples.append(HolderSample(ts, holders, bal))

    snapshot(record.creation_time)
    for ev in record.transfers:
        if ev.from_addr != mint:
            have = balances.get(ev.from_addr, 0)
            if have < ev.amount:
                raise NegativeBalance(ev)
            balances[ev.from_addr] = have - ev.amount
            if balances[ev.from_addr] == 0:
                holders -= 1
        if ev.to_addr != mint:
            prev = balances.get(ev.to_addr, 0)
            balances[ev.to_addr] = prev + ev.amount
            if prev == 0:
                holders += 1
        snapshot(ev.timestamp)
    return HolderSeries(samples=tuple(samples))


def _tau_fraction(tau_down: float) -> Fraction:
    # str() round-trips the shortest decimal form, so sweep grids like
    # 0.73 compare exactly against integer holder-count fractions
    return Fraction(str(tau_down))


def detect_pump_and_dump(series: HolderSeries, params: DetectorParams) -> Evidence | None:
    """Holder crash plus balance decline inside the detection window.

    The window runs from the first sample to detection_window_hours later;
    `start`/`end` are its first and last samples. Flags when the relative
    holder reduction from start to end reaches tau_down and there is a
    sample time t from which holders and pool balance both stay strictly
    below their start values through end. A window starting with zero
    holders is never flagged.
    """
    if not series.samples:
        raise ValueError("holder series is empty")
    first_ts = series.samples[0].timestamp
    window_end = first_ts + params.detection_window_hours * 3600
    window = [s for s in series.samples if s.timestamp <= window_end]
    start, end = window[0], window[-1]
    if start.holders == 0:
        return None
    decline = Fraction(start.holders - end.holders, start.holders)
    if decline < _tau_fraction(params.tau_down):
        return None
    # earliest sample from which both conditions hold through the window end
    witness = None
    for sample in reversed(window):
        if sample.holders < start.holders and sample.pool_balance < start.pool_balance:
            witness = sample
        else:
            break
    if witness is None:
        return None
    return Evidence(
        matched_rule=PUMP_AND_DUMP,
        trigger_interval=(witness.timestamp, end.timestamp),
        measured_values={
            "holder_decline_fraction": float(decline),
            "holders_start": float(start.holders),
            "holders_end": float(end.holders),
            "pool_balance_start": float(start.pool_balance),
            "pool_balance_end": float(end.pool_balance),
        },
    )


def classify(record: TokenRecord, params: DetectorParams | None = None) -> Verdict:
    """Full two-phase classification of one token."""
    params = params or DetectorParams()
    is_candidate, rate = prefilter(record, params)
    base_values = {"rate_24h": rate}
    if not is_candidate:
        return Verdict(
            mint=record.mint_address,
            outcome=ACTIVE_TOKEN,
            kind=None,
            evidence=Evidence(matched_rule="ActivityPrefilter", measured_values=base_values),
            params_used=params,
        )
    evidence = detect_freeze_abuse(record)
    kind = FREEZE_ABUSE if evidence else None
    if evidence is None:
        evidence = detect_liquidity_manipulation(record, params)
        kind = LIQUIDITY_MANIPULATION if evidence else None
    if evidence is None:
        series = build_holder_series(record)
        evidence = detect_pump_and_dump(series, params)
        kind = PUMP_AND_DUMP if evidence else None
    if evidence is None:
        return Verdict(
            mint=record.mint_address,
            outcome=NOT_RUG_PULL,
            kind=None,
            evidence=Evidence(matched_rule="NoRuleMatched", measured_values=base_values),
            params_used=params,
        )
    merged = dict(base_values)
    merged.update(evidence.measured_values)
    evidence = Evidence(
        matched_rule=evidence.matched_rule,
        trigger_signatures=evidence.trigger_signatures,
        trigger_interval=evidence.trigger_interval,
        measured_values=merged,
    )
    return Verdict(
        mint=record.mint_address,
        outcome=RUG_PULL,
        kind=kind,
        evidence=evidence,
        params_used=params,
    )
