"""On-chain domain types shared by every other module. Pure data, no I/O.

Raw token amounts are integers in base units; quote-asset amounts are
fixed-point decimals with 9 fractional digits (lamport precision).
All records are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

# DefiActivity kinds
ADD_LIQUIDITY = "AddLiquidity"
REMOVE_LIQUIDITY = "RemoveLiquidity"
SWAP = "Swap"
ACTIVITY_KINDS = (ADD_LIQUIDITY, REMOVE_LIQUIDITY, SWAP)

# Canonical quote assets; anything else is carried through verbatim.
SOL = "SOL"
USDC = "USDC"
USDT = "USDT"

# Fixed-point precision for quote-asset amounts.
QUOTE_EXPONENT = Decimal("1e-9")


def quote_decimal(value) -> Decimal:
    """Normalize a quote amount to the fixed 9-digit precision."""
    return Decimal(value).quantize(QUOTE_EXPONENT)


@dataclass(frozen=True)
class TokenMeta:
    """Static token attributes as recorded at creation."""

    name: str
    symbol: str
    creator: str
    decimals: int
    freeze_authority: str | None = None
    mint_authority: str | None = None
    links: tuple[tuple[str, str], ...] = ()  # (kind, url), kind in {website, social}

    def __post_init__(self):
        if not self.symbol.strip():
            raise ValueError("token symbol must be non-empty")
        if not 0 <= self.decimals <= 18:
            raise ValueError(f"decimals out of range: {self.decimals}")
        object.__setattr__(self, "links", tuple(tuple(l) for l in self.links))


@dataclass(frozen=True)
class InstructionRecord:
    """One instruction inside a confirmed transaction."""

    program: str
    name: str  # e.g. "FreezeAccount", "RemoveLiquidity"
    accounts: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("instruction name must be non-empty")
        object.__setattr__(self, "accounts", tuple(self.accounts))


@dataclass(frozen=True)
class TransactionRecord:
    """One confirmed transaction: signature, instructions, logs, balance deltas."""

    signature: str
    timestamp: int  # UTC seconds
    instructions: tuple[InstructionRecord, ...] = ()
    log_lines: tuple[str, ...] = ()
    # (owner, mint, delta) with delta a signed integer in raw token units
    token_balance_deltas: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        object.__setattr__(self, "log_lines", tuple(self.log_lines))
        deltas = tuple(tuple(d) for d in self.token_balance_deltas)
        for owner, mint, _delta in deltas:
            if not mint:
                raise ValueError(f"balance delta for {owner} references an empty mint")
        object.__setattr__(self, "token_balance_deltas", deltas)


@dataclass(frozen=True)
class DefiActivity:
    """A DEX liquidity or swap event touching the subject token.

    Sign convention is actor-centric: quote_amount > 0 means the actor
    received quote assets (inflow), < 0 means the actor paid them out.
    AddLiquidity is therefore always <= 0 and RemoveLiquidity >= 0.
    base_amount is signed raw units of the subject token from the actor's
    perspective under the same convention.
    """

    kind: str
    actor: str
    timestamp: int
    base_amount: int
    quote_asset: str
    quote_amount: Decimal
    pool: str
    signature: str | None = None  # tx that carried the event, when known

    def __post_init__(self):
        if self.kind not in ACTIVITY_KINDS:
            raise ValueError(f"unknown activity kind: {self.kind!r}")
        object.__setattr__(self, "quote_amount", quote_decimal(self.quote_amount))
        if self.kind == ADD_LIQUIDITY and self.quote_amount > 0:
            raise ValueError("AddLiquidity quote_amount must be <= 0 (actor outflow)")
        if self.kind == REMOVE_LIQUIDITY and self.quote_amount < 0:
            raise ValueError("RemoveLiquidity quote_amount must be >= 0 (actor inflow)")


@dataclass(frozen=True)
class TransferEvent:
    """A token transfer in raw units. A transfer whose source equals the
    token's mint address is an issuance (the mint is not a holder); a
    transfer to the mint address is a burn."""

    from_addr: str
    to_addr: str
    amount: int
    timestamp: int

    def __post_init__(self):
        if self.amount <= 0:
            raise ValueError("transfer amount must be positive")
        if self.from_addr == self.to_addr:
            raise ValueError("self-transfers are not representable")


@dataclass(frozen=True)
class TokenRecord:
    """A mint's full observable history.

    The constructor sorts transactions, defi_activities and transfers by
    timestamp (stable) and rejects events dated before creation_time or
    duplicate transaction signatures.
    """

    mint_address: str
    meta: TokenMeta
    creation_time: int
    transactions: tuple[TransactionRecord, ...] = ()
    defi_activities: tuple[DefiActivity, ...] = ()
    transfers: tuple[TransferEvent, ...] = ()

    def __post_init__(self):
        txs = tuple(sorted(self.transactions, key=lambda t: t.timestamp))
        acts = tuple(sorted(self.defi_activities, key=lambda a: a.timestamp))
        xfers = tuple(sorted(self.transfers, key=lambda t: t.timestamp))
        object.__setattr__(self, "transactions", txs)
        object.__setattr__(self, "defi_activities", acts)
        object.__setattr__(self, "transfers", xfers)

        for events in (txs, acts, xfers):
            for ev in events:
                if ev.timestamp < self.creation_time:
                    raise ValueError(
                        f"event at {ev.timestamp} predates creation_time "
                        f"{self.creation_time}"
                    )
        seen = set()
        for tx in txs:
            if tx.signature in seen:
                raise ValueError(f"duplicate transaction signature: {tx.signature}")
            seen.add(tx.signature)

    def last_event_time(self) -> int:
        """Timestamp of the latest event of any kind, or creation_time."""
        latest = self.creation_time
        for events in (self.transactions, self.defi_activities, self.transfers):
            if events:
                latest = max(latest, events[-1].timestamp)
        return latest


@dataclass(frozen=True)
class DetectorParams:
    """Tunable thresholds for classification.

    tau_active: activity cutoff in transactions per hour.
    tau_down: holder-decline fraction for the pump-and-dump rule.
    detection_window_hours: post-creation window rules evaluate within,
      also the lookback used by the activity prefilter.
    post_remove_window_hours: window length for the rate check after a
      liquidity removal.
    """

    tau_active: float = 5.0
    tau_down: float = 0.73
    detection_window_hours: int = 24
    post_remove_window_hours: int = 24

    def __post_init__(self):
        if self.tau_active <= 0:
            raise ValueError("tau_active must be > 0")
        if not 0 < self.tau_down <= 1:
            raise ValueError("tau_down must be in (0, 1]")
        if self.detection_window_hours <= 0 or self.post_remove_window_hours <= 0:
            raise ValueError("window lengths must be > 0")
