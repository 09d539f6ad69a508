#!/usr/bin/env python3
"""Generate the bundled synthetic fixture corpus.

Every fixture is constructed so its ground-truth verdict follows from the
construction parameters alone (e.g. a pump-and-dump fixture with a target
holder decline of 0.80 is built wallet by wallet to end at exactly 20% of
its starting holders). Labels are written from those parameters, never by
running the detector, so the corpus stays an independent oracle.

Output layout under --out (default: fixtures/):
    suite/               rule-fidelity corpus, one JSON per mint
    suite_labels.csv     mint,label[,kind] ground truth for the suite
    syndicates/star/     one syndicate per directory, liquidity-rug shaped
    syndicates/cluster/
    syndicates/single/
    profits/             three-token corpus with hand-computable totals
    prices.csv           quote asset -> USD
    references.csv       well-known assets for the naming analysis

Deterministic: fixed seed, stable ordering, byte-identical regeneration.
"""

from __future__ import annotations

import argparse
import random
import sys
from decimal import Decimal
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rugscan.chain import (  # noqa: E402
    ADD_LIQUIDITY,
    REMOVE_LIQUIDITY,
    SOL,
    SWAP,
    USDC,
    DefiActivity,
    InstructionRecord,
    TokenMeta,
    TokenRecord,
    TransactionRecord,
    TransferEvent,
)
from rugscan.ingest import dump_token_record  # noqa: E402

BASE58 = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
T0 = 1_750_000_000  # mid-June 2025
TOKEN_PROGRAM = "TokenkegQfeZyiNwAJbNbGKPFXCWuBvf9Ss623VQ5DA"
AMM_PROGRAM = "675kPX9MHTjS2zt1qfr1NYHuzeLXfQM9H24wFSUt1Mp8"


def addr(rng: random.Random, tag: str, length: int = 40) -> str:
    body = "".join(rng.choice(BASE58) for _ in range(length - len(tag)))
    return tag + body


def sig(rng: random.Random, tag: str, length: int = 64) -> str:
    body = "".join(rng.choice(BASE58) for _ in range(length - len(tag)))
    return tag + body


def swap_tx(signature: str, ts: int, actor: str, pool: str) -> TransactionRecord:
    return TransactionRecord(
        signature=signature,
        timestamp=ts,
        instructions=(InstructionRecord(program=AMM_PROGRAM, name="Swap", accounts=(actor, pool)),),
        log_lines=("Program log: Instruction: Swap",),
    )


def plain_tx(signature: str, ts: int, name: str, accounts=()) -> TransactionRecord:
    return TransactionRecord(
        signature=signature,
        timestamp=ts,
        instructions=(InstructionRecord(program=TOKEN_PROGRAM, name=name, accounts=tuple(accounts)),),
        log_lines=(f"Program log: Instruction: {name}",),
    )


# ---------------------------------------------------------------------------
# suite families


def build_freeze_fixture(rng, idx, name, symbol, with_liquidity=True):
    creation = T0 + idx * 86400
    creator = addr(rng, f"FRZ{idx}creator")
    mint = addr(rng, f"FRZ{idx}mint")
    pool = addr(rng, f"FRZ{idx}pool")
    victims = [addr(rng, f"FRZ{idx}victim{j}") for j in range(4)]

    transfers = [TransferEvent(mint, creator, 1_000_000_000, creation)]
    activities = []
    txs = [plain_tx(sig(rng, f"FRZ{idx}create"), creation, "InitializeMint", (mint,))]
    if with_liquidity:
        transfers.append(TransferEvent(creator, pool, 600_000_000, creation))
        activities.append(
            DefiActivity(
                kind=ADD_LIQUIDITY, actor=creator, timestamp=creation + 60,
                base_amount=-600_000_000, quote_asset=SOL, quote_amount=Decimal("-3"),
                pool=pool, signature=sig(rng, f"FRZ{idx}add"),
            )
        )
        txs.append(plain_tx(activities[-1].signature, creation + 60, "AddLiquidity", (creator, pool)))
    for j, victim in enumerate(victims):
        ts = creation + 600 + 700 * j
        s = sig(rng, f"FRZ{idx}buy{j}")
        if with_liquidity:
            transfers.append(TransferEvent(pool, victim, 5_000_000, ts))
            activities.append(
                DefiActivity(
                    kind=SWAP, actor=victim, timestamp=ts, base_amount=5_000_000,
                    quote_asset=SOL, quote_amount=Decimal("-0.05"), pool=pool, signature=s,
                )
            )
        else:
            transfers.append(TransferEvent(creator, victim, 5_000_000, ts))
        txs.append(swap_tx(s, ts, victim, pool))
    freeze_ts = creation + 4000
    txs.append(
        TransactionRecord(
            signature=sig(rng, f"FRZ{idx}freeze"),
            timestamp=freeze_ts,
            instructions=(
                InstructionRecord(program=TOKEN_PROGRAM, name="FreezeAccount",
                                  accounts=(victims[0], mint, creator)),
            ),
            log_lines=(
                "Program log: Instruction: FreezeAccount",
                "Program log: Account is frozen",
            ),
        )
    )
    txs.append(plain_tx(sig(rng, f"FRZ{idx}tail"), freeze_ts + 900, "Transfer"))
    meta = TokenMeta(
        name=name, symbol=symbol, creator=creator, decimals=9,
        freeze_authority=creator, mint_authority=None,
        links=(("social", f"https://x.com/{symbol.lower()}_{idx}"),),
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=tuple(txs), defi_activities=tuple(activities), transfers=tuple(transfers),
    )


def build_liquidity_rug_fixture(rng, idx, name, symbol, asset=SOL, adds=("10",), removed="25"):
    creation = T0 + (10 + idx) * 86400
    creator = addr(rng, f"LIQ{idx}creator")
    mint = addr(rng, f"LIQ{idx}mint")
    pool = addr(rng, f"LIQ{idx}pool")
    victims = [addr(rng, f"LIQ{idx}victim{j}") for j in range(6)]

    transfers = [
        TransferEvent(mint, creator, 800_000_000, creation),
        TransferEvent(creator, pool, 500_000_000, creation),
    ]
    activities = []
    txs = [plain_tx(sig(rng, f"LIQ{idx}create"), creation, "InitializeMint", (mint,))]
    for k, amount in enumerate(adds):
        s = sig(rng, f"LIQ{idx}add{k}")
        activities.append(
            DefiActivity(
                kind=ADD_LIQUIDITY, actor=creator, timestamp=creation + 60 + 30 * k,
                base_amount=-500_000_000, quote_asset=asset,
                quote_amount=Decimal(amount) * -1, pool=pool, signature=s,
            )
        )
        txs.append(plain_tx(s, creation + 60 + 30 * k, "AddLiquidity", (creator, pool)))
    for j, victim in enumerate(victims):
        ts = creation + 900 + 600 * j
        s = sig(rng, f"LIQ{idx}buy{j}")
        transfers.append(TransferEvent(pool, victim, 10_000_000, ts))
        activities.append(
            DefiActivity(
                kind=SWAP, actor=victim, timestamp=ts, base_amount=10_000_000,
                quote_asset=asset, quote_amount=Decimal("-2"), pool=pool, signature=s,
            )
        )
        txs.append(swap_tx(s, ts, victim, pool))
    remove_ts = creation + 7200
    remove_sig = sig(rng, f"LIQ{idx}remove")
    activities.append(
        DefiActivity(
            kind=REMOVE_LIQUIDITY, actor=creator, timestamp=remove_ts,
            base_amount=440_000_000, quote_asset=asset,
            quote_amount=Decimal(removed), pool=pool, signature=remove_sig,
        )
    )
    transfers.append(TransferEvent(pool, creator, 440_000_000, remove_ts))
    txs.append(plain_tx(remove_sig, remove_ts, "RemoveLiquidity", (creator, pool)))
    # a couple of stragglers after the pull; far too few to look active
    txs.append(plain_tx(sig(rng, f"LIQ{idx}tail0"), remove_ts + 600, "Transfer"))
    txs.append(plain_tx(sig(rng, f"LIQ{idx}tail1"), remove_ts + 1500, "Transfer"))
    meta = TokenMeta(
        name=name, symbol=symbol, creator=creator, decimals=9,
        freeze_authority=None, mint_authority=None,
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=tuple(txs), defi_activities=tuple(activities), transfers=tuple(transfers),
    )


def build_pump_fixture(rng, idx, name, symbol, decline):
    """Holder crash engineered to an exact decline fraction.

    Start: 99 pre-allocated wallets + the pool = 100 holders. 10 victims
    buy in, 8 sell back (pool token balance ends below its start), and
    100*decline + 3 wallets consolidate into one aggregator, leaving
    exactly 100*(1 - decline) holders at the window end.
    """
    cents = round(decline * 100)
    assert 1 <= cents <= 96, "decline out of constructible range"
    creation = T0 + (20 + idx) * 86400
    creator = addr(rng, f"PMP{idx}creator")
    mint = addr(rng, f"PMP{idx}mint")
    pool = addr(rng, f"PMP{idx}pool")
    agg = addr(rng, f"PMP{idx}agg")
    wallets = [addr(rng, f"PMP{idx}w{i:02d}") for i in range(99)]
    victims = [addr(rng, f"PMP{idx}v{j}") for j in range(10)]

    transfers = [
        TransferEvent(mint, creator, 1_000_000, creation),
        TransferEvent(creator, pool, 1_000_000, creation),
    ]
    transfers += [TransferEvent(mint, w, 1_000, creation) for w in wallets]
    add_sig = sig(rng, f"PMP{idx}add")
    activities = [
        DefiActivity(
            kind=ADD_LIQUIDITY, actor=creator, timestamp=creation,
            base_amount=-1_000_000, quote_asset=SOL, quote_amount=Decimal("-5"),
            pool=pool, signature=add_sig,
        )
    ]
    txs = [
        plain_tx(sig(rng, f"PMP{idx}create"), creation, "InitializeMint", (mint,)),
        plain_tx(add_sig, creation, "AddLiquidity", (creator, pool)),
    ]
    for j, victim in enumerate(victims):  # the pump
        ts = creation + 600 * (j + 1)
        s = sig(rng, f"PMP{idx}buy{j}")
        transfers.append(TransferEvent(pool, victim, 5_000, ts))
        activities.append(
            DefiActivity(
                kind=SWAP, actor=victim, timestamp=ts, base_amount=5_000,
                quote_asset=SOL, quote_amount=Decimal("-0.5"), pool=pool, signature=s,
            )
        )
        txs.append(swap_tx(s, ts, victim, pool))
    for j in range(8):  # the dump: most victims bail, two hold the bag
        ts = creation + 7000 + 300 * (j + 1)
        s = sig(rng, f"PMP{idx}sell{j}")
        transfers.append(TransferEvent(victims[j], pool, 5_000, ts))
        activities.append(
            DefiActivity(
                kind=SWAP, actor=victims[j], timestamp=ts, base_amount=-5_000,
                quote_asset=SOL, quote_amount=Decimal("0.35"), pool=pool, signature=s,
            )
        )
        txs.append(swap_tx(s, ts, victims[j], pool))
    exits = 100 * cents // 100 + 3  # pre-allocated wallets consolidating out
    for i in range(exits):
        ts = creation + 10000 + 60 * i
        transfers.append(TransferEvent(wallets[i], agg, 1_000, ts))
        if i % 20 == 0:
            txs.append(plain_tx(sig(rng, f"PMP{idx}exit{i}"), ts, "Transfer", (wallets[i], agg)))
    meta = TokenMeta(
        name=name, symbol=symbol, creator=creator, decimals=6,
        freeze_authority=None, mint_authority=None,
        links=(("website", f"https://{symbol.lower()}{idx}.example"),),
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=tuple(txs), defi_activities=tuple(activities), transfers=tuple(transfers),
    )


def build_active_fixture(rng, idx, name, symbol):
    """Sustained-activity token: three days of hourly trading that ends
    busier than the prefilter cutoff, steady holder growth, liquidity
    added across days."""
    creation = T0 + (30 + idx) * 86400
    creator = addr(rng, f"LEG{idx}creator")
    mint = addr(rng, f"LEG{idx}mint")
    pool = addr(rng, f"LEG{idx}pool")

    transfers = [
        TransferEvent(mint, creator, 10_000_000_000, creation),
        TransferEvent(creator, pool, 6_000_000_000, creation),
    ]
    add_sig = sig(rng, f"LEG{idx}add")
    activities = [
        DefiActivity(
            kind=ADD_LIQUIDITY, actor=creator, timestamp=creation,
            base_amount=-6_000_000_000, quote_asset=SOL, quote_amount=Decimal("-50"),
            pool=pool, signature=add_sig,
        )
    ]
    txs = [
        plain_tx(sig(rng, f"LEG{idx}create"), creation, "InitializeMint", (mint,)),
        plain_tx(add_sig, creation, "AddLiquidity", (creator, pool)),
    ]
    n = 0
    for hour in range(72):
        per_hour = 2 if hour < 48 else 6
        for i in range(per_hour):
            ts = creation + hour * 3600 + i * (3600 // per_hour)
            s = sig(rng, f"LEG{idx}tx{n:04d}")
            n += 1
            txs.append(swap_tx(s, ts, creator, pool))
        if hour % 2 == 0:  # a buyer joins every other hour
            buyer = addr(rng, f"LEG{idx}buyer{hour:02d}")
            ts = creation + hour * 3600 + 1800
            transfers.append(TransferEvent(pool, buyer, 40_000_000, ts))
            activities.append(
                DefiActivity(
                    kind=SWAP, actor=buyer, timestamp=ts, base_amount=40_000_000,
                    quote_asset=SOL, quote_amount=Decimal("-1.2"), pool=pool,
                    signature=sig(rng, f"LEG{idx}swap{hour:02d}"),
                )
            )
    for day in (1, 2):  # liquidity keeps growing after day one
        ts = creation + day * 86400 + 7200
        activities.append(
            DefiActivity(
                kind=ADD_LIQUIDITY, actor=creator, timestamp=ts,
                base_amount=-500_000_000, quote_asset=SOL, quote_amount=Decimal("-20"),
                pool=pool, signature=sig(rng, f"LEG{idx}addd{day}"),
            )
        )
        transfers.append(TransferEvent(creator, pool, 500_000_000, ts))
    meta = TokenMeta(
        name=name, symbol=symbol, creator=creator, decimals=9,
        freeze_authority=None, mint_authority=None,
        links=(("website", f"https://{symbol.lower()}.example"),
               ("social", f"https://x.com/{symbol.lower()}")),
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=tuple(txs), defi_activities=tuple(activities), transfers=tuple(transfers),
    )


def build_quiet_fixture(rng, idx, name, symbol):
    """Low-activity token that matches no fraud rule: stillborn but honest."""
    creation = T0 + (40 + idx) * 86400
    creator = addr(rng, f"QT{idx}creator")
    mint = addr(rng, f"QT{idx}mint")
    pool = addr(rng, f"QT{idx}pool")
    friends = [addr(rng, f"QT{idx}friend{j}") for j in range(2)]

    transfers = [TransferEvent(mint, creator, 1_000_000, creation)]
    transfers += [
        TransferEvent(creator, friend, 100_000, creation + 300 * (j + 1))
        for j, friend in enumerate(friends)
    ]
    activities = [
        DefiActivity(
            kind=ADD_LIQUIDITY, actor=creator, timestamp=creation + 60,
            base_amount=-200_000, quote_asset=SOL, quote_amount=Decimal("-1"),
            pool=pool, signature=sig(rng, f"QT{idx}add"),
        )
    ]
    transfers.append(TransferEvent(creator, pool, 200_000, creation + 60))
    txs = [
        plain_tx(sig(rng, f"QT{idx}create"), creation, "InitializeMint", (mint,)),
        plain_tx(activities[0].signature, creation + 60, "AddLiquidity", (creator, pool)),
        plain_tx(sig(rng, f"QT{idx}t0"), creation + 300, "Transfer"),
        plain_tx(sig(rng, f"QT{idx}t1"), creation + 600, "Transfer"),
    ]
    meta = TokenMeta(
        name=name, symbol=symbol, creator=creator, decimals=9,
        freeze_authority=None, mint_authority=None,
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=tuple(txs), defi_activities=tuple(activities), transfers=tuple(transfers),
    )


# ---------------------------------------------------------------------------
# syndicate corpora: minimal liquidity-rug tokens wired to shared addresses


def build_syndicate_token(rng, tag, idx, creation, creator, lp_actor, profit: str, asset=SOL):
    mint = addr(rng, f"{tag}{idx:03d}mint")
    pool = addr(rng, f"{tag}{idx:03d}pool")
    victim = addr(rng, f"{tag}{idx:03d}victim")
    add_sig = sig(rng, f"{tag}{idx:03d}add")
    rem_sig = sig(rng, f"{tag}{idx:03d}rem")
    buy_sig = sig(rng, f"{tag}{idx:03d}buy")
    activities = (
        DefiActivity(
            kind=ADD_LIQUIDITY, actor=lp_actor, timestamp=creation + 60,
            base_amount=-900_000, quote_asset=asset, quote_amount=Decimal("-2"),
            pool=pool, signature=add_sig,
        ),
        DefiActivity(
            kind=SWAP, actor=victim, timestamp=creation + 1200, base_amount=50_000,
            quote_asset=asset, quote_amount=Decimal("-3.5"), pool=pool, signature=buy_sig,
        ),
        DefiActivity(
            kind=REMOVE_LIQUIDITY, actor=lp_actor, timestamp=creation + 3600,
            base_amount=850_000, quote_asset=asset, quote_amount=Decimal(profit),
            pool=pool, signature=rem_sig,
        ),
    )
    transfers = (
        TransferEvent(mint, creator, 1_000_000, creation),
        TransferEvent(creator, pool, 900_000, creation + 60),
        TransferEvent(pool, victim, 50_000, creation + 1200),
        TransferEvent(pool, creator, 850_000, creation + 3600),
    )
    txs = (
        plain_tx(sig(rng, f"{tag}{idx:03d}create"), creation, "InitializeMint", (mint,)),
        plain_tx(add_sig, creation + 60, "AddLiquidity", (lp_actor, pool)),
        swap_tx(buy_sig, creation + 1200, victim, pool),
        plain_tx(rem_sig, creation + 3600, "RemoveLiquidity", (lp_actor, pool)),
    )
    meta = TokenMeta(
        name=f"{tag.title()} Batch {idx}", symbol=f"{tag[:3].upper()}{idx}",
        creator=creator, decimals=6, freeze_authority=None, mint_authority=None,
    )
    return TokenRecord(
        mint_address=mint, meta=meta, creation_time=creation,
        transactions=txs, defi_activities=activities, transfers=transfers,
    )


def build_star_corpus(rng):
    sink = addr(rng, "STARsinkCENTRAL")
    records = []
    for i in range(28):
        creator = addr(rng, f"STARcre{i:03d}")
        records.append(
            build_syndicate_token(rng, "star", i, T0 + i * 7200, creator, sink, "5")
        )
    return records


def build_cluster_corpus(rng):
    members = [addr(rng, f"CLUm{i:02d}") for i in range(10)]
    records = []
    for i in range(45):
        creator = members[i % 10]
        lp = members[(i + 3) % 10]
        records.append(
            build_syndicate_token(rng, "cluster", i, T0 + i * 7200, creator, lp, "4.5")
        )
    return records


def build_single_corpus(rng):
    solo = addr(rng, "SOLOactor")
    return [
        build_syndicate_token(rng, "solo", i, T0 + i * 7200, solo, solo, "2.2")
        for i in range(60)
    ]


# ---------------------------------------------------------------------------
# profit corpus: hand-computable totals (see tests for the frozen numbers)


def build_profit_corpus(rng):
    records = []

    # token 1: creator A, +15 SOL, plus a swap that must not count
    creation = T0
    a = addr(rng, "PRF1addrA")
    mint = addr(rng, "PRF1mint")
    pool = addr(rng, "PRF1pool")
    activities = (
        DefiActivity(ADD_LIQUIDITY, a, creation + 60, -400_000, SOL, Decimal("-10"), pool,
                     sig(rng, "PRF1add")),
        DefiActivity(SWAP, a, creation + 900, -20_000, SOL, Decimal("2"), pool,
                     sig(rng, "PRF1swap")),
        DefiActivity(REMOVE_LIQUIDITY, a, creation + 3600, 380_000, SOL, Decimal("25"), pool,
                     sig(rng, "PRF1rem")),
    )
    transfers = (
        TransferEvent(mint, a, 500_000, creation),
        TransferEvent(a, pool, 400_000, creation + 60),
        TransferEvent(pool, a, 380_000, creation + 3600),
    )
    txs = (
        plain_tx(sig(rng, "PRF1create"), creation, "InitializeMint", (mint,)),
        plain_tx(activities[0].signature, creation + 60, "AddLiquidity"),
        swap_tx(activities[1].signature, creation + 900, a, pool),
        plain_tx(activities[2].signature, creation + 3600, "RemoveLiquidity"),
    )
    records.append(
        TokenRecord(
            mint_address=mint,
            meta=TokenMeta(name="Profit One", symbol="PRF1", creator=a, decimals=6),
            creation_time=creation, transactions=txs,
            defi_activities=activities, transfers=transfers,
        )
    )

    # token 2: creator B (+60.50 USDC) and pool deployer C (+30.25 USDC)
    creation = T0 + 86400
    b = addr(rng, "PRF2addrB")
    c = addr(rng, "PRF2addrC")
    mint = addr(rng, "PRF2mint")
    pool = addr(rng, "PRF2pool")
    activities = (
        DefiActivity(ADD_LIQUIDITY, c, creation + 30, -300_000, USDC, Decimal("-50"), pool,
                     sig(rng, "PRF2addC")),
        DefiActivity(ADD_LIQUIDITY, b, creation + 60, -600_000, USDC, Decimal("-100"), pool,
                     sig(rng, "PRF2addB")),
        DefiActivity(REMOVE_LIQUIDITY, c, creation + 3000, 280_000, USDC, Decimal("80.25"), pool,
                     sig(rng, "PRF2remC")),
        DefiActivity(REMOVE_LIQUIDITY, b, creation + 3600, 560_000, USDC, Decimal("160.50"), pool,
                     sig(rng, "PRF2remB")),
    )
    transfers = (
        TransferEvent(mint, b, 1_000_000, creation),
        TransferEvent(b, pool, 900_000, creation + 60),
        TransferEvent(pool, b, 840_000, creation + 3600),
    )
    txs = (
        plain_tx(sig(rng, "PRF2create"), creation, "InitializeMint", (mint,)),
        plain_tx(activities[0].signature, creation + 30, "AddLiquidity"),
        plain_tx(activities[1].signature, creation + 60, "AddLiquidity"),
        plain_tx(activities[2].signature, creation + 3000, "RemoveLiquidity"),
        plain_tx(activities[3].signature, creation + 3600, "RemoveLiquidity"),
    )
    records.append(
        TokenRecord(
            mint_address=mint,
            meta=TokenMeta(name="Profit Two", symbol="PRF2", creator=b, decimals=6),
            creation_time=creation, transactions=txs,
            defi_activities=activities, transfers=transfers,
        )
    )

    # token 3: creator E adds and never removes (-7 SOL, not profitable)
    creation = T0 + 2 * 86400
    e = addr(rng, "PRF3addrE")
    mint = addr(rng, "PRF3mint")
    pool = addr(rng, "PRF3pool")
    activities = (
        DefiActivity(ADD_LIQUIDITY, e, creation + 60, -250_000, SOL, Decimal("-7"), pool,
                     sig(rng, "PRF3add")),
    )
    transfers = (
        TransferEvent(mint, e, 300_000, creation),
        TransferEvent(e, pool, 250_000, creation + 60),
    )
    txs = (
        plain_tx(sig(rng, "PRF3create"), creation, "InitializeMint", (mint,)),
        plain_tx(activities[0].signature, creation + 60, "AddLiquidity"),
    )
    records.append(
        TokenRecord(
            mint_address=mint,
            meta=TokenMeta(name="Profit Three", symbol="PRF3", creator=e, decimals=6),
            creation_time=creation, transactions=txs,
            defi_activities=activities, transfers=transfers,
        )
    )
    return records


# ---------------------------------------------------------------------------


SUITE_PLAN = [
    # (builder, kwargs, label, kind)
    (build_freeze_fixture, dict(idx=1, name="ElonMuskTrumpHarris69Inu", symbol="ETH"),
     "rug_pull", "FreezeAbuse"),
    (build_freeze_fixture, dict(idx=2, name="Frozen Moon Doge", symbol="FMD",
                                with_liquidity=False), "rug_pull", "FreezeAbuse"),
    (build_freeze_fixture, dict(idx=3, name="Trump Freeze Agent", symbol="TFA"),
     "rug_pull", "FreezeAbuse"),
    (build_liquidity_rug_fixture, dict(idx=1, name="Pepe Yield AI", symbol="PYAI"),
     "rug_pull", "LiquidityManipulation"),
    (build_liquidity_rug_fixture, dict(idx=2, name="Moon Doge Agent", symbol="MDA",
                                       asset=USDC, adds=("100",), removed="180"),
     "rug_pull", "LiquidityManipulation"),
    (build_liquidity_rug_fixture, dict(idx=3, name="Trump AI Rocket", symbol="TAR",
                                       adds=("5", "3"), removed="20"),
     "rug_pull", "LiquidityManipulation"),
    (build_pump_fixture, dict(idx=1, name="USDTea", symbol="USDT", decline=0.80),
     "rug_pull", "PumpAndDump"),
    (build_pump_fixture, dict(idx=2, name="OFFICIAL TRUMP", symbol="TRUMP", decline=0.74),
     "rug_pull", "PumpAndDump"),
    (build_pump_fixture, dict(idx=3, name="Doge Agent AI", symbol="DGAI", decline=0.86),
     "rug_pull", "PumpAndDump"),
    (build_pump_fixture, dict(idx=4, name="Pepe Trump AI", symbol="PTAI", decline=0.90),
     "rug_pull", "PumpAndDump"),
    # gradual sellers under the default threshold: ground truth negative
    (build_pump_fixture, dict(idx=5, name="Gradual Moon One", symbol="GM1", decline=0.60),
     "legitimate", None),
    (build_pump_fixture, dict(idx=6, name="Gradual Moon Two", symbol="GM2", decline=0.66),
     "legitimate", None),
    (build_pump_fixture, dict(idx=7, name="Gradual Moon Three", symbol="GM3", decline=0.70),
     "legitimate", None),
    (build_active_fixture, dict(idx=1, name="Steady Finance", symbol="STDY"),
     "legitimate", None),
    (build_active_fixture, dict(idx=2, name="Orbit Utility", symbol="ORBU"),
     "legitimate", None),
    (build_active_fixture, dict(idx=3, name="Harbor Protocol", symbol="HBRP"),
     "legitimate", None),
    (build_active_fixture, dict(idx=4, name="Quarry Network", symbol="QRYN"),
     "legitimate", None),
    (build_active_fixture, dict(idx=5, name="Lattice Works", symbol="LTWK"),
     "legitimate", None),
    (build_quiet_fixture, dict(idx=1, name="Quiet Garden", symbol="QGDN"),
     "legitimate", None),
    (build_quiet_fixture, dict(idx=2, name="Paper Boat", symbol="PBOT"),
     "legitimate", None),
]

REFERENCES = [
    ("USDT", "Tether USD", "Es9vMFrzaCERmJfrF4H2FYD4KCoNkY11McCe8BenwNYB"),
    ("USDC", "USD Coin", "EPjFWdd5AufqSSqeM2qN1xzybapC8G4wEGGkZwyTDt1v"),
    ("SOL", "Solana", "So11111111111111111111111111111111111111112"),
    ("SOLANA", "Solana", ""),
    ("ETH", "Ethereum", ""),
    ("BTC", "Bitcoin", ""),
    ("TRUMP", "Official Trump", "6p6xgHyF7AeE6TZkSmFsko444wqoP15icUSqi2jfGiPN"),
    ("TIKTOK", "TikTok", ""),
    ("DEEP", "DeepSeek AI", ""),
    ("SORA", "Sora", ""),
    ("X", "X", ""),
]

PRICES = [("SOL", "150"), ("USDC", "1"), ("USDT", "1")]


def write_record(directory: Path, record: TokenRecord):
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{record.mint_address}.json").write_text(dump_token_record(record) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="fixtures", help="output directory")
    parser.add_argument("--seed", type=int, default=1337)
    args = parser.parse_args(argv)
    out = Path(args.out)
    rng = random.Random(args.seed)

    suite_dir = out / "suite"
    labels = []
    for builder, kwargs, label, kind in SUITE_PLAN:
        record = builder(rng, **kwargs)
        write_record(suite_dir, record)
        labels.append((record.mint_address, label, kind))
    with open(out / "suite_labels.csv", "w") as fh:
        fh.write("mint,label,kind\n")
        for mint, label, kind in labels:
            fh.write(f"{mint},{label},{kind or ''}\n")

    for name, corpus in (
        ("star", build_star_corpus(rng)),
        ("cluster", build_cluster_corpus(rng)),
        ("single", build_single_corpus(rng)),
    ):
        for record in corpus:
            write_record(out / "syndicates" / name, record)

    for record in build_profit_corpus(rng):
        write_record(out / "profits", record)

    with open(out / "prices.csv", "w") as fh:
        for asset, price in PRICES:
            fh.write(f"{asset},{price}\n")
    with open(out / "references.csv", "w") as fh:
        fh.write("# symbol,name,verified_mint\n")
        for symbol, name, mint in REFERENCES:
            fh.write(f"{symbol},{name},{mint}\n")

    total = len(labels) + 28 + 45 + 60 + 3
    print(f"wrote {total} fixtures under {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
