"""Detection rules against hand-built fixtures and independent oracles."""

import random
from dataclasses import replace
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    CREATION,
    liquidity_activity,
    make_record,
    make_tx,
    pump_oracle,
    random_holder_series,
    random_transfer_record,
    uniform_txs,
    holder_series_oracle,
)
from rugscan.chain import (
    ADD_LIQUIDITY,
    REMOVE_LIQUIDITY,
    USDC,
    DetectorParams,
    InstructionRecord,
    TransferEvent,
)
from rugscan.detector import (
    ACTIVE_TOKEN,
    FREEZE_ABUSE,
    FROZEN_LOG_MARKER,
    LIQUIDITY_MANIPULATION,
    NOT_RUG_PULL,
    PUMP_AND_DUMP,
    RUG_PULL,
    HolderSample,
    HolderSeries,
    InvalidWindow,
    NegativeBalance,
    build_holder_series,
    classify,
    creator_addresses,
    detect_freeze_abuse,
    detect_liquidity_manipulation,
    detect_pump_and_dump,
    liq_profit,
    prefilter,
    primary_pool,
    tx_rate,
)

PARAMS = DetectorParams()
DAY = 86400


# ---------------------------------------------------------------------------
# tx_rate / prefilter


def test_tx_rate_empty_window_is_zero():
    assert tx_rate([], (CREATION, CREATION + DAY)) == 0.0


def test_tx_rate_uniform_48_in_24h():
    txs = uniform_txs(CREATION, 48, DAY)
    assert tx_rate(txs, (CREATION, CREATION + DAY)) == 48 / 24  # == 2.0/hr


def test_tx_rate_half_open_window():
    txs = [make_tx("a", CREATION), make_tx("b", CREATION + DAY)]
    assert tx_rate(txs, (CREATION, CREATION + DAY)) == pytest.approx(1 / 24)


def test_tx_rate_invalid_window():
    with pytest.raises(InvalidWindow):
        tx_rate([], (CREATION, CREATION))


def test_prefilter_boundary_exactly_tau_active():
    # 120 txs in the trailing 24h window is exactly 5.0/hr: strict
    # inequality keeps the token active
    txs = uniform_txs(CREATION + 1000, 120, DAY - 1000)
    record = make_record(transactions=txs)
    candidate, rate = prefilter(record, PARAMS)
    assert rate == 5.0
    assert not candidate


def test_prefilter_one_less_is_candidate():
    txs = uniform_txs(CREATION + 1000, 119, DAY - 1000)
    candidate, rate = prefilter(make_record(transactions=txs), PARAMS)
    assert rate == pytest.approx(119 / 24)
    assert candidate


def test_prefilter_empty_history_is_candidate_at_zero():
    candidate, rate = prefilter(make_record(), PARAMS)
    assert candidate and rate == 0.0


def test_prefilter_rug_vs_legitimate_median_rates():
    # medians from the behavioral comparison: ~0.08/hr for rugs,
    # ~299/hr for live tokens; tau_active = 5 separates them cleanly
    rug = make_record(transactions=uniform_txs(CREATION, 2, DAY))  # 0.083/hr
    legit = make_record(transactions=uniform_txs(CREATION, 7179, DAY))  # 299.1/hr
    assert prefilter(rug, PARAMS) == (True, pytest.approx(2 / 24))
    assert prefilter(legit, PARAMS)[0] is False


def test_prefilter_window_anchored_at_newest_tx():
    # old burst outside the trailing window plus one fresh tx: only the
    # fresh one counts
    old = uniform_txs(CREATION, 200, 3600, prefix="old")
    fresh = [make_tx("fresh", CREATION + 10 * DAY)]
    candidate, rate = prefilter(make_record(transactions=old + fresh), PARAMS)
    assert candidate and rate == pytest.approx(1 / 24)


# ---------------------------------------------------------------------------
# freeze authority abuse


def freeze_tx(signature="frz", ts=CREATION + 100, with_instruction=True, with_log=True):
    instructions = (
        [InstructionRecord(program="token", name="FreezeAccount", accounts=("victim",))]
        if with_instruction
        else [InstructionRecord(program="token", name="Transfer")]
    )
    logs = ["Program log: Instruction: FreezeAccount"]
    if with_log:
        logs.append("Program log: Account is frozen")
    return make_tx(signature, ts, instructions=instructions, log_lines=logs)


def test_freeze_abuse_flagged():
    record = make_record(freeze_authority="CREATORaddr", transactions=[freeze_tx()])
    evidence = detect_freeze_abuse(record)
    assert evidence is not None
    assert evidence.trigger_signatures == ("frz",)


def test_freeze_rule_conjunction_mutations():
    # removing any one of the three conditions un-flags the fixture
    flagged = make_record(freeze_authority="CREATORaddr", transactions=[freeze_tx()])
    assert detect_freeze_abuse(flagged) is not None

    no_authority = make_record(freeze_authority=None, transactions=[freeze_tx()])
    assert detect_freeze_abuse(no_authority) is None

    no_instruction = make_record(
        freeze_authority="CREATORaddr", transactions=[freeze_tx(with_instruction=False)]
    )
    assert detect_freeze_abuse(no_instruction) is None

    no_log = make_record(
        freeze_authority="CREATORaddr", transactions=[freeze_tx(with_log=False)]
    )
    assert detect_freeze_abuse(no_log) is None


def test_freeze_log_match_is_case_sensitive():
    tx = make_tx(
        "frz",
        CREATION,
        instructions=[InstructionRecord(program="token", name="FreezeAccount")],
        log_lines=["program log: ACCOUNT IS FROZEN"],
    )
    record = make_record(freeze_authority="CREATORaddr", transactions=[tx])
    assert FROZEN_LOG_MARKER not in tx.log_lines[0]
    assert detect_freeze_abuse(record) is None


# ---------------------------------------------------------------------------
# creator addresses and liquidity profit


def test_creator_addresses_includes_first_lp_deployer():
    record = make_record(
        creator="X",
        defi_activities=[
            liquidity_activity(ADD_LIQUIDITY, "Y", CREATION + 10, "-5"),
            liquidity_activity(ADD_LIQUIDITY, "Z", CREATION + 20, "-5"),
        ],
    )
    assert creator_addresses(record) == {"X", "Y"}


def test_creator_addresses_without_liquidity():
    assert creator_addresses(make_record(creator="X")) == {"X"}


def test_creator_addresses_dedupes_creator_lp():
    record = make_record(
        creator="X",
        defi_activities=[liquidity_activity(ADD_LIQUIDITY, "X", CREATION, "-5")],
    )
    assert creator_addresses(record) == {"X"}


def test_liq_profit_add_then_remove():
    record = make_record(
        defi_activities=[
            liquidity_activity(ADD_LIQUIDITY, "A", CREATION, "-10"),
            liquidity_activity(REMOVE_LIQUIDITY, "A", CREATION + 100, "25"),
        ]
    )
    profit = liq_profit(record, "A")
    assert profit.asset == "SOL"
    assert profit.net == Decimal("15")


def test_liq_profit_add_never_removed():
    record = make_record(
        defi_activities=[liquidity_activity(ADD_LIQUIDITY, "A", CREATION, "-10")]
    )
    assert liq_profit(record, "A").net == Decimal("-10")


def test_liq_profit_no_activity_is_zero():
    profit = liq_profit(make_record(), "A")
    assert profit.net == Decimal(0) and profit.per_asset == {}


def test_liq_profit_mixed_assets_returns_breakdown():
    record = make_record(
        defi_activities=[
            liquidity_activity(ADD_LIQUIDITY, "A", CREATION, "-10"),
            liquidity_activity(REMOVE_LIQUIDITY, "A", CREATION + 50, "25", asset=USDC),
        ]
    )
    profit = liq_profit(record, "A")
    assert profit.is_mixed and profit.net is None
    assert profit.per_asset == {"SOL": Decimal("-10"), "USDC": Decimal("25")}


def liquidity_rug_record(post_remove_txs=0, actor="CREATORaddr"):
    activities = [
        liquidity_activity(ADD_LIQUIDITY, actor, CREATION + 60, "-10", signature="sAdd"),
        liquidity_activity(REMOVE_LIQUIDITY, actor, CREATION + 7200, "25", signature="sRem"),
    ]
    txs = [make_tx("sAdd", CREATION + 60), make_tx("sRem", CREATION + 7200)]
    txs += uniform_txs(CREATION + 7300, post_remove_txs, 3600, prefix="after") if post_remove_txs else []
    return make_record(transactions=txs, defi_activities=activities)


def test_liquidity_manipulation_flagged_when_market_dies():
    evidence = detect_liquidity_manipulation(liquidity_rug_record(), PARAMS)
    assert evidence is not None
    assert evidence.measured_values["liq_profit"] == 15.0
    assert "sRem" in evidence.trigger_signatures


def test_liquidity_manipulation_not_flagged_when_trading_continues():
    record = liquidity_rug_record(post_remove_txs=300)  # 300 txs in the hour after
    assert detect_liquidity_manipulation(record, PARAMS) is None


def test_liquidity_manipulation_ignores_non_creator_whale():
    # the whale exits at profit but is neither the creator nor the pool
    # deployer; the creator's own position is a loss
    activities = [
        liquidity_activity(ADD_LIQUIDITY, "CREATORaddr", CREATION + 60, "-10"),
        liquidity_activity(REMOVE_LIQUIDITY, "WHALEaddr", CREATION + 7200, "25"),
    ]
    record = make_record(
        transactions=[make_tx("sAdd", CREATION + 60), make_tx("sRem", CREATION + 7200)],
        defi_activities=activities,
    )
    assert detect_liquidity_manipulation(record, PARAMS) is None


# ---------------------------------------------------------------------------
# holder series


def test_holder_series_hand_replay():
    record = make_record(
        transfers=[
            TransferEvent("MINTaddr", "A", 100, CREATION + 10),
            TransferEvent("A", "B", 40, CREATION + 20),
        ]
    )
    series = build_holder_series(record)
    assert [(s.timestamp, s.holders) for s in series.samples] == [
        (CREATION, 0),
        (CREATION + 10, 1),
        (CREATION + 20, 2),
    ]


def test_holder_series_symmetric_transfers_return_to_one():
    record = make_record(
        transfers=[
            TransferEvent("MINTaddr", "A", 100, CREATION),
            TransferEvent("A", "B", 40, CREATION + 10),
            TransferEvent("B", "A", 40, CREATION + 20),
        ]
    )
    series = build_holder_series(record)
    assert [s.holders for s in series.samples] == [1, 2, 1]


def test_holder_series_overspend_raises():
    record = make_record(
        transfers=[
            TransferEvent("MINTaddr", "A", 10, CREATION),
            TransferEvent("A", "B", 11, CREATION + 5),
        ]
    )
    with pytest.raises(NegativeBalance):
        build_holder_series(record)


def test_holder_series_tracks_pool_balance():
    record = make_record(
        defi_activities=[liquidity_activity(ADD_LIQUIDITY, "A", CREATION, "-1", pool="PL")],
        transfers=[
            TransferEvent("MINTaddr", "PL", 100, CREATION),
            TransferEvent("PL", "B", 30, CREATION + 10),
        ],
    )
    series = build_holder_series(record)
    assert [s.pool_balance for s in series.samples] == [100, 70]


def test_holder_series_matches_recount_oracle_on_random_fixtures():
    rng = random.Random(2024)
    for _ in range(30):
        record = random_transfer_record(rng, max_events=50)
        series = build_holder_series(record)
        assert [(s.timestamp, s.holders, s.pool_balance) for s in series.samples] == (
            holder_series_oracle(record)
        )


def test_primary_pool_prefers_largest_cumulative_add():
    record = make_record(
        defi_activities=[
            liquidity_activity(ADD_LIQUIDITY, "A", CREATION, "-1", pool="SMALL", base=100),
            liquidity_activity(ADD_LIQUIDITY, "A", CREATION + 10, "-1", pool="BIG", base=900),
        ]
    )
    assert primary_pool(record) == "BIG"
    assert primary_pool(make_record()) is None


# ---------------------------------------------------------------------------
# pump and dump


def series_of(points) -> HolderSeries:
    return HolderSeries(
        samples=tuple(
            HolderSample(CREATION + i * 600, holders, pool)
            for i, (holders, pool) in enumerate(points)
        )
    )


def test_pump_flagged_at_080_decline():
    series = series_of([(100, 1000), (90, 900), (50, 800), (20, 700)])
    evidence = detect_pump_and_dump(series, PARAMS)
    assert evidence is not None
    assert evidence.measured_values["holder_decline_fraction"] == pytest.approx(0.80)
    # earliest qualifying t is the second sample
    assert evidence.trigger_interval[0] == CREATION + 600
    assert pump_oracle(series, PARAMS) == CREATION + 600


def test_pump_not_flagged_below_threshold():
    series = series_of([(100, 1000), (90, 900), (80, 800), (60, 700)])
    assert detect_pump_and_dump(series, PARAMS) is None
    assert pump_oracle(series, PARAMS) is None


def test_pump_rebound_needs_later_witness():
    series = series_of([(100, 1000), (120, 900), (20, 800)])
    evidence = detect_pump_and_dump(series, PARAMS)
    assert evidence is not None
    assert evidence.trigger_interval[0] == CREATION + 1200  # after the rebound
    assert pump_oracle(series, PARAMS) == CREATION + 1200


def test_pump_zero_start_holders_never_flagged():
    series = series_of([(0, 1000), (0, 0)])
    assert detect_pump_and_dump(series, PARAMS) is None


def test_pump_requires_pool_balance_decline():
    # holders crash but pool balance never drops below its start
    series = series_of([(100, 1000), (20, 1000)])
    assert detect_pump_and_dump(series, PARAMS) is None
    assert pump_oracle(series, PARAMS) is None


def test_pump_ignores_samples_outside_window():
    inside = [HolderSample(CREATION, 100, 1000), HolderSample(CREATION + 3600, 95, 900)]
    outside = [HolderSample(CREATION + 30 * 3600, 10, 100)]  # the crash happens too late
    series = HolderSeries(samples=tuple(inside + outside))
    assert detect_pump_and_dump(series, PARAMS) is None
    assert pump_oracle(series, PARAMS) is None


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_pump_agrees_with_exhaustive_oracle(seed):
    series = random_holder_series(random.Random(seed), max_samples=60)
    evidence = detect_pump_and_dump(series, PARAMS)
    expected_t = pump_oracle(series, PARAMS)
    if expected_t is None:
        assert evidence is None
    else:
        assert evidence is not None
        assert evidence.trigger_interval[0] == expected_t


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=1, max_value=100),
    st.integers(min_value=1, max_value=100),
)
def test_pump_monotone_in_tau_down(seed, a_cents, b_cents):
    # anything flagged at the higher threshold stays flagged at the lower
    low, high = sorted((a_cents / 100, b_cents / 100))
    series = random_holder_series(random.Random(seed), max_samples=40)
    flagged_high = detect_pump_and_dump(series, replace(PARAMS, tau_down=high)) is not None
    flagged_low = detect_pump_and_dump(series, replace(PARAMS, tau_down=low)) is not None
    assert not flagged_high or flagged_low


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=0, max_value=200),
    st.floats(min_value=0.5, max_value=20, allow_nan=False),
    st.floats(min_value=0.5, max_value=20, allow_nan=False),
)
def test_candidate_set_monotone_in_tau_active(n_txs, a, b):
    low, high = sorted((a, b))
    record = make_record(transactions=uniform_txs(CREATION, n_txs, DAY)) if n_txs else make_record()
    at_low = prefilter(record, replace(PARAMS, tau_active=low))[0]
    at_high = prefilter(record, replace(PARAMS, tau_active=high))[0]
    assert not at_low or at_high


# ---------------------------------------------------------------------------
# classify


def test_classify_active_token_short_circuits():
    record = make_record(
        transactions=uniform_txs(CREATION, 200, DAY),
        freeze_authority="CREATORaddr",
    )
    verdict = classify(record, PARAMS)
    assert verdict.outcome == ACTIVE_TOKEN
    assert verdict.evidence.measured_values["rate_24h"] > 5


def test_classify_priority_freeze_beats_dump():
    # 30 pre-allocated wallets: the consolidation crash drops 31 holders
    # to 3, a 0.90 decline, so the dump rule matches on its own
    transfers = [TransferEvent("MINTaddr", f"w{i}", 100, CREATION) for i in range(30)]
    transfers += [TransferEvent(f"w{i}", "AGG", 100, CREATION + 1000 + i) for i in range(30)]
    transfers.insert(0, TransferEvent("MINTaddr", "PL", 500, CREATION))
    transfers.append(TransferEvent("PL", "BUYER", 50, CREATION + 500))
    record = make_record(
        freeze_authority="CREATORaddr",
        transactions=[freeze_tx()],
        defi_activities=[liquidity_activity(ADD_LIQUIDITY, "CREATORaddr", CREATION, "-1", pool="PL")],
        transfers=transfers,
    )
    # the dump alone would flag it
    assert detect_pump_and_dump(build_holder_series(record), PARAMS) is not None
    verdict = classify(record, PARAMS)
    assert verdict.outcome == RUG_PULL and verdict.kind == FREEZE_ABUSE


def test_classify_low_activity_no_rule_is_not_rug_pull():
    record = make_record(transactions=uniform_txs(CREATION, 3, DAY))
    verdict = classify(record, PARAMS)
    assert verdict.outcome == NOT_RUG_PULL
    assert verdict.kind is None


def test_classify_is_pure_and_deterministic():
    record = liquidity_rug_record()
    first = classify(record, PARAMS)
    second = classify(record, PARAMS)
    assert first == second
    assert first.kind == LIQUIDITY_MANIPULATION


def test_evidence_signatures_exist_in_record():
    """Every trigger signature in a rug verdict points at an event the
    record actually contains."""
    from conftest import SUITE_DIR
    from rugscan.ingest import SourceClient, fixture_source

    client = SourceClient(fixture_source(SUITE_DIR))
    flagged = 0
    for path in sorted(SUITE_DIR.glob("*.json")):
        record = client.fetch_token_bundle(path.stem)
        verdict = classify(record, PARAMS)
        if not verdict.is_rug_pull:
            continue
        flagged += 1
        known = {tx.signature for tx in record.transactions}
        known |= {a.signature for a in record.defi_activities if a.signature}
        assert set(verdict.evidence.trigger_signatures) <= known
    assert flagged == 10


def test_classify_pump_kind():
    transfers = [TransferEvent("MINTaddr", "PL", 1000, CREATION)]
    transfers += [TransferEvent("MINTaddr", f"w{i}", 10, CREATION) for i in range(30)]
    transfers.append(TransferEvent("PL", "BUYER", 100, CREATION + 600))
    transfers += [TransferEvent(f"w{i}", "AGG", 10, CREATION + 1200 + 60 * i) for i in range(30)]
    record = make_record(
        defi_activities=[liquidity_activity(ADD_LIQUIDITY, "CREATORaddr", CREATION, "-1", pool="PL")],
        transfers=transfers,
        transactions=[make_tx("t0", CREATION)],
    )
    verdict = classify(record, PARAMS)
    assert (verdict.outcome, verdict.kind) == (RUG_PULL, PUMP_AND_DUMP)
    assert verdict.evidence.measured_values["holder_decline_fraction"] >= PARAMS.tau_down
