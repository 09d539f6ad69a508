"""Domain type construction, validation, and serialization round trips."""

from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CREATION, make_meta, make_record, make_tx
from rugscan.chain import (
    ADD_LIQUIDITY,
    REMOVE_LIQUIDITY,
    SWAP,
    DefiActivity,
    DetectorParams,
    InstructionRecord,
    TokenMeta,
    TransferEvent,
    quote_decimal,
)
from rugscan.ingest import dump_token_record, load_token_record


def test_constructor_sorts_unsorted_events():
    txs = [make_tx("s2", CREATION + 200), make_tx("s1", CREATION + 100)]
    transfers = [
        TransferEvent("MINTaddr", "A", 10, CREATION + 500),
        TransferEvent("MINTaddr", "B", 10, CREATION + 50),
    ]
    record = make_record(transactions=txs, transfers=transfers)
    assert [t.signature for t in record.transactions] == ["s1", "s2"]
    assert [t.timestamp for t in record.transfers] == [CREATION + 50, CREATION + 500]


def test_event_before_creation_rejected():
    with pytest.raises(ValueError, match="predates creation"):
        make_record(transactions=[make_tx("s1", CREATION - 1)])


def test_duplicate_signature_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        make_record(transactions=[make_tx("s1", CREATION), make_tx("s1", CREATION + 5)])


def test_transfer_validation():
    with pytest.raises(ValueError):
        TransferEvent("A", "A", 10, CREATION)
    with pytest.raises(ValueError):
        TransferEvent("A", "B", 0, CREATION)


def test_meta_validation():
    with pytest.raises(ValueError):
        make_meta(symbol="   ")
    with pytest.raises(ValueError):
        make_meta(decimals=19)
    with pytest.raises(ValueError):
        make_meta(decimals=-1)


def test_instruction_name_required():
    with pytest.raises(ValueError):
        InstructionRecord(program="prog", name="")


def test_balance_delta_needs_mint():
    with pytest.raises(ValueError, match="empty mint"):
        make_tx("s1", CREATION, deltas=[("owner", "", 5)])


def test_activity_sign_convention():
    common = dict(actor="A", timestamp=CREATION, base_amount=1, quote_asset="SOL", pool="P")
    with pytest.raises(ValueError):
        DefiActivity(kind=ADD_LIQUIDITY, quote_amount=Decimal("1"), **common)
    with pytest.raises(ValueError):
        DefiActivity(kind=REMOVE_LIQUIDITY, quote_amount=Decimal("-1"), **common)
    with pytest.raises(ValueError):
        DefiActivity(kind="Stake", quote_amount=Decimal("0"), **common)
    # swaps may go either way
    DefiActivity(kind=SWAP, quote_amount=Decimal("-3"), **common)
    DefiActivity(kind=SWAP, quote_amount=Decimal("3"), **common)


def test_detector_params_validation():
    DetectorParams()  # defaults are valid
    with pytest.raises(ValueError):
        DetectorParams(tau_active=0)
    with pytest.raises(ValueError):
        DetectorParams(tau_down=0)
    with pytest.raises(ValueError):
        DetectorParams(tau_down=1.001)
    with pytest.raises(ValueError):
        DetectorParams(detection_window_hours=0)


def test_quote_amounts_are_fixed_point():
    act = DefiActivity(
        kind=REMOVE_LIQUIDITY, actor="A", timestamp=CREATION, base_amount=1,
        quote_asset="SOL", quote_amount=Decimal("1.5"), pool="P",
    )
    assert str(act.quote_amount) == "1.500000000"
    assert quote_decimal("0.1") + quote_decimal("0.2") == quote_decimal("0.3")


def test_last_event_time():
    record = make_record(
        transactions=[make_tx("s1", CREATION + 100)],
        transfers=[TransferEvent("MINTaddr", "A", 1, CREATION + 900)],
    )
    assert record.last_event_time() == CREATION + 900
    assert make_record().last_event_time() == CREATION


# ---------------------------------------------------------------------------
# round-trip property


_addr = st.text(alphabet="ABCDEFGHJKLMNPQRSTUVWXYZ123456789", min_size=4, max_size=12)
_quote = st.decimals(
    min_value=Decimal("0"), max_value=Decimal("1e6"), allow_nan=False, places=4
)


@st.composite
def token_records(draw):
    mint = draw(_addr.map(lambda a: "MINT" + a))
    creation = draw(st.integers(min_value=1_600_000_000, max_value=1_800_000_000))
    addrs = draw(st.lists(_addr, min_size=2, max_size=6, unique=True))
    meta = TokenMeta(
        name=draw(st.text(min_size=0, max_size=24)),
        symbol=draw(st.text(alphabet="ABCXYZ", min_size=1, max_size=8)),
        creator=addrs[0],
        decimals=draw(st.integers(min_value=0, max_value=18)),
        freeze_authority=draw(st.sampled_from([None, addrs[0]])),
        links=tuple(
            draw(
                st.lists(
                    st.tuples(st.sampled_from(["website", "social"]), _addr),
                    max_size=2,
                )
            )
        ),
    )
    n_tx = draw(st.integers(min_value=0, max_value=5))
    txs = [
        make_tx(
            f"sig{i}",
            creation + draw(st.integers(min_value=0, max_value=10**6)),
            instructions=[InstructionRecord(program="prog", name=draw(_addr))],
            log_lines=draw(st.lists(st.text(max_size=30), max_size=3)),
            deltas=[(addrs[0], mint, draw(st.integers(-10**12, 10**12)))],
        )
        for i in range(n_tx)
    ]
    kinds = draw(st.lists(st.sampled_from([ADD_LIQUIDITY, REMOVE_LIQUIDITY, SWAP]), max_size=4))
    acts = []
    for i, kind in enumerate(kinds):
        amount = draw(_quote)
        if kind == ADD_LIQUIDITY:
            amount = -amount
        acts.append(
            DefiActivity(
                kind=kind,
                actor=draw(st.sampled_from(addrs)),
                timestamp=creation + draw(st.integers(min_value=0, max_value=10**6)),
                base_amount=draw(st.integers(-10**9, 10**9)),
                quote_asset=draw(st.sampled_from(["SOL", "USDC", "USDT", "BONK"])),
                quote_amount=amount,
                pool=draw(st.sampled_from(addrs)),
                signature=draw(st.sampled_from([None, f"actsig{i}"])),
            )
        )
    pairs = [(a, b) for a in addrs for b in addrs if a != b]
    transfers = [
        TransferEvent(
            *draw(st.sampled_from(pairs)),
            amount=draw(st.integers(min_value=1, max_value=10**12)),
            timestamp=creation + draw(st.integers(min_value=0, max_value=10**6)),
        )
        for _ in range(draw(st.integers(min_value=0, max_value=6)))
    ]
    return make_record(
        mint=mint,
        creation=creation,
        transactions=txs,
        defi_activities=acts,
        transfers=transfers,
        **{f: getattr(meta, f) for f in
           ("name", "symbol", "creator", "decimals", "freeze_authority", "links")},
    )


@settings(max_examples=60, deadline=None)
@given(token_records())
def test_serialization_round_trip(record):
    text = dump_token_record(record)
    again = load_token_record(text)
    assert again == record
    assert dump_token_record(again) == text
