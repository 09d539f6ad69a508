"""Data acquisition: live endpoints, offline fixtures, and a replay cache.

Every fetched token bundle is persisted to the cache before detection reads
it, so a run can be replayed bit-for-bit with the network gone. The fixture
JSON schema doubles as the cache format.

Fixture schema (version 1), one file per mint named ``<mint>.json``::

    {
      "schema_version": 1,
      "mint": "...",
      "creation_time": 1750000000,
      "meta": {"name", "symbol", "creator", "decimals",
               "freeze_authority", "mint_authority", "links": [[kind, url]]},
      "transactions": [{"signature", "timestamp", "instructions":
                        [{"program", "name", "accounts"}],
                        "log_lines": [...],
                        "token_balance_deltas": [[owner, mint, "delta"]]}],
      "defi_activities": [{"kind", "actor", "timestamp", "base_amount",
                           "quote_asset", "quote_amount", "pool", "signature"}],
      "transfers": [{"from", "to", "amount", "timestamp"}]
    }

Timestamps are integer Unix seconds; raw token amounts are strings of
integers and quote amounts strings of fixed-point decimals, both to avoid
precision loss in transit.

Environment variables: RUGSCAN_RPC_URL, RUGSCAN_EXPLORER_URL,
RUGSCAN_EXPLORER_KEY, RUGSCAN_CACHE_DIR.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import requests

from .chain import (
    DefiActivity,
    InstructionRecord,
    TokenMeta,
    TokenRecord,
    TransactionRecord,
    TransferEvent,
    quote_decimal,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Mirrors the upstream page size for signature listings.
SIGNATURE_PAGE_SIZE = 1000
EXPLORER_PAGE_SIZE = 100

RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 0.5  # seconds, doubled per attempt

# Explorer REST paths. Overridable per source to absorb upstream drift;
# the response adapters below are the only code that reads the payloads.
DEFAULT_EXPLORER_PATHS = {
    "meta": "/token/meta",
    "market": "/token/market",
    "defi": "/token/defi-activities",
    "transfers": "/token/transfer",
    "transactions": "/token/transactions",
}

SOURCE_RPC = "rpc"
SOURCE_EXPLORER = "explorer"
SOURCE_FIXTURE = "fixture"


class IngestError(Exception):
    """Base class for acquisition failures."""


class EndpointUnavailable(IngestError):
    """Endpoint unreachable or persistently erroring; retryable."""


class UnknownAddress(IngestError):
    """Live endpoint does not know the address."""


class NotFound(IngestError):
    """Requested object does not exist at the source."""


class ParseError(IngestError):
    """Malformed payload. Retains the raw payload for debugging."""

    def __init__(self, message: str, raw=None):
        super().__init__(message)
        self.raw = raw


class PartialData(IngestError):
    """Some sections of a bundle could not be fetched."""

    def __init__(self, mint: str, missing: list[str]):
        super().__init__(f"incomplete bundle for {mint}: missing {', '.join(missing)}")
        self.mint = mint
        self.missing = missing


class CacheError(IngestError):
    """Cache read or write failed."""


@dataclass(frozen=True)
class DataSource:
    """Where token data comes from: a JSON-RPC node, an explorer REST API,
    or a fixture directory. Exactly one kind per source."""

    kind: str
    endpoint_url: str = ""
    api_key: str = ""
    directory: str = ""
    rate_limit: float = 10.0  # max requests per second for live kinds
    explorer_paths: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in (SOURCE_RPC, SOURCE_EXPLORER, SOURCE_FIXTURE):
            raise ValueError(f"unknown source kind: {self.kind!r}")
        if self.kind == SOURCE_FIXTURE and not self.directory:
            raise ValueError("fixture source needs a directory")
        if self.kind != SOURCE_FIXTURE:
            if not self.endpoint_url:
                raise ValueError(f"{self.kind} source needs an endpoint_url")
            if self.rate_limit <= 0:
                raise ValueError("rate_limit must be > 0 for live sources")

    def path_for(self, section: str) -> str:
        overrides = dict(self.explorer_paths)
        return overrides.get(section, DEFAULT_EXPLORER_PATHS[section])

    def describe(self) -> str:
        if self.kind == SOURCE_FIXTURE:
            return f"fixture:{self.directory}"
        return f"{self.kind}:{self.endpoint_url}"


def fixture_source(directory) -> DataSource:
    return DataSource(kind=SOURCE_FIXTURE, directory=str(directory))


def rpc_source(endpoint_url: str, rate_limit: float = 10.0) -> DataSource:
    return DataSource(kind=SOURCE_RPC, endpoint_url=endpoint_url, rate_limit=rate_limit)


def explorer_source(endpoint_url: str, api_key: str = "", rate_limit: float = 10.0) -> DataSource:
    return DataSource(
        kind=SOURCE_EXPLORER, endpoint_url=endpoint_url, api_key=api_key, rate_limit=rate_limit
    )


# ---------------------------------------------------------------------------
# serialization (fixture schema == cache format)


def token_record_to_dict(record: TokenRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mint": record.mint_address,
        "creation_time": record.creation_time,
        "meta": {
            "name": record.meta.name,
            "symbol": record.meta.symbol,
            "creator": record.meta.creator,
            "decimals": record.meta.decimals,
            "freeze_authority": record.meta.freeze_authority,
            "mint_authority": record.meta.mint_authority,
            "links": [list(l) for l in record.meta.links],
        },
        "transactions": [
            {
                "signature": tx.signature,
                "timestamp": tx.timestamp,
                "instructions": [
                    {"program": ins.program, "name": ins.name, "accounts": list(ins.accounts)}
                    for ins in tx.instructions
                ],
                "log_lines": list(tx.log_lines),
                "token_balance_deltas": [
                    [owner, mint, str(delta)] for owner, mint, delta in tx.token_balance_deltas
                ],
            }
            for tx in record.transactions
        ],
        "defi_activities": [
            {
                "kind": act.kind,
                "actor": act.actor,
                "timestamp": act.timestamp,
                "base_amount": str(act.base_amount),
                "quote_asset": act.quote_asset,
                "quote_amount": str(act.quote_amount),
                "pool": act.pool,
                "signature": act.signature,
            }
            for act in record.defi_activities
        ],
        "transfers": [
            {
                "from": t.from_addr,
                "to": t.to_addr,
                "amount": str(t.amount),
                "timestamp": t.timestamp,
            }
            for t in record.transfers
        ],
    }


def token_record_from_dict(payload: dict) -> TokenRecord:
    try:
        version = payload["schema_version"]
        if version != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema_version {version}", raw=payload)
        meta_d = payload["meta"]
        meta = TokenMeta(
            name=meta_d["name"],
            symbol=meta_d["symbol"],
            creator=meta_d["creator"],
            decimals=int(meta_d["decimals"]),
            freeze_authority=meta_d.get("freeze_authority"),
            mint_authority=meta_d.get("mint_authority"),
            links=tuple((k, u) for k, u in meta_d.get("links", [])),
        )
        transactions = tuple(
            TransactionRecord(
                signature=tx["signature"],
                timestamp=int(tx["timestamp"]),
                instructions=tuple(
                    InstructionRecord(
                        program=ins["program"],
                        name=ins["name"],
                        accounts=tuple(ins.get("accounts", [])),
                    )
                    for ins in tx["instructions"]
                ),
                log_lines=tuple(tx["log_lines"]),
                token_balance_deltas=tuple(
                    (owner, mint, int(delta)) for owner, mint, delta in tx["token_balance_deltas"]
                ),
            )
            for tx in payload["transactions"]
        )
        activities = tuple(
            DefiActivity(
                kind=act["kind"],
                actor=act["actor"],
                timestamp=int(act["timestamp"]),
                base_amount=int(act["base_amount"]),
                quote_asset=act["quote_asset"],
                quote_amount=quote_decimal(act["quote_amount"]),
                pool=act["pool"],
                signature=act.get("signature"),
            )
            for act in payload["defi_activities"]
        )
        transfers = tuple(
            TransferEvent(
                from_addr=t["from"],
                to_addr=t["to"],
                amount=int(t["amount"]),
                timestamp=int(t["timestamp"]),
            )
            for t in payload["transfers"]
        )
        return TokenRecord(
            mint_address=payload["mint"],
            meta=meta,
            creation_time=int(payload["creation_time"]),
            transactions=transactions,
            defi_activities=activities,
            transfers=transfers,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed token record: {exc}", raw=payload) from exc


def dump_token_record(record: TokenRecord) -> str:
    """Canonical serialized form; identical records give identical bytes."""
    return json.dumps(token_record_to_dict(record), sort_keys=True, separators=(",", ":"))


def load_token_record(text: str) -> TokenRecord:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", raw=text) from exc
    return token_record_from_dict(payload)


# ---------------------------------------------------------------------------
# cache


class BundleCache:
    """Content-addressed token bundle store: one file per (mint, schema)."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def _path(self, mint: str) -> Path:
        return self.directory / f"{mint}.v{SCHEMA_VERSION}.json"

    def put(self, record: TokenRecord) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            target = self._path(record.mint_address)
            tmp = target.with_suffix(".tmp")
            tmp.write_text(dump_token_record(record))
            os.replace(tmp, target)  # atomic on POSIX
        except OSError as exc:
            raise CacheError(f"cache write failed: {exc}") from exc

    def get(self, mint: str) -> TokenRecord | None:
        path = self._path(mint)
        try:
            text = path.read_text()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise CacheError(f"cache read failed: {exc}") from exc
        return load_token_record(text)


# ---------------------------------------------------------------------------
# rate limiting and transport


class RateLimiter:
    """Thread-safe sliding-window limiter: at most `per_second` acquisitions
    in any 1-second window."""

    def __init__(self, per_second: float, clock=time.monotonic, sleep=time.sleep):
        self.per_second = per_second
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._stamps = deque()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                while self._stamps and self._stamps[0] <= now - 1.0:
                    self._stamps.popleft()
                if len(self._stamps) < self.per_second:
                    self._stamps.append(now)
                    return
                wait = self._stamps[0] + 1.0 - now
            self._sleep(max(wait, 0.0))


def _requests_transport(session: requests.Session):
    def transport(method: str, url: str, *, params=None, json_body=None, headers=None, timeout=30):
        resp = session.request(
            method, url, params=params, json=json_body, headers=headers, timeout=timeout
        )
        try:
            body = resp.json()
        except ValueError:
            body = None
        return resp.status_code, body

    return transport


# ---------------------------------------------------------------------------
# client


class SourceClient:
    """Fetches token data from one source, with retry, rate limiting and a
    write-through cache.

    For live detection the explorer provides meta, market, defi activities
    and transfers; transaction content comes from the JSON-RPC node when an
    `rpc` companion source is supplied, otherwise from the explorer's
    transactions endpoint. The limiter is shared across threads, so one
    client should be reused for a whole batch run.
    """

    def __init__(
        self,
        source: DataSource,
        *,
        rpc: DataSource | None = None,
        cache_dir=None,
        transport=None,
        clock=time.monotonic,
        sleep=time.sleep,
    ):
        self.source = source
        self.rpc = rpc
        self.cache = BundleCache(cache_dir) if cache_dir else None
        self._sleep = sleep
        self._session = requests.Session() if transport is None else None
        self._transport = transport or _requests_transport(self._session)
        self._limiters = {}
        for src in (source, rpc):
            if src is not None and src.kind != SOURCE_FIXTURE:
                self._limiters[id(src)] = RateLimiter(src.rate_limit, clock=clock, sleep=sleep)
        self._fixture_records: dict[str, TokenRecord] | None = None

    # -- low-level request machinery

    def _request(self, src: DataSource, method: str, url: str, **kw):
        """One rate-limited request with bounded retry on transport errors
        and 5xx/429 responses."""
        limiter = self._limiters[id(src)]
        delay = RETRY_BASE_DELAY
        last_err = None
        for attempt in range(RETRY_ATTEMPTS):
            limiter.acquire()
            try:
                status, body = self._transport(method, url, **kw)
            except requests.RequestException as exc:
                last_err = f"transport error: {exc}"
            else:
                if status == 404:
                    raise NotFound(f"{url} -> 404")
                if status < 500 and status != 429:
                    return status, body
                last_err = f"HTTP {status}"
            if attempt < RETRY_ATTEMPTS - 1:
                self._sleep(delay)
                delay *= 2
        raise EndpointUnavailable(f"{url}: {last_err} after {RETRY_ATTEMPTS} attempts")

    def _rpc_call(self, src: DataSource, rpc_method: str, params: list):
        status, body = self._request(
            src,
            "POST",
            src.endpoint_url,
            json_body={"jsonrpc": "2.0", "id": 1, "method": rpc_method, "params": params},
        )
        if not isinstance(body, dict):
            raise ParseError(f"non-JSON RPC response (HTTP {status})", raw=body)
        if body.get("error"):
            err = body["error"]
            if "not found" in str(err.get("message", "")).lower():
                raise NotFound(str(err))
            raise EndpointUnavailable(f"RPC error: {err}")
        return body.get("result")

    def _explorer_get(self, section: str, params: dict):
        src = self.source
        url = src.endpoint_url.rstrip("/") + src.path_for(section)
        headers = {"X-API-KEY": src.api_key} if src.api_key else None
        status, body = self._request(src, "GET", url, params=params, headers=headers)
        if not isinstance(body, dict) or "data" not in body:
            raise ParseError(f"unexpected explorer payload (HTTP {status})", raw=body)
        return body["data"]

    # -- fixture access

    def _fixture_dir(self) -> Path:
        return Path(self.source.directory)

    def _load_fixture(self, mint: str) -> TokenRecord | None:
        path = self._fixture_dir() / f"{mint}.json"
        try:
            text = path.read_text()
        except FileNotFoundError:
            return None
        return load_token_record(text)

    def _all_fixture_records(self) -> dict[str, TokenRecord]:
        if self._fixture_records is None:
            records = {}
            for path in sorted(self._fixture_dir().glob("*.json")):
                try:
                    rec = load_token_record(path.read_text())
                except ParseError:
                    continue  # corrupt files surface when fetched directly
                records[rec.mint_address] = rec
            self._fixture_records = records
        return self._fixture_records

    # -- public operations

    def fetch_signatures(self, address: str, limit: int) -> list[tuple[str, int]]:
        """At most `limit` most recent (signature, timestamp) pairs, newest
        first. Unknown addresses yield an empty list."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        if self.source.kind == SOURCE_FIXTURE:
            record = self._load_fixture(address)
            if record is None:
                return []
            sigs = [(tx.signature, tx.timestamp) for tx in record.transactions]
            sigs.sort(key=lambda st: -st[1])
            return sigs[:limit]
        src = self.rpc if self.source.kind == SOURCE_EXPLORER and self.rpc else self.source
        if src.kind == SOURCE_RPC:
            return self._fetch_signatures_rpc(src, address, limit)
        # explorer without an rpc companion: derive from the transactions endpoint
        txs = self._fetch_transactions_explorer(address, limit=limit)
        sigs = [(tx.signature, tx.timestamp) for tx in txs]
        sigs.sort(key=lambda st: -st[1])
        return sigs[:limit]

    def _fetch_signatures_rpc(
        self, src: DataSource, address: str, limit: int, until_time: int | None = None
    ) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        before = None
        while len(out) < limit:
            page_limit = min(SIGNATURE_PAGE_SIZE, limit - len(out))
            params: list = [address, {"limit": page_limit}]
            if before:
                params[1]["before"] = before
            result = self._rpc_call(src, "getSignaturesForAddress", params)
            if result is None:
                raise UnknownAddress(address)
            if not isinstance(result, list):
                raise ParseError("getSignaturesForAddress returned non-list", raw=result)
            if not result:
                break
            for entry in result:
                out.append((entry["signature"], int(entry["blockTime"])))
            before = result[-1]["signature"]
            if len(result) < page_limit:
                break
            if until_time is not None and out and out[-1][1] <= until_time:
                break
        return out[:limit]

    def fetch_transaction(self, signature: str) -> TransactionRecord:
        """Full parsed content of one previously listed transaction."""
        if self.source.kind == SOURCE_FIXTURE:
            for record in self._all_fixture_records().values():
                for tx in record.transactions:
                    if tx.signature == signature:
                        return tx
            raise NotFound(f"signature {signature} not in any fixture")
        src = self.rpc if self.source.kind == SOURCE_EXPLORER and self.rpc else self.source
        if src.kind != SOURCE_RPC:
            raise IngestError("fetch_transaction needs an rpc source")
        result = self._rpc_call(
            src,
            "getTransaction",
            [signature, {"encoding": "jsonParsed", "maxSupportedTransactionVersion": 0}],
        )
        if result is None:
            raise NotFound(f"transaction {signature} not found")
        return _parse_rpc_transaction(signature, result)

    def fetch_token_bundle(self, mint: str) -> TokenRecord:
        """Assemble the full TokenRecord for a mint and write it through to
        the cache. If a live fetch fails and a cached copy exists, the cache
        copy is served instead."""
        if self.source.kind == SOURCE_FIXTURE:
            record = self._load_fixture(mint)
            if record is None:
                raise NotFound(f"no fixture for mint {mint}")
            self.cache_put(record)
            return record
        try:
            record = self._fetch_live_bundle(mint)
        except (EndpointUnavailable, PartialData) as exc:
            cached = self.cache_get(mint)
            if cached is not None:
                log.warning("serving %s from cache after live failure: %s", mint, exc)
                return cached
            raise
        self.cache_put(record)
        return record

    def _fetch_live_bundle(self, mint: str) -> TokenRecord:
        if self.source.kind == SOURCE_RPC:
            # a bare RPC node has no token metadata interface
            raise PartialData(mint, ["meta", "market", "defi_activities", "transfers"])
        missing: list[str] = []
        activities: tuple = ()
        transfers: tuple = ()
        # without meta there is no bundle at all: connectivity errors and
        # unknown mints propagate as themselves, not as partial data
        try:
            meta, creation_time = _parse_explorer_meta(self._explorer_get("meta", {"address": mint}))
        except ParseError:
            raise PartialData(mint, ["meta"])
        try:
            self._explorer_get("market", {"address": mint})  # pool listing; advisory only
        except NotFound:
            pass  # tokens without pools have no market entry
        except IngestError:
            missing.append("market")
        try:
            activities = self._fetch_activities_explorer(mint)
        except IngestError:
            missing.append("defi_activities")
        try:
            transfers = self._fetch_transfers_explorer(mint)
        except IngestError:
            missing.append("transfers")
        transactions: tuple = ()
        try:
            transactions = self._fetch_transactions_live(mint, creation_time)
        except IngestError:
            missing.append("transactions")
        if missing:
            raise PartialData(mint, missing)
        return TokenRecord(
            mint_address=mint,
            meta=meta,
            creation_time=creation_time,
            transactions=transactions,
            defi_activities=activities,
            transfers=transfers,
        )

    def _fetch_activities_explorer(self, mint: str) -> tuple[DefiActivity, ...]:
        rows = self._paged("defi", mint)
        out = []
        for row in rows:
            try:
                out.append(
                    DefiActivity(
                        kind=row["kind"],
                        actor=row["actor"],
                        timestamp=int(row["timestamp"]),
                        base_amount=int(row["base_amount"]),
                        quote_asset=row["quote_asset"],
                        quote_amount=quote_decimal(row["quote_amount"]),
                        pool=row["pool"],
                        signature=row.get("signature"),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed defi activity: {exc}", raw=row) from exc
        return tuple(out)

    def _fetch_transfers_explorer(self, mint: str) -> tuple[TransferEvent, ...]:
        rows = self._paged("transfers", mint)
        out = []
        for row in rows:
            try:
                out.append(
                    TransferEvent(
                        from_addr=row["from"],
                        to_addr=row["to"],
                        amount=int(row["amount"]),
                        timestamp=int(row["timestamp"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed transfer: {exc}", raw=row) from exc
        return tuple(out)

    def _fetch_transactions_explorer(self, mint: str, limit=None) -> tuple[TransactionRecord, ...]:
        rows = self._paged("transactions", mint, limit=limit)
        out = []
        for row in rows:
            try:
                out.append(
                    TransactionRecord(
                        signature=row["signature"],
                        timestamp=int(row["timestamp"]),
                        instructions=tuple(
                            InstructionRecord(
                                program=i["program"],
                                name=i["name"],
                                accounts=tuple(i.get("accounts", [])),
                            )
                            for i in row.get("instructions", [])
                        ),
                        log_lines=tuple(row.get("log_lines", [])),
                        token_balance_deltas=tuple(
                            (o, m, int(d)) for o, m, d in row.get("token_balance_deltas", [])
                        ),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"malformed transaction row: {exc}", raw=row) from exc
        return tuple(out)

    def _fetch_transactions_live(self, mint: str, creation_time) -> tuple[TransactionRecord, ...]:
        """Latest signatures first, paginating back until token creation so
        full-lifecycle analyses see the whole history."""
        if self.rpc is not None:
            sigs = self._fetch_signatures_rpc(
                self.rpc, mint, limit=10 ** 9, until_time=creation_time
            )
            return tuple(self.fetch_transaction(sig) for sig, _ts in sigs)
        return self._fetch_transactions_explorer(mint)

    def _paged(self, section: str, mint: str, limit=None) -> list[dict]:
        rows: list[dict] = []
        page = 1
        while True:
            data = self._explorer_get(
                section, {"address": mint, "page": page, "page_size": EXPLORER_PAGE_SIZE}
            )
            if not isinstance(data, list):
                raise ParseError(f"expected list from {section} endpoint", raw=data)
            rows.extend(data)
            if len(data) < EXPLORER_PAGE_SIZE or (limit and len(rows) >= limit):
                break
            page += 1
        return rows[:limit] if limit else rows

    # -- cache operations

    def cache_put(self, record: TokenRecord) -> None:
        if self.cache is not None:
            self.cache.put(record)

    def cache_get(self, mint: str) -> TokenRecord | None:
        if self.cache is None:
            return None
        return self.cache.get(mint)


def _parse_explorer_meta(data: dict) -> tuple[TokenMeta, int]:
    try:
        meta = TokenMeta(
            name=data["name"],
            symbol=data["symbol"],
            creator=data["creator"],
            decimals=int(data["decimals"]),
            freeze_authority=data.get("freeze_authority"),
            mint_authority=data.get("mint_authority"),
            links=tuple((l["kind"], l["url"]) for l in data.get("links", [])),
        )
        return meta, int(data["created_time"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed token meta: {exc}", raw=data) from exc


def _parse_rpc_transaction(signature: str, result: dict) -> TransactionRecord:
    """Adapter for jsonParsed getTransaction responses. Token deltas are
    post minus pre balances per (owner, mint)."""
    try:
        block_time = int(result["blockTime"])
        meta = result.get("meta") or {}
        if "logMessages" not in meta:
            raise ParseError(f"transaction {signature} missing log messages", raw=result)
        logs = tuple(meta["logMessages"])
        instructions = []
        message = (result.get("transaction") or {}).get("message") or {}
        for ins in message.get("instructions", []):
            parsed = ins.get("parsed")
            if isinstance(parsed, dict) and parsed.get("type"):
                name = str(parsed["type"])
                name = name[0].upper() + name[1:]
                accounts = list(parsed.get("info", {}).values())
                accounts = [a for a in accounts if isinstance(a, str)]
            else:
                name = ins.get("program") or "Unknown"
                accounts = list(ins.get("accounts", []))
            instructions.append(
                InstructionRecord(
                    program=str(ins.get("programId", "")), name=name, accounts=tuple(accounts)
                )
            )
        deltas = {}
        for side, sign in (("preTokenBalances", -1), ("postTokenBalances", 1)):
            for bal in meta.get(side, []):
                key = (bal["owner"], bal["mint"])
                amount = int(bal["uiTokenAmount"]["amount"])
                deltas[key] = deltas.get(key, 0) + sign * amount
        delta_rows = tuple(
            (owner, mint, delta) for (owner, mint), delta in sorted(deltas.items()) if delta != 0
        )
        return TransactionRecord(
            signature=signature,
            timestamp=block_time,
            instructions=tuple(instructions),
            log_lines=logs,
            token_balance_deltas=delta_rows,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed transaction {signature}: {exc}", raw=result) from exc


# ---------------------------------------------------------------------------
# spec-level convenience functions


def fetch_signatures(source: DataSource, address: str, limit: int, **kw) -> list[tuple[str, int]]:
    return SourceClient(source, **kw).fetch_signatures(address, limit)


def fetch_transaction(source: DataSource, signature: str, **kw) -> TransactionRecord:
    return SourceClient(source, **kw).fetch_transaction(signature)


def fetch_token_bundle(source: DataSource, mint: str, **kw) -> TokenRecord:
    return SourceClient(source, **kw).fetch_token_bundle(mint)
