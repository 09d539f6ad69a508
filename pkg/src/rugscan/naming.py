"""Deceptive-naming analysis: n-gram statistics, name/symbol inconsistency,
and look-alike detection against a list of well-known assets.

The reference list is an editable data file (trending names drift too fast
to hardcode): one ``symbol,name[,verified_mint]`` line per asset.
"""

from __future__ import annotations

import csv
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .chain import TokenMeta, TokenRecord

DEFAULT_SIMILARITY_THRESHOLD = 0.8
MAX_LOOKALIKE_SUFFIX = 3
MIN_SUFFIX_STEM = 4  # suffix rule needs a stem this long to mean anything

_WORD_SPLIT = re.compile(r"[^0-9a-z]+")


def _words(text: str) -> list[str]:
    return [w for w in _WORD_SPLIT.split(text.casefold()) if w]


@dataclass(frozen=True)
class ReferenceEntry:
    symbol: str  # case-folded
    name: str  # case-folded
    verified_mint: str | None = None


class ReferenceList:
    """Well-known asset names and symbols, case-folded and deduplicated."""

    def __init__(self, entries):
        seen = set()
        unique = []
        for entry in entries:
            key = (entry.symbol.casefold(), entry.name.casefold())
            if key in seen:
                continue
            seen.add(key)
            unique.append(
                ReferenceEntry(
                    symbol=entry.symbol.casefold(),
                    name=entry.name.casefold(),
                    verified_mint=entry.verified_mint,
                )
            )
        self.entries = tuple(unique)
        self._by_symbol: dict = {}
        for entry in self.entries:
            self._by_symbol.setdefault(entry.symbol, []).append(entry)

    @classmethod
    def from_file(cls, path) -> "ReferenceList":
        entries = []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                symbol = row[0].strip()
                name = row[1].strip() if len(row) > 1 else symbol
                mint = row[2].strip() if len(row) > 2 and row[2].strip() else None
                entries.append(ReferenceEntry(symbol=symbol, name=name, verified_mint=mint))
        return cls(entries)

    def entries_for_symbol(self, symbol: str) -> list[ReferenceEntry]:
        return self._by_symbol.get(symbol.casefold(), [])


@dataclass(frozen=True)
class NamingFlags:
    mint: str
    inconsistent_metadata: bool
    inconsistent_reason: str | None
    lookalike: tuple[str, float] | None  # (matched reference, similarity)


def ngram_counts(names, n: int) -> Counter:
    """Word-level n-gram frequencies over lower-cased names split on
    non-alphanumerics."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts: Counter = Counter()
    for name in names:
        words = _words(name)
        for i in range(len(words) - n + 1):
            counts[" ".join(words[i : i + n])] += 1
    return counts


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """Normalized edit-distance similarity in [0, 1]."""
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def detect_symbol_mismatch(meta: TokenMeta, refs: ReferenceList) -> str | None:
    """Flag a symbol that case-folds to a well-known asset's while the name
    relates to neither that symbol nor the asset's name words."""
    symbol = meta.symbol.casefold()
    matches = refs.entries_for_symbol(symbol)
    if not matches:
        return None
    name = meta.name.casefold()
    for entry in matches:
        if entry.symbol in name:
            return None
        if any(word in name for word in _words(entry.name)):
            return None
    entry = matches[0]
    return (
        f"symbol {meta.symbol!r} imitates reference {entry.symbol.upper()} "
        f"({entry.name}) but name {meta.name!r} shows no relation"
    )


def detect_lookalike(
    meta: TokenMeta,
    refs: ReferenceList,
    mint: str | None = None,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> tuple[str, float] | None:
    """Flag a name or symbol imitating a reference asset.

    Fires on normalized edit-distance similarity >= threshold against a
    reference name or symbol, or on a reference string extended by a suffix
    of at most three characters (reported as an exact stem match with
    similarity 1.0). The reference asset's own verified mint is exempt.
    """
    candidates = {meta.name.casefold(), meta.symbol.casefold()}
    best: tuple[str, float] | None = None
    for entry in refs.entries:
        if mint is not None and entry.verified_mint == mint:
            continue
        for target in {entry.symbol, entry.name}:
            if not target:
                continue
            for cand in candidates:
                if not cand:
                    continue
                score = None
                if (
                    len(target) >= MIN_SUFFIX_STEM
                    and cand.startswith(target)
                    and len(cand) - len(target) <= MAX_LOOKALIKE_SUFFIX
                ):
                    score = 1.0
                else:
                    sim = similarity(cand, target)
                    if sim >= threshold:
                        score = sim
                if score is not None and (best is None or score > best[1]):
                    best = (entry.symbol.upper(), score)
    return best


def naming_flags(
    record: TokenRecord,
    refs: ReferenceList,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> NamingFlags:
    reason = detect_symbol_mismatch(record.meta, refs)
    lookalike = detect_lookalike(record.meta, refs, mint=record.mint_address, threshold=threshold)
    return NamingFlags(
        mint=record.mint_address,
        inconsistent_metadata=reason is not None,
        inconsistent_reason=reason,
        lookalike=lookalike,
    )


def flags_to_dict(flags: NamingFlags) -> dict:
    return {
        "mint": flags.mint,
        "inconsistent_metadata": flags.inconsistent_metadata,
        "inconsistent_reason": flags.inconsistent_reason,
        "lookalike": (
            {"matched_reference": flags.lookalike[0], "similarity": flags.lookalike[1]}
            if flags.lookalike
            else None
        ),
    }
