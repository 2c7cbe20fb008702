"""Stopword-filtered token frequency tables, the data behind a word cloud."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .textprep import normalize_text


@dataclass(frozen=True)
class FrequencyEntry:
    token: str
    count: int


@dataclass
class FrequencyTable:
    """Entries sorted by count descending, ties alphabetically."""

    entries: list[FrequencyEntry]

    def to_payload(self) -> list[dict]:
        return [{"token": e.token, "count": e.count} for e in self.entries]

    def __len__(self):
        return len(self.entries)


def default_stopwords() -> frozenset[str]:
    """The packaged English stopword list."""
    text = resources.files("jobham.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip() for line in f if line.strip())


def word_frequencies(text: str, stopwords) -> FrequencyTable:
    """Count normalized tokens, dropping stopwords and single characters."""
    counts = Counter(
        token
        for token in normalize_text(text).split()
        if len(token) > 1 and token not in stopwords
    )
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyTable([FrequencyEntry(token, count) for token, count in ordered])


def top_n(table: FrequencyTable, n: int) -> FrequencyTable:
    """First n entries under the table's sort order."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return FrequencyTable(table.entries[:n])
