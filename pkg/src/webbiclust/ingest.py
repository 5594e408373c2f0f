"""Clickstream ingestion: session parsing, length filtering, access-matrix construction.

Input format is the msnbc sequence layout: '%' comment lines, one header
line of whitespace-separated page-category names, then one session per
line as 1-based category indices.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

Session = list[int]


class ParseError(ValueError):
    """Malformed session file; carries the offending line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True, eq=False)
class AccessMatrix:
    """Dense n x m matrix of per-user page visit counts with row/column labels."""

    values: np.ndarray
    user_labels: tuple[str, ...]
    page_labels: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise ValueError("access matrix must be 2-dimensional")
        if values.size and values.min() < 0:
            raise ValueError("access matrix entries must be nonnegative")
        object.__setattr__(self, "values", values)
        if len(self.user_labels) != values.shape[0]:
            raise ValueError("user label count does not match row count")
        if len(self.page_labels) != values.shape[1]:
            raise ValueError("page label count does not match column count")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


def parse_sessions(lines: Iterable[str]) -> tuple[list[Session], list[str]]:
    """Parse msnbc-format text lines into sessions plus the page-name list.

    The first non-comment line names the page categories; every later
    non-empty line is one session of 1-based category indices.
    """
    pages: list[str] | None = None
    sessions: list[Session] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if pages is None:
            pages = line.split()
            continue
        session: Session = []
        for tok in line.split():
            try:
                idx = int(tok)
            except ValueError:
                raise ParseError(f"non-integer token {tok!r}", line_no) from None
            if not 1 <= idx <= len(pages):
                raise ParseError(f"page index {idx} outside 1..{len(pages)}", line_no)
            session.append(idx)
        sessions.append(session)
    if pages is None or not sessions:
        raise ParseError("no data lines")
    return sessions, pages


def read_session_file(path: str | Path) -> tuple[list[Session], list[str]]:
    """Read a plain or gzip-compressed msnbc-format file."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return parse_sessions(fh)


def filter_sessions(sessions: list[Session], min_len: int, max_len: int) -> list[Session]:
    """Keep sessions with min_len <= length <= max_len, preserving order."""
    if min_len > max_len:
        raise ValueError("min_len must not exceed max_len")
    return [s for s in sessions if min_len <= len(s) <= max_len]


def build_access_matrix(
    sessions: list[Session],
    page_count: int,
    page_labels: list[str] | None = None,
) -> AccessMatrix:
    """Count page occurrences per session into a dense matrix, one row per session."""
    if not sessions:
        raise ValueError("cannot build an access matrix from zero sessions")
    values = np.zeros((len(sessions), page_count), dtype=np.int64)
    for i, session in enumerate(sessions):
        for idx in session:
            if not 1 <= idx <= page_count:
                raise ValueError(f"session {i}: page index {idx} outside 1..{page_count}")
            values[i, idx - 1] += 1
    if page_labels is None:
        page_labels = [f"page_{j}" for j in range(page_count)]
    users = tuple(f"user_{i}" for i in range(len(sessions)))
    return AccessMatrix(values, users, tuple(page_labels))


def mean_session_length(sessions: list[Session]) -> float:
    if not sessions:
        return 0.0
    return sum(len(s) for s in sessions) / len(sessions)
