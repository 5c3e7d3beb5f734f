"""Finite, ordered sources of edge colorings and the chunked scanner over them.

A source enumerates rows of an ``(n, |E|)`` int64 array in a fixed order:
lexicographic in the digit space, first edge most significant.  The scanner
walks a source in chunks and reports the first row failing a predicate, so
the answer is the same for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "CapacityError",
    "ColoringSource",
    "AllColorings",
    "ExplicitColorings",
    "GeneratedColorings",
    "first_failure",
    "all_failures",
    "DEFAULT_SCAN_BOUND",
]

DEFAULT_SCAN_BOUND = 1 << 22
CHUNK_ELEMENTS = 1 << 21


class CapacityError(RuntimeError):
    """A computation would exceed a configured size bound."""

    def __init__(self, message: str, bound: int, required: int):
        super().__init__(message)
        self.bound = bound
        self.required = required


def _digits(start: int, stop: int, width: int, base: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, width), dtype=np.int64)
    for col in range(width - 1, -1, -1):
        out[:, col] = idx % base
        idx //= base
    return out


class ColoringSource:
    n_edges: int
    count: int

    def rows(self, start: int, stop: int) -> np.ndarray:
        raise NotImplementedError

    def mapped(self, table: Sequence[int]) -> "ColoringSource":
        """Same enumeration with every value v replaced by table[v]."""
        raise NotImplementedError

    def all_rows(self) -> np.ndarray:
        return self.rows(0, self.count)


class AllColorings(ColoringSource):
    """Every map E -> values; with values == range(q) this is all of GF(q)^E."""

    def __init__(self, n_edges: int, values: Sequence[int]):
        self.n_edges = int(n_edges)
        self.values = np.asarray(list(values), dtype=np.int64)
        self.count = len(self.values) ** self.n_edges if len(self.values) else (1 if self.n_edges == 0 else 0)

    def rows(self, start, stop):
        if self.n_edges == 0:
            return np.zeros((stop - start, 0), dtype=np.int64)
        return self.values[_digits(start, stop, self.n_edges, len(self.values))]

    def mapped(self, table):
        table = np.asarray(table, dtype=np.int64)
        return AllColorings(self.n_edges, table[self.values])


class ExplicitColorings(ColoringSource):
    """A listed set of colorings, deduplicated and sorted lexicographically."""

    def __init__(self, n_edges: int, rows, presorted: bool = False):
        self.n_edges = int(n_edges)
        arr = np.asarray(rows, dtype=np.int64)
        arr = arr.reshape(len(arr), self.n_edges)
        if not presorted and len(arr):
            arr = np.unique(arr, axis=0)
        self._rows = arr
        self.count = len(arr)

    def rows(self, start, stop):
        return self._rows[start:stop]

    def mapped(self, table):
        table = np.asarray(table, dtype=np.int64)
        return ExplicitColorings(self.n_edges, table[self._rows], presorted=True)


class GeneratedColorings(ColoringSource):
    """Forced values on some edges, the remaining edges free over ``values``."""

    def __init__(self, n_edges: int, forced: dict, values: Sequence[int]):
        self.n_edges = int(n_edges)
        self.forced = {int(e): int(v) for e, v in forced.items()}
        if any(not 0 <= e < self.n_edges for e in self.forced):
            raise ValueError("forced edge outside the host")
        self.values = np.asarray(list(values), dtype=np.int64)
        self.free = [e for e in range(self.n_edges) if e not in self.forced]
        nf = len(self.free)
        self.count = len(self.values) ** nf if (nf == 0 or len(self.values)) else 0

    def rows(self, start, stop):
        out = np.empty((stop - start, self.n_edges), dtype=np.int64)
        for e, v in self.forced.items():
            out[:, e] = v
        if self.free:
            out[:, self.free] = self.values[_digits(start, stop, len(self.free), len(self.values))]
        return out

    def mapped(self, table):
        table = np.asarray(table, dtype=np.int64)
        forced = {e: int(table[v]) for e, v in self.forced.items()}
        return GeneratedColorings(self.n_edges, forced, table[self.values])


def first_failure(
    source: ColoringSource,
    ok: Callable[[np.ndarray], np.ndarray],
    workers: int = 1,
    row_cost: int = 1,
    bound: int = DEFAULT_SCAN_BOUND,
) -> Optional[int]:
    """Index of the first row with ``ok(row) == False`` in source order, or None.

    ``row_cost`` sizes chunks so intermediate arrays stay bounded.  Chunks are
    processed in waves of ``workers``; the earliest failing chunk of a wave
    wins, which makes the result independent of the worker count.
    """
    if source.count > bound:
        raise CapacityError(
            f"scan of {source.count} colorings exceeds the bound {bound}", bound, source.count
        )
    chunk = max(1, CHUNK_ELEMENTS // max(1, row_cost * max(1, source.n_edges)))
    starts = list(range(0, source.count, chunk))

    def check(start):
        rows = source.rows(start, min(start + chunk, source.count))
        bad = np.flatnonzero(~np.asarray(ok(rows), dtype=bool))
        return start + int(bad[0]) if len(bad) else None

    if workers <= 1:
        for s in starts:
            hit = check(s)
            if hit is not None:
                return hit
        return None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for w in range(0, len(starts), workers):
            hits = [h for h in pool.map(check, starts[w:w + workers]) if h is not None]
            if hits:
                return min(hits)
    return None


def all_failures(
    source: ColoringSource,
    ok: Callable[[np.ndarray], np.ndarray],
    limit: Optional[int] = None,
    row_cost: int = 1,
    bound: int = DEFAULT_SCAN_BOUND,
) -> list[int]:
    """Indices of failing rows in source order, at most ``limit`` of them."""
    if source.count > bound:
        raise CapacityError(
            f"scan of {source.count} colorings exceeds the bound {bound}", bound, source.count
        )
    chunk = max(1, CHUNK_ELEMENTS // max(1, row_cost * max(1, source.n_edges)))
    out = []
    for start in range(0, source.count, chunk):
        rows = source.rows(start, min(start + chunk, source.count))
        out.extend(start + int(b) for b in np.flatnonzero(~np.asarray(ok(rows), dtype=bool)))
        if limit is not None and len(out) >= limit:
            return out[:limit]
    return out
