"""Persistent rank cache: an append-only file of JSON lines.

Each line records the rank of one condition matrix, keyed by a content hash
of (weights, canonical points, multiplicities, field, n, m).  Writers take a
file lock before appending; unreadable lines are skipped with a warning.
"""

from __future__ import annotations

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from filelock import FileLock

log = logging.getLogger(__name__)

_active: RankCache | None = None


class RankCache:
    def __init__(self, path: str | Path | None = None, writable: bool = True):
        self.path = Path(path) if path is not None else None
        self.writable = writable
        self.hits = 0
        self.misses = 0
        self.pending: list[tuple[str, int, int]] = []
        self._data: dict[str, tuple[int, int]] = {}
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    self._data[str(rec["key"])] = (int(rec["h0"]), int(rec["rank"]))
                except (ValueError, KeyError, TypeError):
                    log.warning("skipping corrupt cache line %d in %s", lineno, self.path)

    def __len__(self) -> int:
        return len(self._data)

    def get(self, key: str) -> tuple[int, int] | None:
        hit = self._data.get(key)
        if hit is None:
            self.misses += 1
        else:
            self.hits += 1
        return hit

    def put(self, key: str, h0: int, rank: int) -> None:
        if key in self._data:
            return
        self._data[key] = (h0, rank)
        if not self.writable:
            self.pending.append((key, h0, rank))
            return
        if self.path is not None:
            line = json.dumps({"key": key, "h0": h0, "rank": rank}, sort_keys=True)
            with FileLock(str(self.path) + ".lock"):
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")

    def drain(self) -> list[tuple[str, int, int]]:
        """Return and forget entries recorded while read-only."""
        out, self.pending = self.pending, []
        return out


def active_cache() -> RankCache | None:
    return _active


def set_active_cache(cache: RankCache | None) -> None:
    global _active
    _active = cache


@contextmanager
def use_cache(cache: RankCache | None) -> Iterator[RankCache | None]:
    prev = _active
    set_active_cache(cache)
    try:
        yield cache
    finally:
        set_active_cache(prev)
