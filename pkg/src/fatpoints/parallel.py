"""Order-preserving process-pool map that feeds the parent's rank cache.

Workers open the cache file read-only and send back the entries they
computed; only the parent process appends to the file.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

from .cache import RankCache, active_cache, set_active_cache

T = TypeVar("T")
R = TypeVar("R")


def _init_worker(use_cache: bool, path: str | None) -> None:
    set_active_cache(RankCache(path, writable=False) if use_cache else None)


def _call(job):
    func, item = job
    result = func(item)
    cache = active_cache()
    return result, (cache.drain() if cache is not None else [])


def pmap(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    parent = active_cache()
    path = str(parent.path) if parent is not None and parent.path is not None else None
    out = []
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(parent is not None, path)) as ex:
        for result, new in ex.map(_call, [(func, x) for x in items]):
            if parent is not None:
                for key, h0, rk in new:
                    parent.put(key, h0, rk)
            out.append(result)
    return out
