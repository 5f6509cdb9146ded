"""Memoized build pipeline: field -> group -> table -> labels -> symmetrized
view -> scheme eigenvalues, with optional disk caching of labeled tables.
"""

from __future__ import annotations

import os
from functools import lru_cache

from . import chartab, gfq, glq, scheme


@lru_cache(maxsize=None)
def field(q: int):
    return gfq.build_field(q)


@lru_cache(maxsize=None)
def class_system(q: int, n: int):
    return glq.build_class_system(field(q), n)


@lru_cache(maxsize=None)
def group(q: int, n: int, max_order: int = glq.DEFAULT_MAX_GROUP_ORDER):
    return glq.build_group_data(field(q), n, max_order=max_order)


@lru_cache(maxsize=None)
def _table_memo(q: int, n: int, cache_dir: str | None):
    """Labeled table, loading from and refreshing the disk cache when a
    cache directory is given.  Returns (table, cache_hit)."""
    if cache_dir:
        cs = class_system(q, n)
        path = chartab.cache_path(cache_dir, q, n)
        cached = chartab.load_table(path, cs)
        if cached is not None and cached.labels is not None:
            return cached, True
    gd = group(q, n)
    table = chartab.label_table(chartab.dixon_table(gd))
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        chartab.save_table(table, chartab.cache_path(cache_dir, q, n))
    return table, False


def labeled_table(q: int, n: int, cache_dir: str | None = None):
    return _table_memo(q, n, cache_dir)[0]


def table_cache_hit(q: int, n: int, cache_dir: str | None = None) -> bool:
    return _table_memo(q, n, cache_dir)[1]


@lru_cache(maxsize=None)
def symmetrized(q: int, n: int, cache_dir: str | None = None):
    return chartab.symmetrize(labeled_table(q, n, cache_dir))


@lru_cache(maxsize=None)
def eigen(q: int, n: int, cache_dir: str | None = None):
    return scheme.eigenvalue_matrix(symmetrized(q, n, cache_dir))
