"""Process-wide cache of fitted regression models.

Fitting a regression over the bundled database is cheap but not free, and the
sizing loop asks for the same default regressions on every run. Fitted models
are immutable, so one instance can be shared by every caller that asks with
the same key.

Keys combine the database fingerprint with everything that defines a fit:
table, input columns, output column, mode, row filter and hyperparameter
overrides. Editing a database file changes its fingerprint, so stale models
are never returned.

Thread Safety:
    Lookups and insertions are serialized by a lock; the fit itself runs
    outside the lock, so two threads may occasionally fit the same model and
    the later insertion wins (both results are identical).

Example:
    >>> cache = ModelCache(max_entries=64)
    >>> model = cache.get_or_fit(key, lambda: fit(db, ["payload_kg"], "mtow_kg", "power_law"))
    >>> cache.stats()["misses"]
    1
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Hashable
from typing import Any, TypeVar

from cachetools import LRUCache

T = TypeVar("T")


class ModelCache:
    """LRU cache of fitted models keyed by fit definition.

    Attributes:
        max_entries: Capacity before least-recently-used models are evicted.
    """

    def __init__(self, max_entries: int = 128) -> None:
        """Initialize an empty cache.

        Args:
            max_entries: Maximum number of models kept. Defaults to 128.
        """
        self._max_entries = max_entries
        self._models: LRUCache[Hashable, Any] = LRUCache(maxsize=max_entries)
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def get(self, key: Hashable) -> Any | None:  # noqa: ANN401
        """Return the cached model for ``key``, or None."""
        with self._lock:
            model = self._models.get(key)
            if model is None:
                self._misses += 1
            else:
                self._hits += 1
            return model

    def get_or_fit(self, key: Hashable, fit: Callable[[], T]) -> T:
        """Return the cached model for ``key``, fitting it on a miss.

        Errors raised by ``fit`` propagate and nothing is cached.

        Args:
            key: Hashable fit definition.
            fit: Zero-argument callable producing the model.

        Returns:
            The cached or freshly fitted model.
        """
        cached = self.get(key)
        if cached is not None:
            return cached  # type: ignore[no-any-return]
        model = fit()
        with self._lock:
            self._models[key] = model
        return model

    def invalidate(self, key: Hashable) -> None:
        """Drop one cached model if present."""
        with self._lock:
            self._models.pop(key, None)

    def clear(self) -> None:
        """Drop every cached model and reset the counters."""
        with self._lock:
            self._models.clear()
            self._hits = 0
            self._misses = 0

    def stats(self) -> dict[str, int]:
        """Return cache statistics.

        Returns:
            Dictionary with ``hits``, ``misses``, ``current`` (number of cached
            models) and ``max_entries``.
        """
        with self._lock:
            return {
                "hits": self._hits,
                "misses": self._misses,
                "current": len(self._models),
                "max_entries": self._max_entries,
            }


default_cache = ModelCache()
"""Cache shared by the default regressions of ``fill_unknowns``."""
