"""
Memoisation of pure, repeatedly evaluated computations.

Sweeps and cross-checks evaluate the same decoupling and the same states many
times; results are immutable, so they can be shared between threads.
"""

import hashlib
import threading
from functools import wraps
from typing import Any, Callable, Dict, Optional

import structlog
from cachetools import LRUCache

logger = structlog.get_logger(__name__)


class ComputationCache:
    """
    Thread-safe LRU cache keyed on the arguments of pure functions.
    """

    def __init__(self, max_size: int = 4096, enabled: bool = True):
        self.enabled = enabled
        self.memory_cache: LRUCache = LRUCache(maxsize=max_size)
        self._lock = threading.RLock()

        self.stats = {
            "hits": 0,
            "misses": 0,
            "sets": 0,
        }

    def _generate_cache_key(self, prefix: str, *args: Any, **kwargs: Any) -> str:
        """Generate a cache key from prefix and arguments."""
        parts = [repr(a) for a in args]
        parts.extend(f"{k}={v!r}" for k, v in sorted(kwargs.items()))
        key_data = f"{prefix}:" + ":".join(parts)

        # Hash long keys
        if len(key_data) > 250:
            key_hash = hashlib.md5(key_data.encode()).hexdigest()
            return f"{prefix}:hash:{key_hash}"

        return key_data

    def get(self, key: str) -> Optional[Any]:
        if not self.enabled:
            return None
        with self._lock:
            result = self.memory_cache.get(key)
            if result is None:
                self.stats["misses"] += 1
            else:
                self.stats["hits"] += 1
            return result

    def set(self, key: str, value: Any) -> None:
        if not self.enabled:
            return
        with self._lock:
            self.memory_cache[key] = value
            self.stats["sets"] += 1

    def clear(self) -> None:
        with self._lock:
            self.memory_cache.clear()
            for name in self.stats:
                self.stats[name] = 0
        logger.debug("Computation cache cleared")

    def cached(self, prefix: str) -> Callable:
        """Decorator memoising a pure function on its (hashable-by-repr) arguments."""
        def decorator(func: Callable) -> Callable:
            @wraps(func)
            def wrapper(*args: Any, **kwargs: Any) -> Any:
                key = self._generate_cache_key(prefix, *args, **kwargs)
                result = self.get(key)
                if result is not None:
                    return result
                result = func(*args, **kwargs)
                self.set(key, result)
                return result
            return wrapper
        return decorator

    def get_cache_stats(self) -> Dict[str, Any]:
        with self._lock:
            total = self.stats["hits"] + self.stats["misses"]
            return {
                **self.stats,
                "size": len(self.memory_cache),
                "max_size": self.memory_cache.maxsize,
                "hit_rate": self.stats["hits"] / total if total else 0.0,
            }


# Shared by the generation module
computation_cache = ComputationCache()
