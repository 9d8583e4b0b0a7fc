from __future__ import annotations

import hashlib
import json
import logging
from collections import OrderedDict
from typing import Any

from lietype.config import MAX_CACHED_REPORTS, REDIS_URL, REPORT_TTL_SECONDS

try:
    import redis
except ImportError:  # pragma: no cover - optional dependency
    redis = None

logger = logging.getLogger("lietype")


def report_key(command: str, params: dict[str, Any]) -> str:
    """Chave estavel: hash do JSON canonico dos parametros."""
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"), default=str)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:32]
    return f"report:{command}:{digest}"


class BaseStore:
    def get_report(self, key: str) -> dict[str, Any] | None:
        raise NotImplementedError

    def put_report(self, key: str, report: dict[str, Any]) -> None:
        raise NotImplementedError

    def clear(self) -> None:
        raise NotImplementedError


class MemoryStore(BaseStore):
    def __init__(self, max_items: int = MAX_CACHED_REPORTS) -> None:
        self._reports: OrderedDict[str, dict[str, Any]] = OrderedDict()
        self._max_items = max_items

    def get_report(self, key: str) -> dict[str, Any] | None:
        report = self._reports.get(key)
        if report is not None:
            self._reports.move_to_end(key)
        return report

    def put_report(self, key: str, report: dict[str, Any]) -> None:
        self._reports[key] = report
        self._reports.move_to_end(key)
        while len(self._reports) > self._max_items:
            self._reports.popitem(last=False)

    def clear(self) -> None:
        self._reports.clear()


class RedisStore(BaseStore):
    def __init__(self, client: "redis.Redis") -> None:
        self._client = client

    def get_report(self, key: str) -> dict[str, Any] | None:
        payload = self._client.get(key)
        if not payload:
            return None
        return json.loads(payload)

    def put_report(self, key: str, report: dict[str, Any]) -> None:
        self._client.setex(key, REPORT_TTL_SECONDS, json.dumps(report, sort_keys=True))

    def clear(self) -> None:
        for key in self._client.scan_iter("report:*"):
            self._client.delete(key)


_store: BaseStore | None = None


def get_store() -> BaseStore:
    global _store
    if _store is not None:
        return _store
    if REDIS_URL and redis is not None:
        try:
            client = redis.Redis.from_url(REDIS_URL)
            client.ping()
            _store = RedisStore(client)
            return _store
        except Exception:
            logger.warning("redis_unavailable_fallback_to_memory")
    _store = MemoryStore()
    return _store
