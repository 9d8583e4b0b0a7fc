from __future__ import annotations

import os

try:
    from dotenv import load_dotenv
except ImportError:
    load_dotenv = None

if load_dotenv:
    load_dotenv()


def _env(name: str, default: str | None = None) -> str | None:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    return value


def _env_int(name: str, default: int) -> int:
    return int(_env(name, str(default)) or default)


ENUMERATION_CAP = _env_int("LIETYPE_CAP", 2_000_000)
DEFAULT_PRECISION = _env_int("LIETYPE_PRECISION", 8)
DEFAULT_TRUNCATION = _env_int("LIETYPE_TRUNC", 64)
SUBGROUP_ENUM_LIMIT = _env_int("LIETYPE_SUBGROUP_LIMIT", 100_000)

LOCALE = _env("LIETYPE_LOCALE", "en")
LOG_LEVEL = (_env("LIETYPE_LOG_LEVEL", "INFO") or "INFO").upper()

REDIS_URL = _env("REDIS_URL")
REPORT_TTL_SECONDS = _env_int("REPORT_TTL_SECONDS", 21600)
MAX_CACHED_REPORTS = _env_int("MAX_CACHED_REPORTS", 256)
