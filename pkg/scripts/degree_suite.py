from __future__ import annotations

import logging
import sys
import time
from math import prod
from pathlib import Path

# Allow running from scripts/ without installing the package.
PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from lietype.invariants import (
    DEGREE_TABLE,
    count_reflections,
    enumerate_weyl,
    enumeration_degrees,
    molien_series,
)
from lietype.rootdata import parse_label
from lietype.series import PoincareSeries

LABELS = ("A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "D4", "D5", "G2", "F4", "E6")


def check_label(label: str) -> tuple[bool, str]:
    enumeration = enumerate_weyl(parse_label(label))
    data = enumeration_degrees(enumeration)
    expected = PoincareSeries.from_degrees([], data.degrees)
    ok = (
        molien_series(enumeration) == expected
        and prod(data.degrees) == enumeration.order
        and sum(d - 1 for d in data.degrees) == count_reflections(enumeration)
    )
    return ok, f"{label}: degrees={list(data.degrees)} |W|={enumeration.order}"


def main() -> None:
    logging.basicConfig(level=logging.WARNING)
    started = time.perf_counter()
    failures = 0
    for label in LABELS:
        ok, line = check_label(label)
        failures += not ok
        print(("ok   " if ok else "FAIL ") + line)
    for (kind, rank), degs in DEGREE_TABLE.items():
        # a tabela ja e verificada na importacao de lietype.invariants
        print(f"ok   {kind}{rank}: degrees={list(degs)} (table)")
    print(f"elapsed: {time.perf_counter() - started:.1f}s")
    if failures:
        raise SystemExit(f"{failures} label(s) failed")


if __name__ == "__main__":
    main()
