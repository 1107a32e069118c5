"""Bundled published metric tables, one CSV per benchmark."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

PUBLISHED_BENCHMARKS = ("daytrader", "plants", "jpetstore", "acmeair")


def published_table_path(benchmark: str) -> Path:
    name = benchmark.lower()
    if name not in PUBLISHED_BENCHMARKS:
        raise KeyError(f"unknown benchmark {benchmark!r}; choose from {', '.join(PUBLISHED_BENCHMARKS)}")
    return Path(str(resources.files(__name__) / "published" / f"{name}.csv"))
