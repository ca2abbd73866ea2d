"""Budget caps for the exhaustive searches.

Defaults can be overridden with the ``INVGEN_BUDGET`` environment variable,
either a bare integer (applied to every cap) or ``key=value`` pairs separated
by commas, e.g. ``INVGEN_BUDGET="words=50000,trials=20"``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Budget:
    group_elements: int = 10_000
    search_leaves: int = 1_000_000
    words: int = 2_000_000
    trials: int = 200
    tree_depth: int = 8


def _parse(text: str, base: Budget) -> Budget:
    text = text.strip()
    if not text:
        return base
    if text.isdigit():
        n = int(text)
        return Budget(**{f.name: n for f in fields(Budget)})
    updates = {}
    names = {f.name for f in fields(Budget)}
    aliases = {"leaves": "search_leaves", "elements": "group_elements", "depth": "tree_depth"}
    for part in text.split(","):
        key, _, value = part.partition("=")
        key = aliases.get(key.strip(), key.strip())
        if key not in names:
            raise ValueError(f"unknown budget key {key!r} in INVGEN_BUDGET")
        n = int(value)
        if n <= 0:
            raise ValueError("budget caps must be positive")
        updates[key] = n
    return replace(base, **updates)


def budget() -> Budget:
    """Current caps, honouring ``INVGEN_BUDGET``."""
    return _parse(os.environ.get("INVGEN_BUDGET", ""), Budget())
