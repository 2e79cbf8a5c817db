"""Quote-span detection over token sequences.

Double-quote tokens are paired left to right; tokens strictly between a
matched pair are inside quotes. The quote tokens themselves are not, and a
trailing unmatched opening quote flags nothing.
"""

from __future__ import annotations

from collections.abc import Sequence

_QUOTE_CHARS = frozenset('"“”„')


def is_quote_token(surface: str) -> bool:
    return len(surface) == 1 and surface in _QUOTE_CHARS


def quote_flags(surfaces: Sequence[str]) -> list[bool]:
    """Per-token in-quotes flags for a tokenized document."""
    flags = [False] * len(surfaces)
    open_idx: int | None = None
    for i, surface in enumerate(surfaces):
        if not is_quote_token(surface):
            continue
        if open_idx is None:
            open_idx = i
        else:
            for j in range(open_idx + 1, i):
                flags[j] = True
            open_idx = None
    return flags
