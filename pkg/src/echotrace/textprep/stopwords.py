"""Stopword classification at the stem level.

The bundled surface list (the standard 179-word English list) is stemmed
once at import; a stem counts as a stopword iff it equals the stem of some
list entry. This keeps the stop/content partition well defined for stems,
which is the unit everything downstream works with.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .porter import porter_stem


def _load_surface_list() -> frozenset[str]:
    text = resources.files("echotrace.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


@lru_cache(maxsize=1)
def stopword_stems() -> frozenset[str]:
    return frozenset(porter_stem(word) for word in _load_surface_list())


def is_stopword(stem: str) -> bool:
    return stem in stopword_stems()
