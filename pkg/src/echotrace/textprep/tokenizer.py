"""Deterministic rule-based word tokenizer.

Chunks are split on whitespace; leading and trailing punctuation or symbol
characters are detached one character at a time; common English contraction
suffixes are split off. Internal punctuation (hyphens, apostrophes that are
not contraction markers) stays inside the token. The URL sentinel emitted by
normalization is always kept as a single token.
"""

from __future__ import annotations

import re
import unicodedata
from typing import NamedTuple

from .normalize import URL_TOKEN

_CONTRACTION_RE = re.compile(r"^(.+?)(n['’]t|['’](?:s|re|ve|ll|d|m))$", re.IGNORECASE)


class TokenSpan(NamedTuple):
    text: str
    start: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def _split_core(core: str, start: int, out: list[TokenSpan]) -> None:
    match = _CONTRACTION_RE.match(core)
    if match and any(c.isalpha() for c in match.group(1)):
        base, suffix = match.group(1), match.group(2)
        out.append(TokenSpan(base, start))
        out.append(TokenSpan(suffix, start + len(base)))
    else:
        out.append(TokenSpan(core, start))


def _split_chunk(chunk: str, start: int, out: list[TokenSpan]) -> None:
    while chunk:
        if chunk.startswith(URL_TOKEN):
            out.append(TokenSpan(URL_TOKEN, start))
            chunk = chunk[len(URL_TOKEN):]
            start += len(URL_TOKEN)
            continue
        if _is_punct(chunk[0]):
            out.append(TokenSpan(chunk[0], start))
            chunk = chunk[1:]
            start += 1
            continue
        break
    if not chunk:
        return
    trailing: list[TokenSpan] = []
    while chunk and _is_punct(chunk[-1]) and not chunk.endswith(URL_TOKEN):
        trailing.append(TokenSpan(chunk[-1], start + len(chunk) - 1))
        chunk = chunk[:-1]
    if chunk:
        pos = chunk.find(URL_TOKEN)
        if pos > 0:
            _split_core(chunk[:pos], start, out)
            _split_chunk(chunk[pos:], start + pos, out)
        elif pos == 0 and len(chunk) > len(URL_TOKEN):
            out.append(TokenSpan(URL_TOKEN, start))
            _split_chunk(chunk[len(URL_TOKEN):], start + len(URL_TOKEN), out)
        else:
            _split_core(chunk, start, out)
    out.extend(reversed(trailing))


def tokenize(text: str) -> list[TokenSpan]:
    """Tokenize normalized text into surface strings with character offsets."""
    out: list[TokenSpan] = []
    for match in re.finditer(r"\S+", text):
        _split_chunk(match.group(), match.start(), out)
    return out


def token_texts(text: str) -> list[str]:
    return [span.text for span in tokenize(text)]
