"""Normalization, tokenization, stemming, and stopword utilities."""

from .normalize import URL_TOKEN, normalize_text
from .porter import porter_stem
from .quotes import is_quote_token, quote_flags
from .stopwords import is_stopword, stopword_stems
from .tokenizer import TokenSpan, token_texts, tokenize

__all__ = [
    "URL_TOKEN",
    "normalize_text",
    "porter_stem",
    "is_quote_token",
    "quote_flags",
    "is_stopword",
    "stopword_stems",
    "TokenSpan",
    "token_texts",
    "tokenize",
]
