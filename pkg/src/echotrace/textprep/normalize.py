"""Text normalization pipeline applied to every post, comment, and explanation.

The pipeline runs seven ordered passes: moderator-footer removal, URL
masking, delta-token normalization, user/subreddit prefix stripping,
edit-line removal, blockquote conversion, and whitespace/markup collapsing.
The output is a single-line string with single spaces between tokens.
"""

from __future__ import annotations

import re

URL_TOKEN = "@url@"

_URL_RE = re.compile(r"(https?://[^\s)]*)")
_FOOTER_MARKERS = ("Hello, users of CMV", "This is a footnote")
_DELTA_FORMS = ("Δ", "δ", "&;#8710;", "!delta")
_LEADING_DELTA_RE = re.compile(r"^\s*delta\b\s*")
_EDIT_RES = (re.compile(r"EDIT(.*?):.*"), re.compile(r"Edit(.*?):.*"))
_SUB_USER_PREFIX_RE = re.compile(r"(?:^|(?<=[\s(\[{]))/?[ur]/(?=\S)", re.MULTILINE)
_BLOCKQUOTE_PREFIX_RE = re.compile(r"^\s*(?:(?:>|&gt;)\s*)+")
_HRULE_RES = ((re.compile(r"-{2,}"), "-"), (re.compile(r"\*{2,}"), "*"), (re.compile(r"_{2,}"), "_"))
_WS_RE = re.compile(r"\s+")


def _strip_footers(text: str) -> str:
    out = []
    for line in text.split("\n"):
        cut = len(line)
        for marker in _FOOTER_MARKERS:
            pos = line.find(marker)
            if pos != -1:
                cut = min(cut, pos)
        out.append(line[:cut])
    return "\n".join(out)


def _strip_edits(text: str) -> str:
    out = []
    for line in text.split("\n"):
        for pattern in _EDIT_RES:
            line = pattern.sub("", line)
        out.append(line)
    return "\n".join(out)


def _convert_blockquotes(text: str) -> str:
    # Contiguous quoted lines become one segment wrapped in double quotes.
    out: list[str] = []
    quoted: list[str] = []
    for line in text.split("\n"):
        match = _BLOCKQUOTE_PREFIX_RE.match(line)
        if match and line.strip():
            quoted.append(line[match.end():])
        else:
            if quoted:
                out.append('" ' + " ".join(quoted) + ' "')
                quoted = []
            out.append(line)
    if quoted:
        out.append('" ' + " ".join(quoted) + ' "')
    return "\n".join(out)


def normalize_text(raw: str, is_explanation: bool = False) -> str:
    """Run the full normalization pipeline over one document.

    ``is_explanation`` additionally drops a leading "delta" word, which is
    how explanation comments conventionally open.
    """
    text = _strip_footers(raw)
    text = _URL_RE.sub(URL_TOKEN, text)
    for form in _DELTA_FORMS:
        text = text.replace(form, "delta")
    if is_explanation:
        text = _LEADING_DELTA_RE.sub("", text, count=1)
    # Fixpoint: stripping can expose another prefix ("r/r/x").
    while True:
        stripped = _SUB_USER_PREFIX_RE.sub("", text)
        if stripped == text:
            break
        text = stripped
    text = _strip_edits(text)
    text = _convert_blockquotes(text)
    for pattern, repl in _HRULE_RES:
        text = pattern.sub(repl, text)
    return _WS_RE.sub(" ", text).strip()
