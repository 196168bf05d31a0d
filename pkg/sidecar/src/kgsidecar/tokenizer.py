"""Tweet-aware tokenizer: hashtags, @ mentions, URLs, emoticons, and reserved
markers survive as single tokens with their platform kind attached."""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["Token", "segment_sentences", "tokenize"]

_TOKEN_RE = re.compile(
    r"""
    (?P<url>https?://\S+|www\.\S+)
  | (?P<mention>@\w+)
  | (?P<hashtag>\#\w+)
  | (?P<emoticon>[:;=8xX][-o^']?[)(\]\[DdPpOo3*/\\|]+)
  | (?P<number>\d+(?:[.,]\d+)*%?)
  | (?P<word>[A-Za-z]+(?:[-'’.][A-Za-z]+)*\.?)
  | (?P<punct>[^\w\s])
    """,
    re.VERBOSE,
)

_RESERVED = {"rt"}
_ABBREVIATIONS = {"mr", "mrs", "ms", "dr", "prof", "st", "vs", "etc", "inc", "ltd"}


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: str  # plain | hashtag | mention | url | emoticon | reserved


def tokenize(text: str) -> list[Token]:
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        surface = match.group()
        if kind in {"word", "number", "punct"}:
            kind = "plain"
        if kind == "plain" and surface.lower() in _RESERVED and match.start() == 0:
            kind = "reserved"
        # abbreviations ("Mr.", "U.S.") keep their period; other trailing
        # periods are sentence punctuation and split off
        base = surface[:-1]
        if (
            surface.endswith(".")
            and len(base) > 0
            and "." not in base
            and base.lower() not in _ABBREVIATIONS
        ):
            tokens.append(Token(base, match.start(), match.end() - 1, kind))
            tokens.append(Token(".", match.end() - 1, match.end(), "plain"))
            continue
        tokens.append(Token(surface, match.start(), match.end(), kind))
    return tokens


_SENT_BREAK = {".", "!", "?"}


def segment_sentences(tokens: list[Token]) -> list[list[Token]]:
    """Break after sentence-final punctuation; trailing tags stay attached."""
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for i, tok in enumerate(tokens):
        current.append(tok)
        if tok.surface in _SENT_BREAK and tok.kind == "plain":
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            # a following lowercase word keeps the sentence open (abbrev.)
            if nxt is None or not (nxt.kind == "plain" and nxt.surface[:1].islower()):
                sentences.append(current)
                current = []
    if current:
        sentences.append(current)
    return sentences
