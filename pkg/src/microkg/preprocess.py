"""Post normalization: strip non-syntactic tokens, then apply three heuristics
that remove token patterns known to disrupt dependency parsing.

The heuristics run per sentence, in a fixed order, over the first-pass parse:

1. leading mention/retweet runs (kept only when a single mention is followed
   by a verb),
2. hashtag/mention/URL runs of length > 1 (first element kept, whole run
   dropped after a closing mark),
3. short verb-less title prefixes terminated by a colon.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .corpus_io import ParsedSentence, ParsedToken, RawPost

__all__ = [
    "NormalizedPost",
    "PreprocessError",
    "drop_leading_mentions",
    "drop_title_prefix",
    "normalize_post",
    "strip_nonsyntactic",
    "truncate_tag_sequences",
]

STRIP_KINDS = {"emoticon", "reserved", "url"}
TAG_KINDS = {"hashtag", "mention", "url"}
VERBAL_POS = {"VERB", "AUX"}
CLOSING_MARKS = {"!", ":", "?", "."}
RETWEET_MARKERS = {"rt"}
TITLE_PREFIX_MAX = 6

# Fallback for corpora whose tokenizer did not flag emoticons.
_EMOTICON_RE = re.compile(r"^[:;=8xX][-o^']?[)(\]\[DdPpOo3*/\\|]+$")


class PreprocessError(ValueError):
    pass


@dataclass
class NormalizedPost:
    post_id: str
    normalized_text: str
    removed_spans: list[tuple[int, int, str]]

    def to_record(self) -> dict:
        return {
            "id": self.post_id,
            "normalized_text": self.normalized_text,
            "removed": [[s, e, reason] for s, e, reason in self.removed_spans],
        }

    @classmethod
    def from_record(cls, record: dict) -> "NormalizedPost":
        return cls(
            post_id=record["id"],
            normalized_text=record["normalized_text"],
            removed_spans=[(int(s), int(e), r) for s, e, r in record["removed"]],
        )


def _is_emoticon(token: ParsedToken) -> bool:
    return token.token_kind == "emoticon" or (
        token.token_kind == "plain" and bool(_EMOTICON_RE.match(token.surface))
    )


def _rebuild(sentence: ParsedSentence, tokens: list[ParsedToken]) -> ParsedSentence:
    # Token-stream view for the later heuristics; head links are left as-is
    # and only re-validated after the second parse pass.
    pruned = ParsedSentence(sentence.post_id, sentence.sent_index, list(tokens))
    return pruned


def strip_nonsyntactic(
    sentence: ParsedSentence, removed: list[tuple[ParsedToken, str]] | None = None
) -> ParsedSentence:
    """Remove emoticon, reserved and URL tokens; hashtags and mentions stay."""
    kept = []
    for tok in sentence.tokens:
        if tok.token_kind in {"reserved", "url"}:
            if removed is not None:
                removed.append((tok, tok.token_kind))
        elif _is_emoticon(tok):
            if removed is not None:
                removed.append((tok, "emoticon"))
        else:
            kept.append(tok)
    return _rebuild(sentence, kept)


def _is_leading_run_token(token: ParsedToken) -> bool:
    if token.token_kind == "mention":
        return True
    return token.token_kind == "reserved" and token.surface.lower() in RETWEET_MARKERS


def drop_leading_mentions(
    sentence: ParsedSentence, removed: list[tuple[ParsedToken, str]] | None = None
) -> ParsedSentence:
    """Drop a leading mention/retweet run of n > 1 tokens, or of one token
    not followed by a verb."""
    tokens = sentence.tokens
    run = 0
    while run < len(tokens) and _is_leading_run_token(tokens[run]):
        run += 1
    if run == 0:
        return sentence
    if run == 1:
        nxt = tokens[1] if len(tokens) > 1 else None
        if nxt is not None and nxt.pos in VERBAL_POS:
            return sentence
    if removed is not None:
        removed.extend((tok, "leading_mentions") for tok in tokens[:run])
    return _rebuild(sentence, tokens[run:])


def truncate_tag_sequences(
    sentence: ParsedSentence, removed: list[tuple[ParsedToken, str]] | None = None
) -> ParsedSentence:
    """For each maximal tag run of length n > 1 keep only the first element;
    drop the whole run when the previous token is a closing mark."""
    tokens = sentence.tokens
    kept: list[ParsedToken] = []
    i = 0
    while i < len(tokens):
        if tokens[i].token_kind not in TAG_KINDS:
            kept.append(tokens[i])
            i += 1
            continue
        j = i
        while j < len(tokens) and tokens[j].token_kind in TAG_KINDS:
            j += 1
        run = tokens[i:j]
        if len(run) == 1:
            kept.append(run[0])
        else:
            after_closer = i > 0 and tokens[i - 1].surface in CLOSING_MARKS
            dropped = run if after_closer else run[1:]
            if not after_closer:
                kept.append(run[0])
            if removed is not None:
                removed.extend((tok, "tag_sequence") for tok in dropped)
        i = j
    return _rebuild(sentence, kept)


def drop_title_prefix(
    sentence: ParsedSentence,
    max_len: int = TITLE_PREFIX_MAX,
    removed: list[tuple[ParsedToken, str]] | None = None,
) -> ParsedSentence:
    """Remove a leading verb-less sequence of at most ``max_len`` tokens that
    is terminated by a colon (colon included)."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    tokens = sentence.tokens
    for pos, tok in enumerate(tokens):
        if tok.surface == ":":
            if pos > max_len:
                return sentence
            if any(t.pos in VERBAL_POS for t in tokens[:pos]):
                return sentence
            if removed is not None:
                removed.extend((t, "title_prefix") for t in tokens[: pos + 1])
            return _rebuild(sentence, tokens[pos + 1 :])
        if tok.pos in VERBAL_POS:
            return sentence
        if pos >= max_len:
            return sentence
    return sentence


def normalize_post(post: RawPost, first_pass: list[ParsedSentence]) -> NormalizedPost:
    """Apply the removal rules sentence by sentence and excise the removed
    character spans from the post text (whitespace collapsed)."""
    text = post.text
    removed: list[tuple[ParsedToken, str]] = []
    for sentence in first_pass:
        for tok in sentence.tokens:
            if tok.end_char > len(text) or text[tok.start_char : tok.end_char] != tok.surface:
                raise PreprocessError(
                    f"post {post.id}: token {tok.index} of sentence {sentence.sent_index} "
                    f"does not match the post text at [{tok.start_char}:{tok.end_char}]"
                )
        stage = strip_nonsyntactic(sentence, removed)
        stage = drop_leading_mentions(stage, removed)
        stage = truncate_tag_sequences(stage, removed)
        stage = drop_title_prefix(stage, removed=removed)

    spans = sorted((tok.start_char, tok.end_char, reason) for tok, reason in removed)
    keep_mask = bytearray([1]) * len(text)
    for start, end, _ in spans:
        for i in range(start, end):
            keep_mask[i] = 0
    normalized = "".join(ch for ch, keep in zip(text, keep_mask) if keep)
    normalized = re.sub(r"\s+", " ", normalized).strip()
    return NormalizedPost(post_id=post.id, normalized_text=normalized, removed_spans=spans)
