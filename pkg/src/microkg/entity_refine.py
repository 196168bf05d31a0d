"""Entity cleanup, normalization to canonical keys, merging, and linking.

Hashtags/mentions lose their sigil and camel-case; other tokens are
lemmatized and lowercased (proper nouns and verbs keep their surface), and
nouns map to their British English variant. Canonical keys drive both entity
merging and URI minting.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from importlib import resources

from .corpus_io import ParsedSentence, ParsedToken
from .entity_extract import CandidateEntity, span_surface
from .linking import SpotlightClient, SpotlightResource

__all__ = [
    "EntityLink",
    "EntityOccurrence",
    "NormalizedEntity",
    "RewriteSpan",
    "clean_entity",
    "default_stopwords",
    "default_variants",
    "entity_key",
    "link_entities",
    "match_resources",
    "merge_entities",
    "normalize_nominal",
    "normalize_tag",
    "rewrite_for_linking",
]

_PUNCT = string.punctuation + "‘’“”…"


def default_stopwords() -> frozenset[str]:
    text = resources.files("microkg.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


def default_variants() -> dict[str, str]:
    text = resources.files("microkg.data").joinpath("british_variants.txt").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        if line.strip():
            us, uk = line.split("\t")
            table[us] = uk
    return table


_STOPWORDS = default_stopwords()
_VARIANTS = default_variants()


@dataclass(frozen=True)
class EntityOccurrence:
    post_id: str
    sent_index: int
    span: tuple[int, int]
    quantifier: str | None = None
    quantified_key: str | None = None


@dataclass
class NormalizedEntity:
    key: str
    head_lemma: str
    variants: set[tuple[str, str]] = field(default_factory=set)  # (surface, post_id)
    occurrences: list[EntityOccurrence] = field(default_factory=list)


@dataclass(frozen=True)
class EntityLink:
    entity_key: str
    resource_uri: str
    kind: str  # same_as | related
    confidence: float


@dataclass(frozen=True)
class RewriteSpan:
    start: int
    end: int
    head_start: int
    head_end: int
    entity_key: str


# ---------------------------------------------------------------------------
# Normalization primitives
# ---------------------------------------------------------------------------


def clean_entity(surface: str, stopwords: frozenset[str] = _STOPWORDS) -> str | None:
    """Strip punctuation and stop-words at the span edges; ``None`` signals
    the entity emptied out and must be discarded."""
    tokens = surface.split()
    changed = True
    while changed and tokens:
        changed = False
        head = tokens[0].strip(_PUNCT)
        if head != tokens[0]:
            tokens[0] = head
            changed = True
        if tokens and (not tokens[0] or tokens[0].lower() in stopwords):
            tokens.pop(0)
            changed = True
            continue
        if not tokens:
            break
        tail = tokens[-1].strip(_PUNCT)
        if tail != tokens[-1]:
            tokens[-1] = tail
            changed = True
        if tokens and (not tokens[-1] or tokens[-1].lower() in stopwords):
            tokens.pop()
            changed = True
    cleaned = " ".join(tokens)
    return cleaned if cleaned else None


def _camel_split(text: str) -> str:
    def is_upper(ch: str) -> bool:
        # chars without a distinct lowercase form survive lower() and must
        # not re-trigger a boundary on already-normalized text
        return ch.isupper() and ch.lower() != ch

    out = []
    for i, ch in enumerate(text):
        if i > 0:
            prev = text[i - 1]
            boundary = (
                (prev.islower() and is_upper(ch))
                or (prev.isalpha() and ch.isdigit())
                or (prev.isdigit() and ch.isalpha())
            )
            if boundary:
                out.append(" ")
        out.append(ch)
    return "".join(out)


def normalize_tag(surface: str) -> str:
    """Sigil removal, camel-case/underscore splitting, lowercasing."""
    body = surface.lstrip("#@")
    body = body.replace("_", " ")
    body = _camel_split(body)
    return " ".join(body.lower().split())


def _nominal_token(token: ParsedToken, variants: dict[str, str]) -> str:
    if token.token_kind in {"hashtag", "mention"}:
        split = normalize_tag(token.surface)
        if " " not in split:
            lemma = token.lemma.lower().lstrip("#@")
            if lemma:
                split = lemma
        return split
    if token.pos in {"VERB", "PROPN"}:
        return token.surface.lower()
    word = token.lemma.lower()
    if token.pos == "NOUN":
        word = variants.get(word, word)
    return word


def normalize_nominal(
    entity: CandidateEntity,
    sentence: ParsedSentence,
    variants: dict[str, str] = _VARIANTS,
) -> str:
    """Per-token normalized form of the full span (quantifier included)."""
    parts = [
        _nominal_token(sentence.token(i), variants)
        for i in range(entity.span[0], entity.span[1] + 1)
    ]
    return " ".join(p for p in parts if p)


def entity_key(
    entity: CandidateEntity,
    sentence: ParsedSentence,
    stopwords: frozenset[str] = _STOPWORDS,
    variants: dict[str, str] = _VARIANTS,
) -> str | None:
    """Canonical node key: normalized span with the quantifier held out,
    cleaned; ``None`` when the entity empties out."""
    lo, hi = entity.span
    if entity.quantifier_span is not None and entity.quantifier_span[0] == lo:
        lo = entity.quantifier_span[1] + 1
    parts = []
    for i in range(lo, hi + 1):
        tok = sentence.token(i)
        if tok.pos == "DET":
            continue
        parts.append(_nominal_token(tok, variants))
    return clean_entity(" ".join(p for p in parts if p), stopwords)


def _normalized_quantifier(entity: CandidateEntity) -> str | None:
    if entity.quantifier_surface is None:
        return None
    return " ".join(entity.quantifier_surface.lower().split())


def _quantified_key(entity: CandidateEntity, sentence: ParsedSentence, key: str) -> str | None:
    quantifier = _normalized_quantifier(entity)
    if quantifier is None:
        return None
    after = entity.quantifier_span[1] + 1
    has_of = (
        after <= entity.span[1] and sentence.token(after).surface.lower() == "of"
    )
    return f"{quantifier} of {key}" if has_of else f"{quantifier} {key}"


# ---------------------------------------------------------------------------
# Merging
# ---------------------------------------------------------------------------


def merge_entities(
    entities: list[CandidateEntity],
    sentence_of,
    stopwords: frozenset[str] = _STOPWORDS,
    variants: dict[str, str] = _VARIANTS,
) -> tuple[dict[str, NormalizedEntity], dict[tuple, str]]:
    """Group candidates by canonical key.

    ``sentence_of(entity)`` must return the entity's ParsedSentence. Returns
    the key -> NormalizedEntity map plus an identity -> key index (used to
    rewrite triples). Spaceless tag keys are bridged onto an existing spaced
    key equal to them modulo spaces, which maps e.g. a lowercase
    concatenated hashtag and its spelled-out noun phrase to one concept.
    """
    merged: dict[str, NormalizedEntity] = {}
    key_index: dict[tuple, str] = {}
    pending: list[tuple[CandidateEntity, str, ParsedSentence]] = []
    for entity in entities:
        sentence = sentence_of(entity)
        key = entity_key(entity, sentence, stopwords, variants)
        if key is None:
            continue
        pending.append((entity, key, sentence))

    spaced: dict[str, str] = {}
    for _, key, _ in pending:
        if " " in key:
            concat = key.replace(" ", "")
            if concat not in spaced or key < spaced[concat]:
                spaced[concat] = key
    bridge = {
        key: spaced[key]
        for _, key, _ in pending
        if " " not in key and key in spaced and spaced[key] != key
    }

    for entity, key, sentence in pending:
        key = bridge.get(key, key)
        node = merged.get(key)
        if node is None:
            node = NormalizedEntity(
                key=key, head_lemma=sentence.token(entity.head_index).lemma.lower()
            )
            merged[key] = node
        node.variants.add((entity.surface, entity.post_id))
        node.occurrences.append(
            EntityOccurrence(
                post_id=entity.post_id,
                sent_index=entity.sent_index,
                span=entity.span,
                quantifier=_normalized_quantifier(entity),
                quantified_key=_quantified_key(entity, sentence, key),
            )
        )
        key_index[entity.identity()] = key
    return merged, key_index


# ---------------------------------------------------------------------------
# Linking
# ---------------------------------------------------------------------------


def rewrite_for_linking(
    sentence: ParsedSentence,
    entities: list[CandidateEntity],
    stopwords: frozenset[str] = _STOPWORDS,
    variants: dict[str, str] = _VARIANTS,
) -> tuple[str, list[RewriteSpan]]:
    """Sentence text with entity spans replaced by their normalized forms,
    plus the map from rewritten spans (and head sub-spans) to entity keys."""
    local = [
        e
        for e in entities
        if e.kind != "anaphora" and e.sent_index == sentence.sent_index
    ]
    local.sort(key=lambda e: (e.span[0], -(e.span[1] - e.span[0])))
    picked: list[CandidateEntity] = []
    last_end = 0
    for entity in local:  # overlaps: keep the longest, drop the contained
        if picked and entity.span[0] <= last_end:
            continue
        picked.append(entity)
        last_end = entity.span[1]

    n = len(sentence.tokens)
    base = span_surface(sentence, (1, n))
    offset0 = sentence.token(1).start_char

    out: list[str] = []
    spans: list[RewriteSpan] = []
    cursor = 0  # char cursor into `base`
    written = 0
    for entity in picked:
        key = entity_key(entity, sentence, stopwords, variants)
        if key is None:
            continue
        start = sentence.token(entity.span[0]).start_char - offset0
        end = sentence.token(entity.span[1]).end_char - offset0
        out.append(base[cursor:start])
        written += start - cursor
        head_tok = sentence.token(entity.head_index)
        head_norm = _nominal_token(head_tok, variants)
        pos = key.rfind(head_norm)
        if pos < 0:
            pos, head_norm = 0, key
        spans.append(
            RewriteSpan(
                start=written,
                end=written + len(key),
                head_start=written + pos,
                head_end=written + pos + len(head_norm),
                entity_key=key,
            )
        )
        out.append(key)
        written += len(key)
        cursor = end
    out.append(base[cursor:])
    return "".join(out), spans


def link_entities(
    rewritten: str,
    span_map: list[RewriteSpan],
    client: SpotlightClient,
) -> list[EntityLink]:
    """Annotate the rewritten sentence and keep resources that satisfy the
    span-inclusion condition; head overlap upgrades the link to same_as.
    Head-overlap-only hits are discarded (span detection noise)."""
    return match_resources(span_map, client.annotate(rewritten))


def match_resources(
    span_map: list[RewriteSpan], resources_found: list[SpotlightResource]
) -> list[EntityLink]:
    links: dict[tuple[str, str, str], float] = {}
    for res in resources_found:
        r_start = res.offset
        r_end = res.offset + len(res.surface)
        for span in span_map:
            included = r_start >= span.start and r_end <= span.end
            head_overlap = r_start < span.head_end and r_end > span.head_start
            if included and head_overlap:
                kind = "same_as"
            elif included:
                kind = "related"
            else:
                continue
            link_key = (span.entity_key, res.uri, kind)
            links[link_key] = max(links.get(link_key, 0.0), res.score)
    return [
        EntityLink(entity_key=k, resource_uri=u, kind=kind, confidence=score)
        for (k, u, kind), score in sorted(links.items())
    ]
