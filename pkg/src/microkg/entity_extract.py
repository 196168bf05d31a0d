"""Candidate-entity extraction from second-pass dependency parses.

Candidates are local noun phrases around a nominal head (hashtags and
mentions included when they fill nominal slots), expanded with one level of
prepositional attachment, annotated with quantity modifiers, and finally
augmented with pronoun anaphora substitutions from the coreference sidecar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .corpus_io import CorefChain, ParsedSentence, ParsedToken

__all__ = [
    "CandidateEntity",
    "attach_quantity_modifiers",
    "expand_with_preps",
    "extract_entities",
    "extract_noun_phrases",
    "entities_for_extraction",
    "resolve_anaphora",
    "span_surface",
]

# Modifier labels an NP span may descend through (determiners are excluded).
NP_MODIFIER_LABELS = {"compound", "amod", "nmod", "nummod", "quantmod", "advmod", "fixed", "flat"}
# Dependency slots under which a hashtag/mention counts as a nominal head.
NOMINAL_TAG_DEPRELS = {"nsubj", "nsubjpass", "dobj", "obj", "pobj", "conj", "compound"}
QUANTITY_ENT_TYPES = {"MONEY", "PERCENT", "QUANTITY", "CARDINAL"}

_NUMERIC_RE = re.compile(r"^\d")


@dataclass(frozen=True)
class CandidateEntity:
    post_id: str
    sent_index: int
    span: tuple[int, int]  # inclusive token range
    head_index: int  # lexical head, always inside span
    surface: str
    kind: str = "nominal"  # nominal | hashtag | mention | anaphora
    quantifier_span: tuple[int, int] | None = None
    quantifier_surface: str | None = None
    resolved_from: tuple[int, int] | None = None  # pronoun (sent, token) for anaphora
    pp_attached: bool = False

    def identity(self) -> tuple:
        return (self.post_id, self.sent_index, self.span, self.kind, self.resolved_from)

    def to_record(self) -> dict:
        record = {
            "post_id": self.post_id,
            "sent_index": self.sent_index,
            "span": list(self.span),
            "head_index": self.head_index,
            "surface": self.surface,
            "kind": self.kind,
            "pp_attached": self.pp_attached,
        }
        if self.quantifier_span is not None:
            record["quantifier_span"] = list(self.quantifier_span)
            record["quantifier_surface"] = self.quantifier_surface
        if self.resolved_from is not None:
            record["resolved_from"] = list(self.resolved_from)
        return record

    @classmethod
    def from_record(cls, record: dict) -> "CandidateEntity":
        return cls(
            post_id=record["post_id"],
            sent_index=int(record["sent_index"]),
            span=(int(record["span"][0]), int(record["span"][1])),
            head_index=int(record["head_index"]),
            surface=record["surface"],
            kind=record["kind"],
            quantifier_span=(
                tuple(int(v) for v in record["quantifier_span"])
                if "quantifier_span" in record
                else None
            ),
            quantifier_surface=record.get("quantifier_surface"),
            resolved_from=(
                tuple(int(v) for v in record["resolved_from"])
                if "resolved_from" in record
                else None
            ),
            pp_attached=bool(record.get("pp_attached", False)),
        )


def span_surface(sentence: ParsedSentence, span: tuple[int, int]) -> str:
    """Join token surfaces, keeping original adjacency (no space when the
    source text had none)."""
    parts = []
    prev_end = None
    for i in range(span[0], span[1] + 1):
        tok = sentence.token(i)
        if prev_end is not None and tok.start_char > prev_end:
            parts.append(" ")
        parts.append(tok.surface)
        prev_end = tok.end_char
    return "".join(parts)


def _is_quantity(token: ParsedToken) -> bool:
    return (
        token.ent_type in QUANTITY_ENT_TYPES
        or token.pos == "NUM"
        or token.surface.endswith("%")
        or bool(_NUMERIC_RE.match(token.surface))
    )


def _is_tag(token: ParsedToken) -> bool:
    return token.token_kind in {"hashtag", "mention"}


def _qualifies_as_head(token: ParsedToken) -> bool:
    if _is_tag(token):
        return (
            token.pos in {"NOUN", "PROPN"}
            or token.deprel in NOMINAL_TAG_DEPRELS
            or token.head == 0
        )
    return token.pos in {"NOUN", "PROPN"}


def _np_window(sentence: ParsedSentence, head_index: int) -> tuple[int, int]:
    """Head plus its contiguous restricted modifiers (transitive descent)."""
    gathered = {head_index}
    stack = [head_index]
    while stack:
        i = stack.pop()
        for child in sentence.children(i):
            if child.deprel not in NP_MODIFIER_LABELS:
                continue
            if child.deprel == "nmod" and child.pos not in {"NOUN", "PROPN", "NUM"}:
                continue  # only noun-noun nmod counts
            gathered.add(child.index)
            stack.append(child.index)
    lo = head_index
    while lo - 1 in gathered:
        lo -= 1
    hi = head_index
    while hi + 1 in gathered:
        hi += 1
    return lo, hi


def extract_noun_phrases(sentence: ParsedSentence) -> list[CandidateEntity]:
    """One candidate per nominal head not already inside another candidate."""
    out = []
    for tok in sentence.tokens:
        if not _qualifies_as_head(tok):
            continue
        if tok.deprel in NP_MODIFIER_LABELS:
            governor = sentence.token(tok.head) if tok.head > 0 else None
            if governor is not None and (
                governor.pos in {"NOUN", "PROPN"} or _is_tag(governor)
            ):
                continue  # modifier inside a larger NP
        span = _np_window(sentence, tok.index)
        kind = tok.token_kind if _is_tag(tok) else "nominal"
        out.append(
            CandidateEntity(
                post_id=sentence.post_id,
                sent_index=sentence.sent_index,
                span=span,
                head_index=tok.index,
                surface=span_surface(sentence, span),
                kind=kind,
            )
        )
    return out


def expand_with_preps(entity: CandidateEntity, sentence: ParsedSentence) -> CandidateEntity:
    """Append directly attached prepositional phrases (one level, no
    recursion into the attached phrase's own prepositions)."""
    lo, hi = entity.span
    expanded = False
    while True:
        prep = next(
            (
                c
                for c in sentence.children(entity.head_index)
                if c.deprel == "prep" and c.index == hi + 1
            ),
            None,
        )
        if prep is None:
            break
        pobj = next((c for c in sentence.children(prep.index) if c.deprel == "pobj"), None)
        if pobj is None:
            break
        _, pobj_hi = _np_window(sentence, pobj.index)
        if pobj_hi <= prep.index:
            break
        hi = pobj_hi
        expanded = True
    if not expanded:
        return entity
    span = (lo, hi)
    return replace(
        entity, span=span, surface=span_surface(sentence, span), pp_attached=True
    )


def attach_quantity_modifiers(
    entity: CandidateEntity, sentence: ParsedSentence
) -> CandidateEntity:
    """Record a quantity expression governing or modifying the noun phrase,
    keeping ``head_index`` on the lexical head."""
    head = sentence.token(entity.head_index)
    lo, hi = entity.span

    # Quantity head with an "of" phrase: re-anchor on the phrase's noun.
    if _is_quantity(head):
        for prep in sentence.children(head.index):
            if prep.deprel != "prep" or prep.surface.lower() != "of":
                continue
            if not lo <= prep.index <= hi:
                continue
            pobj = next(
                (c for c in sentence.children(prep.index) if c.deprel == "pobj"), None
            )
            if pobj is None or not lo <= pobj.index <= hi:
                continue
            qspan = (lo, prep.index - 1)
            kind = pobj.token_kind if _is_tag(pobj) else "nominal"
            return replace(
                entity,
                head_index=pobj.index,
                kind=kind,
                quantifier_span=qspan,
                quantifier_surface=span_surface(sentence, qspan),
            )

    # Numeric modifier inside the span, preceding the head.
    qchildren = [
        c
        for c in sentence.children(head.index)
        if lo <= c.index < head.index
        and (c.deprel in {"nummod", "quantmod"} or (c.deprel == "amod" and _is_quantity(c)))
    ]
    if qchildren:
        q_hi = max(c.index for c in qchildren)
        qspan = (lo, q_hi)
        return replace(
            entity, quantifier_span=qspan, quantifier_surface=span_surface(sentence, qspan)
        )

    # Governed by a quantity through "of" from above (quantity head was not
    # itself extracted, e.g. tagged NUM/SYM by the parser).
    if head.deprel == "pobj" and head.head > 0:
        prep = sentence.token(head.head)
        if prep.deprel == "prep" and prep.surface.lower() == "of" and prep.head > 0:
            governor = sentence.token(prep.head)
            if _is_quantity(governor) and not lo <= governor.index <= hi:
                qspan = _np_window(sentence, governor.index)
                if qspan[1] < lo:
                    return replace(
                        entity,
                        quantifier_span=qspan,
                        quantifier_surface=span_surface(sentence, qspan),
                    )
    return entity


def _dedup_overlaps(entities: list[CandidateEntity]) -> list[CandidateEntity]:
    """Prefer the longest span; drop candidates contained in a kept one."""
    ordered = sorted(
        entities, key=lambda e: (-(e.span[1] - e.span[0]), e.span[0], e.head_index)
    )
    kept: list[CandidateEntity] = []
    for cand in ordered:
        contained = any(
            k.span[0] <= cand.span[0] and cand.span[1] <= k.span[1] for k in kept
        )
        if not contained:
            kept.append(cand)
    kept.sort(key=lambda e: e.span)
    return kept


def extract_entities(sentence: ParsedSentence) -> list[CandidateEntity]:
    """Full per-sentence candidate pipeline: NPs, PP expansion, quantity
    annotation, overlap resolution."""
    candidates = extract_noun_phrases(sentence)
    candidates = [expand_with_preps(e, sentence) for e in candidates]
    candidates = [attach_quantity_modifiers(e, sentence) for e in candidates]
    return _dedup_overlaps(candidates)


def resolve_anaphora(
    entities: list[CandidateEntity],
    chains: list[CorefChain],
    sentences: list[ParsedSentence],
) -> list[CandidateEntity]:
    """Substitute chain pronouns with anaphora candidates carrying the
    antecedent's expanded span. Chains without an extracted antecedent are
    skipped."""
    by_index = {s.sent_index: s for s in sentences}
    out = list(entities)
    for chain in chains:
        a_sent, a_tok = chain.antecedent
        covering = [
            e
            for e in entities
            if e.sent_index == a_sent
            and e.kind != "anaphora"
            and e.span[0] <= a_tok <= e.span[1]
        ]
        if not covering:
            continue
        antecedent = min(
            covering,
            key=lambda e: (0 if e.head_index == a_tok else 1, -(e.span[1] - e.span[0])),
        )
        for m_sent, m_tok in chain.mentions[1:]:
            sentence = by_index.get(m_sent)
            if sentence is None or not 1 <= m_tok <= len(sentence.tokens):
                continue
            if sentence.token(m_tok).pos != "PRON":
                continue
            out.append(replace(antecedent, kind="anaphora", resolved_from=(m_sent, m_tok)))
    return out


def entities_for_extraction(
    entities: list[CandidateEntity], sent_index: int
) -> list[CandidateEntity]:
    """Candidates anchored in the given sentence (anaphora entities anchor at
    their pronoun position)."""
    picked = []
    for e in entities:
        anchor_sent = e.resolved_from[0] if e.kind == "anaphora" else e.sent_index
        if anchor_sent == sent_index:
            picked.append(e)
    return picked
