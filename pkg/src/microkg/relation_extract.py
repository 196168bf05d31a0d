"""Surface-triple extraction over validated dependency-path patterns.

For each ordered pair of candidate entities the unique tree path between
their anchors is read off; pairs whose (preposition-elided) label sequence
matches a target pattern and passes the infinitive filter become triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus_io import ParsedSentence
from .entity_extract import CandidateEntity, span_surface

__all__ = [
    "DEFAULT_TARGET_PATTERNS",
    "DependencyPath",
    "SurfaceTriple",
    "aux_infinitive_filter",
    "detect_flags",
    "extract_triples",
    "load_patterns",
    "match_target_pattern",
    "tree_path",
]

VERBAL_POS = {"VERB", "AUX"}
TAG_KINDS = {"hashtag", "mention", "url"}
PASSIVE_PATTERN = ("nsubjpass", "agent", "pobj")
INFINITIVE_FILTER_PATTERN = ("acl", "dobj")
NEGATION_LEMMAS = {"not", "never", "no"}

# Spelling variants collapse to one canonical label before matching.
LABEL_ALIASES = {
    "obj": "dobj",
    "nsubj:pass": "nsubjpass",
    "relcl": "acl:relcl",
}

DEFAULT_TARGET_PATTERNS: tuple[tuple[str, ...], ...] = (
    ("nsubj", "dobj"),
    ("acl:relcl", "dobj"),
    ("acl", "dobj"),
    ("nsubjpass", "agent", "pobj"),
    ("nsubj", "dobj", "conj"),
    ("nsubj", "conj"),
)


@dataclass(frozen=True)
class DependencyPath:
    labels: tuple[str, ...]  # raw edge labels, traversal order a -> b
    nodes: tuple[int, ...]  # token indexes along the path, a first
    pivot_pos: int | None  # position in ``nodes`` of the governing verb

    @property
    def pivot_index(self) -> int | None:
        return None if self.pivot_pos is None else self.nodes[self.pivot_pos]


@dataclass(frozen=True)
class SurfaceTriple:
    post_id: str
    sent_index: int
    subject: CandidateEntity
    verb_span: tuple[int, int]
    verb_surface: str
    verb_lemma: str
    object: CandidateEntity
    path: DependencyPath
    pattern: tuple[str, ...]
    negated: bool
    interrogative: bool

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "sent_index": self.sent_index,
            "subject": self.subject.to_record(),
            "verb_span": list(self.verb_span),
            "verb_surface": self.verb_surface,
            "verb_lemma": self.verb_lemma,
            "object": self.object.to_record(),
            "path_labels": list(self.path.labels),
            "path_nodes": list(self.path.nodes),
            "path_pivot": self.path.pivot_pos,
            "pattern": list(self.pattern),
            "negated": self.negated,
            "interrogative": self.interrogative,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SurfaceTriple":
        return cls(
            post_id=record["post_id"],
            sent_index=int(record["sent_index"]),
            subject=CandidateEntity.from_record(record["subject"]),
            verb_span=(int(record["verb_span"][0]), int(record["verb_span"][1])),
            verb_surface=record["verb_surface"],
            verb_lemma=record["verb_lemma"],
            object=CandidateEntity.from_record(record["object"]),
            path=DependencyPath(
                labels=tuple(record["path_labels"]),
                nodes=tuple(int(n) for n in record["path_nodes"]),
                pivot_pos=record["path_pivot"],
            ),
            pattern=tuple(record["pattern"]),
            negated=bool(record["negated"]),
            interrogative=bool(record["interrogative"]),
        )


def tree_path(sentence: ParsedSentence, a: int, b: int) -> DependencyPath:
    """Unique path a -> ... -> b through the tree. Edge labels are the
    deprels of the dependent side of each traversed edge; the pivot is the
    shallowest VERB/AUX on the path."""
    if a == b:
        raise ValueError("path endpoints must differ")

    def ancestors(i: int) -> list[int]:
        chain = [i]
        while sentence.token(chain[-1]).head != 0:
            chain.append(sentence.token(chain[-1]).head)
        return chain

    up_a = ancestors(a)
    up_b = ancestors(b)
    in_b = {i: pos for pos, i in enumerate(up_b)}
    lca_pos_a = next(pos for pos, i in enumerate(up_a) if i in in_b)
    lca = up_a[lca_pos_a]
    rising = up_a[: lca_pos_a + 1]  # a ... lca
    falling = up_b[: in_b[lca]][::-1]  # nodes below lca on b's side, ending at b
    nodes = rising + falling
    labels = []
    for prev, cur in zip(nodes, nodes[1:]):
        dependent = prev if sentence.token(prev).head == cur else cur
        labels.append(sentence.token(dependent).deprel)

    def node_depth(i: int) -> int:
        d = 0
        j = i
        while sentence.token(j).head != 0:
            j = sentence.token(j).head
            d += 1
        return d

    pivot_pos = None
    best_depth = None
    for pos, i in enumerate(nodes):
        if sentence.token(i).pos in VERBAL_POS:
            d = node_depth(i)
            if best_depth is None or d < best_depth:
                best_depth = d
                pivot_pos = pos
    return DependencyPath(labels=tuple(labels), nodes=tuple(nodes), pivot_pos=pivot_pos)


def canonical_labels(labels: tuple[str, ...]) -> tuple[str, ...]:
    """Alias-normalize and elide bare preposition edges (their ``pobj``
    stays, which keeps prepositional paths distinguishable)."""
    out = []
    for label in labels:
        label = LABEL_ALIASES.get(label, label)
        if label == "prep":
            continue
        out.append(label)
    return tuple(out)


def _canonical_pattern(pattern: tuple[str, ...]) -> tuple[str, ...]:
    labels = tuple(LABEL_ALIASES.get(p, p) for p in pattern)
    # The relative-clause path is two edges however it is spelled.
    if labels == ("acl", "acl:relcl", "dobj") or labels == ("acl", "relcl", "dobj"):
        return ("acl:relcl", "dobj")
    return labels


def load_patterns(path: str | Path) -> tuple[tuple[str, ...], ...]:
    """Read one comma- or whitespace-separated label sequence per line."""
    patterns = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            patterns.append(_canonical_pattern(tuple(parts)))
    return tuple(patterns)


def match_target_pattern(
    path: DependencyPath,
    patterns: tuple[tuple[str, ...], ...] = DEFAULT_TARGET_PATTERNS,
) -> tuple[str, ...] | None:
    """Order-sensitive match of the path's canonical labels."""
    canon = canonical_labels(path.labels)
    for pattern in patterns:
        if canon == _canonical_pattern(pattern):
            return _canonical_pattern(pattern)
    return None


def aux_infinitive_filter(sentence: ParsedSentence, triple: SurfaceTriple) -> bool:
    """False (drop) for ``[acl, dobj]`` triples whose pivot carries an
    ``aux`` child with the infinitive particle "to"; no-op otherwise."""
    if triple.pattern != INFINITIVE_FILTER_PATTERN:
        return True
    pivot = triple.path.pivot_index
    if pivot is None:
        return True
    for child in sentence.children(pivot):
        if child.deprel == "aux" and child.surface.lower() == "to":
            return False
    return True


def detect_flags(sentence: ParsedSentence, pivot: int) -> tuple[bool, bool]:
    """(negated, interrogative) for a triple pivoted at the given token."""
    negated = False
    for child in sentence.children(pivot):
        if child.deprel == "neg":
            negated = True
        elif child.deprel == "advmod" and child.lemma.lower() in NEGATION_LEMMAS:
            negated = True
    interrogative = False
    for tok in reversed(sentence.tokens):
        if tok.token_kind in TAG_KINDS:
            continue
        interrogative = tok.surface == "?"
        break
    return negated, interrogative


def _anchor(entity: CandidateEntity, sentence: ParsedSentence) -> int:
    """Attachment token of the span: the one whose governor lies outside it
    (the pronoun position for anaphora candidates)."""
    if entity.kind == "anaphora":
        return entity.resolved_from[1]
    lo, hi = entity.span
    for i in range(lo, hi + 1):
        head = sentence.token(i).head
        if head == 0 or not lo <= head <= hi:
            return i
    return entity.head_index


def _strip_subject_conj(
    path: DependencyPath, sentence: ParsedSentence
) -> DependencyPath:
    """Drop leading conj edges that ascend the subject's conjunct chain, so
    each coordinated entity yields its own triple."""
    labels, nodes = list(path.labels), list(path.nodes)
    while (
        len(labels) > 1
        and labels[0] == "conj"
        and sentence.token(nodes[0]).head == nodes[1]
    ):
        labels.pop(0)
        nodes.pop(0)
    if len(nodes) == len(path.nodes):
        return path
    pivot_pos = path.pivot_pos
    if pivot_pos is not None:
        pivot_pos -= len(path.nodes) - len(nodes)
        if pivot_pos < 0:
            pivot_pos = None
    return DependencyPath(labels=tuple(labels), nodes=tuple(nodes), pivot_pos=pivot_pos)


def _verb_tokens(sentence: ParsedSentence, path: DependencyPath, pattern: tuple[str, ...]) -> list[int]:
    pivot = path.pivot_index
    tokens = [pivot]
    for child in sentence.children(pivot):
        if child.deprel == "prt":
            tokens.append(child.index)
    if pattern == PASSIVE_PATTERN:
        # The agent marker is part of the predicate surface ("driven by").
        for pos in range(1, len(path.nodes)):
            if path.labels[pos - 1] == "agent":
                tokens.append(path.nodes[pos])
    return sorted(set(tokens))


def extract_triples(
    sentence: ParsedSentence,
    entities: list[CandidateEntity],
    patterns: tuple[tuple[str, ...], ...] = DEFAULT_TARGET_PATTERNS,
) -> list[SurfaceTriple]:
    """All pattern-matching triples over ordered entity pairs in a sentence."""
    triples: list[SurfaceTriple] = []
    seen: set[tuple] = set()
    for subject in entities:
        for obj in entities:
            if subject is obj or subject.identity() == obj.identity():
                continue
            a = _anchor(subject, sentence)
            b = _anchor(obj, sentence)
            if a == b:
                continue
            path = tree_path(sentence, a, b)
            if path.pivot_pos is None:
                continue
            path = _strip_subject_conj(path, sentence)
            pattern = match_target_pattern(path, patterns)
            if pattern is None:
                continue
            if pattern == PASSIVE_PATTERN:
                subj, objt = obj, subject  # active-voice normalization
            else:
                subj, objt = subject, obj
            pivot = path.pivot_index
            verb_tokens = _verb_tokens(sentence, path, pattern)
            verb_span = (verb_tokens[0], verb_tokens[-1])
            verb_surface = span_surface(sentence, verb_span)
            verb_lemma = " ".join(
                sentence.token(i).lemma.lower() for i in range(verb_span[0], verb_span[1] + 1)
            )
            negated, interrogative = detect_flags(sentence, pivot)
            triple = SurfaceTriple(
                post_id=sentence.post_id,
                sent_index=sentence.sent_index,
                subject=subj,
                verb_span=verb_span,
                verb_surface=verb_surface,
                verb_lemma=verb_lemma,
                object=objt,
                path=path,
                pattern=pattern,
                negated=negated,
                interrogative=interrogative,
            )
            if not aux_infinitive_filter(sentence, triple):
                continue
            key = (subj.span, subj.kind, subj.resolved_from, pivot, objt.span, objt.kind)
            if key in seen:
                continue
            seen.add(key)
            triples.append(triple)
    triples.sort(key=lambda t: (t.subject.span, t.object.span, t.verb_span))
    return triples
