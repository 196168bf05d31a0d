"""Corpus loading: posts, CoNLL-U parses, coreference sidecars, word vectors.

All structures are immutable after load and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kernels import levenshtein_distance

__all__ = [
    "CorefChain",
    "CorpusError",
    "ParsedSentence",
    "ParsedToken",
    "RawPost",
    "WordVectorTable",
    "dedup_corpus",
    "levenshtein_similarity",
    "load_conllu",
    "load_coref",
    "load_posts",
    "load_word_vectors",
    "read_jsonl",
    "write_jsonl",
]

TOKEN_KINDS = {"plain", "hashtag", "mention", "url", "emoticon", "reserved"}


class CorpusError(ValueError):
    """Raised for malformed corpus files or invariant violations."""


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    created_at: str | None = None
    lang: str | None = None


@dataclass(frozen=True)
class ParsedToken:
    index: int  # 1-based position in the sentence
    surface: str
    lemma: str
    pos: str  # UD upos
    head: int  # 0 = sentence root
    deprel: str
    start_char: int
    end_char: int
    token_kind: str = "plain"
    ent_type: str = ""  # upstream NER label (PERCENT, MONEY, ...), "" if none


@dataclass
class ParsedSentence:
    post_id: str
    sent_index: int
    tokens: list[ParsedToken]
    _children: dict[int, list[int]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        children: dict[int, list[int]] = {}
        for tok in self.tokens:
            children.setdefault(tok.head, []).append(tok.index)
        self._children = children

    def token(self, index: int) -> ParsedToken:
        return self.tokens[index - 1]

    def children(self, index: int) -> list[ParsedToken]:
        return [self.tokens[i - 1] for i in self._children.get(index, [])]

    @property
    def root_index(self) -> int:
        return self._children[0][0]

    def validate_tree(self) -> None:
        """Single root, heads in range, all tokens reachable from the root."""
        n = len(self.tokens)
        if n == 0:
            raise CorpusError(f"{self._where()}: empty sentence")
        for pos, tok in enumerate(self.tokens, start=1):
            if tok.index != pos:
                raise CorpusError(f"{self._where()}: token ids not sequential at {tok.index}")
            if not 0 <= tok.head <= n:
                raise CorpusError(f"{self._where()}: head {tok.head} out of range")
            if tok.start_char >= tok.end_char:
                raise CorpusError(f"{self._where()}: bad offsets on token {tok.index}")
        roots = self._children.get(0, [])
        if len(roots) != 1:
            raise CorpusError(f"{self._where()}: expected one root, found {len(roots)}")
        seen: set[int] = set()
        stack = [roots[0]]
        while stack:
            i = stack.pop()
            if i in seen:
                raise CorpusError(f"{self._where()}: cycle through token {i}")
            seen.add(i)
            stack.extend(self._children.get(i, []))
        if len(seen) != n:
            raise CorpusError(f"{self._where()}: head links do not form a tree")

    def _where(self) -> str:
        return f"post {self.post_id} sentence {self.sent_index}"


@dataclass(frozen=True)
class CorefChain:
    post_id: str
    mentions: tuple[tuple[int, int], ...]  # (sent_index, token_index), first = antecedent

    @property
    def antecedent(self) -> tuple[int, int]:
        return self.mentions[0]


@dataclass
class WordVectorTable:
    dimension: int
    entries: dict[str, np.ndarray]

    def get(self, token: str) -> np.ndarray | None:
        return self.entries.get(token)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Loaders
# ---------------------------------------------------------------------------


def load_posts(path: str | Path) -> list[RawPost]:
    """Read JSON-lines posts. Rejects malformed lines and duplicate ids."""
    posts: list[RawPost] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            post_id = record.get("id")
            text = record.get("text")
            if not post_id or not isinstance(post_id, str):
                raise CorpusError(f"{path}:{lineno}: missing or empty 'id'")
            if not text or not isinstance(text, str):
                raise CorpusError(f"{path}:{lineno}: missing or empty 'text'")
            if post_id in seen:
                raise CorpusError(f"{path}:{lineno}: duplicate post id {post_id!r}")
            seen.add(post_id)
            posts.append(
                RawPost(
                    id=post_id,
                    text=text,
                    created_at=record.get("created_at"),
                    lang=record.get("lang"),
                )
            )
    return posts


def _parse_misc(misc: str) -> dict[str, str]:
    out: dict[str, str] = {}
    if misc and misc != "_":
        for item in misc.split("|"):
            if "=" in item:
                key, value = item.split("=", 1)
                out[key] = value
    return out


def load_conllu(path: str | Path) -> dict[str, list[ParsedSentence]]:
    """Read CoNLL-U with per-sentence ``# post_id`` comments.

    MISC must carry StartChar/EndChar; TokenType and EntType are optional.
    Every sentence is validated as a single-rooted tree.
    """
    result: dict[str, list[ParsedSentence]] = {}
    post_id: str | None = None
    sent_index: int | None = None
    tokens: list[ParsedToken] = []

    def flush(lineno: int) -> None:
        nonlocal post_id, sent_index, tokens
        if not tokens:
            post_id, sent_index = None, None
            return
        if post_id is None:
            raise CorpusError(f"{path}:{lineno}: sentence block missing '# post_id' comment")
        sents = result.setdefault(post_id, [])
        index = sent_index if sent_index is not None else len(sents)
        sentence = ParsedSentence(post_id=post_id, sent_index=index, tokens=tokens)
        sentence.validate_tree()
        sents.append(sentence)
        post_id, sent_index, tokens = None, None, []

    with open(path, encoding="utf-8") as fh:
        lineno = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, value = (part.strip() for part in body.split("=", 1))
                    if key == "post_id":
                        post_id = value
                    elif key == "sent_index":
                        sent_index = int(value)
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise CorpusError(f"{path}:{lineno}: expected 10 columns, got {len(cols)}")
            if "-" in cols[0] or "." in cols[0]:
                continue  # multiword/empty nodes are not produced by the sidecars
            misc = _parse_misc(cols[9])
            if "StartChar" not in misc or "EndChar" not in misc:
                raise CorpusError(f"{path}:{lineno}: MISC lacks StartChar/EndChar")
            kind = misc.get("TokenType", "plain")
            if kind not in TOKEN_KINDS:
                raise CorpusError(f"{path}:{lineno}: unknown TokenType {kind!r}")
            tokens.append(
                ParsedToken(
                    index=int(cols[0]),
                    surface=cols[1],
                    lemma=cols[2],
                    pos=cols[3],
                    head=int(cols[6]),
                    deprel=cols[7],
                    start_char=int(misc["StartChar"]),
                    end_char=int(misc["EndChar"]),
                    token_kind=kind,
                    ent_type=misc.get("EntType", ""),
                )
            )
        flush(lineno + 1)
    for sentences in result.values():
        sentences.sort(key=lambda s: s.sent_index)
    return result


def load_coref(path: str | Path) -> dict[str, list[CorefChain]]:
    """Read the coreference sidecar (JSON-lines, one record per post)."""
    chains: dict[str, list[CorefChain]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
            post_id = record.get("post_id")
            if not post_id:
                raise CorpusError(f"{path}:{lineno}: missing post_id")
            post_chains = []
            for chain in record.get("chains", []):
                if len(chain) < 2:
                    raise CorpusError(f"{path}:{lineno}: chain needs >= 2 mentions")
                post_chains.append(
                    CorefChain(post_id=post_id, mentions=tuple((int(s), int(t)) for s, t in chain))
                )
            chains[post_id] = post_chains
    return chains


def load_word_vectors(path: str | Path) -> WordVectorTable:
    """Read a plain-text vector table, one ``token v1 ... vD`` per line."""
    entries: dict[str, np.ndarray] = {}
    dimension: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if parts == [""]:
                continue
            token, values = parts[0], parts[1:]
            if dimension is None:
                if not values:
                    raise CorpusError(f"{path}:{lineno}: no vector components")
                dimension = len(values)
            elif len(values) != dimension:
                raise CorpusError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(values)}"
                )
            try:
                entries[token] = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise CorpusError(f"{path}:{lineno}: non-numeric component") from exc
    if dimension is None:
        raise CorpusError(f"{path}: empty vector file, dimension undeterminable")
    return WordVectorTable(dimension=dimension, entries=entries)


# ---------------------------------------------------------------------------
# Similarity and near-duplicate removal
# ---------------------------------------------------------------------------


def levenshtein_similarity(a: str, b: str) -> float:
    """``1 - dist(a, b) / max(|a|, |b|)``; 1.0 when both strings are empty."""
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / max(len(a), len(b))


def dedup_corpus(
    posts: list[RawPost],
    normalized_texts: dict[str, str],
    threshold: float = 0.85,
) -> list[RawPost]:
    """Drop posts whose normalized text is near-duplicate of a retained one.

    Scans in input order; retained order is preserved. The length pre-filter
    skips pairs that provably cannot reach the threshold.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    kept: list[RawPost] = []
    kept_texts: list[str] = []
    for post in posts:
        text = normalized_texts[post.id]
        duplicate = False
        for other in kept_texts:
            longest = max(len(text), len(other))
            if longest == 0:
                duplicate = True  # both empty: similarity 1
                break
            # |len(a)-len(b)| is a lower bound on the edit distance.
            if abs(len(text) - len(other)) / longest > 1.0 - threshold:
                continue
            if levenshtein_similarity(text, other) >= threshold:
                duplicate = True
                break
        if not duplicate:
            kept.append(post)
            kept_texts.append(text)
    return kept


# ---------------------------------------------------------------------------
# JSON-lines stage persistence
# ---------------------------------------------------------------------------


def write_jsonl(path: str | Path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records
