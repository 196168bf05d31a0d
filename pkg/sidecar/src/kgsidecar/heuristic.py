"""Deterministic fallback analyzer: coarse POS tagging, a projective
head-attachment heuristic that always yields a single-rooted tree, naive
lemmas, quantity labels, and recency-based pronoun coreference.

Good enough to exercise the downstream file contracts when no neural parser
is installed; not a linguistic statement.
"""

from __future__ import annotations

from .tokenizer import Token

__all__ = ["analyze_sentence", "find_pronoun_links"]

DETERMINERS = {"a", "an", "the", "this", "that", "these", "those"}
PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
    "them", "its", "his", "their", "my", "your", "our",
}
AUXILIARIES = {
    "is", "are", "was", "were", "be", "being", "been", "am",
    "can", "could", "will", "would", "shall", "should", "may", "might",
    "must", "do", "does", "did", "has", "have", "had",
}
PREPOSITIONS = {
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "about",
    "through", "over", "under", "into", "after", "before", "between",
}
CONJUNCTIONS = {"and", "or", "but", "nor"}
ADVERBS = {"not", "never", "really", "quickly", "everywhere", "daily", "only"}
VERB_SUFFIXES = ("ate", "ize", "ise", "ify")
ADJ_SUFFIXES = ("ive", "ous", "ful", "less", "able", "al")

_PLURAL_KEEP = {"analytics", "news", "business", "data", "access"}


def naive_lemma(surface: str, pos: str) -> str:
    word = surface.lower()
    if pos not in {"NOUN", "PROPN", "VERB"} or word in _PLURAL_KEEP:
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ses", "xes", "zes", "ches", "shes")):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        return word[:-1]
    return word


def _tag(tokens: list[Token]) -> list[str]:
    tags = []
    for i, tok in enumerate(tokens):
        word = tok.surface
        lower = word.lower()
        if tok.kind in {"url", "emoticon", "reserved"}:
            tags.append("X")
        elif tok.kind == "mention":
            tags.append("PROPN")
        elif tok.kind == "hashtag":
            tags.append("NOUN")
        elif not any(ch.isalnum() for ch in word):
            tags.append("PUNCT")
        elif word[0].isdigit():
            tags.append("NUM")
        elif lower in DETERMINERS:
            tags.append("DET")
        elif lower in PRONOUNS:
            tags.append("PRON")
        elif lower in AUXILIARIES:
            tags.append("AUX")
        elif lower in PREPOSITIONS:
            tags.append("ADP")
        elif lower in CONJUNCTIONS:
            tags.append("CCONJ")
        elif lower in ADVERBS or lower.endswith("ly"):
            tags.append("ADV")
        elif lower.endswith(ADJ_SUFFIXES):
            tags.append("ADJ")
        elif lower.endswith(VERB_SUFFIXES):
            tags.append("VERB")
        elif word[0].isupper() and i > 0:
            tags.append("PROPN")
        else:
            tags.append("NOUN")
    # a plural-looking noun right after a nominal start and before a noun
    # phrase is treated as the main verb ("Banks leverage machine learning")
    if "VERB" not in tags:
        for i in range(1, len(tags)):
            if tags[i] == "NOUN" and tags[i - 1] in {"NOUN", "PROPN", "PRON"}:
                nxt = tags[i + 1] if i + 1 < len(tags) else None
                if nxt in {"DET", "NOUN", "PROPN", "ADJ", "NUM", None}:
                    tags[i] = "VERB"
                    break
    return tags


def _ent_types(tokens: list[Token]) -> list[str]:
    ents = []
    for tok in tokens:
        if tok.surface.endswith("%") or tok.surface == "percent":
            ents.append("PERCENT")
        elif tok.surface.startswith(("$", "€", "£")):
            ents.append("MONEY")
        elif tok.surface[0].isdigit():
            ents.append("CARDINAL")
        else:
            ents.append("")
    return ents


def _attach(tokens: list[Token], tags: list[str]) -> tuple[list[int], list[str]]:
    """Heads (1-based, 0 = root) and deprels. Non-root tokens attach either
    to the root or strictly forward, so the result is always a tree."""
    n = len(tokens)
    root = next((i for i, t in enumerate(tags) if t == "VERB"), None)
    if root is None:
        root = next((i for i, t in enumerate(tags) if t in {"AUX", "NOUN", "PROPN"}), 0)

    def next_of(kinds, start):
        for j in range(start, n):
            if tags[j] in kinds:
                return j
        return None

    heads = [0] * n
    deprels = ["dep"] * n
    for i in range(n):
        if i == root:
            heads[i], deprels[i] = 0, "ROOT"
            continue
        tag = tags[i]
        if tag in {"DET", "ADJ", "NUM"} or (
            tag in {"NOUN", "PROPN"} and next_of({"NOUN", "PROPN"}, i + 1) is not None
        ):
            target = next_of({"NOUN", "PROPN"}, i + 1)
            if target is not None and (
                target < root or i > root or tag in {"DET", "ADJ", "NUM"}
            ):
                heads[i] = target + 1
                deprels[i] = {
                    "DET": "det",
                    "ADJ": "amod",
                    "NUM": "nummod",
                    "NOUN": "compound",
                    "PROPN": "compound",
                }[tag]
                continue
        if tag == "ADP":
            pobj = next_of({"NOUN", "PROPN", "NUM", "PRON"}, i + 1)
            if pobj is not None:
                heads[i] = root + 1
                deprels[i] = "prep"
                continue
        heads[i] = root + 1
        deprels[i] = {
            "AUX": "aux",
            "ADV": "advmod",
            "PUNCT": "punct",
            "CCONJ": "cc",
            "PRON": "nsubj" if i < root else "dobj",
            "NOUN": "nsubj" if i < root else "dobj",
            "PROPN": "nsubj" if i < root else "dobj",
            "NUM": "nummod",
        }.get(tag, "dep")
    # nouns under a preposition become its object
    for i in range(n):
        if tags[i] == "ADP" and deprels[i] == "prep":
            for j in range(i + 1, n):
                if tags[j] in {"NOUN", "PROPN", "NUM", "PRON"} and heads[j] == root + 1:
                    heads[j] = i + 1
                    deprels[j] = "pobj"
                    break
    return heads, deprels


def analyze_sentence(tokens: list[Token]):
    """(tags, lemmas, heads, deprels, ent_types) for one sentence."""
    tags = _tag(tokens)
    heads, deprels = _attach(tokens, tags)
    lemmas = []
    for tok, tag in zip(tokens, tags):
        if tok.kind in {"hashtag", "mention"}:
            lemmas.append(naive_lemma(tok.surface.lstrip("#@"), "NOUN"))
        else:
            lemmas.append(naive_lemma(tok.surface, tag))
    return tags, lemmas, heads, deprels, _ent_types(tokens)


def find_pronoun_links(
    sentences: list[list[Token]], tags_per_sentence: list[list[str]]
) -> list[list[list[int]]]:
    """Chains [[antecedent, mention], ...]: each third-person pronoun links
    to the most recent preceding nominal token."""
    chains = []
    nominals: list[tuple[int, int]] = []  # (sent, 1-based token)
    third_person = {"it", "its", "he", "his", "she", "her", "they", "their", "them"}
    for s_i, (sentence, tags) in enumerate(zip(sentences, tags_per_sentence)):
        for t_i, (tok, tag) in enumerate(zip(sentence, tags), start=1):
            if tag in {"NOUN", "PROPN"} and tok.kind in {"plain", "hashtag", "mention"}:
                nominals.append((s_i, t_i))
            elif tag == "PRON" and tok.surface.lower() in third_person and nominals:
                antecedent = nominals[-1]
                chains.append([[antecedent[0], antecedent[1]], [s_i, t_i]])
    return chains
