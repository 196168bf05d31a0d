"""spaCy-based backend with tweet-aware tokenization and coreferee links.

Import fails cleanly when spaCy or its model is missing; the caller falls
back to the heuristic analyzer.
"""

from __future__ import annotations

import os
import re

import spacy

from .tokenizer import Token

_MODEL_ENV = "SIDECAR_SPACY_MODEL"
_DEFAULT_MODELS = ("en_core_web_trf", "en_core_web_lg", "en_core_web_sm")

_TWEET_TOKEN = re.compile(r"""(https?://\S+|www\.\S+|@\w+|\#\w+)""")

_nlp = None
_model = None


def _load():
    global _nlp, _model
    if _nlp is not None:
        return _nlp
    wanted = os.environ.get(_MODEL_ENV)
    candidates = (wanted,) if wanted else _DEFAULT_MODELS
    last = None
    for name in candidates:
        try:
            nlp = spacy.load(name)
            _model = name
            break
        except OSError as exc:
            last = exc
    else:
        raise OSError(f"no spaCy model found among {candidates}: {last}")
    # keep sigils attached to hashtags/mentions, URLs whole
    nlp.tokenizer.token_match = _TWEET_TOKEN.match
    try:
        import coreferee  # noqa: F401

        nlp.add_pipe("coreferee")
    except Exception:
        pass  # pronoun links just come out empty
    _nlp = nlp
    return _nlp


def model_name() -> str:
    _load()
    return _model


def _kind(token) -> str:
    text = token.text
    if text.startswith("#") and len(text) > 1:
        return "hashtag"
    if text.startswith("@") and len(text) > 1:
        return "mention"
    if token.like_url:
        return "url"
    if text.lower() == "rt":
        return "reserved"
    return "plain"


def analyze_document(text: str):
    nlp = _load()
    doc = nlp(text)
    analyzed = []
    sent_of_token = {}
    index_in_sent = {}
    for s_i, sent in enumerate(doc.sents):
        tokens, tags, lemmas, heads, deprels, ents = [], [], [], [], [], []
        for t_i, token in enumerate(sent):
            sent_of_token[token.i] = s_i
            index_in_sent[token.i] = t_i + 1
            tokens.append(
                Token(
                    surface=token.text,
                    start=token.idx,
                    end=token.idx + len(token.text),
                    kind=_kind(token),
                )
            )
            tags.append(token.pos_ or "X")
            lemmas.append(token.lemma_ or token.text.lower())
            heads.append(0 if token.head is token else token.head.i - sent.start + 1)
            deprels.append("ROOT" if token.head is token else token.dep_)
            ents.append(token.ent_type_ if token.ent_type_ in
                        {"MONEY", "PERCENT", "QUANTITY", "CARDINAL"} else "")
        analyzed.append((tokens, tags, lemmas, heads, deprels, ents))
    chains = []
    if doc.has_extension("coref_chains") and doc._.coref_chains:
        for chain in doc._.coref_chains:
            mentions = []
            for mention in chain:
                i = mention.root_index
                mentions.append([sent_of_token[i], index_in_sent[i]])
            if len(mentions) >= 2:
                chains.append(mentions)
    return analyzed, chains
