"""Parser sidecar: turns raw or normalized posts into the CoNLL-U and
coreference sidecar files the extraction pipeline consumes.

The parsing backend is pluggable: a spaCy pipeline with tweet-aware
tokenization and coreferee when installed, otherwise a deterministic
heuristic analyzer that honors the same file contracts.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import heuristic, tokenizer

__version__ = "0.1.0"
__all__ = ["parse_normalized", "parse_posts", "resolve_backend"]


def resolve_backend(name: str = "auto"):
    """Returns (backend_name, analyze_document callable)."""
    if name in {"auto", "spacy"}:
        try:
            from . import spacy_backend

            return f"spacy:{spacy_backend.model_name()}", spacy_backend.analyze_document
        except Exception as exc:  # model or package missing
            if name == "spacy":
                raise SystemExit(
                    "spaCy backend unavailable: "
                    f"{exc}\ninstall with: pip install 'microkg-sidecar[spacy]' "
                    "and download a model, e.g. python -m spacy download en_core_web_trf"
                ) from exc
    return f"heuristic:{__version__}", _analyze_heuristic


def _analyze_heuristic(text: str):
    sentences = tokenizer.segment_sentences(tokenizer.tokenize(text))
    analyzed = []
    tags_per_sentence = []
    for tokens in sentences:
        tags, lemmas, heads, deprels, ents = heuristic.analyze_sentence(tokens)
        tags_per_sentence.append(tags)
        analyzed.append((tokens, tags, lemmas, heads, deprels, ents))
    chains = heuristic.find_pronoun_links(sentences, tags_per_sentence)
    return analyzed, chains


def _write_blocks(fh, post_id: str, analyzed) -> None:
    for s_i, (tokens, tags, lemmas, heads, deprels, ents) in enumerate(analyzed):
        fh.write(f"# post_id = {post_id}\n")
        fh.write(f"# sent_index = {s_i}\n")
        for idx, tok in enumerate(tokens):
            misc = [f"StartChar={tok.start}", f"EndChar={tok.end}"]
            if tok.kind != "plain":
                misc.append(f"TokenType={tok.kind}")
            if ents[idx]:
                misc.append(f"EntType={ents[idx]}")
            fh.write(
                "\t".join(
                    [
                        str(idx + 1),
                        tok.surface,
                        lemmas[idx],
                        tags[idx],
                        "_",
                        "_",
                        str(heads[idx]),
                        deprels[idx],
                        "_",
                        "|".join(misc),
                    ]
                )
                + "\n"
            )
        fh.write("\n")


def _read_records(path: str | Path, text_field: str) -> list[tuple[str, str]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            records.append((record["id"], record[text_field]))
    return records


def _run(records, out_conllu, out_coref, backend):
    backend_name, analyze = resolve_backend(backend)
    conllu_path = Path(out_conllu)
    coref_records = []
    with open(conllu_path, "w", encoding="utf-8") as fh:
        fh.write(f"# parser = {backend_name}\n\n")
        for post_id, text in records:
            if not text.strip():
                continue  # nothing to parse (normalized away)
            analyzed, chains = analyze(text)
            _write_blocks(fh, post_id, analyzed)
            if chains:
                coref_records.append({"post_id": post_id, "chains": chains})
    if out_coref is not None:
        with open(out_coref, "w", encoding="utf-8") as fh:
            for record in coref_records:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def parse_posts(
    posts_path: str | Path,
    out_conllu: str | Path,
    out_coref: str | Path,
    backend: str = "auto",
) -> None:
    """Parse raw posts into first-pass CoNLL-U plus the coreference sidecar."""
    _run(_read_records(posts_path, "text"), out_conllu, out_coref, backend)


def parse_normalized(
    normalized_path: str | Path,
    out_conllu: str | Path,
    out_coref: str | Path | None = None,
    backend: str = "auto",
) -> None:
    """Parse normalized posts into second-pass CoNLL-U (and, optionally, a
    second-pass coreference sidecar aligned with those parses). Posts whose
    normalized text is empty have nothing to parse and are skipped."""
    _run(_read_records(normalized_path, "normalized_text"), out_conllu, out_coref, backend)
