"""Staged pipeline: normalize -> extract -> refine/cluster/emit.

Stages communicate only through files under the output directory, so a run
can resume mid-pipeline and golden fixtures can stand in for any stage's
input. Every stage is a pure function of (inputs, config, seed).
"""

from __future__ import annotations

import configparser
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus_io, entity_extract, entity_refine, kg_emit, relation_cluster
from .corpus_io import ParsedSentence
from .entity_extract import CandidateEntity
from .linking import LinkingUnavailable, SpotlightClient
from .preprocess import normalize_post, NormalizedPost
from .relation_extract import DEFAULT_TARGET_PATTERNS, SurfaceTriple, extract_triples, load_patterns

__all__ = [
    "PipelineConfig",
    "load_config",
    "stage_extract",
    "stage_normalize",
    "stage_refine_emit",
]

NORMALIZED_FILE = "normalized.jsonl"
ENTITIES_FILE = "entities.jsonl"
TRIPLES_FILE = "triples.jsonl"
GRAPH_FILE = "graph.ttl"
RELATION_MAP_FILE = "relation_map.tsv"
GRID_FILE = "grid_results.csv"
VALIDATION_FILE = "validation.json"


@dataclass
class PipelineConfig:
    posts: Path | None = None
    first_pass: Path | None = None
    second_pass: Path | None = None
    coref: Path | None = None
    vectors: Path | None = None
    patterns: Path | None = None
    dedup_threshold: float = 0.85
    grid: dict[str, list] = field(
        default_factory=lambda: {
            "n_neighbors": [5, 10, 15, 30],
            "min_dist": [0.0, 0.1],
            "target_dim": [2, 5],
            "min_cluster_size": [5, 10, 15, 25],
            "min_samples": [1, 5],
        }
    )
    linking_enabled: bool = False
    linking_endpoint: str = ""
    linking_confidence: float = 0.5
    strict_linking: bool = False
    quantifiers: str = "annotate"  # annotate | inline
    keep_interrogative: bool = False
    seed: int = 0
    jobs: int = 1
    out_dir: Path = Path("out")


def _split_values(raw: str) -> list:
    parts = [p for chunk in raw.split(",") for p in chunk.split()]
    values = []
    for part in parts:
        try:
            values.append(int(part))
        except ValueError:
            values.append(float(part))
    return values


def load_config(path: str | Path) -> PipelineConfig:
    """Sectioned key/value config; relative paths resolve against the file."""
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    base = Path(path).resolve().parent
    cfg = PipelineConfig()

    def path_of(section: str, key: str) -> Path | None:
        raw = parser.get(section, key, fallback="").strip()
        if not raw:
            return None
        p = Path(raw)
        return p if p.is_absolute() else base / p

    cfg.posts = path_of("inputs", "posts")
    cfg.first_pass = path_of("inputs", "first_pass")
    cfg.second_pass = path_of("inputs", "second_pass")
    cfg.coref = path_of("inputs", "coref")
    cfg.vectors = path_of("inputs", "vectors")
    cfg.patterns = path_of("extract", "patterns")
    cfg.dedup_threshold = parser.getfloat("preprocess", "dedup_threshold", fallback=0.85)
    if parser.has_section("cluster"):
        grid = {}
        for key in ("n_neighbors", "min_dist", "target_dim", "min_cluster_size", "min_samples"):
            raw = parser.get("cluster", key, fallback="").strip()
            if raw:
                grid[key] = _split_values(raw)
        if grid:
            cfg.grid = {**cfg.grid, **grid}
    cfg.linking_enabled = parser.getboolean("linking", "enabled", fallback=False)
    cfg.linking_endpoint = parser.get("linking", "endpoint", fallback="").strip()
    cfg.linking_confidence = parser.getfloat("linking", "confidence", fallback=0.5)
    cfg.strict_linking = parser.getboolean("linking", "strict", fallback=False)
    cfg.quantifiers = parser.get("output", "quantifiers", fallback="annotate").strip()
    cfg.keep_interrogative = parser.getboolean("output", "keep_interrogative", fallback=False)
    cfg.seed = parser.getint("run", "seed", fallback=0)
    cfg.jobs = parser.getint("run", "jobs", fallback=1)
    return cfg


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise corpus_io.CorpusError(f"missing required input: {what}")
    if not Path(path).exists():
        raise corpus_io.CorpusError(f"{what} file not found: {path}")
    return Path(path)


# ---------------------------------------------------------------------------
# Stage 1: normalize
# ---------------------------------------------------------------------------


def stage_normalize(cfg: PipelineConfig) -> dict:
    posts = corpus_io.load_posts(_require(cfg.posts, "posts"))
    parses = corpus_io.load_conllu(_require(cfg.first_pass, "first-pass parses"))
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    normalized: list[NormalizedPost] = []
    histogram: Counter[str] = Counter()
    for post in posts:
        if post.id not in parses:
            raise corpus_io.CorpusError(f"no first-pass parse for post {post.id}")
        result = normalize_post(post, parses[post.id])
        histogram.update(reason for _, _, reason in result.removed_spans)
        normalized.append(result)

    texts = {n.post_id: n.normalized_text for n in normalized}
    retained = corpus_io.dedup_corpus(posts, texts, cfg.dedup_threshold)
    retained_ids = {p.id for p in retained}
    kept = [n for n in normalized if n.post_id in retained_ids]
    corpus_io.write_jsonl(out_dir / NORMALIZED_FILE, [n.to_record() for n in kept])

    report = {
        "posts_in": len(posts),
        "posts_retained": len(kept),
        "dropped_near_duplicates": sorted(
            p.id for p in posts if p.id not in retained_ids
        ),
        "removal_histogram": dict(sorted(histogram.items())),
    }
    (out_dir / "normalize_report.json").write_text(
        json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return report


# ---------------------------------------------------------------------------
# Stage 2: extract
# ---------------------------------------------------------------------------


def _sentence_lookup(parses: dict[str, list[ParsedSentence]]):
    index = {
        (post_id, s.sent_index): s
        for post_id, sentences in parses.items()
        for s in sentences
    }

    def lookup(entity: CandidateEntity) -> ParsedSentence:
        return index[(entity.post_id, entity.sent_index)]

    return lookup


def stage_extract(cfg: PipelineConfig) -> dict:
    out_dir = Path(cfg.out_dir)
    normalized = corpus_io.read_jsonl(_require(out_dir / NORMALIZED_FILE, "normalized posts"))
    parses = corpus_io.load_conllu(_require(cfg.second_pass, "second-pass parses"))
    chains = corpus_io.load_coref(cfg.coref) if cfg.coref and Path(cfg.coref).exists() else {}
    patterns = load_patterns(cfg.patterns) if cfg.patterns else DEFAULT_TARGET_PATTERNS

    all_entities: list[CandidateEntity] = []
    all_triples: list[SurfaceTriple] = []
    hashtag = mention = with_pp = with_quant = 0

    for record in normalized:
        post_id = record["id"]
        sentences = parses.get(post_id, [])
        if not sentences:
            continue
        entities: list[CandidateEntity] = []
        for sentence in sentences:
            entities.extend(entity_extract.extract_entities(sentence))
        entities = entity_extract.resolve_anaphora(
            entities, chains.get(post_id, []), sentences
        )
        by_index = {s.sent_index: s for s in sentences}
        for sentence in sentences:
            local = entity_extract.entities_for_extraction(entities, sentence.sent_index)
            all_triples.extend(extract_triples(sentence, local, patterns))
        for entity in entities:
            all_entities.append(entity)
            span_tokens = [
                by_index[entity.sent_index].token(i)
                for i in range(entity.span[0], entity.span[1] + 1)
            ]
            kinds = {t.token_kind for t in span_tokens}
            hashtag += "hashtag" in kinds
            mention += "mention" in kinds
            with_pp += entity.pp_attached
            with_quant += entity.quantifier_span is not None

    corpus_io.write_jsonl(out_dir / ENTITIES_FILE, [e.to_record() for e in all_entities])
    corpus_io.write_jsonl(out_dir / TRIPLES_FILE, [t.to_record() for t in all_triples])

    n_ent = len(all_entities) or 1
    n_tri = len(all_triples) or 1
    anaphora = sum(
        1
        for t in all_triples
        if t.subject.kind == "anaphora" or t.object.kind == "anaphora"
    )
    report = {
        "entities": len(all_entities),
        "hashtag_pct": round(100.0 * hashtag / n_ent, 2),
        "mention_pct": round(100.0 * mention / n_ent, 2),
        "prepositional_pct": round(100.0 * with_pp / n_ent, 2),
        "quantifier_pct": round(100.0 * with_quant / n_ent, 2),
        "triples": len(all_triples),
        "anaphora_pct": round(100.0 * anaphora / n_tri, 2),
        "negation_pct": round(100.0 * sum(t.negated for t in all_triples) / n_tri, 2),
        "interrogative_pct": round(
            100.0 * sum(t.interrogative for t in all_triples) / n_tri, 2
        ),
    }
    (out_dir / "extract_report.json").write_text(
        json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return report


# ---------------------------------------------------------------------------
# Stage 3: refine + cluster + emit
# ---------------------------------------------------------------------------


def _collect_links(
    cfg: PipelineConfig,
    parses: dict[str, list[ParsedSentence]],
    entities: list[CandidateEntity],
) -> list[entity_refine.EntityLink]:
    client = SpotlightClient(
        cfg.linking_endpoint,
        confidence=cfg.linking_confidence,
        max_in_flight=max(cfg.jobs, 1),
    )
    jobs: list[tuple[str, list[entity_refine.RewriteSpan]]] = []
    for post_id in sorted(parses):
        for sentence in parses[post_id]:
            local = [
                e
                for e in entities
                if e.post_id == post_id and e.sent_index == sentence.sent_index
            ]
            if not local:
                continue
            rewritten, spans = entity_refine.rewrite_for_linking(sentence, local)
            if spans:
                jobs.append((rewritten, spans))
    results = client.annotate_many([text for text, _ in jobs])
    links: dict[tuple, entity_refine.EntityLink] = {}
    for (_, spans), resources in zip(jobs, results):
        for link in entity_refine.match_resources(spans, resources):
            key = (link.entity_key, link.resource_uri, link.kind)
            if key not in links or links[key].confidence < link.confidence:
                links[key] = link
    return [links[k] for k in sorted(links)]


def stage_refine_emit(cfg: PipelineConfig) -> dict:
    out_dir = Path(cfg.out_dir)
    entities = [
        CandidateEntity.from_record(r)
        for r in corpus_io.read_jsonl(_require(out_dir / ENTITIES_FILE, "entities"))
    ]
    triples = [
        SurfaceTriple.from_record(r)
        for r in corpus_io.read_jsonl(_require(out_dir / TRIPLES_FILE, "triples"))
    ]
    parses = corpus_io.load_conllu(_require(cfg.second_pass, "second-pass parses"))
    table = corpus_io.load_word_vectors(_require(cfg.vectors, "word vectors"))

    lookup = _sentence_lookup(parses)
    merged, key_index = entity_refine.merge_entities(entities, lookup)

    vectors = relation_cluster.embed_relations(triples, table)
    grid = relation_cluster.expand_grid(cfg.grid, cfg.seed)
    outcome = relation_cluster.cluster_relations(vectors, grid, jobs=cfg.jobs)
    relation_cluster.write_results_csv(out_dir / GRID_FILE, outcome.results)
    outcome.relation_map.write_tsv(out_dir / RELATION_MAP_FILE)

    statements = kg_emit.aggregate_statements(
        triples,
        outcome.relation_map,
        key_index,
        merged,
        keep_interrogative=cfg.keep_interrogative,
        inline_quantifiers=cfg.quantifiers == "inline",
    )

    links: list[entity_refine.EntityLink] = []
    linking_status = "disabled"
    if cfg.linking_enabled and cfg.linking_endpoint:
        try:
            links = _collect_links(cfg, parses, entities)
            linking_status = "ok"
        except LinkingUnavailable as exc:
            if cfg.strict_linking:
                raise
            linking_status = f"unavailable ({exc}); graph emitted unlinked"

    graph = kg_emit.KnowledgeGraph(statements=statements, entities=merged, links=links)
    kg_emit.emit_turtle(graph, out_dir / GRAPH_FILE)
    report_obj = kg_emit.validate_graph(out_dir / GRAPH_FILE)
    (out_dir / VALIDATION_FILE).write_text(report_obj.to_json() + "\n", encoding="utf-8")

    return {
        "statements": report_obj.statements,
        "entities": report_obj.entities,
        "same_as_links": report_obj.same_as_links,
        "related_links": report_obj.related_links,
        "violations": report_obj.violations,
        "linking": linking_status,
        "selected_config": vars(outcome.selected) if outcome.results else {},
    }
