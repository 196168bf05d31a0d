"""microkg: micro-blog corpus -> reified RDF knowledge graph.

Batch pipeline over externally produced dependency parses: post
normalization, dependency-path triple extraction, entity refining and
linking, relation clustering, and deterministic Turtle emission.
"""

from .corpus_io import (
    CorefChain,
    CorpusError,
    ParsedSentence,
    ParsedToken,
    RawPost,
    WordVectorTable,
    dedup_corpus,
    levenshtein_similarity,
    load_conllu,
    load_coref,
    load_posts,
    load_word_vectors,
)
from .entity_extract import CandidateEntity, extract_entities, resolve_anaphora
from .entity_refine import (
    EntityLink,
    NormalizedEntity,
    clean_entity,
    entity_key,
    link_entities,
    merge_entities,
    normalize_nominal,
    normalize_tag,
    rewrite_for_linking,
)
from .kg_emit import (
    KnowledgeGraph,
    Statement,
    aggregate_statements,
    emit_turtle,
    mint_entity_uri,
    validate_graph,
)
from .linking import SpotlightClient
from .metrics import AnnotationMatrix, cohen_kappa, fleiss_kappa, majority_precision
from .preprocess import NormalizedPost, normalize_post
from .relation_cluster import (
    ClusteringConfig,
    ClusteringResult,
    RelationMap,
    build_relation_map,
    cluster_relations,
    embed_relations,
    grid_search,
    select_config,
    silhouette_mean,
    standardize,
)
from .relation_extract import (
    DependencyPath,
    SurfaceTriple,
    extract_triples,
    match_target_pattern,
    tree_path,
)

__version__ = "0.1.0"
