"""Statement aggregation and Turtle serialization of the knowledge graph.

Each generalized triple becomes a reified statement node carrying
rdf:subject/predicate/object, a support count, per-tweet provenance edges,
and a negation flag; entities and their external links are typed nodes in
the resource namespace. Output is byte-deterministic: statements are
numbered in canonical sort order and every block is emitted sorted.
"""

from __future__ import annotations

import json
import urllib.parse
from dataclasses import dataclass, field
from pathlib import Path

from .entity_refine import EntityLink, NormalizedEntity
from .relation_cluster import RelationMap
from .relation_extract import SurfaceTriple
from .turtle import RDF_NS, XSD_NS, parse_turtle

__all__ = [
    "GraphError",
    "KnowledgeGraph",
    "NAMESPACES",
    "Statement",
    "ValidationReport",
    "aggregate_statements",
    "emit_turtle",
    "mint_entity_uri",
    "validate_graph",
]

RESOURCE_NS = "http://dtsmmkg.org/dtsmmkg/resource/"
ONTOLOGY_NS = "http://dtsmmkg.org/dtsmmkg/ontology#"

NAMESPACES = {
    "dtsmm": RESOURCE_NS,
    "dtsmm-ont": ONTOLOGY_NS,
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": RDF_NS,
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "schema": "http://schema.org/",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "xsd": XSD_NS,
}


class GraphError(ValueError):
    pass


@dataclass
class Statement:
    subject_key: str
    predicate_label: str  # lowercase lemma
    object_key: str
    support: int
    tweet_ids: set[str]
    negated: bool
    subject_quantifier: str | None = None
    object_quantifier: str | None = None


@dataclass
class KnowledgeGraph:
    statements: list[Statement]
    entities: dict[str, NormalizedEntity]
    links: list[EntityLink] = field(default_factory=list)
    namespaces: dict[str, str] = field(default_factory=lambda: dict(NAMESPACES))

    def check_invariants(self) -> None:
        for st in self.statements:
            if not st.subject_key or not st.object_key:
                raise GraphError("statement with empty subject or object key")
            if st.support != len(st.tweet_ids):
                raise GraphError(
                    f"support {st.support} != provenance count {len(st.tweet_ids)}"
                )
            for key in (st.subject_key, st.object_key):
                if key not in self.entities:
                    raise GraphError(f"statement references unknown entity {key!r}")
        for link in self.links:
            if link.entity_key not in self.entities:
                raise GraphError(f"link references unknown entity {link.entity_key!r}")


def aggregate_statements(
    triples: list[SurfaceTriple],
    relmap: RelationMap,
    entity_keys: dict[tuple, str],
    entities: dict[str, NormalizedEntity],
    keep_interrogative: bool = False,
    inline_quantifiers: bool = False,
) -> list[Statement]:
    """Rewrite surface triples to (subject key, predicate, object key) and
    merge identical rewrites (the merge key includes the negation flag).

    Triples flagged interrogative are questions, not claims; they are
    skipped unless ``keep_interrogative``. With ``inline_quantifiers`` the
    quantified surface becomes part of the node key ("82% of cio" instead of
    "cio") and the quantified entity is added to ``entities``.
    """
    occurrence_of = {}
    for key, node in entities.items():
        for occ in node.occurrences:
            occurrence_of[(occ.post_id, occ.sent_index, occ.span, key)] = occ

    merged: dict[tuple, Statement] = {}
    for triple in triples:
        if triple.interrogative and not keep_interrogative:
            continue
        if triple.verb_surface.lower() not in relmap.entries:
            raise GraphError(f"relation map is not total: {triple.verb_surface!r}")
        parts = []
        quantifiers = []
        skip = False
        for entity in (triple.subject, triple.object):
            key = entity_keys.get(entity.identity())
            if key is None:
                skip = True
                break
            occ = occurrence_of.get((entity.post_id, entity.sent_index, entity.span, key))
            quantifier = occ.quantifier if occ else None
            if inline_quantifiers and occ and occ.quantified_key:
                key = occ.quantified_key
                quantifier = None
                if key not in entities:
                    entities[key] = NormalizedEntity(
                        key=key, head_lemma=entities[entity_keys[entity.identity()]].head_lemma
                    )
            parts.append(key)
            quantifiers.append(quantifier)
        if skip:
            continue  # discarded entity (emptied out during cleanup)
        subject_key, object_key = parts
        predicate = relmap.predicate(triple.verb_surface)
        merge_key = (subject_key, predicate, object_key, triple.negated)
        statement = merged.get(merge_key)
        if statement is None:
            statement = Statement(
                subject_key=subject_key,
                predicate_label=predicate,
                object_key=object_key,
                support=0,
                tweet_ids=set(),
                negated=triple.negated,
                subject_quantifier=quantifiers[0],
                object_quantifier=quantifiers[1],
            )
            merged[merge_key] = statement
        statement.tweet_ids.add(triple.post_id)
        statement.support = len(statement.tweet_ids)
        if statement.subject_quantifier is None:
            statement.subject_quantifier = quantifiers[0]
        if statement.object_quantifier is None:
            statement.object_quantifier = quantifiers[1]
    return [merged[k] for k in sorted(merged)]


def mint_entity_uri(key: str, base: str = RESOURCE_NS) -> str:
    """Spaces become underscores; anything outside the unreserved IRI set is
    percent-encoded."""
    local = key.replace(" ", "_")
    return base + urllib.parse.quote(local, safe="")


def _local_name(key: str) -> str:
    return urllib.parse.quote(key.replace(" ", "_"), safe="")


def _escape_literal(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


ONTOLOGY_HEADER = [
    "dtsmm-ont:Statement a rdfs:Class .",
    "dtsmm-ont:Entity a rdfs:Class .",
    "dtsmm-ont:Tweet a rdfs:Class ;",
    "    rdfs:subClassOf schema:SocialMediaPosting .",
    "dtsmm-ont:hasSupport a rdf:Property .",
    "dtsmm-ont:negation a rdf:Property .",
    "dtsmm-ont:comesfromTweet a rdf:Property .",
    "dtsmm-ont:subjectQuantifier a rdf:Property .",
    "dtsmm-ont:objectQuantifier a rdf:Property .",
]


def emit_turtle(graph: KnowledgeGraph, out: str | Path) -> None:
    """Serialize the graph; two runs over identical inputs are byte-equal."""
    graph.check_invariants()
    lines: list[str] = []
    for prefix in sorted(graph.namespaces):
        lines.append(f"@prefix {prefix}: <{graph.namespaces[prefix]}> .")
    lines.append("")
    lines.extend(ONTOLOGY_HEADER)
    lines.append("")

    for key in sorted(graph.entities):
        local = _local_name(key)
        lines.append(f"dtsmm:{local} a dtsmm-ont:Entity ;")
        lines.append(f'    rdfs:label "{_escape_literal(key)}" .')
    lines.append("")

    tweet_ids = sorted({tid for st in graph.statements for tid in st.tweet_ids})
    for tid in tweet_ids:
        lines.append(f"dtsmm:tweet_{_local_name(tid)} a dtsmm-ont:Tweet .")
    if tweet_ids:
        lines.append("")

    ordered = sorted(
        graph.statements,
        key=lambda s: (s.subject_key, s.predicate_label, s.object_key, s.negated),
    )
    for num, st in enumerate(ordered):
        pred_local = _local_name(st.predicate_label)
        lines.append(f"dtsmm-ont:statement_{num} a dtsmm-ont:Statement,")
        lines.append("        rdf:Statement ;")
        lines.append(f"    dtsmm-ont:negation {'true' if st.negated else 'false'} ;")
        tweets = ", ".join(f"dtsmm:tweet_{_local_name(t)}" for t in sorted(st.tweet_ids))
        lines.append(f"    dtsmm-ont:comesfromTweet {tweets} ;")
        lines.append(f"    dtsmm-ont:hasSupport {st.support} ;")
        if st.subject_quantifier:
            lines.append(
                f'    dtsmm-ont:subjectQuantifier "{_escape_literal(st.subject_quantifier)}" ;'
            )
        if st.object_quantifier:
            lines.append(
                f'    dtsmm-ont:objectQuantifier "{_escape_literal(st.object_quantifier)}" ;'
            )
        lines.append(f"    rdf:subject dtsmm:{_local_name(st.subject_key)} ;")
        lines.append(f"    rdf:predicate dtsmm-ont:{pred_local} ;")
        lines.append(f"    rdf:object dtsmm:{_local_name(st.object_key)} .")
    lines.append("")

    for link in sorted(graph.links, key=lambda l: (l.entity_key, l.kind, l.resource_uri)):
        predicate = "owl:sameAs" if link.kind == "same_as" else "skos:related"
        lines.append(
            f"dtsmm:{_local_name(link.entity_key)} {predicate} <{link.resource_uri}> ."
        )

    text = "\n".join(lines).rstrip("\n") + "\n"
    Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    statements: int
    entities: int
    tweets: int
    same_as_links: int
    related_links: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps(
            {
                "statements": self.statements,
                "entities": self.entities,
                "tweets": self.tweets,
                "same_as_links": self.same_as_links,
                "related_links": self.related_links,
                "violations": self.violations,
            },
            indent=2,
            ensure_ascii=False,
        )


def validate_graph(path: str | Path) -> ValidationReport:
    """Audit a reified-statement Turtle file: per statement exactly one
    rdf:subject/predicate/object and hasSupport equal to the number of
    provenance edges. Reification triples are structure, not statements:
    the count is of Statement-typed nodes."""
    triples = parse_turtle(path)
    rdf_type = ("iri", RDF_NS + "type")
    by_subject: dict = {}
    type_of: dict = {}
    same_as = related = 0
    for s, p, o in triples:
        by_subject.setdefault(s, []).append((p, o))
        if p == rdf_type:
            type_of.setdefault(s, set()).add(o)
        elif p == ("iri", "http://www.w3.org/2002/07/owl#sameAs"):
            same_as += 1
        elif p == ("iri", "http://www.w3.org/2004/02/skos/core#related"):
            related += 1

    statement_type = ("iri", ONTOLOGY_NS + "Statement")
    entity_type = ("iri", ONTOLOGY_NS + "Entity")
    tweet_type = ("iri", ONTOLOGY_NS + "Tweet")
    statements = [s for s, kinds in type_of.items() if statement_type in kinds]
    entities = sum(1 for kinds in type_of.values() if entity_type in kinds)
    tweets = sum(1 for kinds in type_of.values() if tweet_type in kinds)

    violations = []
    reify = {
        name: ("iri", RDF_NS + name) for name in ("subject", "predicate", "object")
    }
    support_iri = ("iri", ONTOLOGY_NS + "hasSupport")
    provenance_iri = ("iri", ONTOLOGY_NS + "comesfromTweet")
    for node in statements:
        name = node[1]
        props = by_subject.get(node, [])
        for role, iri in reify.items():
            count = sum(1 for p, _ in props if p == iri)
            if count != 1:
                violations.append(f"{name}: expected exactly one rdf:{role}, found {count}")
        supports = [o for p, o in props if p == support_iri]
        provenance = sum(1 for p, _ in props if p == provenance_iri)
        if len(supports) != 1:
            violations.append(f"{name}: expected exactly one hasSupport, found {len(supports)}")
        else:
            declared = supports[0][1]
            if not isinstance(declared, int) or declared != provenance:
                violations.append(
                    f"{name}: hasSupport {declared!r} != {provenance} provenance edges"
                )
    return ValidationReport(
        statements=len(statements),
        entities=entities,
        tweets=tweets,
        same_as_links=same_as,
        related_links=related,
        violations=sorted(violations),
    )
