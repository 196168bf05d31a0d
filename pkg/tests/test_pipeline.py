from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path
from urllib.parse import parse_qs

import pytest

from microkg import pipeline
from microkg.corpus_io import RawPost, load_conllu
from microkg.linking import LinkingUnavailable
from microkg.preprocess import normalize_post
from microkg.turtle import parse_turtle

GOLDEN = Path(__file__).parent / "fixtures" / "golden"


def config(out_dir, **overrides):
    cfg = pipeline.load_config(GOLDEN / "golden.cfg")
    cfg.out_dir = out_dir
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


class TestNormalizeStage:
    def test_second_parse_pass_is_a_fixed_point(self, golden_second_pass):
        # re-normalizing the re-parsed normalized text removes nothing
        for post_id, sentences in golden_second_pass.items():
            text_end = max(t.end_char for s in sentences for t in s.tokens)
            text = " " * 0
            # rebuild the normalized text from offsets
            chars = [" "] * text_end
            for s in sentences:
                for t in s.tokens:
                    chars[t.start_char : t.end_char] = t.surface
            text = "".join(chars)
            result = normalize_post(RawPost(id=post_id, text=text), sentences)
            assert result.removed_spans == [], post_id
            assert result.normalized_text == text.strip()

    def test_extract_report_rates(self, tmp_path):
        cfg = config(tmp_path)
        pipeline.stage_normalize(cfg)
        report = pipeline.stage_extract(cfg)
        assert report["triples"] == 51
        assert report["negation_pct"] == pytest.approx(100 * 2 / 51, abs=0.01)
        assert report["interrogative_pct"] == pytest.approx(100 * 1 / 51, abs=0.01)
        assert report["anaphora_pct"] == pytest.approx(100 * 1 / 51, abs=0.01)
        for key in ("hashtag_pct", "mention_pct", "prepositional_pct", "quantifier_pct"):
            assert report[key] > 0

    def test_missing_parse_for_post_is_an_input_error(self, tmp_path):
        posts = tmp_path / "posts.jsonl"
        posts.write_text('{"id":"x","text":"hello"}\n')
        cfg = config(tmp_path, posts=posts)
        with pytest.raises(Exception, match="no first-pass parse"):
            pipeline.stage_normalize(cfg)


class TestInlineQuantifiers:
    def test_quantified_key_becomes_node(self, tmp_path):
        cfg = config(tmp_path, quantifiers="inline")
        pipeline.stage_normalize(cfg)
        pipeline.stage_extract(cfg)
        pipeline.stage_refine_emit(cfg)
        text = (tmp_path / "graph.ttl").read_text()
        assert "dtsmm:82%25_of_cio" in text
        assert 'dtsmm-ont:subjectQuantifier "' not in text  # key carries it instead
        triples = parse_turtle(tmp_path / "graph.ttl")
        labels = {o[1] for _, p, o in triples if p[1].endswith("label")}
        assert "82% of cio" in labels

    def test_annotate_mode_keeps_plain_key(self, golden_run):
        text = (golden_run / "graph.ttl").read_text()
        assert 'dtsmm-ont:subjectQuantifier "82%"' in text
        assert "dtsmm:82%25_of_cio" not in text


class _SpotlightStub(BaseHTTPRequestHandler):
    mode = "ok"

    def do_POST(self):
        if type(self).mode == "down":
            self.send_response(500)
            self.end_headers()
            return
        length = int(self.headers.get("Content-Length", 0))
        text = parse_qs(self.rfile.read(length).decode())["text"][0]
        resources = []
        for surface, uri in (
            ("gartner inc", "http://dbpedia.org/resource/Gartner"),
            ("gartner", "http://dbpedia.org/resource/Gartner"),
        ):
            offset = text.find(surface)
            if offset >= 0:
                resources.append(
                    {
                        "@URI": uri,
                        "@surfaceForm": surface,
                        "@offset": str(offset),
                        "@similarityScore": "0.95",
                    }
                )
                break
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(json.dumps({"Resources": resources}).encode())

    def log_message(self, *args):
        pass


@pytest.fixture()
def spotlight():
    _SpotlightStub.mode = "ok"
    httpd = HTTPServer(("127.0.0.1", 0), _SpotlightStub)
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    yield f"http://127.0.0.1:{httpd.server_port}"
    httpd.shutdown()


class TestLinkingStage:
    def test_links_emitted_for_both_gartner_variants(self, tmp_path, spotlight):
        cfg = config(tmp_path, linking_enabled=True, linking_endpoint=spotlight)
        pipeline.stage_normalize(cfg)
        pipeline.stage_extract(cfg)
        report = pipeline.stage_refine_emit(cfg)
        assert report["linking"] == "ok"
        assert report["same_as_links"] >= 2  # gartner and gartner inc
        text = (tmp_path / "graph.ttl").read_text()
        assert "dtsmm:gartner owl:sameAs <http://dbpedia.org/resource/Gartner>" in text
        assert "dtsmm:gartner_inc owl:sameAs <http://dbpedia.org/resource/Gartner>" in text

    def test_service_failure_degrades_to_unlinked(self, tmp_path, spotlight):
        _SpotlightStub.mode = "down"
        cfg = config(tmp_path, linking_enabled=True, linking_endpoint=spotlight)
        pipeline.stage_normalize(cfg)
        pipeline.stage_extract(cfg)
        report = pipeline.stage_refine_emit(cfg)
        assert report["same_as_links"] == 0
        assert report["linking"].startswith("unavailable")

    def test_strict_mode_raises(self, tmp_path, spotlight):
        _SpotlightStub.mode = "down"
        cfg = config(
            tmp_path, linking_enabled=True, linking_endpoint=spotlight, strict_linking=True
        )
        pipeline.stage_normalize(cfg)
        pipeline.stage_extract(cfg)
        with pytest.raises(LinkingUnavailable):
            pipeline.stage_refine_emit(cfg)
