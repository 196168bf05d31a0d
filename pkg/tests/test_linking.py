from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qs

import pytest

from microkg.linking import LinkingUnavailable, SpotlightClient


class _Handler(BaseHTTPRequestHandler):
    behavior = "ok"
    fail_times = 0
    seen: list[dict] = []

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = parse_qs(self.rfile.read(length).decode("utf-8"))
        type(self).seen.append({k: v[0] for k, v in body.items()})
        if type(self).fail_times > 0:
            type(self).fail_times -= 1
            self.send_response(500)
            self.end_headers()
            return
        if type(self).behavior == "garbage":
            payload = b"<html>not json</html>"
        else:
            text = body.get("text", [""])[0]
            resources = []
            if "gartner" in text:
                resources.append(
                    {
                        "@URI": "http://dbpedia.org/resource/Gartner",
                        "@surfaceForm": "gartner",
                        "@offset": str(text.index("gartner")),
                        "@similarityScore": "0.99",
                    }
                )
            resources.append({"@URI": "http://x", "bad": "entry"})  # malformed
            payload = json.dumps({"Resources": resources}).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def server():
    _Handler.behavior = "ok"
    _Handler.fail_times = 0
    _Handler.seen = []
    httpd = HTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_port}"
    httpd.shutdown()


def test_annotate_parses_resources_and_skips_malformed(server):
    client = SpotlightClient(server, confidence=0.42)
    resources = client.annotate("gartner says things")
    assert len(resources) == 1
    assert resources[0].uri == "http://dbpedia.org/resource/Gartner"
    assert resources[0].offset == 0
    assert _Handler.seen[0]["confidence"] == "0.42"


def test_retry_then_success(server):
    _Handler.fail_times = 1
    client = SpotlightClient(server, retries=2, backoff=0.01)
    assert client.annotate("gartner here")[0].score == pytest.approx(0.99)


def test_unavailable_after_retries(server):
    _Handler.fail_times = 10
    client = SpotlightClient(server, retries=1, backoff=0.01)
    with pytest.raises(LinkingUnavailable):
        client.annotate("anything")


def test_malformed_body_returns_empty(server):
    _Handler.behavior = "garbage"
    client = SpotlightClient(server)
    assert client.annotate("text") == []


def test_annotate_many_preserves_order(server):
    client = SpotlightClient(server, max_in_flight=4)
    results = client.annotate_many(["gartner one", "nothing", "gartner two"])
    assert [len(r) for r in results] == [1, 0, 1]


def test_empty_text_short_circuits(server):
    client = SpotlightClient(server)
    assert client.annotate("   ") == []
    assert _Handler.seen == []


def test_endpoint_path_appended(server):
    client = SpotlightClient(server)
    assert client.url.endswith("/rest/annotate")
    client2 = SpotlightClient(server + "/rest/annotate")
    assert client2.url == client.url
