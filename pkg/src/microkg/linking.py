"""Spotlight-compatible entity-linking REST client.

POSTs form-encoded ``text``/``confidence`` to ``<endpoint>/rest/annotate``
and reads the JSON ``Resources`` array. Batch annotation runs a bounded
number of requests in flight with retry/backoff; results keep input order.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import requests

__all__ = ["LinkingUnavailable", "SpotlightClient", "SpotlightResource"]

log = logging.getLogger("microkg.linking")

ANNOTATE_PATH = "/rest/annotate"


class LinkingUnavailable(RuntimeError):
    """The linking service could not be reached (after retries)."""


@dataclass(frozen=True)
class SpotlightResource:
    uri: str
    surface: str
    offset: int
    score: float


class SpotlightClient:
    def __init__(
        self,
        endpoint: str,
        confidence: float = 0.5,
        timeout: float = 10.0,
        retries: int = 2,
        backoff: float = 0.5,
        max_in_flight: int = 4,
        session: requests.Session | None = None,
    ) -> None:
        endpoint = endpoint.rstrip("/")
        if not endpoint.endswith(ANNOTATE_PATH):
            endpoint += ANNOTATE_PATH
        self.url = endpoint
        self.confidence = confidence
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.max_in_flight = max_in_flight
        self.session = session or requests.Session()

    def annotate(self, text: str) -> list[SpotlightResource]:
        if not text.strip():
            return []
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                response = self.session.post(
                    self.url,
                    data={"text": text, "confidence": str(self.confidence)},
                    headers={"Accept": "application/json"},
                    timeout=self.timeout,
                )
                if response.status_code >= 500:
                    raise requests.ConnectionError(f"server error {response.status_code}")
                response.raise_for_status()
                return self._parse(response.json())
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
            except ValueError as exc:  # non-JSON body
                log.warning("malformed linking response: %s", exc)
                return []
        raise LinkingUnavailable(str(last_error))

    def annotate_many(self, texts: list[str]) -> list[list[SpotlightResource]]:
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            return list(pool.map(self.annotate, texts))

    @staticmethod
    def _parse(data: dict) -> list[SpotlightResource]:
        resources = data.get("Resources") or []
        parsed = []
        for item in resources:
            try:
                parsed.append(
                    SpotlightResource(
                        uri=item["@URI"],
                        surface=item["@surfaceForm"],
                        offset=int(item["@offset"]),
                        score=float(item.get("@similarityScore", 0.0)),
                    )
                )
            except (KeyError, TypeError, ValueError):
                log.warning("skipping malformed resource entry: %r", item)
        return parsed
