"""HTTP service backing the gold-standard annotation workbench.

Stateless apart from an append-only decision log: progress and consensus
views are derived from the log on every read. Writes are serialized by a
lock and appended as whole lines, so a crashed POST never leaves a partial
record behind. Everything else is immutable after startup, which makes
concurrent reads safe.
"""

from __future__ import annotations

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Sequence

from .benchmark import (
    ROUND_CONSENSUS,
    GoldDecision,
    GoldError,
    gold_from_record,
    gold_record,
    normalize_uri,
    preselect_candidates,
)
from .corpus import Debate, scene_text
from .kb import KnowledgeBase
from .pipeline import PooledPhrase

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class ServiceError(Exception):
    pass


class GoldLog:
    """Append-only JSONL store for gold decisions, single-writer discipline."""

    def __init__(self, path):
        self.path = path
        self._lock = threading.Lock()
        self._decisions: list[GoldDecision] = []
        self._consensus_seen: set[str] = set()
        if os.path.exists(path):
            with open(path, encoding="utf-8") as f:
                for line in f:
                    if not line.strip():
                        continue
                    try:
                        decision = gold_from_record(json.loads(line))
                    except (json.JSONDecodeError, GoldError, KeyError):
                        # a torn tail line from a crashed writer is ignored
                        continue
                    self._remember(decision)
        self._fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)

    def _remember(self, decision: GoldDecision) -> None:
        self._decisions.append(decision)
        if decision.round == ROUND_CONSENSUS:
            self._consensus_seen.add(decision.phrase_id)

    def has_consensus(self, phrase_id: str) -> bool:
        return phrase_id in self._consensus_seen

    def append(self, decision: GoldDecision) -> None:
        line = json.dumps(gold_record(decision), ensure_ascii=False) + "\n"
        with self._lock:
            if decision.round == ROUND_CONSENSUS and self.has_consensus(decision.phrase_id):
                raise ServiceError("duplicate consensus decision for %r" % decision.phrase_id)
            os.write(self._fd, line.encode("utf-8"))
            self._remember(decision)

    def snapshot(self) -> list[GoldDecision]:
        with self._lock:
            return list(self._decisions)

    def close(self) -> None:
        os.close(self._fd)


class AnnotationService:
    """Holds the immutable corpus/pool views and the gold log."""

    def __init__(self, debates: Sequence[Debate], phrases: Sequence[PooledPhrase],
                 kb: KnowledgeBase, gold_log: GoldLog,
                 scene_of_interest: dict[str, str] | None = None,
                 candidate_k: int = 3, ui_dir=None):
        self.debates = {d.id: d for d in debates}
        self.kb = kb
        self.gold_log = gold_log
        self.scene_of_interest = dict(scene_of_interest or {})
        self.ui_dir = ui_dir
        self.scenes: dict[str, tuple[str, object]] = {}
        for debate in debates:
            for scene in debate.scenes:
                if scene.id in self.scenes:
                    raise ServiceError(
                        "scene id %r is not unique across the corpus; "
                        "the /scenes/{id} resources need unique ids" % scene.id
                    )
                self.scenes[scene.id] = (debate.id, scene)
        self.phrases: dict[str, PooledPhrase] = {}
        self.phrases_by_scene: dict[str, list[PooledPhrase]] = {}
        for p in phrases:
            self.phrases[p.phrase_id] = p
            self.phrases_by_scene.setdefault(p.scene_id, []).append(p)
        for group in self.phrases_by_scene.values():
            group.sort(key=lambda p: p.start)
        self.candidates = {
            p.phrase_id: [
                {
                    "uri": e.uri,
                    "display_name": e.canonical_name,
                    "kind": e.kind,
                }
                for e in preselect_candidates(p, kb, candidate_k)
            ]
            for p in phrases
        }

    # ----- payload builders -------------------------------------------------

    def debate_list(self) -> dict:
        return {
            "debates": [
                {
                    "id": d.id,
                    "date": d.date.isoformat(),
                    "house": d.house,
                    "n_scenes": len(d.scenes),
                    "scene_of_interest": self.scene_of_interest.get(d.id),
                }
                for d in sorted(self.debates.values(), key=lambda d: d.id)
            ]
        }

    def debate_view(self, debate_id: str) -> dict | None:
        debate = self.debates.get(debate_id)
        if debate is None:
            return None
        return {
            "id": debate.id,
            "date": debate.date.isoformat(),
            "house": debate.house,
            "scene_of_interest": self.scene_of_interest.get(debate.id),
            "scenes": [
                {
                    "id": scene.id,
                    "text": scene_text(scene),
                    "speech_units": [
                        {
                            "id": u.id,
                            "speaker": {
                                "uri": u.speaker.uri,
                                "display_name": u.speaker.display_name,
                                "role": u.speaker.role,
                            },
                            "text": u.text,
                        }
                        for u in scene.speech_units
                    ],
                }
                for scene in debate.scenes
            ],
        }

    def scene_phrases(self, scene_id: str) -> dict | None:
        if scene_id not in self.scenes:
            return None
        debate_id, _scene = self.scenes[scene_id]
        return {
            "scene_id": scene_id,
            "debate_id": debate_id,
            "phrases": [
                {
                    "phrase_id": p.phrase_id,
                    "start": p.start,
                    "end": p.end,
                    "surface": p.surface,
                    "candidates": self.candidates[p.phrase_id],
                }
                for p in self.phrases_by_scene.get(scene_id, [])
            ],
        }

    def progress(self) -> dict:
        decisions = self.gold_log.snapshot()
        by_annotator: dict[str, dict[str, int]] = {}
        consensus_done = set()
        for d in decisions:
            rounds = by_annotator.setdefault(d.annotator_id, {})
            rounds[d.round] = rounds.get(d.round, 0) + 1
            if d.round == ROUND_CONSENSUS:
                consensus_done.add(d.phrase_id)
        return {
            "total_phrases": len(self.phrases),
            "decided_consensus": len(consensus_done),
            "remaining_consensus": len(self.phrases) - len(consensus_done),
            "by_annotator": by_annotator,
        }

    def export_gold(self) -> str:
        return "".join(
            json.dumps(gold_record(d), ensure_ascii=False) + "\n"
            for d in self.gold_log.snapshot()
        )

    def submit(self, payload: dict) -> tuple[int, dict]:
        """Validate and append one decision; returns (status, body)."""
        phrase_id = payload.get("phrase_id")
        if phrase_id not in self.phrases:
            return 404, {"error": "unknown phrase_id %r" % phrase_id}
        uris = payload.get("uris") or []
        if not isinstance(uris, list) or any(not isinstance(u, str) for u in uris):
            return 400, {"error": "uris must be a list of strings"}
        try:
            decision = GoldDecision(
                phrase_id=phrase_id,
                verdict=payload.get("verdict", ""),
                uris=frozenset(normalize_uri(u) for u in uris if u.strip()),
                annotator_id=payload.get("annotator_id", ""),
                round=payload.get("round", ""),
            )
        except GoldError as e:
            return 400, {"error": str(e)}
        if not decision.annotator_id:
            return 400, {"error": "annotator_id is required"}
        try:
            self.gold_log.append(decision)
        except ServiceError as e:
            return 409, {"error": str(e)}
        return 200, {"ok": True, "decision": gold_record(decision)}


def make_handler(service: AnnotationService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, payload) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self._send(status, body, "application/json; charset=utf-8")

        def do_OPTIONS(self):
            self._send(204, b"", "text/plain")

        def do_GET(self):
            path = self.path.split("?", 1)[0]
            if path == "/debates":
                self._send_json(200, service.debate_list())
            elif path.startswith("/debates/"):
                view = service.debate_view(path[len("/debates/"):])
                if view is None:
                    self._send_json(404, {"error": "unknown debate"})
                else:
                    self._send_json(200, view)
            elif path.startswith("/scenes/") and path.endswith("/phrases"):
                scene_id = path[len("/scenes/"):-len("/phrases")]
                payload = service.scene_phrases(scene_id)
                if payload is None:
                    self._send_json(404, {"error": "unknown scene %r" % scene_id})
                else:
                    self._send_json(200, payload)
            elif path == "/progress":
                self._send_json(200, service.progress())
            elif path == "/export/gold":
                body = service.export_gold().encode("utf-8")
                self._send(200, body, "application/x-ndjson; charset=utf-8")
            else:
                self._serve_static(path)

        def do_POST(self):
            path = self.path.split("?", 1)[0]
            if path != "/gold":
                self._send_json(404, {"error": "unknown resource"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length) or b"{}")
            except (ValueError, json.JSONDecodeError):
                self._send_json(400, {"error": "body must be a JSON object"})
                return
            if not isinstance(payload, dict):
                self._send_json(400, {"error": "body must be a JSON object"})
                return
            status, body = service.submit(payload)
            self._send_json(status, body)

        def _serve_static(self, path: str) -> None:
            if service.ui_dir is None:
                self._send_json(404, {"error": "unknown resource"})
                return
            rel = "index.html" if path == "/" else path.lstrip("/")
            root = os.path.realpath(service.ui_dir)
            full = os.path.realpath(os.path.join(root, rel))
            if not full.startswith(root + os.sep) and full != root:
                self._send_json(404, {"error": "unknown resource"})
                return
            if not os.path.isfile(full):
                self._send_json(404, {"error": "unknown resource"})
                return
            ext = os.path.splitext(full)[1].lower()
            with open(full, "rb") as f:
                body = f.read()
            self._send(200, body, CONTENT_TYPES.get(ext, "application/octet-stream"))

    return Handler


def serve(service: AnnotationService, host: str = "127.0.0.1",
          port: int = 0) -> ThreadingHTTPServer:
    """Bind and return the server; callers run serve_forever (or a thread)."""
    server = ThreadingHTTPServer((host, port), make_handler(service))
    return server
