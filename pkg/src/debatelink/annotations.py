"""Shared annotation record and the JSONL interchange format.

One record per annotation, identical schema for all systems, so external
EL systems can take part in pooling and combination by file drop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable


class AnnotationError(Exception):
    pass


@dataclass(frozen=True, order=True)
class Annotation:
    debate_id: str
    scene_id: str
    start: int
    end: int
    surface: str
    uri: str | None  # None marks a spotted-but-unresolved candidate phrase
    system_id: str
    confidence: float

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise AnnotationError(
                "bad span [%r, %r) in scene %r" % (self.start, self.end, self.scene_id)
            )
        if self.uri == "":
            raise AnnotationError("empty uri; use None for unresolved candidates")
        if not self.system_id:
            raise AnnotationError("annotation without system_id")
        if not 0.0 <= self.confidence <= 1.0:
            raise AnnotationError("confidence %r outside [0, 1]" % self.confidence)

    @property
    def linked(self) -> bool:
        return self.uri is not None


def annotation_record(a: Annotation) -> dict:
    return {
        "debate_id": a.debate_id,
        "scene_id": a.scene_id,
        "start": a.start,
        "end": a.end,
        "surface": a.surface,
        "uri": a.uri,
        "system_id": a.system_id,
        "confidence": a.confidence,
    }


def annotation_from_record(rec: dict) -> Annotation:
    return Annotation(
        debate_id=rec["debate_id"],
        scene_id=rec["scene_id"],
        start=rec["start"],
        end=rec["end"],
        surface=rec["surface"],
        uri=rec.get("uri") or None,
        system_id=rec["system_id"],
        confidence=rec.get("confidence", 1.0),
    )


def write_annotations(path, annotations: Iterable[Annotation]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for a in annotations:
            f.write(json.dumps(annotation_record(a), ensure_ascii=False) + "\n")


def read_annotations(path) -> list[Annotation]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise AnnotationError("%s, line %d: %s" % (path, lineno, e.msg)) from None
            out.append(annotation_from_record(rec))
    return out
