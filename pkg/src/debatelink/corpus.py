"""Data model and ingestion for structured conversational records.

A corpus file holds one JSON record per line, one record per debate. The
text of a scene, for linking purposes, is the speech-unit texts joined with
single newlines; every annotation offset in this package counts Unicode
scalar values into that joined text.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .folding import fold_text

GOVERNMENT_ROLES = ("minister", "secretary")
SPEAKER_ROLES = GOVERNMENT_ROLES + ("member", "chair")


class CorpusError(Exception):
    pass


class CorpusParseError(CorpusError):
    """Raised when a corpus file is not well-formed; message carries line/offset."""


class CorpusInvariantError(CorpusError):
    """Raised when a structurally valid record violates a corpus invariant."""


class UnmappedPortfolioError(CorpusError):
    """Raised when a government speaker's portfolio has no department mapping."""


@dataclass(frozen=True)
class SpeakerRef:
    uri: str
    display_name: str
    role: str | None = None
    portfolio: str | None = None


@dataclass(frozen=True)
class SpeechUnit:
    id: str
    speaker: SpeakerRef
    text: str


@dataclass(frozen=True)
class Scene:
    id: str
    speech_units: tuple[SpeechUnit, ...]

    @property
    def principal_speaker(self) -> SpeakerRef:
        return self.speech_units[0].speaker


@dataclass(frozen=True)
class Debate:
    id: str
    date: datetime.date
    house: str
    scenes: tuple[Scene, ...]


@dataclass(frozen=True)
class SpeakersList:
    entries: tuple[SpeakerRef, ...]


@dataclass(frozen=True)
class DepartmentLabel:
    name: str
    is_none_stratum: bool = False

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PortfolioMap:
    """Maps portfolio strings (case-insensitively) to department names.

    Exactly one none-stratum label exists per configuration: the department
    assigned to debates without any government speaker.
    """

    departments: Mapping[str, str]
    none_department: str = "Without department"

    @property
    def none_label(self) -> DepartmentLabel:
        return DepartmentLabel(self.none_department, is_none_stratum=True)

    def label_for(self, portfolio: str) -> DepartmentLabel:
        dept = self.departments.get(fold_text(portfolio))
        if dept is None:
            raise UnmappedPortfolioError(
                "no department mapping for portfolio %r" % portfolio
            )
        return DepartmentLabel(dept)


def scene_text(scene: Scene) -> str:
    return "\n".join(u.text for u in scene.speech_units)


def unit_offsets(scene: Scene) -> list[int]:
    """Start offset of each speech unit within scene_text(scene)."""
    offsets = []
    pos = 0
    for u in scene.speech_units:
        offsets.append(pos)
        pos += len(u.text) + 1
    return offsets


def _parse_date(value, debate_id: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(value)
    except (TypeError, ValueError):
        raise CorpusInvariantError(
            "debate %r: date %r is not a valid ISO 8601 calendar date"
            % (debate_id, value)
        ) from None


def _parse_speaker(obj, where: str) -> SpeakerRef:
    if not isinstance(obj, dict):
        raise CorpusInvariantError("%s: speaker must be an object" % where)
    uri = obj.get("uri", "")
    if not uri:
        raise CorpusInvariantError("%s: speaker uri is empty" % where)
    role = obj.get("role")
    if role is not None and role not in SPEAKER_ROLES:
        raise CorpusInvariantError(
            "%s: unknown speaker role %r (expected one of %s)"
            % (where, role, ", ".join(SPEAKER_ROLES))
        )
    return SpeakerRef(
        uri=uri,
        display_name=obj.get("display_name", ""),
        role=role,
        portfolio=obj.get("portfolio"),
    )


def _parse_debate(obj) -> Debate:
    if not isinstance(obj, dict):
        raise CorpusInvariantError("debate record must be an object")
    debate_id = obj.get("id")
    if not debate_id:
        raise CorpusInvariantError("debate record without id")
    date = _parse_date(obj.get("date"), debate_id)
    house = obj.get("house", "")
    raw_scenes = obj.get("scenes") or []
    if not raw_scenes:
        raise CorpusInvariantError("debate %r has no scenes" % debate_id)
    scenes = []
    seen_scene_ids = set()
    for raw_scene in raw_scenes:
        scene_id = raw_scene.get("id")
        if not scene_id:
            raise CorpusInvariantError("debate %r: scene without id" % debate_id)
        if scene_id in seen_scene_ids:
            raise CorpusInvariantError(
                "debate %r: duplicate scene id %r" % (debate_id, scene_id)
            )
        seen_scene_ids.add(scene_id)
        raw_units = raw_scene.get("speech_units") or []
        if not raw_units:
            raise CorpusInvariantError(
                "debate %r: scene %r has no speech units" % (debate_id, scene_id)
            )
        units = []
        for raw_unit in raw_units:
            unit_id = raw_unit.get("id", "")
            where = "debate %r, scene %r, unit %r" % (debate_id, scene_id, unit_id)
            speaker = _parse_speaker(raw_unit.get("speaker"), where)
            units.append(SpeechUnit(unit_id, speaker, raw_unit.get("text", "")))
        scenes.append(Scene(scene_id, tuple(units)))
    return Debate(debate_id, date, house, tuple(scenes))


def parse_corpus(text: str) -> list[Debate]:
    if not text.strip():
        raise CorpusParseError("corpus is empty: expected one JSON record per line")
    debates = []
    seen_ids = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusParseError(
                "line %d, offset %d: %s" % (lineno, e.colno, e.msg)
            ) from None
        debate = _parse_debate(obj)
        if debate.id in seen_ids:
            raise CorpusInvariantError("duplicate debate id %r" % debate.id)
        seen_ids.add(debate.id)
        debates.append(debate)
    return debates


def load_corpus(path) -> list[Debate]:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f.read())


def _speaker_record(ref: SpeakerRef) -> dict:
    rec = {"uri": ref.uri, "display_name": ref.display_name}
    if ref.role is not None:
        rec["role"] = ref.role
    if ref.portfolio is not None:
        rec["portfolio"] = ref.portfolio
    return rec


def debate_record(debate: Debate) -> dict:
    return {
        "id": debate.id,
        "date": debate.date.isoformat(),
        "house": debate.house,
        "scenes": [
            {
                "id": scene.id,
                "speech_units": [
                    {
                        "id": u.id,
                        "speaker": _speaker_record(u.speaker),
                        "text": u.text,
                    }
                    for u in scene.speech_units
                ],
            }
            for scene in debate.scenes
        ],
    }


def serialize_corpus(debates: Iterable[Debate]) -> str:
    return "".join(
        json.dumps(debate_record(d), ensure_ascii=False) + "\n" for d in debates
    )


def speakers_list(debate: Debate) -> SpeakersList:
    """Distinct speakers in order of first appearance across all scenes."""
    entries = []
    seen = set()
    for scene in debate.scenes:
        for unit in scene.speech_units:
            if unit.speaker.uri not in seen:
                seen.add(unit.speaker.uri)
                entries.append(unit.speaker)
    return SpeakersList(tuple(entries))


def infer_departments(debate: Debate, portfolio_map: PortfolioMap) -> set[DepartmentLabel]:
    """Departments indicated by the debate's government speakers.

    One label per distinct government-speaker portfolio; the none-stratum
    label if and only if no speaker holds a government position.
    """
    labels: set[DepartmentLabel] = set()
    has_government_speaker = False
    for scene in debate.scenes:
        for unit in scene.speech_units:
            ref = unit.speaker
            if ref.role not in GOVERNMENT_ROLES:
                continue
            has_government_speaker = True
            if ref.portfolio is None:
                raise UnmappedPortfolioError(
                    "government speaker %r in debate %r has no portfolio"
                    % (ref.uri, debate.id)
                )
            labels.add(portfolio_map.label_for(ref.portfolio))
    if not has_government_speaker:
        return {portfolio_map.none_label}
    return labels


def load_portfolio_map(path, none_department: str = "Without department") -> PortfolioMap:
    """Two-column table: portfolio<TAB>department, UTF-8, one row per portfolio."""
    mapping = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusParseError(
                    "%s, line %d: expected portfolio<TAB>department" % (path, lineno)
                )
            mapping[fold_text(parts[0].strip())] = parts[1].strip()
    return PortfolioMap(mapping, none_department)
