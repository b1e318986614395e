"""Linker systems, annotation pooling, and combination strategies.

Pooling groups overlap-connected annotations from all systems into phrases
(the unit the benchmark judges). Combination is either the preference
ordering, where the first system in the order that linked a phrase wins,
or plain voting as a comparison baseline.
"""

from __future__ import annotations

import datetime
import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .annotations import Annotation, annotation_from_record, annotation_record
from .automaton import RawMatch, build_automaton
from .corpus import Scene, SpeakersList, scene_text
from .dict_linker import DICT_SYSTEM_ID, link_dictionary, select_matches
from .folding import fold_text
from .kb import AliasDictionary, KnowledgeBase
from .role_linker import ROLE_SYSTEM_ID, PatternConfig, link_roles


class PoolError(Exception):
    pass


class CombineError(Exception):
    pass


@dataclass(frozen=True)
class LinkContext:
    """Everything a linker may need besides the scene itself."""

    debate_id: str
    date: datetime.date
    house: str
    speakers: SpeakersList


class DictionarySystem:
    """Wraps the dictionary linker as a pipeline system."""

    def __init__(self, dictionary: AliasDictionary, system_id: str = DICT_SYSTEM_ID):
        self.system_id = system_id
        self.dictionary = dictionary
        self.automaton = build_automaton(dictionary)

    def link(self, scene: Scene, ctx: LinkContext) -> list[Annotation]:
        return link_dictionary(
            self.automaton, self.dictionary, scene, ctx.debate_id, self.system_id
        )


class RoleSystem:
    """Wraps the role linker as a pipeline system."""

    def __init__(self, kb: KnowledgeBase, config: PatternConfig,
                 system_id: str = ROLE_SYSTEM_ID):
        self.system_id = system_id
        self.kb = kb
        self.config = config

    def link(self, scene: Scene, ctx: LinkContext) -> list[Annotation]:
        return link_roles(
            scene, ctx.debate_id, ctx.date, ctx.house, ctx.speakers,
            self.kb, self.config,
        )


class ExternalAnnotations:
    """Annotations produced elsewhere and dropped in as an interchange file."""

    def __init__(self, system_id: str, annotations: Iterable[Annotation]):
        self.system_id = system_id
        self._by_scene: dict[tuple[str, str], list[Annotation]] = defaultdict(list)
        for a in annotations:
            if a.system_id != system_id:
                raise CombineError(
                    "annotation from system %r in a %r drop" % (a.system_id, system_id)
                )
            self._by_scene[(a.debate_id, a.scene_id)].append(a)

    @classmethod
    def from_file(cls, path) -> "ExternalAnnotations":
        from .annotations import read_annotations

        annotations = read_annotations(path)
        ids = {a.system_id for a in annotations}
        if len(ids) > 1:
            raise CombineError(
                "%s mixes system ids: %s" % (path, ", ".join(sorted(ids)))
            )
        system_id = ids.pop() if ids else "extern"
        return cls(system_id, annotations)

    def link(self, scene: Scene, ctx: LinkContext) -> list[Annotation]:
        return sorted(self._by_scene.get((ctx.debate_id, scene.id), []))


@dataclass(frozen=True)
class MockRule:
    surface: str
    uri: str
    confidence: float = 0.6
    kind: str = "other"


class MockGeneralist:
    """Deterministic stand-in for an off-the-shelf generalist linker.

    Spots its rule surfaces case-insensitively at token boundaries. The
    recall dial (per entity kind) is the chance a spotted phrase is linked
    at all; the precision dial is the chance the link carries the rule's
    URI rather than a corrupted one. Draws are derived by hashing the seed,
    scene id and span, so output is stable regardless of call order.
    """

    def __init__(self, rules: Sequence[MockRule],
                 recall: dict[str, float] | None = None,
                 precision: dict[str, float] | None = None,
                 seed: int = 0, system_id: str = "mock"):
        self.system_id = system_id
        self.rules = list(rules)
        self.recall = dict(recall or {})
        self.precision = dict(precision or {})
        self.seed = seed

    @classmethod
    def from_table(cls, table: dict, system_id: str | None = None) -> "MockGeneralist":
        rules = [
            MockRule(
                surface=r["surface"],
                uri=r["uri"],
                confidence=float(r.get("confidence", 0.6)),
                kind=r.get("kind", "other"),
            )
            for r in table.get("rules", ())
        ]
        return cls(
            rules,
            recall=table.get("recall"),
            precision=table.get("precision"),
            seed=int(table.get("seed", 0)),
            system_id=system_id or table.get("system_id", "mock"),
        )

    @classmethod
    def from_file(cls, path, system_id: str | None = None) -> "MockGeneralist":
        with open(path, encoding="utf-8") as f:
            return cls.from_table(json.load(f), system_id)

    def _chance(self, *key) -> float:
        digest = hashlib.sha256(repr((self.seed,) + key).encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") / 2**64

    def link(self, scene: Scene, ctx: LinkContext) -> list[Annotation]:
        text = scene_text(scene)
        folded = fold_text(text)
        spotted: list[tuple[RawMatch, MockRule]] = []
        for rule in self.rules:
            needle = fold_text(rule.surface)
            if not needle:
                continue
            pos = folded.find(needle)
            while pos != -1:
                spotted.append((RawMatch(pos, pos + len(needle), rule.surface), rule))
                pos = folded.find(needle, pos + 1)
        by_span: dict[tuple[int, int, str], MockRule] = {}
        for m, rule in spotted:
            by_span.setdefault((m.start, m.end, m.alias), rule)
        selected = select_matches([m for m, _ in spotted], text)
        out = []
        for m in selected:
            rule = by_span[(m.start, m.end, m.alias)]
            if self._chance("recall", scene.id, m.start, m.end) >= self.recall.get(rule.kind, 1.0):
                continue
            uri = rule.uri
            if self._chance("precision", scene.id, m.start, m.end) >= self.precision.get(rule.kind, 1.0):
                uri = rule.uri + "#wrong"
            out.append(
                Annotation(
                    debate_id=ctx.debate_id,
                    scene_id=scene.id,
                    start=m.start,
                    end=m.end,
                    surface=text[m.start : m.end],
                    uri=uri,
                    system_id=self.system_id,
                    confidence=rule.confidence,
                )
            )
        return out


@dataclass(frozen=True)
class PooledPhrase:
    """Overlap-connected component of annotations, shown as its longest span."""

    phrase_id: str
    debate_id: str
    scene_id: str
    start: int
    end: int
    surface: str
    member_annotations: tuple[Annotation, ...]

    def links(self) -> list[Annotation]:
        return [a for a in self.member_annotations if a.linked]

    def linked_systems(self) -> set[str]:
        return {a.system_id for a in self.member_annotations if a.linked}

    def systems(self) -> set[str]:
        return {a.system_id for a in self.member_annotations}


def pool(annotations: Sequence[Annotation], scene: Scene,
         debate_id: str | None = None) -> list[PooledPhrase]:
    """Group annotations from all systems into overlap-connected phrases."""
    if not annotations:
        return []
    if debate_id is None:
        debate_id = annotations[0].debate_id
    text = scene_text(scene)
    for a in annotations:
        if a.scene_id != scene.id or a.debate_id != debate_id:
            raise PoolError(
                "annotation for %s/%s pooled against scene %s/%s"
                % (a.debate_id, a.scene_id, debate_id, scene.id)
            )
        if a.end > len(text):
            raise PoolError(
                "annotation span [%d, %d) exceeds scene text length %d"
                % (a.start, a.end, len(text))
            )
    ordered = sorted(annotations)
    groups: list[list[Annotation]] = []
    group_end = -1
    for a in ordered:
        if not groups or a.start >= group_end:
            groups.append([a])
            group_end = a.end
        else:
            groups[-1].append(a)
            group_end = max(group_end, a.end)
    phrases = []
    for ordinal, group in enumerate(groups):
        start = min(a.start for a in group)
        end = max(a.end for a in group)
        phrases.append(
            PooledPhrase(
                phrase_id="%s:%s:%04d" % (debate_id, scene.id, ordinal),
                debate_id=debate_id,
                scene_id=scene.id,
                start=start,
                end=end,
                surface=text[start:end],
                member_annotations=tuple(group),
            )
        )
    return phrases


def combine_preference(order: Sequence[str], phrases: Sequence[PooledPhrase],
                       known_systems: Iterable[str] | None = None) -> list[Annotation]:
    """Per phrase, the first system in the order that linked it wins.

    A URI-less candidate does not count as linking: the next system in the
    order is consulted. Winning annotations are kept verbatim.
    """
    if not order:
        raise CombineError("preference order is empty")
    if len(set(order)) != len(order):
        raise CombineError("preference order repeats a system id")
    if known_systems is not None:
        known = set(known_systems)
    else:
        known = {a.system_id for p in phrases for a in p.member_annotations}
    unknown = [s for s in order if s not in known]
    if unknown:
        raise CombineError("unknown system id(s) in order: %s" % ", ".join(unknown))
    out = []
    for phrase in phrases:
        for system_id in order:
            links = sorted(
                a for a in phrase.member_annotations
                if a.system_id == system_id and a.linked
            )
            if links:
                out.append(links[0])
                break
    return out


VOTE_SYSTEM_ID = "vote"


def combine_voting(phrases: Sequence[PooledPhrase]) -> list[Annotation]:
    """Baseline: per phrase, the URI supported by the most systems wins.

    Ties break on highest mean confidence, then lexicographic URI; the
    emitted annotation takes the longest supporting span.
    """
    out = []
    for phrase in phrases:
        support: dict[str, list[Annotation]] = defaultdict(list)
        for a in phrase.member_annotations:
            if a.linked:
                support[a.uri].append(a)
        if not support:
            continue

        def stats(uri: str):
            anns = support[uri]
            votes = len({a.system_id for a in anns})
            mean_conf = sum(a.confidence for a in anns) / len(anns)
            return votes, mean_conf

        winner = sorted(
            support, key=lambda u: (-stats(u)[0], -stats(u)[1], u)
        )[0]
        votes, mean_conf = stats(winner)
        span_ann = max(support[winner], key=lambda a: (a.end - a.start, -a.start))
        out.append(
            Annotation(
                debate_id=phrase.debate_id,
                scene_id=phrase.scene_id,
                start=span_ann.start,
                end=span_ann.end,
                surface=span_ann.surface,
                uri=winner,
                system_id=VOTE_SYSTEM_ID,
                confidence=mean_conf,
            )
        )
    return out


def phrase_record(p: PooledPhrase) -> dict:
    return {
        "phrase_id": p.phrase_id,
        "debate_id": p.debate_id,
        "scene_id": p.scene_id,
        "start": p.start,
        "end": p.end,
        "surface": p.surface,
        "members": [annotation_record(a) for a in p.member_annotations],
    }


def phrase_from_record(rec: dict) -> PooledPhrase:
    return PooledPhrase(
        phrase_id=rec["phrase_id"],
        debate_id=rec["debate_id"],
        scene_id=rec["scene_id"],
        start=rec["start"],
        end=rec["end"],
        surface=rec["surface"],
        member_annotations=tuple(
            annotation_from_record(r) for r in rec.get("members", ())
        ),
    )


def write_phrases(path, phrases: Iterable[PooledPhrase]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for p in phrases:
            f.write(json.dumps(phrase_record(p), ensure_ascii=False) + "\n")


def read_phrases(path) -> list[PooledPhrase]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(phrase_from_record(json.loads(line)))
    return out
