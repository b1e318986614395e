"""Knowledge base of entities with the lookup structures the linkers need.

Three structures back the specialist linkers: a many-to-one alias
dictionary, a member index queried by (name, date, house), and a
government index queried by (role, portfolio, date). All of them are
immutable after load and safe for concurrent readers.
"""

from __future__ import annotations

import datetime
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .folding import fold_text

ENTITY_KINDS = ("party", "person", "organization", "other")
POSITION_ROLES = ("minister", "secretary")

CASE_INSENSITIVE = "insensitive"
CASE_SENSITIVE = "sensitive"


class KBError(Exception):
    pass


class AliasAmbiguityError(KBError):
    """Raised when one alias would map to more than one URI."""


@dataclass(frozen=True)
class Entity:
    uri: str
    kind: str
    canonical_name: str
    aliases: frozenset[str]
    wikipedia_uri: str | None = None


@dataclass(frozen=True)
class Membership:
    house: str
    start: datetime.date
    end: datetime.date | None = None  # None = still in office

    def contains(self, date: datetime.date) -> bool:
        return self.start <= date and (self.end is None or date <= self.end)


@dataclass(frozen=True)
class GovPosition:
    role: str
    portfolio: str | None
    start: datetime.date
    end: datetime.date | None = None

    def contains(self, date: datetime.date) -> bool:
        return self.start <= date and (self.end is None or date <= self.end)


@dataclass(frozen=True)
class Member:
    entity: Entity
    surname: str
    memberships: tuple[Membership, ...] = ()
    positions: tuple[GovPosition, ...] = ()


@dataclass(frozen=True)
class AliasDictionary:
    """Many-to-one mapping from alias strings to entity URIs.

    case_sensitive lists the aliases that override an insensitive global
    policy and must match the text exactly.
    """

    entries: dict[str, str]
    case_policy: str = CASE_INSENSITIVE
    case_sensitive: frozenset[str] = frozenset()

    def is_sensitive(self, alias: str) -> bool:
        return self.case_policy == CASE_SENSITIVE or alias in self.case_sensitive


def make_entity(uri, kind, canonical_name, aliases=(), wikipedia_uri=None) -> Entity:
    if not uri:
        raise KBError("entity without uri")
    if kind not in ENTITY_KINDS:
        raise KBError("entity %r: unknown kind %r" % (uri, kind))
    if not canonical_name:
        raise KBError("entity %r: empty canonical_name" % uri)
    # canonical_name is a member of the alias set by construction
    return Entity(uri, kind, canonical_name, frozenset(aliases) | {canonical_name},
                  wikipedia_uri)


def _build_entries(rows: Iterable[tuple[str, str, bool]],
                   case_policy: str) -> tuple[dict[str, str], frozenset[str]]:
    """Shared collision-checked construction for alias dictionaries.

    rows are (alias, uri, sensitive_override). Two aliases collide when they
    are identical under the effective case policy and map to different URIs;
    a group of fold-equal aliases escapes collision only if every one of
    them is case-sensitive (their exact forms are distinct by construction).
    """
    entries: dict[str, str] = {}
    sensitive: set[str] = set()
    groups: dict[str, list[tuple[str, str, bool]]] = defaultdict(list)
    for alias, uri, flag in rows:
        if not alias:
            raise KBError("empty alias for %r" % uri)
        prior = entries.get(alias)
        if prior is not None and prior != uri:
            raise AliasAmbiguityError(
                "alias %r maps to both %s and %s" % (alias, prior, uri)
            )
        entries[alias] = uri
        if flag or case_policy == CASE_SENSITIVE:
            sensitive.add(alias)
        key = fold_text(alias) if case_policy == CASE_INSENSITIVE else alias
        groups[key].append((alias, uri, flag))
    conflicts = []
    for key in sorted(groups):
        group = groups[key]
        uris = sorted({uri for _, uri, _ in group})
        if len(uris) < 2:
            continue
        if all(alias in sensitive for alias, _, _ in group):
            continue
        conflicts.append("alias %r maps to %s" % (key, ", ".join(uris)))
    if conflicts:
        raise AliasAmbiguityError("; ".join(conflicts))
    return entries, frozenset(sensitive)


def build_alias_dictionary(entities: Sequence[Entity],
                           case_policy: str = CASE_INSENSITIVE) -> AliasDictionary:
    if not entities:
        raise ValueError("build_alias_dictionary: entities must be non-empty")
    rows = []
    for entity in sorted(entities, key=lambda e: e.uri):
        for alias in sorted(entity.aliases):
            rows.append((alias, entity.uri, False))
    entries, sensitive = _build_entries(rows, case_policy)
    return AliasDictionary(entries, case_policy, sensitive)


def load_dictionary_file(path, case_policy: str = CASE_INSENSITIVE) -> AliasDictionary:
    """Two-column table alias<TAB>uri; optional third column `case=sensitive`."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise KBError("%s, line %d: expected alias<TAB>uri" % (path, lineno))
            flag = len(parts) == 3 and parts[2].strip() == "case=sensitive"
            rows.append((parts[0], parts[1].strip(), flag))
    if not rows:
        raise KBError("%s: empty dictionary" % path)
    entries, sensitive = _build_entries(rows, case_policy)
    return AliasDictionary(entries, case_policy, sensitive)


def validate_common_words(dictionary: AliasDictionary,
                          lexicon: Iterable[str]) -> list[str]:
    """One warning per alias whose case-folded form is a common word."""
    folded_lexicon = {fold_text(w) for w in lexicon}
    warnings = []
    for alias in sorted(dictionary.entries):
        if fold_text(alias) in folded_lexicon:
            warnings.append(
                "alias %r (-> %s) also occurs as a common word; "
                "consider case-sensitive matching for it"
                % (alias, dictionary.entries[alias])
            )
    return warnings


def load_lexicon(path) -> frozenset[str]:
    """Common-word lexicon: one word per line, UTF-8."""
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip() for line in f if line.strip())


class KnowledgeBase:
    """Immutable entity store with member and government indexes."""

    def __init__(self, entities: Sequence[Entity], members: Sequence[Member] = ()):
        self.entities: dict[str, Entity] = {}
        for e in entities:
            if e.uri in self.entities:
                raise KBError("duplicate entity uri %r" % e.uri)
            self.entities[e.uri] = e
        self.members: dict[str, Member] = {m.entity.uri: m for m in members}
        self._by_surname: dict[str, list[str]] = defaultdict(list)
        self._by_fullname: dict[str, list[str]] = defaultdict(list)
        for uri in sorted(self.members):
            m = self.members[uri]
            self._by_surname[fold_text(m.surname)].append(uri)
            self._by_fullname[fold_text(m.entity.canonical_name)].append(uri)

    def entity_kind(self, uri: str) -> str | None:
        e = self.entities.get(uri)
        return e.kind if e else None

    def query_member_index(self, name: str, date: datetime.date,
                           house: str) -> list[str]:
        """Members whose surname or full name matches, sitting in `house` on `date`."""
        key = fold_text(name)
        candidates = set(self._by_surname.get(key, ())) | set(
            self._by_fullname.get(key, ())
        )
        hits = []
        house_f = fold_text(house)
        for uri in candidates:
            member = self.members[uri]
            for ms in member.memberships:
                if fold_text(ms.house) == house_f and ms.contains(date):
                    hits.append(uri)
                    break
        return sorted(hits)

    def query_government_index(self, role: str, portfolio: str,
                               date: datetime.date) -> list[str]:
        """Members holding a position with this role and portfolio on `date`."""
        portfolio_f = fold_text(portfolio)
        hits = []
        for uri in sorted(self.members):
            for pos in self.members[uri].positions:
                if (
                    pos.role == role
                    and pos.portfolio is not None
                    and fold_text(pos.portfolio) == portfolio_f
                    and pos.contains(date)
                ):
                    hits.append(uri)
                    break
        return sorted(hits)


def validate_speaker_roles(debates, kb: "KnowledgeBase") -> list[str]:
    """Check that government-marked speakers actually hold a position.

    A speaker ref with role minister/secretary must belong to a member with
    a matching position covering the debate date. Returns one message per
    violation; loading itself never fails on these.
    """
    problems = []
    seen = set()
    for debate in debates:
        for scene in debate.scenes:
            for unit in scene.speech_units:
                ref = unit.speaker
                if ref.role not in ("minister", "secretary"):
                    continue
                key = (debate.id, ref.uri, ref.role)
                if key in seen:
                    continue
                seen.add(key)
                member = kb.members.get(ref.uri)
                held = member is not None and any(
                    pos.role == ref.role and pos.contains(debate.date)
                    for pos in member.positions
                )
                if not held:
                    problems.append(
                        "debate %s: speaker %s is marked %s but holds no such "
                        "position on %s" % (debate.id, ref.uri, ref.role, debate.date)
                    )
    return problems


def _parse_kb_date(value, uri):
    if value is None:
        return None
    try:
        return datetime.date.fromisoformat(value)
    except (TypeError, ValueError):
        raise KBError("entity %r: bad date %r" % (uri, value)) from None


def _check_memberships(uri: str, memberships: Sequence[Membership]) -> None:
    by_house = defaultdict(list)
    for ms in memberships:
        if ms.end is not None and ms.end < ms.start:
            raise KBError("entity %r: membership interval ends before it starts" % uri)
        by_house[ms.house].append(ms)
    for house, intervals in by_house.items():
        intervals.sort(key=lambda ms: ms.start)
        for a, b in zip(intervals, intervals[1:]):
            if a.end is None or b.start <= a.end:
                raise KBError(
                    "entity %r: overlapping %s memberships" % (uri, house)
                )


def load_kb(path) -> KnowledgeBase:
    """One JSON record per line; person records may carry memberships/positions."""
    entities = []
    members = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise KBError("%s, line %d: %s" % (path, lineno, e.msg)) from None
            uri = rec.get("uri", "")
            entity = make_entity(
                uri,
                rec.get("kind", "other"),
                rec.get("canonical_name", ""),
                rec.get("aliases", ()),
                rec.get("wikipedia_uri"),
            )
            entities.append(entity)
            if "surname" not in rec and "memberships" not in rec:
                continue
            memberships = tuple(
                Membership(
                    ms["house"],
                    _parse_kb_date(ms.get("start"), uri),
                    _parse_kb_date(ms.get("end"), uri),
                )
                for ms in rec.get("memberships", ())
            )
            _check_memberships(uri, memberships)
            positions = []
            for pos in rec.get("positions", ()):
                role = pos.get("role")
                if role not in POSITION_ROLES:
                    raise KBError("entity %r: unknown position role %r" % (uri, role))
                start = _parse_kb_date(pos.get("start"), uri)
                end = _parse_kb_date(pos.get("end"), uri)
                if end is not None and end < start:
                    raise KBError("entity %r: position interval ends before it starts" % uri)
                positions.append(GovPosition(role, pos.get("portfolio"), start, end))
            members.append(
                Member(entity, rec.get("surname", entity.canonical_name),
                       memberships, tuple(positions))
            )
    return KnowledgeBase(entities, members)
