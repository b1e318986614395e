"""Synthetic corpus/KB/gold generator for reproducible desk-scale experiments.

Builds a corpus in which the true link for every mention is known by
construction: party mentions the dictionary linker can catch, person
mentions by honorific or role, and miscellaneous entities only a
generalist knows about. The generator returns everything needed to run
linkers, pool, combine and evaluate without human annotation.
"""

from __future__ import annotations

import datetime
import random
from dataclasses import dataclass, field

from .benchmark import (
    ROUND_CONSENSUS,
    VERDICT_DNA,
    VERDICT_LINK,
    VERDICT_NIL,
    GoldDecision,
)
from .corpus import Debate, Scene, SpeakerRef, SpeechUnit
from .kb import GovPosition, KnowledgeBase, Member, Membership, make_entity
from .pipeline import MockRule, PooledPhrase
from .role_linker import PatternConfig, RoleWord

HOUSE = "commons"

PARTY_NAMES = [
    ("syn:party:%02d" % i, name, acronym)
    for i, (name, acronym) in enumerate(
        [
            ("Vooruitgangspartij", "VGP"),
            ("Nationale Volksbeweging", "NVB"),
            ("Liberale Alliantie", "LBA"),
            ("Groene Toekomst", "GTK"),
            ("Sociale Eenheid", "SEH"),
            ("Christelijk Verbond", "CVB"),
            ("Vrije Democraten", "VRD"),
            ("Platteland Nu", "PLN"),
        ]
    )
]

SURNAMES = [
    "Aalbers", "Breugel", "Cornelissen", "Dijkgraaf", "Eikenboom",
    "Fortuin", "Groothuis", "Hazelaar", "IJsselstein", "Jonkman",
    "Katsman", "Lindeboom", "Meerman", "Nieuwenhuis", "Oosterbaan",
    "Plasman", "Quist", "Roodenburg", "Slotboom", "Tielemans",
]

PORTFOLIOS = ["Financiën", "Defensie", "Onderwijs", "Landbouw", "Justitie"]

MISC_ENTITIES = [
    ("syn:misc:%02d" % i, name, kind)
    for i, (name, kind) in enumerate(
        [
            ("Europese Unie", "organization"),
            ("Verenigde Naties", "organization"),
            ("Hoge Raad", "organization"),
            ("Rekenkamer", "organization"),
            ("Centraal Planbureau", "organization"),
            ("Noordzeekanaal", "other"),
            ("Waddenzee", "other"),
            ("Deltawerken", "other"),
        ]
    )
]

PATTERN_CONFIG = PatternConfig(
    honorifics=("de heer", "mevrouw", "collega", "minister", "staatssecretaris"),
    roles=(RoleWord("minister", "minister"), RoleWord("staatssecretaris", "secretary")),
    portfolio_connectors=("van", "voor"),
    name_particles=("van", "de", "der", "den", "ter", "te"),
    max_name_tokens=4,
    portfolios=tuple(PORTFOLIOS),
)


@dataclass
class TrueMention:
    debate_id: str
    scene_id: str
    start: int
    end: int
    surface: str
    uri: str | None  # None: should not be linked (nil or do-not-annotate)
    kind: str
    verdict: str = VERDICT_LINK


@dataclass
class SyntheticBenchmark:
    debates: list[Debate]
    kb: KnowledgeBase
    dictionary_entries: dict[str, str]
    mentions: list[TrueMention] = field(default_factory=list)
    mock_rules: list[MockRule] = field(default_factory=list)
    pattern_config: PatternConfig = PATTERN_CONFIG

    def entity_kinds(self) -> dict[str, str]:
        return {uri: e.kind for uri, e in self.kb.entities.items()}

    def gold_for(self, phrases: list[PooledPhrase],
                 annotator_id: str = "synthetic") -> list[GoldDecision]:
        """Consensus decisions derived from the generator's ground truth.

        A pooled phrase gets the verdict of the true mention its span
        overlaps; phrases that only exist because a system hallucinated a
        span fall back to do_not_annotate.
        """
        truth = self.mentions
        decisions = []
        for phrase in phrases:
            verdict, uris = VERDICT_DNA, frozenset()
            for m in truth:
                if m.debate_id != phrase.debate_id or m.scene_id != phrase.scene_id:
                    continue
                if min(m.end, phrase.end) - max(m.start, phrase.start) > 0:
                    verdict = m.verdict
                    uris = frozenset({m.uri}) if m.uri is not None else frozenset()
                    break
            decisions.append(
                GoldDecision(phrase.phrase_id, verdict, uris, annotator_id,
                             ROUND_CONSENSUS)
            )
        return decisions


class _SceneWriter:
    """Accumulates sentence fragments while tracking true mention spans."""

    def __init__(self, debate_id: str, scene_id: str):
        self.debate_id = debate_id
        self.scene_id = scene_id
        self.parts: list[str] = []
        self.pos = 0
        self.mentions: list[TrueMention] = []

    def plain(self, text: str) -> None:
        self.parts.append(text)
        self.pos += len(text)

    def mention(self, surface: str, uri: str | None, kind: str,
                verdict: str = VERDICT_LINK) -> None:
        start = self.pos
        self.plain(surface)
        self.mentions.append(
            TrueMention(self.debate_id, self.scene_id, start, self.pos,
                        surface, uri, kind, verdict)
        )

    def text(self) -> str:
        return "".join(self.parts)


def build_benchmark(seed: int = 7, n_debates: int = 12) -> SyntheticBenchmark:
    rng = random.Random(seed)

    entities = [
        make_entity(uri, "party", name, {name, acronym})
        for uri, name, acronym in PARTY_NAMES
    ]
    entities += [
        make_entity(uri, kind, name) for uri, name, kind in MISC_ENTITIES
    ]
    members = []
    person_entities = []
    for i, surname in enumerate(SURNAMES):
        uri = "syn:per:%02d" % i
        canonical = "%s. %s" % ("ABCDEFGHIJKLMNOPQRST"[i], surname)
        entity = make_entity(uri, "person", canonical)
        person_entities.append(entity)
        positions = ()
        if i < len(PORTFOLIOS):
            positions = (
                GovPosition("minister", PORTFOLIOS[i], datetime.date(2008, 1, 1)),
            )
        members.append(
            Member(
                entity,
                surname,
                (Membership(HOUSE, datetime.date(2006, 1, 1)),),
                positions,
            )
        )
    entities += person_entities
    kb = KnowledgeBase(entities, members)

    dictionary_entries = {}
    for uri, name, acronym in PARTY_NAMES:
        dictionary_entries[name] = uri
        dictionary_entries[acronym] = uri

    # the generalist knows parties and misc entities well, persons poorly
    mock_rules = [
        MockRule(name, uri, confidence=0.7, kind="party")
        for uri, name, _ in PARTY_NAMES
    ]
    mock_rules += [
        MockRule(name, uri, confidence=0.8, kind=kind)
        for uri, name, kind in MISC_ENTITIES
    ]
    mock_rules += [
        MockRule(m.surname, m.entity.uri, confidence=0.4, kind="person")
        for m in members
    ]
    # two phrases the gold standard rejects: one entity missing from every
    # KB, one metaphorical phrase; the generalist links both anyway
    mock_rules.append(MockRule("Institut Montaigne", "syn:misc:external", 0.5, "other"))
    mock_rules.append(MockRule("Haagse kaasstolp", "syn:misc:metaphor", 0.5, "other"))

    bench = SyntheticBenchmark([], kb, dictionary_entries, [], mock_rules)

    date = datetime.date(2011, 5, 10)
    for d in range(n_debates):
        debate_id = "syn-d%02d" % d
        minister_idx = d % len(PORTFOLIOS)
        minister = members[minister_idx]
        others = [m for i, m in enumerate(members) if i != minister_idx]
        rng.shuffle(others)
        scenes = []
        for s in range(2):
            scene_id = "%s-s%d" % (debate_id, s)
            speaker = others[s]
            w = _SceneWriter(debate_id, scene_id)

            party_uri, party_name, party_acronym = PARTY_NAMES[
                rng.randrange(len(PARTY_NAMES))
            ]
            w.plain("Voorzitter. De fractie van de ")
            w.mention(party_name, party_uri, "party")
            w.plain(" heeft hier lang over nagedacht. ")

            other_party = PARTY_NAMES[rng.randrange(len(PARTY_NAMES))]
            w.plain("Ook de ")
            w.mention(other_party[2], other_party[0], "party")
            w.plain(" sprak zich uit. ")

            colleague = others[s + 1]
            w.plain("Ik dank mevrouw ")
            w.mention(colleague.surname, colleague.entity.uri, "person")
            w.plain(" voor haar inbreng. ")

            w.plain("De minister van ")
            portfolio = PORTFOLIOS[minister_idx]
            start_before = w.pos - len("minister van ")
            w.plain(portfolio)
            bench.mentions.append(
                TrueMention(debate_id, scene_id, start_before, w.pos,
                            "minister van " + portfolio,
                            minister.entity.uri, "person")
            )
            w.plain(" gaf gisteren antwoord. ")

            misc = MISC_ENTITIES[rng.randrange(len(MISC_ENTITIES))]
            w.plain("Het standpunt van de ")
            w.mention(misc[1], misc[0], misc[2])
            w.plain(" weegt mee. ")

            if s == 0 and d % 3 == 0:
                w.plain("Een rapport van het ")
                w.mention("Institut Montaigne", None, "other", VERDICT_NIL)
                w.plain(" kwam ter sprake. ")
            if s == 1 and d % 4 == 0:
                w.plain("Buiten de ")
                w.mention("Haagse kaasstolp", None, "other", VERDICT_DNA)
                w.plain(" denkt men daar anders over. ")

            units = (
                SpeechUnit(
                    "%s-u0" % scene_id,
                    SpeakerRef(speaker.entity.uri, speaker.entity.canonical_name),
                    w.text(),
                ),
                SpeechUnit(
                    "%s-u1" % scene_id,
                    SpeakerRef(
                        minister.entity.uri,
                        minister.entity.canonical_name,
                        role="minister",
                        portfolio=PORTFOLIOS[minister_idx],
                    ),
                    "Dank voor de vraag.",
                ),
            )
            scenes.append(Scene(scene_id, units))
            bench.mentions.extend(w.mentions)
        bench.debates.append(Debate(debate_id, date, HOUSE, tuple(scenes)))
    return bench
