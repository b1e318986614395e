"""Hand-constructed scenes for the role linker, with hand-derived expectations.

Every fixture states the full expected output: which detected surfaces get
which URI and which stay unresolved (None). The walkthroughs in the
comments are the derivation; the rule-interpreter oracle in the test module
re-derives the same answers from the documented rules independently.
"""

import datetime

from debatelink.corpus import Scene, SpeakerRef, SpeechUnit, SpeakersList

D = datetime.date.fromisoformat

JANSEN1 = SpeakerRef("pm:per:jansen1", "A. Jansen")
JANSEN2 = SpeakerRef("pm:per:jansen2", "B. Jansen")
PIETERSEN = SpeakerRef("pm:per:pietersen", "K. Pietersen")
DEVRIES_MIN = SpeakerRef("pm:per:devries", "W. de Vries", role="minister",
                         portfolio="Financiën")
VERMEER_MIN = SpeakerRef("pm:per:tweede", "E. Vermeer", role="minister",
                         portfolio="Onderwijs")
BAKKER = SpeakerRef("pm:per:bakker", "J. Bakker")


def scene(scene_id, *units):
    speech_units = tuple(
        SpeechUnit("%s-u%d" % (scene_id, i), speaker, text)
        for i, (speaker, text) in enumerate(units)
    )
    return Scene(scene_id, speech_units)


class RoleCase:
    def __init__(self, name, scene, speakers, expected, date="2010-03-15",
                 house="commons"):
        self.name = name
        self.scene = scene
        self.speakers = SpeakersList(tuple(speakers))
        self.expected = expected  # [(surface, uri-or-None)] in mention order
        self.date = D(date)
        self.house = house


ROLE_CASES = [
    # "Jansen" is a unique surname among the speakers: speaker-list link.
    RoleCase(
        "speaker_present_unique",
        scene("r01", (PIETERSEN, "Ik dank mevrouw Jansen voor haar inbreng.")),
        [PIETERSEN, JANSEN1],
        [("mevrouw Jansen", "pm:per:jansen1")],
    ),
    # Bakker does not speak; the member index has exactly one Bakker
    # sitting in the commons on the debate date.
    RoleCase(
        "nonspeaker_index_unique",
        scene("r02", (PIETERSEN, "De heer Bakker is vandaag afwezig.")),
        [PIETERSEN],
        [("De heer Bakker", "pm:per:bakker")],
    ),
    # Two Jansens sit in 2010 and neither speaks: the index is ambiguous,
    # so the linker abstains.
    RoleCase(
        "index_ambiguous_abstain",
        scene("r03", (PIETERSEN, "Mevrouw Jansen is vandaag afwezig.")),
        [PIETERSEN],
        [("Mevrouw Jansen", None)],
    ),
    # Government index: unique office holder for (minister, Financiën, 2010).
    RoleCase(
        "portfolio_unique",
        scene("r04", (PIETERSEN, "De minister van Financiën antwoordt straks.")),
        [PIETERSEN],
        [("minister van Financiën", "pm:per:devries")],
    ),
    # Same mention before the tenure started: nobody holds the office.
    RoleCase(
        "portfolio_no_holder_yet",
        scene("r05", (PIETERSEN, "De minister van Financiën antwoordt straks.")),
        [PIETERSEN],
        [("minister van Financiën", None)],
        date="2008-06-01",
    ),
    # Two ministers hold the same portfolio on the date: not unique, abstain.
    RoleCase(
        "portfolio_ambiguous",
        scene("r06", (PIETERSEN, "De minister van Landbouw is aanwezig.")),
        [PIETERSEN],
        [("minister van Landbouw", None)],
    ),
    # Bare role with exactly one minister among the speakers.
    RoleCase(
        "role_only_single_candidate",
        scene("r07", (PIETERSEN, "De minister antwoordde direct.")),
        [PIETERSEN, DEVRIES_MIN],
        [("minister", "pm:per:devries")],
    ),
    # Two ministers speak; Vermeer was mentioned by name earlier in the
    # scene, so the bare role resolves to the last-mentioned minister.
    RoleCase(
        "role_only_last_mentioned_by_name",
        scene(
            "r08",
            (PIETERSEN,
             "Ik dank minister Vermeer voor de brief. De minister was duidelijk."),
        ),
        [PIETERSEN, DEVRIES_MIN, VERMEER_MIN],
        [("minister Vermeer", "pm:per:tweede"), ("minister", "pm:per:tweede")],
    ),
    # Two ministers speak and neither was mentioned before the bare role.
    RoleCase(
        "role_only_two_candidates_no_prior",
        scene("r09", (PIETERSEN, "De minister antwoordde niet.")),
        [PIETERSEN, DEVRIES_MIN, VERMEER_MIN],
        [("minister", None)],
    ),
    # A speech turn counts as a mention of its speaker: de Vries spoke in
    # the first unit, so the bare role in the second resolves to him.
    RoleCase(
        "role_only_prior_speech_turn",
        scene(
            "r10",
            (DEVRIES_MIN, "Dit wetsvoorstel ligt nu voor."),
            (PIETERSEN, "De minister antwoordde mijn vraag niet."),
        ),
        [DEVRIES_MIN, PIETERSEN, VERMEER_MIN],
        [("minister", "pm:per:devries")],
    ),
    # No candidate speaker carries the role at all.
    RoleCase(
        "role_only_no_candidates",
        scene("r11", (PIETERSEN, "De minister antwoordde niet.")),
        [PIETERSEN, JANSEN1],
        [("minister", None)],
    ),
    # Both Jansens speak: the speakers list matches twice, the fallback
    # index query also returns two, so the linker abstains.
    RoleCase(
        "honorific_two_speaker_matches",
        scene("r12", (PIETERSEN, "Mevrouw Jansen krijgt nu het woord.")),
        [PIETERSEN, JANSEN1, JANSEN2],
        [("Mevrouw Jansen", None)],
    ),
    # Verburg left parliament in 2002: a date-bounded query finds nothing.
    RoleCase(
        "ex_member_abstains",
        scene("r13", (PIETERSEN, "De heer Verburg schreef hier ooit over.")),
        [PIETERSEN],
        [("De heer Verburg", None)],
    ),
    # Willems sits in the senate, the debate is in the commons.
    RoleCase(
        "wrong_house_abstains",
        scene("r14", (PIETERSEN, "Mevrouw Willems sprak hier gisteren over.")),
        [PIETERSEN],
        [("Mevrouw Willems", None)],
    ),
    # Secretary with portfolio resolves through the government index.
    RoleCase(
        "secretary_portfolio",
        scene("r15", (PIETERSEN, "De staatssecretaris van Defensie komt morgen.")),
        [PIETERSEN],
        [("staatssecretaris van Defensie", "pm:per:bakker")],
    ),
    # Nothing to detect.
    RoleCase(
        "no_mentions",
        scene("r16", (PIETERSEN, "Wij gaan verder met de agenda van vandaag.")),
        [PIETERSEN],
        [],
    ),
    # The only mention is the current speaker's own name.
    RoleCase(
        "current_speaker_by_name",
        scene("r17", (BAKKER, "Zoals collega Bakker al zei, is dit geregeld.")),
        [BAKKER],
        [("collega Bakker", "pm:per:bakker")],
    ),
]
