import random

from hypothesis import given, settings
from hypothesis import strategies as st

from debatelink.automaton import brute_force_matches, build_automaton, find_matches
from debatelink.corpus import Scene, SpeakerRef, SpeechUnit
from debatelink.dict_linker import (
    leftmost_longest,
    link_dictionary,
    select_matches,
    token_boundary_ok,
)
from debatelink.kb import AliasDictionary


def scene_of(text, scene_id="s1"):
    return Scene(scene_id, (SpeechUnit("u1", SpeakerRef("spk:1", "Spreker"), text),))


def linked(dictionary, text):
    automaton = build_automaton(dictionary)
    return link_dictionary(automaton, dictionary, scene_of(text), "d1")


def oracle_select(dictionary, text):
    """Exhaustive reference: boundary-filter, then repeated leftmost-longest pick."""
    pool = [
        m for m in brute_force_matches(dictionary, text)
        if token_boundary_ok(text, m.start, m.end)
    ]
    picked = []
    while pool:
        best = min(pool, key=lambda m: (m.start, -m.end, m.alias))
        picked.append(best)
        pool = [m for m in pool if m.end <= best.start or m.start >= best.end]
    return picked


class TestTokenBoundary:
    def test_hyphen_passes(self):
        d = AliasDictionary({"PvdA": "p1"})
        [a] = linked(d, "de PvdA-fractie")
        assert (a.start, a.end, a.uri) == (3, 7, "p1")

    def test_embedded_in_token_rejected(self):
        d = AliasDictionary({"PvdA": "p1"})
        assert linked(d, "OPvdAX") == []

    def test_start_and_end_of_text_are_boundaries(self):
        d = AliasDictionary({"VVD": "p1"})
        assert len(linked(d, "VVD")) == 1

    def test_digit_is_token_interior(self):
        d = AliasDictionary({"VVD": "p1"})
        assert linked(d, "VVD2 is geen partij") == []


class TestLeftmostLongest:
    def test_embedded_alias_suppressed(self):
        d = AliasDictionary({"Partij van de Arbeid": "p1", "Arbeid": "p2"})
        annotations = linked(d, "Partij van de Arbeid stemde voor")
        assert [(a.start, a.end, a.uri) for a in annotations] == [(0, 20, "p1")]

    def test_equal_start_longest_wins(self):
        d = AliasDictionary({"ab": "u1", "abc": "u2"})
        [a] = linked(d, "abc")
        assert a.uri == "u2"

    def test_non_overlapping_all_kept(self):
        d = AliasDictionary({"PvdA": "p1", "VVD": "p2"})
        annotations = linked(d, "De PvdA en de VVD")
        assert [a.uri for a in annotations] == ["p1", "p2"]

    def test_annotation_fields(self):
        d = AliasDictionary({"VVD": "p1"})
        [a] = linked(d, "De VVD.")
        assert a.surface == "VVD"
        assert a.system_id == "dict"
        assert a.confidence == 1.0
        assert a.scene_id == "s1"
        assert a.debate_id == "d1"

    def test_case_insensitive_links_with_original_surface(self):
        d = AliasDictionary({"PvdA": "p1"})
        [a] = linked(d, "De PVDA stemt voor")
        assert a.surface == "PVDA"
        assert a.uri == "p1"


def random_dictionary(rng):
    n = rng.randrange(1, 8)
    aliases = {
        "".join(rng.choice("abcAB") for _ in range(rng.randrange(1, 5)))
        for _ in range(n)
    }
    return AliasDictionary({a: "uri:%d" % i for i, a in enumerate(sorted(aliases))})


class TestAgainstSelectionOracle:
    def test_spec_examples(self):
        cases = [
            ({"Partij van de Arbeid": "p1", "Arbeid": "p2"},
             "Partij van de Arbeid stemde voor"),
            ({"PvdA": "p1"}, "de PvdA-fractie"),
            ({"PvdA": "p1"}, "OPvdAX"),
        ]
        for entries, text in cases:
            d = AliasDictionary(entries)
            got = select_matches(find_matches(build_automaton(d), text), text)
            assert got == oracle_select(d, text)

    def test_randomized_against_oracle(self):
        rng = random.Random(17)
        for _ in range(200):
            d = random_dictionary(rng)
            text = "".join(rng.choice("abcAB -.") for _ in range(rng.randrange(0, 60)))
            got = select_matches(find_matches(build_automaton(d), text), text)
            assert got == oracle_select(d, text)

    def test_maximality_no_discarded_match_fits_back(self):
        rng = random.Random(23)
        for _ in range(100):
            d = random_dictionary(rng)
            text = "".join(rng.choice("abcAB ") for _ in range(rng.randrange(0, 50)))
            surviving = [
                m for m in brute_force_matches(d, text)
                if token_boundary_ok(text, m.start, m.end)
            ]
            picked = select_matches(find_matches(build_automaton(d), text), text)
            picked_set = set(picked)
            for m in surviving:
                if m in picked_set:
                    continue
                overlaps = any(
                    m.start < p.end and p.start < m.end for p in picked
                )
                assert overlaps, "discarded %r could be added without overlap" % (m,)


class TestProperties:
    @given(st.text(alphabet="abcAB .-", max_size=80))
    @settings(max_examples=150, deadline=None)
    def test_output_sorted_nonoverlapping_on_boundaries(self, text):
        d = AliasDictionary({"ab": "u1", "abc": "u2", "ca": "u3", "b": "u4"})
        annotations = linked(d, text)
        for a, b in zip(annotations, annotations[1:]):
            assert a.end <= b.start
        for a in annotations:
            assert token_boundary_ok(text, a.start, a.end)
            assert text[a.start : a.end] == a.surface

    @given(st.text(alphabet="abcAB .-", max_size=80))
    @settings(max_examples=150, deadline=None)
    def test_case_policy_invariance(self, text):
        d = AliasDictionary({"ab": "u1", "abc": "u2", "b": "u4"})
        plain = linked(d, text)
        upper = linked(d, text.upper())
        assert [(a.start, a.end, a.uri) for a in plain] == [
            (a.start, a.end, a.uri) for a in upper
        ]

    def test_leftmost_longest_pure_function(self):
        matches = []
        assert leftmost_longest(matches) == []
