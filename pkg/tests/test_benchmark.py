import datetime
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debatelink.annotations import Annotation
from debatelink.benchmark import (
    EvalError,
    GoldDecision,
    GoldError,
    ROUND_CONSENSUS,
    ROUND_INDEPENDENT,
    SampleError,
    SamplePlan,
    VERDICT_DNA,
    VERDICT_LINK,
    VERDICT_NIL,
    draw_sample,
    evaluate,
    linked_phrase_ids,
    normalize_uri,
    preselect_candidates,
    proportional_quotas,
    recall_gain_bound,
    sample_entry_from_record,
    sample_entry_record,
    sample_stats,
    stratified_sample,
)
from debatelink.corpus import (
    Debate,
    DepartmentLabel,
    PortfolioMap,
    Scene,
    SpeakerRef,
    SpeechUnit,
)
from debatelink.pipeline import PooledPhrase
from debatelink.benchmark import SampleEntry

from metric_fixtures import ENTITY_KINDS, EXPECTED, build_metric_fixture

# reference sample composition: (department, scenes, phrases, person links, org links)
REFERENCE_SAMPLE = [
    ("Economic Affairs", 4, 97, 29, 10),
    ("Security and Justice", 4, 90, 31, 7),
    ("Infrastructure and the Environ.", 4, 79, 41, 14),
    ("Without department", 4, 72, 33, 16),
    ("Social Affairs and Employment", 4, 61, 32, 10),
    ("Interior and Kingdom Relations", 4, 57, 17, 11),
    ("Finance", 4, 53, 30, 1),
    ("Foreign Affairs", 3, 51, 7, 5),
    ("Education, Culture and Science", 2, 43, 16, 7),
    ("Health, Welfare and Sport", 4, 32, 19, 1),
    ("General Affairs", 3, 32, 11, 5),
    ("Defense", 3, 15, 5, 4),
]


def make_debate(debate_id, n_scenes=3, minister_portfolio=None):
    speaker = SpeakerRef("spk:%s" % debate_id, "Spreker")
    scenes = []
    for i in range(n_scenes):
        units = [SpeechUnit("%s-s%d-u0" % (debate_id, i), speaker, "tekst")]
        if minister_portfolio is not None:
            units.append(
                SpeechUnit(
                    "%s-s%d-u1" % (debate_id, i),
                    SpeakerRef("min:%s" % minister_portfolio, "Minister",
                               role="minister", portfolio=minister_portfolio),
                    "antwoord",
                )
            )
        scenes.append(Scene("%s-s%d" % (debate_id, i), tuple(units)))
    return Debate(debate_id, datetime.date(2010, 1, 1), "commons", tuple(scenes))


class TestQuotas:
    def test_ten_five_limit_three(self):
        a, b = DepartmentLabel("A"), DepartmentLabel("B")
        assert proportional_quotas({a: 10, b: 5}, 3) == {a: 2, b: 1}

    def test_zero_limit(self):
        a = DepartmentLabel("A")
        assert proportional_quotas({a: 10}, 0) == {a: 0}

    def test_largest_remainder_distribution(self):
        a, b, c = (DepartmentLabel(x) for x in "ABC")
        # exact shares 7*5/15, 5*5/15, 3*5/15 = 2.33, 1.67, 1.0
        assert proportional_quotas({a: 7, b: 5, c: 3}, 5) == {a: 2, b: 2, c: 1}

    @given(
        st.dictionaries(
            st.sampled_from([DepartmentLabel(n) for n in "ABCDEF"]),
            st.integers(0, 40), min_size=1, max_size=6,
        ),
        st.integers(0, 60),
    )
    @settings(max_examples=200, deadline=None)
    def test_quotas_sum_to_limit(self, counts, limit):
        quotas = proportional_quotas(counts, limit)
        if sum(counts.values()) == 0:
            assert sum(quotas.values()) == 0
        else:
            assert sum(quotas.values()) == limit
        assert all(q >= 0 for q in quotas.values())


class TestStratifiedSample:
    def portfolio_map(self):
        return PortfolioMap({"financiën": "Finance", "defensie": "Defense"})

    def corpus(self):
        debates = [make_debate("fin-%d" % i, minister_portfolio="Financiën")
                   for i in range(10)]
        debates += [make_debate("def-%d" % i, minister_portfolio="Defensie")
                    for i in range(5)]
        return debates

    def test_zero_limit_empty_sample(self):
        assert stratified_sample(self.corpus(), self.portfolio_map(), 0, 1) == []

    def test_quota_split_two_departments(self):
        entries = stratified_sample(self.corpus(), self.portfolio_map(), 3, 1)
        by_dept = Counter(e.department.name for e in entries)
        assert by_dept == {"Finance": 2, "Defense": 1}

    def test_seed_determinism_byte_identical(self):
        runs = []
        for _ in range(2):
            entries = stratified_sample(self.corpus(), self.portfolio_map(), 6, 42)
            runs.append(
                b"".join(
                    repr(sample_entry_record(e)).encode() for e in entries
                )
            )
        assert runs[0] == runs[1]

    def test_different_seeds_differ(self):
        a = stratified_sample(self.corpus(), self.portfolio_map(), 6, 1)
        b = stratified_sample(self.corpus(), self.portfolio_map(), 6, 2)
        assert a != b  # astronomically unlikely to collide

    def test_debate_drawn_once(self):
        entries = stratified_sample(self.corpus(), self.portfolio_map(), 12, 7)
        ids = [e.debate_id for e in entries]
        assert len(ids) == len(set(ids))

    def test_reference_sample_geometry(self):
        pmap_rows = {}
        debates = []
        for i, (name, scenes, *_rest) in enumerate(REFERENCE_SAMPLE):
            count = scenes  # debate count per department equals its quota
            for j in range(count):
                if name == "Without department":
                    debates.append(make_debate("t%02d-d%d" % (i, j)))
                else:
                    portfolio = "portfolio%02d" % i
                    pmap_rows[portfolio] = name
                    debates.append(
                        make_debate("t%02d-d%d" % (i, j), minister_portfolio=portfolio)
                    )
        pmap = PortfolioMap(pmap_rows)
        entries = stratified_sample(debates, pmap, 43, 2024)
        assert len(entries) == 43
        by_dept = Counter(e.department.name for e in entries)
        for name, scenes, *_rest in REFERENCE_SAMPLE:
            assert by_dept[name] == scenes

    def test_quota_without_debates_is_error(self):
        ghost = DepartmentLabel("Ghost")
        plan = SamplePlan(((ghost, 2),), 2, 1)
        with pytest.raises(SampleError, match="Ghost"):
            draw_sample({}, plan)

    def test_sample_record_round_trip(self):
        entry = SampleEntry(DepartmentLabel("Without department", True), "d1", "s1")
        assert sample_entry_from_record(sample_entry_record(entry)) == entry


class TestNormalizeUri:
    def test_examples(self):
        assert normalize_uri("HTTP://Example.org/A/") == "http://example.org/A"
        assert (
            normalize_uri("https://nl.wikipedia.org/wiki/Jan%20Pietersen")
            == "https://nl.wikipedia.org/wiki/Jan_Pietersen"
        )
        assert (
            normalize_uri("https://nl.wikipedia.org/wiki/Partij van de Arbeid")
            == "https://nl.wikipedia.org/wiki/Partij_van_de_Arbeid"
        )
        assert normalize_uri("pm:per:jansen1") == "pm:per:jansen1"
        assert normalize_uri("  pm:per:x ") == "pm:per:x"

    @given(st.text(max_size=60))
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, s):
        assert normalize_uri(normalize_uri(s)) == normalize_uri(s)

    def test_idempotent_on_url_shapes(self):
        urls = [
            "https://nl.wikipedia.org/wiki/Jan%2520Pietersen",
            "http://EXAMPLE.com/x%2Fy/",
            "https://nl.wikipedia.org/wiki/A B%20C",
            "http://example.com/path/?q=X%20Y#frag",
        ]
        for u in urls:
            assert normalize_uri(normalize_uri(u)) == normalize_uri(u)


def ann(i, uri, system="sys", scene="s1", debate="d1"):
    return Annotation(debate, scene, 10 * i, 10 * i + 4, "srfc", uri, system, 0.9)


class TestEvaluate:
    def test_twenty_phrase_fixture_exact(self):
        phrases, gold, system = build_metric_fixture()
        report = evaluate(system, gold, phrases, ENTITY_KINDS)
        assert (report.tp, report.fp, report.fn) == (
            EXPECTED["tp"], EXPECTED["fp"], EXPECTED["fn"]
        )
        assert abs(report.precision - EXPECTED["precision"]) < 1e-12
        assert abs(report.recall - EXPECTED["recall"]) < 1e-12
        assert abs(report.f1 - EXPECTED["f1"]) < 1e-12
        for kind, want in EXPECTED["slices"].items():
            got = report.slices[kind]
            assert (got.tp, got.fp, got.fn) == (want["tp"], want["fp"], want["fn"])
        assert report.n_phrases == 20
        assert report.n_linkable == 12
        assert report.n_nil == 4
        assert report.n_do_not_annotate == 4

    def test_hand_count_three_correct_one_wrong(self):
        phrases = [
            PooledPhrase("p%d" % i, "d1", "s1", 10 * i, 10 * i + 4, "srfc",
                         (ann(i, None, "seeder"),))
            for i in range(4)
        ]
        gold = [
            GoldDecision("p%d" % i, VERDICT_LINK, frozenset({"u%d" % i}), "a",
                         ROUND_CONSENSUS)
            for i in range(4)
        ]
        system = [ann(0, "u0"), ann(1, "u1"), ann(2, "u2"), ann(3, "uWRONG")]
        report = evaluate(system, gold, phrases)
        assert (report.tp, report.fp, report.fn) == (3, 1, 1)
        assert report.precision == 0.75
        assert report.recall == 0.75

    def test_perfect_system(self):
        phrases, gold, _ = build_metric_fixture()
        perfect = []
        for decision, phrase in zip(gold, phrases):
            if decision.verdict == VERDICT_LINK:
                perfect.append(
                    Annotation("d1", "s1", phrase.start, phrase.end, "srfc",
                               sorted(decision.uris)[0], "sys", 1.0)
                )
        report = evaluate(perfect, gold, phrases, ENTITY_KINDS)
        assert (report.precision, report.recall, report.f1) == (1.0, 1.0, 1.0)

    def test_link_on_do_not_annotate_is_fp_without_fn(self):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 4, "srfc",
                                (ann(0, None, "seeder"),))]
        gold = [GoldDecision("p0", VERDICT_DNA, frozenset(), "a", ROUND_CONSENSUS)]
        report = evaluate([ann(0, "u1")], gold, phrases)
        assert (report.tp, report.fp, report.fn) == (0, 1, 0)

    def test_boundary_agnostic_overlap_mapping(self):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 10, "srfc",
                                (ann(0, None, "seeder"),))]
        gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"u1"}), "a",
                             ROUND_CONSENSUS)]
        # different boundaries, overlapping span: still the same phrase
        system = [Annotation("d1", "s1", 4, 22, "srfc", "u1", "sys", 1.0)]
        report = evaluate(system, gold, phrases)
        assert (report.tp, report.fp, report.fn) == (1, 0, 0)

    def test_gold_for_unknown_phrase_is_error(self):
        phrases, gold, system = build_metric_fixture()
        gold = gold + [GoldDecision("ghost", VERDICT_NIL, frozenset(), "a",
                                    ROUND_CONSENSUS)]
        with pytest.raises(EvalError, match="ghost"):
            evaluate(system, gold, phrases)

    def test_missing_consensus_is_error(self):
        phrases, gold, system = build_metric_fixture()
        with pytest.raises(EvalError, match="ph19"):
            evaluate(system, gold[:-1], phrases)

    def test_independent_round_does_not_score(self):
        phrases, gold, system = build_metric_fixture()
        extra = GoldDecision("ph00", VERDICT_NIL, frozenset(), "a2",
                             ROUND_INDEPENDENT)
        report = evaluate(system, gold + [extra], phrases, ENTITY_KINDS)
        assert report.tp == EXPECTED["tp"]

    def test_multi_uri_gold_any_match_counts(self):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 4, "srfc",
                                (ann(0, None, "seeder"),))]
        gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"u1", "u2"}), "a",
                             ROUND_CONSENSUS)]
        assert evaluate([ann(0, "u2")], gold, phrases).tp == 1

    def test_duplicate_same_uri_annotations_score_once(self):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 8, "srfc",
                                (ann(0, None, "seeder"),))]
        gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"u1"}), "a",
                             ROUND_CONSENSUS)]
        system = [
            Annotation("d1", "s1", 0, 4, "s", "u1", "sys", 1.0),
            Annotation("d1", "s1", 2, 8, "s", "u1", "sys", 1.0),
        ]
        report = evaluate(system, gold, phrases)
        assert (report.tp, report.fp, report.fn) == (1, 0, 0)

    def test_two_distinct_wrong_uris_both_fp(self):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 8, "srfc",
                                (ann(0, None, "seeder"),))]
        gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"right"}), "a",
                             ROUND_CONSENSUS)]
        system = [
            Annotation("d1", "s1", 0, 4, "s", "wrong1", "sys", 1.0),
            Annotation("d1", "s1", 2, 8, "s", "wrong2", "sys", 1.0),
        ]
        report = evaluate(system, gold, phrases)
        assert (report.tp, report.fp, report.fn) == (0, 2, 1)


# truth-table oracle for randomized comparison
def oracle_counts(system, gold, phrases):
    consensus = {d.phrase_id: d for d in gold if d.round == ROUND_CONSENSUS}
    tp = fp = fn = 0
    for phrase in phrases:
        uris = set()
        for a in system:
            if a.uri is None or a.scene_id != phrase.scene_id:
                continue
            if min(a.end, phrase.end) - max(a.start, phrase.start) > 0:
                uris.add(normalize_uri(a.uri))
        d = consensus[phrase.phrase_id]
        if d.verdict == VERDICT_LINK:
            gold_uris = {normalize_uri(u) for u in d.uris}
            if uris & gold_uris:
                tp += 1
            else:
                fn += 1
                fp += len(uris)
        else:
            fp += len(uris)
    return tp, fp, fn


def random_eval_case(rng):
    n = rng.randrange(1, 15)
    uris = ["u%d" % i for i in range(5)]
    phrases, gold, system = [], [], []
    for i in range(n):
        start = 10 * i
        phrases.append(
            PooledPhrase("p%02d" % i, "d1", "s1", start, start + 4, "srfc",
                         (Annotation("d1", "s1", start, start + 4, "srfc", None,
                                     "seeder", 0.0),))
        )
        verdict = rng.choice([VERDICT_LINK, VERDICT_LINK, VERDICT_NIL, VERDICT_DNA])
        gold_uris = (
            frozenset(rng.sample(uris, rng.randrange(1, 3)))
            if verdict == VERDICT_LINK else frozenset()
        )
        gold.append(GoldDecision("p%02d" % i, verdict, gold_uris, "a",
                                 ROUND_CONSENSUS))
        for _ in range(rng.randrange(0, 3)):
            system.append(
                Annotation("d1", "s1", start, start + rng.randrange(2, 5), "srfc",
                           rng.choice(uris), "sys", 0.5)
            )
    return phrases, gold, system


def test_evaluate_agrees_with_truth_table_oracle_on_500_cases():
    rng = random.Random(2718)
    for _ in range(500):
        phrases, gold, system = random_eval_case(rng)
        report = evaluate(system, gold, phrases)
        assert (report.tp, report.fp, report.fn) == oracle_counts(system, gold, phrases)
        # metric identities: every linkable phrase scores exactly one TP or FN
        assert report.tp + report.fn == report.n_linkable
        p, r = report.precision, report.recall
        assert min(p, r) - 1e-12 <= report.f1 <= max(p, r) + 1e-12


class TestMetricConventions:
    def phrases_and_gold(self, verdict, uris=frozenset()):
        phrases = [PooledPhrase("p0", "d1", "s1", 0, 4, "srfc",
                                (Annotation("d1", "s1", 0, 4, "srfc", None,
                                            "seeder", 0.0),))]
        gold = [GoldDecision("p0", verdict, uris, "a", ROUND_CONSENSUS)]
        return phrases, gold

    def test_no_links_means_precision_one(self):
        phrases, gold = self.phrases_and_gold(VERDICT_LINK, frozenset({"u1"}))
        report = evaluate([], gold, phrases)
        assert report.precision == 1.0
        assert report.recall == 0.0
        assert report.f1 == 0.0

    def test_no_linkable_phrases_means_recall_one(self):
        phrases, gold = self.phrases_and_gold(VERDICT_NIL)
        report = evaluate([], gold, phrases)
        assert report.recall == 1.0
        assert report.precision == 1.0
        assert report.f1 == 1.0

    def test_f1_zero_when_both_zero(self):
        phrases, gold = self.phrases_and_gold(VERDICT_LINK, frozenset({"right"}))
        report = evaluate([ann(0, "wrong")], gold, phrases)
        assert report.precision == 0.0
        assert report.recall == 0.0
        assert report.f1 == 0.0

    def test_delta_f1_ratio(self):
        phrases, gold = self.phrases_and_gold(VERDICT_LINK, frozenset({"u1"}))
        good = evaluate([ann(0, "u1")], gold, phrases)
        bad = evaluate([ann(0, "wrong")], gold, phrases)
        assert good.with_delta("self", good).delta_f1_vs == ("self", 0.0)
        assert good.with_delta("bad", bad).delta_f1_vs[1] == float("inf")
        half_gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"u1"}), "a",
                                  ROUND_CONSENSUS)]
        # a report with F1 = 0.5 as baseline: delta = (1.0 - 0.5) / 0.5 = +100%
        phrases2 = phrases + [
            PooledPhrase("p1", "d1", "s1", 10, 14, "srfc",
                         (Annotation("d1", "s1", 10, 14, "srfc", None,
                                     "seeder", 0.0),))
        ]
        gold2 = half_gold + [GoldDecision("p1", VERDICT_LINK, frozenset({"u2"}),
                                          "a", ROUND_CONSENSUS)]
        half = evaluate([ann(0, "u1")], gold2, phrases2)
        full = evaluate([ann(0, "u1"), ann(1, "u2")], gold2, phrases2)
        name, ratio = full.with_delta("half", half).delta_f1_vs
        assert name == "half"
        assert abs(ratio - 0.5) < 1e-12  # F1 2/3 -> 1.0 is +50%


class TestRecallGainBound:
    def make(self, linked_a, linked_b, n=6):
        phrases = [
            PooledPhrase("p%d" % i, "d1", "s1", 10 * i, 10 * i + 4, "srfc",
                         (Annotation("d1", "s1", 10 * i, 10 * i + 4, "srfc", None,
                                     "seeder", 0.0),))
            for i in range(n)
        ]
        a = [ann(i, "uA", "sysa") for i in linked_a]
        b = [ann(i, "uB", "sysb") for i in linked_b]
        return a, b, phrases

    def test_symmetric_difference(self):
        a, b, phrases = self.make({1, 2, 3}, {3, 4})
        assert recall_gain_bound(a, b, phrases) == 3

    def test_identical_sets(self):
        a, b, phrases = self.make({0, 1}, {0, 1})
        assert recall_gain_bound(a, b, phrases) == 0

    def test_symmetry_and_oracle_on_200_random_pairs(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randrange(1, 12)
            la = {i for i in range(n) if rng.random() < 0.5}
            lb = {i for i in range(n) if rng.random() < 0.5}
            a, b, phrases = self.make(la, lb, n)
            got = recall_gain_bound(a, b, phrases)
            assert got == recall_gain_bound(b, a, phrases)
            assert got == len(la ^ lb)
            ids_a = linked_phrase_ids(a, phrases)
            ids_b = linked_phrase_ids(b, phrases)
            assert got == len((ids_a | ids_b) - (ids_a & ids_b))


class TestGoldDecision:
    def test_link_requires_uris(self):
        with pytest.raises(GoldError):
            GoldDecision("p", VERDICT_LINK, frozenset(), "a", ROUND_CONSENSUS)

    def test_nil_forbids_uris(self):
        with pytest.raises(GoldError):
            GoldDecision("p", VERDICT_NIL, frozenset({"u"}), "a", ROUND_CONSENSUS)

    def test_unknown_verdict(self):
        with pytest.raises(GoldError):
            GoldDecision("p", "maybe", frozenset(), "a", ROUND_CONSENSUS)


class TestSampleStats:
    def build_reference_sample(self):
        entries, phrases, gold = [], [], []
        kinds = {"per:gold": "person", "org:gold": "organization"}
        for i, (name, scenes, n_phrases, n_per, n_org) in enumerate(REFERENCE_SAMPLE):
            dept = DepartmentLabel(name, name == "Without department")
            scene_ids = []
            for j in range(scenes):
                entries.append(SampleEntry(dept, "t%02d-d%d" % (i, j),
                                           "t%02d-s%d" % (i, j)))
                scene_ids.append(("t%02d-d%d" % (i, j), "t%02d-s%d" % (i, j)))
            for k in range(n_phrases):
                debate_id, scene_id = scene_ids[k % scenes]
                pid = "t%02d-p%03d" % (i, k)
                start = 10 * (k // scenes)
                phrases.append(
                    PooledPhrase(pid, debate_id, scene_id, start, start + 4, "srfc",
                                 (Annotation(debate_id, scene_id, start, start + 4,
                                             "srfc", None, "seeder", 0.0),))
                )
                if k < n_per:
                    gold.append(GoldDecision(pid, VERDICT_LINK,
                                             frozenset({"per:gold"}), "a",
                                             ROUND_CONSENSUS))
                elif k < n_per + n_org:
                    gold.append(GoldDecision(pid, VERDICT_LINK,
                                             frozenset({"org:gold"}), "a",
                                             ROUND_CONSENSUS))
                elif k % 2 == 0:
                    gold.append(GoldDecision(pid, VERDICT_LINK,
                                             frozenset({"misc:%d" % k}), "a",
                                             ROUND_CONSENSUS))
                else:
                    gold.append(GoldDecision(pid, VERDICT_NIL, frozenset(), "a",
                                             ROUND_CONSENSUS))
        return entries, phrases, gold, kinds

    def test_reference_shape_reproduces_totals(self):
        entries, phrases, gold, kinds = self.build_reference_sample()
        stats = sample_stats(entries, phrases, gold, kinds)
        assert stats.totals.scenes == 43
        assert stats.totals.phrases == 682
        assert stats.totals.persons == 271
        assert stats.totals.organizations == 91
        by_name = {dept.name: row for dept, row in stats.rows}
        for name, scenes, n_phrases, n_per, n_org in REFERENCE_SAMPLE:
            row = by_name[name]
            assert (row.scenes, row.phrases, row.persons, row.organizations) == (
                scenes, n_phrases, n_per, n_org
            )

    def test_totals_are_column_sums(self):
        entries, phrases, gold, kinds = self.build_reference_sample()
        stats = sample_stats(entries, phrases, gold, kinds)
        assert stats.totals.scenes == sum(r.scenes for _, r in stats.rows)
        assert stats.totals.phrases == sum(r.phrases for _, r in stats.rows)
        assert stats.totals.persons == sum(r.persons for _, r in stats.rows)
        assert stats.totals.organizations == sum(
            r.organizations for _, r in stats.rows
        )

    def test_empty_sample_all_zero(self):
        stats = sample_stats([], [], [], {})
        assert stats.totals == type(stats.totals)()
        assert stats.rows == ()

    def test_single_stratum(self):
        dept = DepartmentLabel("Finance")
        entries = [SampleEntry(dept, "d1", "s1")]
        phrases = [
            PooledPhrase("p0", "d1", "s1", 0, 4, "srfc",
                         (Annotation("d1", "s1", 0, 4, "srfc", None, "x", 0.0),))
        ]
        gold = [GoldDecision("p0", VERDICT_LINK, frozenset({"per:gold"}), "a",
                             ROUND_CONSENSUS)]
        stats = sample_stats(entries, phrases, gold, {"per:gold": "person"})
        assert stats.totals == stats.rows[0][1]


class TestPreselectCandidates:
    def test_system_uris_first_no_dup(self, kb):
        members = (
            Annotation("d1", "s1", 0, 4, "PvdA", "pm:party:pvda", "dict", 1.0),
            Annotation("d1", "s1", 0, 4, "PvdA", "pm:party:pvda", "mock", 0.7),
            Annotation("d1", "s1", 1, 4, "vda", "pm:party:vvd", "x", 0.7),
        )
        phrase = PooledPhrase("p0", "d1", "s1", 0, 4, "PvdA", members)
        got = preselect_candidates(phrase, kb, k=0)
        assert [e.uri for e in got] == ["pm:party:pvda", "pm:party:vvd"]

    def test_exact_alias_ranks_first(self, kb):
        phrase = PooledPhrase(
            "p0", "d1", "s1", 0, 3, "VVD",
            (Annotation("d1", "s1", 0, 3, "VVD", None, "seeder", 0.0),),
        )
        got = preselect_candidates(phrase, kb, k=3)
        assert got[0].uri == "pm:party:vvd"

    def test_k_limits_search_results(self, kb):
        phrase = PooledPhrase(
            "p0", "d1", "s1", 0, 6, "Jansen",
            (Annotation("d1", "s1", 0, 6, "Jansen", "pm:per:jansen1", "role", 1.0),),
        )
        got = preselect_candidates(phrase, kb, k=1)
        assert got[0].uri == "pm:per:jansen1"
        assert len(got) <= 2
        assert len({e.uri for e in got}) == len(got)

    def test_unknown_uri_kept_as_bare_candidate(self, kb):
        phrase = PooledPhrase(
            "p0", "d1", "s1", 0, 4, "Wxyz",
            (Annotation("d1", "s1", 0, 4, "Wxyz", "ext:unknown", "mock", 0.5),),
        )
        got = preselect_candidates(phrase, kb, k=0)
        assert [e.uri for e in got] == ["ext:unknown"]
