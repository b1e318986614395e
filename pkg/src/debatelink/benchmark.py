"""Benchmark construction and scoring.

Stratified round-robin sampling over department strata, candidate
pre-selection for the annotation interface, the gold-standard decision
model, boundary-agnostic P/R/F1 evaluation with per-kind slices, and the
pairwise recall-gain upper bound.
"""

from __future__ import annotations

import json
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence
from urllib.parse import unquote, urlsplit, urlunsplit

from .corpus import Debate, DepartmentLabel, PortfolioMap, infer_departments
from .annotations import Annotation
from .folding import fold_text
from .kb import KnowledgeBase, Entity
from .pipeline import PooledPhrase

VERDICT_LINK = "link"
VERDICT_NIL = "nil_not_in_kb"
VERDICT_DNA = "do_not_annotate"
VERDICTS = (VERDICT_LINK, VERDICT_NIL, VERDICT_DNA)

ROUND_INDEPENDENT = "independent"
ROUND_CONSENSUS = "consensus"
ROUNDS = (ROUND_INDEPENDENT, ROUND_CONSENSUS)


class BenchmarkError(Exception):
    pass


class SampleError(BenchmarkError):
    pass


class GoldError(BenchmarkError):
    pass


class EvalError(BenchmarkError):
    pass


# ---------------------------------------------------------------------------
# sampling

@dataclass(frozen=True)
class SamplePlan:
    strata: tuple[tuple[DepartmentLabel, int], ...]
    overall_limit: int
    seed: int


@dataclass(frozen=True)
class SampleEntry:
    department: DepartmentLabel
    debate_id: str
    scene_id: str


def proportional_quotas(counts: Mapping[DepartmentLabel, int],
                        limit: int) -> dict[DepartmentLabel, int]:
    """Largest-remainder (Hamilton) apportionment of `limit` over the strata."""
    total = sum(counts.values())
    if limit < 0:
        raise SampleError("overall limit must be >= 0")
    if total == 0:
        return {dept: 0 for dept in counts}
    exact = {dept: Fraction(counts[dept] * limit, total) for dept in counts}
    quotas = {dept: int(exact[dept]) for dept in counts}
    shortfall = limit - sum(quotas.values())
    remainders = sorted(
        counts, key=lambda d: (-(exact[d] - quotas[d]), d.name)
    )
    for dept in remainders[:shortfall]:
        quotas[dept] += 1
    return quotas


def assign_departments(debates: Sequence[Debate],
                       portfolio_map: PortfolioMap) -> dict[DepartmentLabel, list[Debate]]:
    by_dept: dict[DepartmentLabel, list[Debate]] = defaultdict(list)
    for debate in debates:
        for dept in infer_departments(debate, portfolio_map):
            by_dept[dept].append(debate)
    return by_dept


def draw_sample(by_dept: Mapping[DepartmentLabel, Sequence[Debate]],
                plan: SamplePlan) -> list[SampleEntry]:
    """Round-robin draw in descending-quota order; a drawn debate leaves the pool.

    Departments at quota skip their turn; departments whose pool ran dry
    (a shared debate got drawn for another stratum) skip as well. Selection
    stops at the overall limit.
    """
    for dept, quota in plan.strata:
        if quota > 0 and not by_dept.get(dept):
            raise SampleError("department %r has a quota but no debates" % dept.name)
    rng = random.Random(plan.seed)
    order = [dept for dept, _ in sorted(plan.strata, key=lambda s: (-s[1], s[0].name))]
    quota_of = dict(plan.strata)
    pools = {
        dept: sorted(by_dept.get(dept, ()), key=lambda d: d.id) for dept in order
    }
    taken: Counter = Counter()
    used: set[str] = set()
    entries: list[SampleEntry] = []
    while len(entries) < plan.overall_limit:
        progress = False
        for dept in order:
            if len(entries) >= plan.overall_limit:
                break
            if taken[dept] >= quota_of[dept]:
                continue
            available = [d for d in pools[dept] if d.id not in used]
            if not available:
                continue
            debate = available[rng.randrange(len(available))]
            used.add(debate.id)
            scene = debate.scenes[rng.randrange(len(debate.scenes))]
            entries.append(SampleEntry(dept, debate.id, scene.id))
            taken[dept] += 1
            progress = True
        if not progress:
            break
    return entries


def stratified_sample(debates: Sequence[Debate], portfolio_map: PortfolioMap,
                      overall_limit: int, seed: int) -> list[SampleEntry]:
    """Quotas proportional to per-department debate counts, then round-robin."""
    if not debates:
        raise SampleError("corpus is empty")
    by_dept = assign_departments(debates, portfolio_map)
    quotas = proportional_quotas(
        {dept: len(ds) for dept, ds in by_dept.items()}, overall_limit
    )
    strata = tuple(sorted(quotas.items(), key=lambda s: (-s[1], s[0].name)))
    return draw_sample(by_dept, SamplePlan(strata, overall_limit, seed))


def sample_entry_record(e: SampleEntry) -> dict:
    return {
        "department": e.department.name,
        "is_none_stratum": e.department.is_none_stratum,
        "debate_id": e.debate_id,
        "scene_id": e.scene_id,
    }


def sample_entry_from_record(rec: dict) -> SampleEntry:
    return SampleEntry(
        DepartmentLabel(rec["department"], rec.get("is_none_stratum", False)),
        rec["debate_id"],
        rec["scene_id"],
    )


def write_sample(path, entries: Iterable[SampleEntry]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for e in entries:
            f.write(json.dumps(sample_entry_record(e), ensure_ascii=False) + "\n")


def read_sample(path) -> list[SampleEntry]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(sample_entry_from_record(json.loads(line)))
    return out


# ---------------------------------------------------------------------------
# candidate pre-selection

def _search_rank(surface: str, entity: Entity) -> tuple | None:
    """Rank key for KB name search: exact alias, alias prefix, token overlap."""
    s = fold_text(surface)
    s_tokens = set(s.split())
    exact = any(fold_text(a) == s for a in entity.aliases)
    prefix = any(fold_text(a).startswith(s) for a in entity.aliases)
    overlap = max(
        (len(s_tokens & set(fold_text(a).split())) for a in entity.aliases),
        default=0,
    )
    if not (exact or prefix or overlap):
        return None
    return (0 if exact else 1 if prefix else 2, -overlap, entity.uri)


def preselect_candidates(phrase: PooledPhrase, kb: KnowledgeBase,
                         k: int = 0) -> list[Entity]:
    """System-proposed entities first, then the top-k KB name-search results."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out: list[Entity] = []
    seen: set[str] = set()
    for a in phrase.member_annotations:
        if a.uri is None or a.uri in seen:
            continue
        seen.add(a.uri)
        entity = kb.entities.get(a.uri)
        if entity is None:
            # keep URIs the KB does not know as bare candidates
            entity = Entity(a.uri, "other", a.uri, frozenset({a.uri}))
        out.append(entity)
    ranked = []
    for uri in sorted(kb.entities):
        if uri in seen:
            continue
        key = _search_rank(phrase.surface, kb.entities[uri])
        if key is not None:
            ranked.append((key, kb.entities[uri]))
    ranked.sort(key=lambda r: r[0])
    out.extend(e for _, e in ranked[:k])
    return out


# ---------------------------------------------------------------------------
# gold standard

@dataclass(frozen=True)
class GoldDecision:
    phrase_id: str
    verdict: str
    uris: frozenset[str]
    annotator_id: str
    round: str

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise GoldError("unknown verdict %r" % self.verdict)
        if self.round not in ROUNDS:
            raise GoldError("unknown round %r" % self.round)
        if self.verdict == VERDICT_LINK and not self.uris:
            raise GoldError("link verdict for %r without uris" % self.phrase_id)
        if self.verdict != VERDICT_LINK and self.uris:
            raise GoldError(
                "%s verdict for %r must not carry uris" % (self.verdict, self.phrase_id)
            )


def gold_record(d: GoldDecision) -> dict:
    return {
        "phrase_id": d.phrase_id,
        "verdict": d.verdict,
        "uris": sorted(d.uris),
        "annotator_id": d.annotator_id,
        "round": d.round,
    }


def gold_from_record(rec: dict) -> GoldDecision:
    return GoldDecision(
        phrase_id=rec["phrase_id"],
        verdict=rec["verdict"],
        uris=frozenset(rec.get("uris", ())),
        annotator_id=rec.get("annotator_id", ""),
        round=rec.get("round", ROUND_CONSENSUS),
    )


def write_gold(path, decisions: Iterable[GoldDecision]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for d in decisions:
            f.write(json.dumps(gold_record(d), ensure_ascii=False) + "\n")


def read_gold(path) -> list[GoldDecision]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(gold_from_record(json.loads(line)))
    return out


def consensus_decisions(gold: Iterable[GoldDecision]) -> dict[str, GoldDecision]:
    """Latest consensus decision per phrase."""
    result: dict[str, GoldDecision] = {}
    for d in gold:
        if d.round == ROUND_CONSENSUS:
            result[d.phrase_id] = d
    return result


# ---------------------------------------------------------------------------
# URI normalization

def _unquote_fixpoint(s: str) -> str:
    for _ in range(5):
        decoded = unquote(s)
        if decoded == s:
            return s
        s = decoded
    return s


def normalize_uri(uri: str) -> str:
    """Canonical form for comparing hand-entered URLs with system URIs.

    Lowercases scheme and host, percent-decodes the path, maps spaces in
    Wikipedia titles to underscores, and strips a trailing slash. Strings
    without a scheme are treated as opaque identifiers. Idempotent.
    """
    s = uri.strip()
    if "://" not in s:
        return s
    parts = urlsplit(s)
    scheme = parts.scheme.lower()
    host = parts.netloc.lower()
    path = _unquote_fixpoint(parts.path)
    if host.endswith("wikipedia.org") and path.startswith("/wiki/"):
        path = "/wiki/" + path[len("/wiki/"):].replace(" ", "_")
    if path.endswith("/"):
        path = path.rstrip("/")
    return urlunsplit((scheme, host, path, parts.query, parts.fragment))


# ---------------------------------------------------------------------------
# evaluation

SLICE_KINDS = ("person", "organization", "other")


def slice_kind(kind: str | None) -> str:
    """Entity kinds collapse to the report's slices; parties count as organizations."""
    if kind == "person":
        return "person"
    if kind in ("organization", "party"):
        return "organization"
    return "other"


@dataclass(frozen=True)
class SliceCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    slices: dict[str, SliceCounts]
    n_phrases: int
    n_linkable: int
    n_nil: int
    n_do_not_annotate: int
    delta_f1_vs: tuple[str, float] | None = None

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def with_delta(self, baseline_name: str, baseline: "EvalReport") -> "EvalReport":
        if baseline.f1 == 0.0:
            ratio = float("inf") if self.f1 > 0 else 0.0
        else:
            ratio = (self.f1 - baseline.f1) / baseline.f1
        return replace(self, delta_f1_vs=(baseline_name, ratio))


def report_record(r: EvalReport) -> dict:
    rec = {
        "tp": r.tp,
        "fp": r.fp,
        "fn": r.fn,
        "precision": r.precision,
        "recall": r.recall,
        "f1": r.f1,
        "n_phrases": r.n_phrases,
        "n_linkable": r.n_linkable,
        "n_nil": r.n_nil,
        "n_do_not_annotate": r.n_do_not_annotate,
        "slices": {
            kind: {
                "tp": s.tp, "fp": s.fp, "fn": s.fn,
                "precision": s.precision, "recall": s.recall, "f1": s.f1,
            }
            for kind, s in r.slices.items()
        },
    }
    if r.delta_f1_vs is not None:
        rec["delta_f1_vs"] = {"baseline": r.delta_f1_vs[0], "ratio": r.delta_f1_vs[1]}
    return rec


def map_to_phrases(annotations: Iterable[Annotation],
                   phrases: Sequence[PooledPhrase]) -> dict[str, list[Annotation]]:
    """Assign each annotation to the phrase its span overlaps.

    Phrases within a scene never overlap, so an annotation from the pooled
    universe maps to exactly one; a foreign annotation overlapping several
    goes to the one sharing the most characters.
    """
    by_scene: dict[tuple[str, str], list[PooledPhrase]] = defaultdict(list)
    for p in phrases:
        by_scene[(p.debate_id, p.scene_id)].append(p)
    mapped: dict[str, list[Annotation]] = defaultdict(list)
    for a in annotations:
        best = None
        best_overlap = 0
        for p in by_scene.get((a.debate_id, a.scene_id), ()):
            overlap = min(a.end, p.end) - max(a.start, p.start)
            if overlap > best_overlap:
                best, best_overlap = p, overlap
        if best is not None:
            mapped[best.phrase_id].append(a)
    return mapped


def _consensus_for_phrases(gold: Iterable[GoldDecision],
                           phrases: Sequence[PooledPhrase]) -> dict[str, GoldDecision]:
    known = {p.phrase_id for p in phrases}
    for d in gold:
        if d.phrase_id not in known:
            raise EvalError("gold decision references unknown phrase %r" % d.phrase_id)
    consensus = consensus_decisions(gold)
    missing = sorted(known - set(consensus))
    if missing:
        raise EvalError(
            "no consensus decision for phrase(s): %s" % ", ".join(missing[:5])
        )
    return consensus


def evaluate(system: Sequence[Annotation], gold: Sequence[GoldDecision],
             phrases: Sequence[PooledPhrase],
             entity_kinds: Mapping[str, str] | None = None) -> EvalReport:
    """Boundary-agnostic scoring of one system against the gold standard.

    Mention boundaries never affect the score: a system annotation counts
    for the pooled phrase its span overlaps. Per phrase, the system scores
    a TP when any of its URIs is in the gold set; wrong links on a linkable
    phrase cost both an FP and an FN; links on nil or do-not-annotate
    phrases cost an FP each.
    """
    consensus = _consensus_for_phrases(gold, phrases)
    kinds = {normalize_uri(u): k for u, k in (entity_kinds or {}).items()}
    mapped = map_to_phrases([a for a in system if a.linked], phrases)
    tp = fp = fn = 0
    slice_tallies = {kind: [0, 0, 0] for kind in SLICE_KINDS}
    n_linkable = n_nil = n_dna = 0

    def kind_of(uri: str) -> str:
        return slice_kind(kinds.get(uri))

    for phrase in phrases:
        decision = consensus[phrase.phrase_id]
        system_uris = sorted({normalize_uri(a.uri) for a in mapped.get(phrase.phrase_id, ())})
        if decision.verdict == VERDICT_LINK:
            n_linkable += 1
            gold_uris = {normalize_uri(u) for u in decision.uris}
            matching = [u for u in system_uris if u in gold_uris]
            if matching:
                tp += 1
                slice_tallies[kind_of(matching[0])][0] += 1
            else:
                fn += 1
                gold_kind = next(
                    (kind_of(u) for u in sorted(gold_uris) if kinds.get(u)), "other"
                )
                slice_tallies[gold_kind][2] += 1
                for uri in system_uris:
                    fp += 1
                    slice_tallies[kind_of(uri)][1] += 1
        else:
            if decision.verdict == VERDICT_NIL:
                n_nil += 1
            else:
                n_dna += 1
            for uri in system_uris:
                fp += 1
                slice_tallies[kind_of(uri)][1] += 1
    slices = {
        kind: SliceCounts(*counts) for kind, counts in slice_tallies.items()
    }
    return EvalReport(
        tp=tp, fp=fp, fn=fn, slices=slices,
        n_phrases=len(phrases), n_linkable=n_linkable,
        n_nil=n_nil, n_do_not_annotate=n_dna,
    )


def linked_phrase_ids(annotations: Iterable[Annotation],
                      phrases: Sequence[PooledPhrase]) -> set[str]:
    return set(map_to_phrases([a for a in annotations if a.linked], phrases))


def recall_gain_bound(a: Sequence[Annotation], b: Sequence[Annotation],
                      phrases: Sequence[PooledPhrase]) -> int:
    """Phrases linked by exactly one of the two systems: an upper bound on
    the recall one could gain by combining them."""
    return len(linked_phrase_ids(a, phrases) ^ linked_phrase_ids(b, phrases))


# ---------------------------------------------------------------------------
# sample statistics

@dataclass(frozen=True)
class StatsRow:
    scenes: int = 0
    phrases: int = 0
    persons: int = 0
    organizations: int = 0

    def __add__(self, other: "StatsRow") -> "StatsRow":
        return StatsRow(
            self.scenes + other.scenes,
            self.phrases + other.phrases,
            self.persons + other.persons,
            self.organizations + other.organizations,
        )


@dataclass(frozen=True)
class SampleStats:
    rows: tuple[tuple[DepartmentLabel, StatsRow], ...]
    totals: StatsRow


def sample_stats(entries: Sequence[SampleEntry], phrases: Sequence[PooledPhrase],
                 gold: Sequence[GoldDecision],
                 entity_kinds: Mapping[str, str] | None = None) -> SampleStats:
    """Per-stratum scene, phrase and linked-kind counts; totals are column sums."""
    consensus = _consensus_for_phrases(gold, phrases)
    kinds = {normalize_uri(u): k for u, k in (entity_kinds or {}).items()}
    stratum_of: dict[tuple[str, str], DepartmentLabel] = {}
    order: list[DepartmentLabel] = []
    scene_counts: Counter = Counter()
    for e in entries:
        if e.department not in order:
            order.append(e.department)
        stratum_of[(e.debate_id, e.scene_id)] = e.department
        scene_counts[e.department] += 1
    tallies = {dept: [0, 0, 0] for dept in order}  # phrases, persons, orgs
    for phrase in phrases:
        dept = stratum_of.get((phrase.debate_id, phrase.scene_id))
        if dept is None:
            continue
        tallies[dept][0] += 1
        decision = consensus[phrase.phrase_id]
        if decision.verdict != VERDICT_LINK:
            continue
        kind = next(
            (slice_kind(kinds[normalize_uri(u)]) for u in sorted(decision.uris)
             if normalize_uri(u) in kinds),
            "other",
        )
        if kind == "person":
            tallies[dept][1] += 1
        elif kind == "organization":
            tallies[dept][2] += 1
    rows = tuple(
        (dept, StatsRow(scene_counts[dept], *tallies[dept])) for dept in order
    )
    totals = StatsRow()
    for _, row in rows:
        totals = totals + row
    return SampleStats(rows, totals)


def stats_record(stats: SampleStats) -> dict:
    return {
        "rows": [
            {
                "department": dept.name,
                "is_none_stratum": dept.is_none_stratum,
                "scenes": row.scenes,
                "phrases": row.phrases,
                "persons": row.persons,
                "organizations": row.organizations,
            }
            for dept, row in stats.rows
        ],
        "totals": {
            "scenes": stats.totals.scenes,
            "phrases": stats.totals.phrases,
            "persons": stats.totals.persons,
            "organizations": stats.totals.organizations,
        },
    }
