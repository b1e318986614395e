#!/usr/bin/env python3
"""Desk-scale replay of the hybrid-combination experiment.

Generates a synthetic benchmark with known ground truth, runs the two
specialist linkers and a dialed-down mock generalist, then scores every
system and the preference-ordered combinations. Prints a small table with
relative F1 deltas against each single system.

Usage: python scripts/run_hybrid_experiment.py [--seed N] [--debates N]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from debatelink.benchmark import evaluate
from debatelink.corpus import speakers_list
from debatelink.kb import AliasDictionary
from debatelink.pipeline import (
    DictionarySystem,
    LinkContext,
    MockGeneralist,
    RoleSystem,
    combine_preference,
    combine_voting,
    pool,
)
from debatelink.synthetic import build_benchmark

GENERALIST_RECALL = {"party": 0.7, "person": 0.2, "organization": 0.8, "other": 0.8}
GENERALIST_PRECISION = {"party": 0.9, "person": 0.6, "organization": 0.9, "other": 0.9}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--debates", type=int, default=12)
    args = parser.parse_args()

    bench = build_benchmark(seed=args.seed, n_debates=args.debates)
    dictionary = AliasDictionary(dict(bench.dictionary_entries))
    systems = [
        DictionarySystem(dictionary),
        RoleSystem(bench.kb, bench.pattern_config),
        MockGeneralist(bench.mock_rules, recall=GENERALIST_RECALL,
                       precision=GENERALIST_PRECISION, seed=args.seed * 13 + 7),
    ]

    phrases = []
    for debate in bench.debates:
        ctx = LinkContext(debate.id, debate.date, debate.house, speakers_list(debate))
        for scene in debate.scenes:
            annotations = []
            for system in systems:
                annotations.extend(system.link(scene, ctx))
            phrases.extend(pool(annotations, scene, debate.id))
    gold = bench.gold_for(phrases)
    kinds = bench.entity_kinds()

    def system_annotations(system_id):
        return [a for p in phrases for a in p.member_annotations
                if a.system_id == system_id and a.linked]

    runs = {
        "dict": system_annotations("dict"),
        "role": system_annotations("role"),
        "generalist": system_annotations("mock"),
        "specialists [dict>role]": combine_preference(["dict", "role"], phrases),
        "hybrid [dict>role>gen]": combine_preference(["dict", "role", "mock"], phrases),
        "voting baseline": combine_voting(phrases),
    }
    reports = {name: evaluate(anns, gold, phrases, kinds)
               for name, anns in runs.items()}

    print("%d debates, %d pooled phrases, %d linkable in gold\n"
          % (len(bench.debates), len(phrases), reports["dict"].n_linkable))
    header = "%-26s %5s %5s %5s %7s %7s %7s" % (
        "system", "tp", "fp", "fn", "P", "R", "F1")
    print(header)
    print("-" * len(header))
    for name, report in reports.items():
        print("%-26s %5d %5d %5d %7.3f %7.3f %7.3f"
              % (name, report.tp, report.fp, report.fn,
                 report.precision, report.recall, report.f1))

    hybrid = reports["hybrid [dict>role>gen]"]
    print("\nrelative F1 gain of the hybrid combination:")
    for baseline in ("dict", "role", "generalist", "specialists [dict>role]"):
        delta = hybrid.with_delta(baseline, reports[baseline]).delta_f1_vs[1]
        print("  vs %-24s %+6.1f%%" % (baseline, 100.0 * delta))


if __name__ == "__main__":
    main()
