"""Command-line entry points for the linking pipeline and the benchmark.

Every subcommand is a thin shell over one library operation; no linking or
scoring logic lives here.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import benchmark as bm
from . import pipeline as pl
from .annotations import read_annotations, write_annotations
from .corpus import load_corpus, load_portfolio_map, speakers_list
from .kb import (
    load_dictionary_file,
    load_kb,
    load_lexicon,
    validate_common_words,
    validate_speaker_roles,
)
from .role_linker import load_pattern_config
from .service import AnnotationService, GoldLog, serve


class CliError(Exception):
    pass


def _require_file(path, what: str):
    if path is None:
        raise CliError("missing required --%s" % what)
    if not os.path.exists(path):
        raise CliError("%s file not found: %s" % (what, path))
    return path


def _link_systems(args):
    """Instantiate the configured systems; --order selects and reorders them."""
    systems = []
    dictionary = load_dictionary_file(_require_file(args.dict, "dict"))
    systems.append(pl.DictionarySystem(dictionary))
    kb = load_kb(_require_file(args.kb, "kb"))
    config = load_pattern_config(_require_file(args.patterns, "patterns"))
    systems.append(pl.RoleSystem(kb, config))
    if args.mock_table:
        mock = pl.MockGeneralist.from_file(_require_file(args.mock_table, "mock-table"))
        if args.seed is not None:
            mock.seed = args.seed
        systems.append(mock)
    for path in args.extern or ():
        systems.append(pl.ExternalAnnotations.from_file(_require_file(path, "extern")))
    if args.lexicon:
        for warning in validate_common_words(dictionary, load_lexicon(args.lexicon)):
            print("warning: %s" % warning, file=sys.stderr)
    if args.order:
        wanted = [s.strip() for s in args.order.split(",") if s.strip()]
        registered = {s.system_id: s for s in systems}
        unknown = [sid for sid in wanted if sid not in registered]
        if unknown:
            raise CliError(
                "--order names unregistered system(s): %s" % ", ".join(unknown)
            )
        systems = [registered[sid] for sid in wanted]
    return systems, kb


def cmd_link(args) -> int:
    debates = load_corpus(_require_file(args.corpus, "corpus"))
    systems, kb = _link_systems(args)
    for problem in validate_speaker_roles(debates, kb):
        print("warning: %s" % problem, file=sys.stderr)
    os.makedirs(args.out, exist_ok=True)
    for system in systems:
        annotations = []
        for debate in debates:
            ctx = pl.LinkContext(debate.id, debate.date, debate.house,
                                 speakers_list(debate))
            for scene in debate.scenes:
                annotations.extend(system.link(scene, ctx))
        out_path = os.path.join(args.out, "%s.jsonl" % system.system_id)
        write_annotations(out_path, annotations)
        print("%s: %d annotations -> %s" % (system.system_id, len(annotations), out_path))
    return 0


def cmd_sample(args) -> int:
    debates = load_corpus(_require_file(args.corpus, "corpus"))
    pmap = load_portfolio_map(_require_file(args.portfolio_map, "portfolio-map"))
    entries = bm.stratified_sample(debates, pmap, args.limit, args.seed)
    bm.write_sample(args.out, entries)
    print("sampled %d scenes -> %s" % (len(entries), args.out))
    return 0


def cmd_pool(args) -> int:
    debates = load_corpus(_require_file(args.corpus, "corpus"))
    annotations = []
    for path in args.annotations:
        annotations.extend(read_annotations(_require_file(path, "annotations")))
    wanted = None
    if args.sample:
        entries = bm.read_sample(_require_file(args.sample, "sample"))
        wanted = {(e.debate_id, e.scene_id) for e in entries}
    by_scene = {}
    for a in annotations:
        by_scene.setdefault((a.debate_id, a.scene_id), []).append(a)
    phrases = []
    for debate in debates:
        for scene in debate.scenes:
            key = (debate.id, scene.id)
            if wanted is not None and key not in wanted:
                continue
            phrases.extend(pl.pool(by_scene.get(key, []), scene, debate.id))
    pl.write_phrases(args.out, phrases)
    print("pooled %d phrases -> %s" % (len(phrases), args.out))
    return 0


def cmd_combine(args) -> int:
    phrases = pl.read_phrases(_require_file(args.phrases, "phrases"))
    order = [s.strip() for s in args.order.split(",") if s.strip()]
    known = {a.system_id for p in phrases for a in p.member_annotations}
    known.update(args.systems or ())
    combined = pl.combine_preference(order, phrases, known)
    write_annotations(args.out, combined)
    print("combined %d annotations -> %s" % (len(combined), args.out))
    return 0


def cmd_evaluate(args) -> int:
    system = read_annotations(_require_file(args.annotations, "annotations"))
    gold = bm.read_gold(_require_file(args.gold, "gold"))
    phrases = pl.read_phrases(_require_file(args.phrases, "phrases"))
    kinds = None
    if args.kb:
        kb = load_kb(_require_file(args.kb, "kb"))
        kinds = {uri: e.kind for uri, e in kb.entities.items()}
    report = bm.evaluate(system, gold, phrases, kinds)
    if args.baseline:
        with open(_require_file(args.baseline, "baseline"), encoding="utf-8") as f:
            base = json.load(f)
        name = os.path.splitext(os.path.basename(args.baseline))[0]
        if base.get("f1", 0.0) == 0.0:
            ratio = float("inf") if report.f1 > 0 else 0.0
        else:
            ratio = (report.f1 - base["f1"]) / base["f1"]
        report = dataclasses.replace(report, delta_f1_vs=(name, ratio))
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(bm.report_record(report), f, ensure_ascii=False, indent=2)
        f.write("\n")
    print(
        "tp=%d fp=%d fn=%d P=%.4f R=%.4f F1=%.4f -> %s"
        % (report.tp, report.fp, report.fn, report.precision, report.recall,
           report.f1, args.out)
    )
    return 0


def cmd_stats(args) -> int:
    entries = bm.read_sample(_require_file(args.sample, "sample"))
    phrases = pl.read_phrases(_require_file(args.phrases, "phrases"))
    gold = bm.read_gold(_require_file(args.gold, "gold"))
    kinds = None
    if args.kb:
        kb = load_kb(_require_file(args.kb, "kb"))
        kinds = {uri: e.kind for uri, e in kb.entities.items()}
    stats = bm.sample_stats(entries, phrases, gold, kinds)
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(bm.stats_record(stats), f, ensure_ascii=False, indent=2)
        f.write("\n")
    width = max((len(d.name) for d, _ in stats.rows), default=10)
    print("%-*s  scenes  phrases  persons  orgs" % (width, "department"))
    for dept, row in stats.rows:
        print("%-*s  %6d  %7d  %7d  %4d"
              % (width, dept.name, row.scenes, row.phrases, row.persons,
                 row.organizations))
    t = stats.totals
    print("%-*s  %6d  %7d  %7d  %4d"
          % (width, "total", t.scenes, t.phrases, t.persons, t.organizations))
    return 0


def cmd_serve(args) -> int:
    debates = load_corpus(_require_file(args.corpus, "corpus"))
    kb = load_kb(_require_file(args.kb, "kb"))
    phrases = pl.read_phrases(_require_file(args.phrases, "phrases"))
    scene_of_interest = {}
    if args.sample:
        for e in bm.read_sample(_require_file(args.sample, "sample")):
            scene_of_interest[e.debate_id] = e.scene_id
    gold_log = GoldLog(args.gold_log)
    ui_dir = args.ui if args.ui and os.path.isdir(args.ui) else None
    service = AnnotationService(
        debates, phrases, kb, gold_log,
        scene_of_interest=scene_of_interest,
        candidate_k=args.candidates_k,
        ui_dir=ui_dir,
    )
    host, _, port = args.bind.partition(":")
    server = serve(service, host or "127.0.0.1", int(port or 0))
    actual_host, actual_port = server.server_address[:2]
    print("serving on http://%s:%d" % (actual_host, actual_port), flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        gold_log.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="debatelink",
        description="Specialist entity linking and benchmarking for conversational records",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    link = sub.add_parser("link", help="run the configured linkers over a corpus")
    link.add_argument("--corpus", required=True)
    link.add_argument("--kb", required=True)
    link.add_argument("--dict", required=True)
    link.add_argument("--patterns", required=True)
    link.add_argument("--portfolio-map", dest="portfolio_map")
    link.add_argument("--lexicon", help="common-word lexicon for dictionary warnings")
    link.add_argument("--mock-table", dest="mock_table",
                      help="behavior table for the mock generalist")
    link.add_argument("--extern", action="append",
                      help="annotation interchange file from an external system")
    link.add_argument("--order",
                      help="comma-separated system ids to run, in this order")
    link.add_argument("--seed", type=int, default=None,
                      help="override the mock generalist's table seed")
    link.add_argument("--out", required=True, help="output directory")
    link.set_defaults(func=cmd_link)

    bench = sub.add_parser("bench", help="benchmark construction and scoring")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)

    sample = bench_sub.add_parser("sample", help="stratified round-robin scene sample")
    sample.add_argument("--corpus", required=True)
    sample.add_argument("--portfolio-map", dest="portfolio_map", required=True)
    sample.add_argument("--limit", type=int, required=True)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--out", required=True)
    sample.set_defaults(func=cmd_sample)

    pool_p = bench_sub.add_parser("pool", help="pool system annotations into phrases")
    pool_p.add_argument("--corpus", required=True)
    pool_p.add_argument("--sample", help="restrict pooling to the sampled scenes")
    pool_p.add_argument("--out", required=True)
    pool_p.add_argument("annotations", nargs="+",
                        help="annotation interchange files, one per system")
    pool_p.set_defaults(func=cmd_pool)

    combine = bench_sub.add_parser("combine", help="preference-order combination")
    combine.add_argument("--phrases", required=True)
    combine.add_argument("--order", required=True,
                         help="comma-separated system ids, most preferred first")
    combine.add_argument("--systems", action="append",
                         help="declare extra known system ids")
    combine.add_argument("--out", required=True)
    combine.set_defaults(func=cmd_combine)

    evaluate = bench_sub.add_parser("evaluate", help="score annotations against gold")
    evaluate.add_argument("--annotations", required=True)
    evaluate.add_argument("--gold", required=True)
    evaluate.add_argument("--phrases", required=True)
    evaluate.add_argument("--kb", help="KB for per-kind slices")
    evaluate.add_argument("--baseline", help="earlier report JSON for the F1 delta")
    evaluate.add_argument("--out", required=True)
    evaluate.set_defaults(func=cmd_evaluate)

    stats = bench_sub.add_parser("stats", help="sample composition statistics")
    stats.add_argument("--sample", required=True)
    stats.add_argument("--phrases", required=True)
    stats.add_argument("--gold", required=True)
    stats.add_argument("--kb")
    stats.add_argument("--out", required=True)
    stats.set_defaults(func=cmd_stats)

    serve_p = sub.add_parser("serve", help="annotation workbench HTTP service")
    serve_p.add_argument("--corpus", required=True)
    serve_p.add_argument("--kb", required=True)
    serve_p.add_argument("--phrases", required=True)
    serve_p.add_argument("--sample", help="marks each debate's scene of interest")
    serve_p.add_argument("--gold-log", dest="gold_log", required=True)
    serve_p.add_argument("--candidates-k", dest="candidates_k", type=int, default=3)
    serve_p.add_argument("--ui", help="directory with the annotator frontend build")
    serve_p.add_argument("--bind", default="127.0.0.1:8139")
    serve_p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
