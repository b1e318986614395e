#!/usr/bin/env python3
"""Write a ready-to-serve demo workspace from the test fixtures.

Runs the linkers over the bundled example corpus, pools the annotations,
draws a stratified sample, and leaves everything a `debatelink serve` call
needs in the target directory.

Usage: python scripts/make_demo_workspace.py [outdir]
"""

import os
import shutil
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from debatelink.cli import main as cli

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "tests", "data")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "demo"
    os.makedirs(out, exist_ok=True)
    for name in ("corpus.jsonl", "kb.jsonl", "parties.tsv", "patterns.json",
                 "portfolio_map.tsv", "mock_table.json"):
        shutil.copy(os.path.join(DATA, name), os.path.join(out, name))

    def run(*argv):
        code = cli(list(argv))
        if code != 0:
            sys.exit(code)

    run("link",
        "--corpus", os.path.join(out, "corpus.jsonl"),
        "--kb", os.path.join(out, "kb.jsonl"),
        "--dict", os.path.join(out, "parties.tsv"),
        "--patterns", os.path.join(out, "patterns.json"),
        "--mock-table", os.path.join(out, "mock_table.json"),
        "--out", os.path.join(out, "annotations"))
    run("bench", "sample",
        "--corpus", os.path.join(out, "corpus.jsonl"),
        "--portfolio-map", os.path.join(out, "portfolio_map.tsv"),
        "--limit", "2", "--seed", "7",
        "--out", os.path.join(out, "sample.jsonl"))
    run("bench", "pool",
        "--corpus", os.path.join(out, "corpus.jsonl"),
        "--out", os.path.join(out, "phrases.jsonl"),
        os.path.join(out, "annotations", "dict.jsonl"),
        os.path.join(out, "annotations", "role.jsonl"),
        os.path.join(out, "annotations", "mock.jsonl"))

    print("\ndemo workspace ready; start the annotation service with:")
    print("  python -m debatelink.cli serve \\")
    print("      --corpus %s/corpus.jsonl --kb %s/kb.jsonl \\" % (out, out))
    print("      --phrases %s/phrases.jsonl --sample %s/sample.jsonl \\" % (out, out))
    print("      --gold-log %s/gold.jsonl --ui frontend/public --bind 127.0.0.1:8139"
          % out)


if __name__ == "__main__":
    main()
