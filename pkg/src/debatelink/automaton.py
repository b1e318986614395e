"""Aho-Corasick multi-pattern matcher, plus a brute-force twin used as oracle.

The automaton is built once per dictionary and is immutable afterwards;
scanning is a pure function, so scenes can be matched in parallel. Under an
insensitive case policy both patterns and text are folded with the
length-preserving per-character fold from `folding`, so match offsets map
1:1 onto the original text. Aliases that override to case-sensitive share
the folded trie and are confirmed against the raw slice when they fire.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .folding import fold_char, fold_changes_length, fold_text
from .kb import CASE_INSENSITIVE, AliasDictionary


class AutomatonError(Exception):
    pass


@dataclass(frozen=True, order=True)
class RawMatch:
    start: int
    end: int  # exclusive
    alias: str


@dataclass(frozen=True)
class ScanStats:
    """Transition counts for one scan, used to assert linear behavior."""

    chars: int
    goto_steps: int
    fail_steps: int
    emitted: int


class Automaton:
    """Goto/failure automaton over the dictionary's alias strings.

    Outputs are propagated along failure links at build time, so a scan
    never walks the failure chain just to collect matches.
    """

    def __init__(self, patterns: list[tuple[str, bool]], case_insensitive: bool):
        self.case_insensitive = case_insensitive
        # (alias, sensitive) per pattern id; key used in the trie
        self.patterns: list[tuple[str, bool]] = list(patterns)
        self.goto: list[dict[str, int]] = [{}]
        self.fail: list[int] = [0]
        self.out: list[tuple[int, ...]] = [()]
        for pid, (alias, _sensitive) in enumerate(self.patterns):
            key = fold_text(alias) if case_insensitive else alias
            self._insert(key, pid)
        self._link_failures()

    def _insert(self, key: str, pid: int) -> None:
        state = 0
        for c in key:
            nxt = self.goto[state].get(c)
            if nxt is None:
                nxt = len(self.goto)
                self.goto.append({})
                self.fail.append(0)
                self.out.append(())
                self.goto[state][c] = nxt
            state = nxt
        self.out[state] = self.out[state] + (pid,)

    def _link_failures(self) -> None:
        queue = deque()
        for child in self.goto[0].values():
            self.fail[child] = 0
            queue.append(child)
        while queue:
            state = queue.popleft()
            for c, child in self.goto[state].items():
                queue.append(child)
                f = self.fail[state]
                while f and c not in self.goto[f]:
                    f = self.fail[f]
                self.fail[child] = self.goto[f].get(c, 0)
                self.out[child] = self.out[child] + self.out[self.fail[child]]

    @property
    def n_states(self) -> int:
        return len(self.goto)


def build_automaton(dictionary: AliasDictionary) -> Automaton:
    if not dictionary.entries:
        raise ValueError("build_automaton: dictionary must be non-empty")
    insensitive = dictionary.case_policy == CASE_INSENSITIVE
    patterns = []
    for alias in sorted(dictionary.entries):
        if insensitive and fold_changes_length(alias):
            raise AutomatonError(
                "alias %r contains a character whose case fold changes length; "
                "offsets would not map back to the original text" % alias
            )
        patterns.append((alias, dictionary.is_sensitive(alias)))
    return Automaton(patterns, insensitive)


def _scan(a: Automaton, text: str):
    matches = []
    goto_steps = 0
    fail_steps = 0
    state = 0
    for i, ch in enumerate(text):
        c = fold_char(ch) if a.case_insensitive else ch
        while state and c not in a.goto[state]:
            state = a.fail[state]
            fail_steps += 1
        state = a.goto[state].get(c, 0)
        goto_steps += 1
        for pid in a.out[state]:
            alias, sensitive = a.patterns[pid]
            start = i + 1 - len(alias)
            if sensitive and text[start : i + 1] != alias:
                continue
            matches.append(RawMatch(start, i + 1, alias))
    matches.sort()
    return matches, ScanStats(len(text), goto_steps, fail_steps, len(matches))


def find_matches(a: Automaton, text: str) -> list[RawMatch]:
    """All (start, end, alias) whose slice equals the alias under its case policy."""
    return _scan(a, text)[0]


def find_matches_with_stats(a: Automaton, text: str) -> tuple[list[RawMatch], ScanStats]:
    return _scan(a, text)


def brute_force_matches(dictionary: AliasDictionary, text: str) -> list[RawMatch]:
    """Test oracle: try every alias at every offset. Same contract as find_matches."""
    insensitive = dictionary.case_policy == CASE_INSENSITIVE
    folded_text = fold_text(text) if insensitive else text
    matches = []
    for alias in dictionary.entries:
        sensitive = dictionary.is_sensitive(alias)
        needle = alias if sensitive else (fold_text(alias) if insensitive else alias)
        haystack = text if sensitive else folded_text
        n = len(needle)
        for start in range(len(text) - n + 1):
            if haystack[start : start + n] == needle:
                matches.append(RawMatch(start, start + n, alias))
    matches.sort()
    return matches
