"""Dictionary linker for unambiguously named entity types.

Case-insensitive leftmost-longest matching over all dictionary aliases,
with matches embedded in a longer token rejected. A token here is a
maximal alphanumeric run, so "PvdA-fractie" still yields "PvdA" while
"OPvdAX" yields nothing.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .annotations import Annotation
from .automaton import Automaton, RawMatch, find_matches
from .corpus import Scene, scene_text
from .kb import AliasDictionary

DICT_SYSTEM_ID = "dict"


def token_boundary_ok(text: str, start: int, end: int) -> bool:
    """False when the match sits inside a longer alphanumeric token."""
    if start > 0 and text[start - 1].isalnum():
        return False
    if end < len(text) and text[end].isalnum():
        return False
    return True


def leftmost_longest(matches: Iterable[RawMatch]) -> list[RawMatch]:
    """Repeatedly keep the match with the smallest start (ties: largest end),
    discarding everything that overlaps it."""
    picked: list[RawMatch] = []
    last_end = 0
    for m in sorted(matches, key=lambda m: (m.start, -m.end, m.alias)):
        if m.start >= last_end:
            picked.append(m)
            last_end = m.end
    return picked


def select_matches(matches: Sequence[RawMatch], text: str) -> list[RawMatch]:
    return leftmost_longest(
        m for m in matches if token_boundary_ok(text, m.start, m.end)
    )


def link_dictionary(automaton: Automaton, dictionary: AliasDictionary,
                    scene: Scene, debate_id: str = "",
                    system_id: str = DICT_SYSTEM_ID) -> list[Annotation]:
    text = scene_text(scene)
    selected = select_matches(find_matches(automaton, text), text)
    return [
        Annotation(
            debate_id=debate_id,
            scene_id=scene.id,
            start=m.start,
            end=m.end,
            surface=text[m.start : m.end],
            uri=dictionary.entries[m.alias],
            system_id=system_id,
            confidence=1.0,
        )
        for m in selected
    ]
