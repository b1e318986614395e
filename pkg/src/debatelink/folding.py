"""Length-preserving case folding shared by the matchers and the KB indexes.

Folding is applied per character so that offsets into folded text map 1:1
onto the original. Characters whose full case fold would change the string
length (e.g. "ß" -> "ss") are left as-is; dictionary construction rejects
aliases containing them, so they can never take part in a match anyway.
"""

from __future__ import annotations


def fold_char(c: str) -> str:
    f = c.casefold()
    return f if len(f) == 1 else c


def fold_text(s: str) -> str:
    return "".join(fold_char(c) for c in s)


def fold_changes_length(s: str) -> bool:
    """True if any character's full case fold is not a single character."""
    return any(len(c.casefold()) != 1 for c in s)
