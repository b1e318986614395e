"""Linker for persons mentioned by honorific+name or by government role.

Detection is driven by a declarative pattern configuration (honorific
lexicon, role words, portfolio connectors, name particles) rather than a
hard-coded expression, so it can be retargeted per corpus language.
Resolution walks a scene left to right, threading a context that records
speech turns and previously resolved mentions; that context feeds the
last-mentioned-role heuristic for bare role mentions.
"""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass, field

from .annotations import Annotation
from .corpus import Scene, SpeakersList, scene_text, unit_offsets
from .folding import fold_text
from .kb import KnowledgeBase

ROLE_SYSTEM_ID = "role"

HONORIFIC_NAME = "honorific_name"
ROLE_ONLY = "role_only"
ROLE_WITH_PORTFOLIO = "role_with_portfolio"


class PatternConfigError(Exception):
    pass


@dataclass(frozen=True)
class RoleWord:
    word: str
    role: str  # "minister" | "secretary"


@dataclass(frozen=True)
class PatternConfig:
    honorifics: tuple[str, ...]
    roles: tuple[RoleWord, ...]
    portfolio_connectors: tuple[str, ...]
    name_particles: tuple[str, ...]
    max_name_tokens: int = 4
    # optional lexicon for multiword portfolios that a capitalized-run
    # heuristic would cut short ("Sociale Zaken en Werkgelegenheid")
    portfolios: tuple[str, ...] = ()


def load_pattern_config(path) -> PatternConfig:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    try:
        roles = tuple(RoleWord(r["word"], r["role"]) for r in raw.get("roles", ()))
        return PatternConfig(
            honorifics=tuple(raw.get("honorifics", ())),
            roles=roles,
            portfolio_connectors=tuple(raw.get("portfolio_connectors", ())),
            name_particles=tuple(raw.get("name_particles", ())),
            max_name_tokens=int(raw.get("max_name_tokens", 4)),
            portfolios=tuple(raw.get("portfolios", ())),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise PatternConfigError("bad pattern configuration %s: %s" % (path, e)) from None


@dataclass(frozen=True)
class RoleMention:
    start: int
    end: int
    form: str
    honorific_or_role: str
    name: str | None = None
    portfolio: str | None = None
    role: str | None = None  # role enum when honorific_or_role is a role word


@dataclass
class SceneContext:
    """Per-scene resolution state, threaded left to right."""

    date: datetime.date
    house: str
    speakers: SpeakersList
    turn_events: tuple[tuple[int, str], ...] = ()  # (offset, speaker uri)
    resolved_mentions: list[tuple[RoleMention, str]] = field(default_factory=list)


_TOKEN_RE = re.compile(r"\S+")
_STRIP_CHARS = ".,;:!?()[]{}<>\"'“”‘’«»…"


@dataclass(frozen=True)
class _Token:
    start: int
    end: int  # end of the stripped core
    text: str  # stripped core


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        raw = m.group()
        start = m.start()
        core = raw.lstrip(_STRIP_CHARS)
        start += len(raw) - len(core)
        core = core.rstrip(_STRIP_CHARS)
        if core:
            tokens.append(_Token(start, start + len(core), core))
    return tokens


def _word_pattern(words) -> re.Pattern | None:
    if not words:
        return None
    # longest alternative first, so "de heer" wins over any shorter prefix
    parts = sorted((re.escape(w) for w in words), key=len, reverse=True)
    return re.compile(r"(?<!\w)(?:%s)(?!\w)" % "|".join(parts), re.IGNORECASE)


def _is_capitalized(token: str) -> bool:
    return token[:1].isupper()


def _clean_gap(text: str, a: int, b: int) -> bool:
    """Name and portfolio runs may only be separated by spaces or tabs.

    Any punctuation, newline (= speech-unit boundary) or stripped trailing
    character in between ends the capture.
    """
    return all(c in " \t" for c in text[a:b])


class _Detector:
    def __init__(self, config: PatternConfig):
        self.config = config
        self.hon_re = _word_pattern(config.honorifics)
        self.role_re = _word_pattern([r.word for r in config.roles])
        self.role_of = {fold_text(r.word): r.role for r in config.roles}
        self.connectors = {fold_text(w) for w in config.portfolio_connectors}
        self.particles = {fold_text(w) for w in config.name_particles}
        self.portfolio_tokens = [
            tuple(fold_text(w) for w in p.split()) for p in config.portfolios
        ]
        self.portfolio_tokens.sort(key=len, reverse=True)

    def _token_at_or_after(self, tokens, offset):
        for idx, t in enumerate(tokens):
            if t.start >= offset:
                return idx
        return len(tokens)

    def _capture_portfolio(self, text, tokens, idx, prev_end):
        """Tokens after a connector: a known portfolio, else a capitalized run."""
        for pattern in self.portfolio_tokens:
            k = len(pattern)
            window = tokens[idx : idx + k]
            if len(window) < k:
                continue
            if tuple(fold_text(t.text) for t in window) != pattern:
                continue
            ok, last = True, prev_end
            for t in window:
                if not _clean_gap(text, last, t.start):
                    ok = False
                    break
                last = t.end
            if ok:
                return idx + k - 1
        last_idx = None
        count = 0
        prev = prev_end
        for k in range(idx, len(tokens)):
            t = tokens[k]
            if not _clean_gap(text, prev, t.start):
                break
            if not _is_capitalized(t.text) or count >= self.config.max_name_tokens:
                break
            last_idx = k
            count += 1
            prev = t.end
        return last_idx

    def _capture_name(self, text, tokens, idx, prev_end):
        """Capitalized token run with particles allowed in between.

        The capture must end on a capitalized token; trailing particles are
        trimmed by remembering the last capitalized index.
        """
        last_cap = None
        caps = 0
        prev = prev_end
        for k in range(idx, len(tokens)):
            t = tokens[k]
            if not _clean_gap(text, prev, t.start):
                break
            if _is_capitalized(t.text) and caps < self.config.max_name_tokens:
                last_cap = k
                caps += 1
            elif fold_text(t.text) in self.particles:
                pass
            else:
                break
            prev = t.end
        return last_cap

    def detect(self, text: str) -> list[RoleMention]:
        tokens = _tokenize(text)
        candidates: dict[tuple[int, int], dict] = {}
        if self.role_re is not None:
            for m in self.role_re.finditer(text):
                candidates.setdefault(m.span(), {"role": True, "hon": False})
        if self.hon_re is not None:
            for m in self.hon_re.finditer(text):
                cand = candidates.setdefault(m.span(), {"role": False, "hon": False})
                cand["hon"] = True
        mentions = []
        cursor = 0
        ordered = sorted(candidates.items(), key=lambda kv: (kv[0][0], -kv[0][1]))
        for (start, end), flags in ordered:
            if start < cursor:
                continue
            word = fold_text(text[start:end])
            mention = None
            if flags["role"]:
                mention = self._try_portfolio_mention(text, tokens, start, end, word)
            if mention is None and flags["hon"]:
                mention = self._try_name_mention(text, tokens, start, end, word)
            if mention is None and flags["role"]:
                mention = RoleMention(
                    start, end, ROLE_ONLY, word, role=self.role_of[word]
                )
            if mention is not None:
                mentions.append(mention)
                cursor = mention.end
            else:
                cursor = end
        return mentions

    def _try_portfolio_mention(self, text, tokens, start, end, word):
        idx = self._token_at_or_after(tokens, end)
        if idx >= len(tokens):
            return None
        conn = tokens[idx]
        if fold_text(conn.text) not in self.connectors:
            return None
        if not _clean_gap(text, end, conn.start):
            return None
        last = self._capture_portfolio(text, tokens, idx + 1, conn.end)
        if last is None:
            return None
        portfolio = text[tokens[idx + 1].start : tokens[last].end]
        return RoleMention(
            start,
            tokens[last].end,
            ROLE_WITH_PORTFOLIO,
            word,
            portfolio=portfolio,
            role=self.role_of[word],
        )

    def _try_name_mention(self, text, tokens, start, end, word):
        idx = self._token_at_or_after(tokens, end)
        if idx >= len(tokens):
            return None
        last = self._capture_name(text, tokens, idx, end)
        if last is None:
            return None
        name = text[tokens[idx].start : tokens[last].end]
        return RoleMention(
            start,
            tokens[last].end,
            HONORIFIC_NAME,
            word,
            name=name,
            role=self.role_of.get(word),
        )


def detect_role_mentions(text: str, config: PatternConfig) -> list[RoleMention]:
    """Non-overlapping mentions sorted by start offset."""
    return _Detector(config).detect(text)


def _speaker_matches(name: str, ref, kb: KnowledgeBase | None) -> bool:
    """Surname or full-name match of a mention against one speakers-list entry.

    Matches the full display name, a token suffix of it ("Jansen" against
    "A. Jansen", "van Dam" against "Jeroen van Dam"), or the KB surname and
    canonical name when the speaker is a known member.
    """
    n = fold_text(name).strip()
    if not n:
        return False
    disp = fold_text(ref.display_name)
    if n == disp:
        return True
    n_tokens = n.split()
    disp_tokens = disp.split()
    if n_tokens and disp_tokens[-len(n_tokens) :] == n_tokens:
        return True
    if kb is not None:
        member = kb.members.get(ref.uri)
        if member is not None:
            if n == fold_text(member.surname):
                return True
            if n == fold_text(member.entity.canonical_name):
                return True
    return False


def resolve_honorific_name(m: RoleMention, ctx: SceneContext,
                           kb: KnowledgeBase) -> str | None:
    """Speakers list first; the member index only for non-speakers.

    A link is produced only when either route yields exactly one candidate.
    """
    hits = [r for r in ctx.speakers.entries if _speaker_matches(m.name, r, kb)]
    if len(hits) == 1:
        return hits[0].uri
    results = kb.query_member_index(m.name, ctx.date, ctx.house)
    if len(results) == 1:
        return results[0]
    return None


def resolve_role_mention(m: RoleMention, ctx: SceneContext,
                         kb: KnowledgeBase) -> str | None:
    if m.form == ROLE_WITH_PORTFOLIO:
        results = kb.query_government_index(m.role, m.portfolio, ctx.date)
        if len(results) == 1:
            return results[0]
        return None
    # bare role: the mentioned person is assumed to be a speaker
    candidates = [r.uri for r in ctx.speakers.entries if r.role == m.role]
    if not candidates:
        return None
    if len(candidates) == 1:
        return candidates[0]
    candidate_set = set(candidates)
    best_uri = None
    best_offset = -1
    for offset, uri in ctx.turn_events:
        if offset < m.start and uri in candidate_set and offset > best_offset:
            best_uri, best_offset = uri, offset
    for mention, uri in ctx.resolved_mentions:
        if mention.start < m.start and uri in candidate_set and mention.start > best_offset:
            best_uri, best_offset = uri, mention.start
    return best_uri


def link_roles(scene: Scene, debate_id: str, date: datetime.date, house: str,
               speakers: SpeakersList, kb: KnowledgeBase,
               config: PatternConfig) -> list[Annotation]:
    """Detect, then resolve left to right threading the scene context.

    Unresolved mentions are kept as URI-less candidate annotations so the
    benchmark pool can still show the phrase to annotators.
    """
    text = scene_text(scene)
    turns = tuple(
        (offset, unit.speaker.uri)
        for offset, unit in zip(unit_offsets(scene), scene.speech_units)
    )
    ctx = SceneContext(date=date, house=house, speakers=speakers, turn_events=turns)
    out = []
    for m in detect_role_mentions(text, config):
        if m.form == HONORIFIC_NAME:
            uri = resolve_honorific_name(m, ctx, kb)
        else:
            uri = resolve_role_mention(m, ctx, kb)
        if uri is not None:
            ctx.resolved_mentions.append((m, uri))
        out.append(
            Annotation(
                debate_id=debate_id,
                scene_id=scene.id,
                start=m.start,
                end=m.end,
                surface=text[m.start : m.end],
                uri=uri,
                system_id=ROLE_SYSTEM_ID,
                confidence=1.0 if uri is not None else 0.0,
            )
        )
    return out
