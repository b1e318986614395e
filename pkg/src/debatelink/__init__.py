"""Entity linking for structured conversational records.

Specialist linkers (alias dictionary, role and address patterns) combined
by preference order with pluggable generalist systems, plus a benchmark
harness: stratified sampling, annotation pooling, a human gold-standard
service and boundary-agnostic P/R/F1 evaluation.
"""

__version__ = "0.1.0"

from .annotations import Annotation, read_annotations, write_annotations
from .automaton import Automaton, build_automaton, brute_force_matches, find_matches
from .benchmark import (
    EvalReport,
    GoldDecision,
    SampleEntry,
    evaluate,
    normalize_uri,
    preselect_candidates,
    recall_gain_bound,
    sample_stats,
    stratified_sample,
)
from .corpus import (
    Debate,
    DepartmentLabel,
    PortfolioMap,
    Scene,
    SpeakerRef,
    SpeechUnit,
    infer_departments,
    load_corpus,
    scene_text,
    speakers_list,
)
from .dict_linker import link_dictionary
from .kb import (
    AliasDictionary,
    Entity,
    KnowledgeBase,
    build_alias_dictionary,
    load_kb,
    validate_common_words,
)
from .pipeline import (
    MockGeneralist,
    PooledPhrase,
    combine_preference,
    combine_voting,
    pool,
)
from .role_linker import PatternConfig, detect_role_mentions, link_roles

__all__ = [name for name in dir() if not name.startswith("_")]
