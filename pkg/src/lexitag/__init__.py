"""lexitag: distant-supervision workbench for named-entity annotation.

Extract entity lexicons from a knowledge-base dump, annotate corpora by
longest-match lookup, evaluate against small gold sets, and tune the
annotation through a declarative configuration.
"""

from .annotator import Span, annotate, annotate_corpus, spans_to_tags, tags_to_spans
from .corpus import (
    LabeledCorpus,
    Sentence,
    load_stopwords,
    parse_conll,
    tokenize,
    write_conll,
)
from .errors import LexitagError
from .evaluation import (
    EvalReport,
    TokenInspection,
    evaluate_corpus,
    evaluate_tags,
    inspect_token,
    override_label,
    token_prf,
    top_errors,
)
from .kb import (
    ClassIndexEntry,
    KbItem,
    RawLexicon,
    build_class_index,
    extract_lexicon,
    load_user_list,
    search_classes,
    stream_items,
)
from .lexicon import CompiledEntry, CompiledMatcher, apply_transforms, build_matcher, compile_entries
from .project import Project
from .tuner import (
    AnnotationConfig,
    FuzzyConfig,
    LemmaTable,
    TuningStep,
    lemmatize_token,
    record_step,
    strip_diacritics,
    update_config,
)

__version__ = "0.1.0"
