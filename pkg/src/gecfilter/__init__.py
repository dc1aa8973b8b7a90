"""Character-level tooling against over-correction in GEC systems.

The package covers the non-neural side of a correction-rewriting workflow:
edit-span alignment and application, M2 annotation I/O, gold-label merging,
k-fold cross-inference data construction around an external corrector,
causal-LM training-text serialization, perplexity filtering of system
output at three granularities, and span-level P/R/F scoring.
"""

from .edits import Edit, EditSet, apply_edits, extract_edits
from .errors import (ConfigError, CorrectorError, GecFilterError,
                     InvalidEditError, InvalidEditSetError, M2ParseError,
                     ProtocolError, ScorerError, SerializationError)
from .filters import (filter_edit_combination, filter_edit_level,
                      filter_sentence_level)
from .kfold import (CandidateTriple, CorrectorHandle, ParallelExample,
                    cross_infer, partition, read_parallel_tsv, read_triples,
                    serialize_training_example, target_span,
                    write_training_text, write_triples)
from .lm import (CharNgramLM, ExternalScorer, LMScorer, perplexity,
                 sentence_perplexity, train_ngram)
from .m2 import M2Entry, parse_m2, write_m2
from .merging import build_candidate, merge_edit_sets
from .metrics import ScoreReport, SentenceScore, aggregate, f_beta, score_sentence

__version__ = "0.1.0"

__all__ = [
    "Edit", "EditSet", "extract_edits", "apply_edits",
    "M2Entry", "parse_m2", "write_m2",
    "merge_edit_sets", "build_candidate",
    "ParallelExample", "CandidateTriple", "CorrectorHandle",
    "partition", "cross_infer", "serialize_training_example", "target_span",
    "read_parallel_tsv", "read_triples", "write_triples",
    "write_training_text",
    "LMScorer", "CharNgramLM", "ExternalScorer", "train_ngram",
    "perplexity", "sentence_perplexity",
    "filter_sentence_level", "filter_edit_level", "filter_edit_combination",
    "f_beta", "score_sentence", "aggregate", "ScoreReport", "SentenceScore",
    "GecFilterError", "ConfigError", "InvalidEditError", "InvalidEditSetError",
    "M2ParseError", "SerializationError", "CorrectorError", "ProtocolError",
    "ScorerError",
    "__version__",
]
