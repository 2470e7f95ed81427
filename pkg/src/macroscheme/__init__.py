"""Bidirectional macro schemes found by simulated annealing."""

from .annealing import AnnealParams, AnnealState, RunResult, Transition, accept, run
from .certificate import (Attractor, CertificateReport, attractor_of, check_certificate, lower_bound,
                          verify_attractor)
from .estimator import LempelZivParser, MacroSchemeAnnealer
from .generators import GiveUp, de_bruijn, fibonacci, planted, thue_morse
from .linkcut import LinkCutForest
from .lz import lz_parse, lz_size
from .suffix_index import SAInterval, SuffixIndex
from .text import (SENTINEL, FormatError, LoopDetected, MacroScheme, Phrase, SentinelCollision, Text,
                   attach_sentinel, decode_position, materialize, read_scheme, validate, write_scheme)

__version__ = "0.1.0"

__all__ = [
    "AnnealParams", "AnnealState", "RunResult", "Transition", "accept", "run",
    "Attractor", "CertificateReport", "attractor_of", "check_certificate", "lower_bound", "verify_attractor",
    "LempelZivParser", "MacroSchemeAnnealer",
    "GiveUp", "de_bruijn", "fibonacci", "planted", "thue_morse",
    "LinkCutForest", "lz_parse", "lz_size", "SAInterval", "SuffixIndex",
    "SENTINEL", "FormatError", "LoopDetected", "MacroScheme", "Phrase", "SentinelCollision", "Text",
    "attach_sentinel", "decode_position", "materialize", "read_scheme", "validate", "write_scheme",
]
