"""Pisot sequences, their linear recurrences, and certified proofs or disproofs."""
from ._kernels import BACKEND
from .decide import (
    BinetData,
    DecisionReport,
    binet_coefficients,
    compute_N0,
    decide,
    discrepancy,
    end_to_end,
    ratio_bound,
)
from .families import FamilyTemplate, load_templates, verify_family
from .guess import InsufficientPrefix, LinearRecurrence, NotFound, eval_recurrence, guess_recurrence
from .roots import (
    CharPoly,
    PrecisionExhausted,
    RepeatedRoots,
    RootEnclosure,
    SpectrumClass,
    certified_spectrum,
    certify_roots,
    classify_spectrum,
)
from .scan import ScanRecord, scan
from .sequence import PisotParams, PivotVanished, SequencePrefix, generate, hankel_step, next_term

__version__ = "0.1.0"
