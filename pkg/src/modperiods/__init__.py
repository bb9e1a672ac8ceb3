"""Representations of the modular group, vector-valued modular forms and exact periods."""

from .cyclofield import CycNum, parse_cycnum, zeta
from .modgroup import Mat2Z, Word, decompose, evaluate_word
from .reps import Rep, classify_all, catalog_rep, is_decomposable
from .genweights import WeightProfile, SplitVerdict, generating_weights, is_m_split
from .qseries import PuiseuxSeries, eta_pow4, cusp_forms_8A2, period_integral
from .periods import PeriodReport, run_example, extract_periods, assemble_period_matrix

__all__ = [
    "CycNum",
    "parse_cycnum",
    "zeta",
    "Mat2Z",
    "Word",
    "decompose",
    "evaluate_word",
    "Rep",
    "classify_all",
    "catalog_rep",
    "is_decomposable",
    "WeightProfile",
    "SplitVerdict",
    "generating_weights",
    "is_m_split",
    "PuiseuxSeries",
    "eta_pow4",
    "cusp_forms_8A2",
    "period_integral",
    "PeriodReport",
    "run_example",
    "extract_periods",
    "assemble_period_matrix",
]
