"""Nonstationary Bell correlations: hidden-variable simulation and exact inequality audits."""

from .core import (CorrelationSet, CorrelationSource, DataColumns, InequalityForm,
                   InequalityReport, InternalConsistencyError, LengthMismatchError,
                   correlation_estimate)
from .gedanken import GedankenConfig, analytic_ab, analytic_bb_prime, bell_lhs_gedanken
from .ineq import (StationaryAssumption, bell3_audit, ch_audit, chsh4_audit,
                   correlations_to_joint, stationary_lhs)
from .seqspin import ChainConfig, analytic_chain_correlations, bell_lhs_chain

__version__ = "0.1.0"

__all__ = [
    "ChainConfig", "CorrelationSet", "CorrelationSource", "DataColumns", "GedankenConfig",
    "InequalityForm", "InequalityReport", "InternalConsistencyError", "LengthMismatchError",
    "StationaryAssumption", "analytic_ab", "analytic_bb_prime", "analytic_chain_correlations",
    "bell3_audit", "bell_lhs_chain", "bell_lhs_gedanken", "ch_audit", "chsh4_audit",
    "correlation_estimate", "correlations_to_joint", "stationary_lhs",
]
