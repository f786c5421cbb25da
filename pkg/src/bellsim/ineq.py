"""Bell-type inequality audits.

List audits (three-list Bell, four-list CHSH) run on integer product sums
and are exact: any set of genuine ±1 lists satisfies them, so a violation
raises :class:`InternalConsistencyError` rather than being reported.

Correlation-set audits take real numbers, which may come from anywhere,
including the single-cosine (angle-stationary) assignment that violates
the three-list bound.

The CH audit maps each correlation to joint probabilities assuming
P++ = P-- and P+- = P-+ with unbiased marginals, then evaluates

    P(a, b) - P(a, b') + P(a', b) + P(a', b') - P(a') - P(b) <= 0

where P(x, y) is the probability of the chosen joint event. Under that
mapping the CH expression equals (S - 2) / 4 with S the matching CHSH
combination, so CH is violated exactly when S > 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (EXACT_TOLERANCE, REAL_TOLERANCE, CorrelationSet, CorrelationSource,
                   DataColumns, InequalityForm, InequalityReport,
                   InternalConsistencyError, correlation_sum)

BELL3_BOUND = 1
CHSH4_BOUND = 2
CH_BOUND = 0


def _exact_report(form, lhs_num: int, bound: int, n: int) -> InequalityReport:
    lhs = Fraction(lhs_num, n)
    return InequalityReport(form, float(lhs), float(bound), float(bound - lhs),
                            lhs <= bound, EXACT_TOLERANCE)


def bell3_from_sums(s_ab: int, s_ab_prime: int, s_bb_prime: int, n: int) -> InequalityReport:
    """Exact report for |<ab> - <ab'>| + <bb'> <= 1 from integer product sums."""
    return _exact_report(InequalityForm.BELL3, abs(s_ab - s_ab_prime) + s_bb_prime,
                         BELL3_BOUND, n)


def chsh4_from_sums(s_ab: int, s_ab_prime: int, s_a_prime_b: int,
                    s_a_prime_b_prime: int, n: int) -> InequalityReport:
    return _exact_report(InequalityForm.CHSH4,
                         abs(s_ab + s_ab_prime + s_a_prime_b - s_a_prime_b_prime),
                         CHSH4_BOUND, n)


def _require_columns(data: DataColumns, count: int):
    if len(data) != count:
        raise ValueError(f"expected {count} columns, got {len(data)}: {data.names}")
    return data.columns


def bell3_audit(data: DataColumns) -> InequalityReport:
    """Audit three aligned lists taken in order as a, b, b'."""
    a, b, b_prime = _require_columns(data, 3)
    report = bell3_from_sums(correlation_sum(a, b), correlation_sum(a, b_prime),
                             correlation_sum(b, b_prime), data.length)
    if not report.satisfied:
        raise InternalConsistencyError(
            f"three-list identity failed on genuine +/-1 data: lhs = {report.lhs}")
    return report


def chsh4_audit(data: DataColumns) -> InequalityReport:
    """Audit four aligned lists taken in order as a, a', b, b'."""
    a, a_prime, b, b_prime = _require_columns(data, 4)
    report = chsh4_from_sums(correlation_sum(a, b), correlation_sum(a, b_prime),
                             correlation_sum(a_prime, b), correlation_sum(a_prime, b_prime),
                             data.length)
    if not report.satisfied:
        raise InternalConsistencyError(
            f"four-list identity failed on genuine +/-1 data: lhs = {report.lhs}")
    return report


def _check_correlation(value: float, name: str) -> float:
    value = float(value)
    if not -1.0 <= value <= 1.0:
        raise ValueError(f"{name} = {value} is not a correlation in [-1, 1]")
    return value


def bell3_from_correlations(ab: float, ab_prime: float, bb_prime: float,
                            tolerance: float = REAL_TOLERANCE) -> InequalityReport:
    lhs = abs(ab - ab_prime) + bb_prime
    return InequalityReport.upper_bound(InequalityForm.BELL3, lhs, BELL3_BOUND, tolerance)


def chsh_from_correlations(ab: float, ab_prime: float, a_prime_b: float, a_prime_b_prime: float,
                           tolerance: float = REAL_TOLERANCE) -> InequalityReport:
    lhs = abs(ab + ab_prime + a_prime_b - a_prime_b_prime)
    return InequalityReport.upper_bound(InequalityForm.CHSH4, lhs, CHSH4_BOUND, tolerance)


class StationaryAssumption(str, enum.Enum):
    # every pair, same side or not, gets the singlet form -cos(difference)
    ALL_PAIRS_NEGATIVE_COSINE = "all-pairs-negative-cosine"
    # B and B' are related through B(theta) = -A(theta), giving +cos
    SAME_SIDE_POSITIVE_COSINE = "same-side-positive-cosine"


def stationary_correlations(theta_a: float, theta_b: float, theta_b_prime: float,
                            assumption=StationaryAssumption.ALL_PAIRS_NEGATIVE_COSINE
                            ) -> CorrelationSet:
    assumption = StationaryAssumption(assumption)
    bb = math.cos(theta_b - theta_b_prime)
    if assumption is StationaryAssumption.ALL_PAIRS_NEGATIVE_COSINE:
        bb = -bb
    return CorrelationSet(
        {("a", "b"): -math.cos(theta_a - theta_b),
         ("a", "b_prime"): -math.cos(theta_a - theta_b_prime),
         ("b", "b_prime"): bb},
        CorrelationSource.STATIONARY_ASSUMED,
    )


def stationary_lhs(theta_a: float, theta_b: float, theta_b_prime: float,
                   assumption=StationaryAssumption.ALL_PAIRS_NEGATIVE_COSINE,
                   bb_prime: float | None = None) -> InequalityReport:
    """Three-list inequality for correlations that depend on angle differences only.

    ``bb_prime`` replaces the assumed <BB'> with a supplied value, e.g. the
    nonstationary one, keeping the two cosine cross-terms.
    """
    corr = stationary_correlations(theta_a, theta_b, theta_b_prime, assumption)
    if bb_prime is None:
        bb_prime = corr[("b", "b_prime")]
    return bell3_from_correlations(corr[("a", "b")], corr[("a", "b_prime")], bb_prime)


@dataclass(frozen=True)
class JointProbTable:
    """Joint outcome probabilities for one pair of settings."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float
    marginal_a: float = 0.5
    marginal_b: float = 0.5

    def __post_init__(self):
        for name in ("p_pp", "p_pm", "p_mp", "p_mm", "marginal_a", "marginal_b"):
            v = getattr(self, name)
            if not -REAL_TOLERANCE <= v <= 1.0 + REAL_TOLERANCE:
                raise ValueError(f"{name} = {v} is not a probability")
        total = self.p_pp + self.p_pm + self.p_mp + self.p_mm
        if abs(total - 1.0) > REAL_TOLERANCE:
            raise ValueError(f"joint probabilities sum to {total}, not 1")

    @property
    def symmetric(self) -> bool:
        return (abs(self.p_pp - self.p_mm) <= REAL_TOLERANCE
                and abs(self.p_pm - self.p_mp) <= REAL_TOLERANCE)

    @property
    def correlation(self) -> float:
        return self.p_pp - self.p_pm - self.p_mp + self.p_mm


def correlations_to_joint(corr: float) -> JointProbTable:
    corr = _check_correlation(corr, "corr")
    same = (1.0 + corr) / 4.0
    diff = (1.0 - corr) / 4.0
    return JointProbTable(same, diff, diff, same, 0.5, 0.5)


class JointEvent(str, enum.Enum):
    # P(A=+, B=+) with marginals P(A=+), P(B=+)
    PLUS_PLUS = "pp"
    # P(A=+, B=-) with marginals P(A=+), P(B=-): B relabelled, suits anticorrelated sources
    PLUS_MINUS = "pm"


def ch_expression(ab: float, ab_prime: float, a_prime_b: float, a_prime_b_prime: float,
                  event=JointEvent.PLUS_PLUS) -> float:
    event = JointEvent(event)
    tables = [correlations_to_joint(c) for c in (ab, ab_prime, a_prime_b, a_prime_b_prime)]
    if event is JointEvent.PLUS_PLUS:
        p = [t.p_pp for t in tables]
    else:
        p = [t.p_pm for t in tables]
    # marginals are 1/2 for every setting and outcome under the symmetric mapping
    return p[0] - p[1] + p[2] + p[3] - tables[2].marginal_a - tables[0].marginal_b


def matching_chsh(ab: float, ab_prime: float, a_prime_b: float, a_prime_b_prime: float,
                  event=JointEvent.PLUS_PLUS) -> float:
    """The CHSH combination S with ch_expression == (S - 2) / 4."""
    s = ab - ab_prime + a_prime_b + a_prime_b_prime
    return s if JointEvent(event) is JointEvent.PLUS_PLUS else -s


def ch_audit(ab: float, ab_prime: float, a_prime_b: float, a_prime_b_prime: float,
             event=JointEvent.PLUS_PLUS, tolerance: float = REAL_TOLERANCE) -> InequalityReport:
    for name, value in (("ab", ab), ("ab_prime", ab_prime), ("a_prime_b", a_prime_b),
                        ("a_prime_b_prime", a_prime_b_prime)):
        _check_correlation(value, name)
    lhs = ch_expression(ab, ab_prime, a_prime_b, a_prime_b_prime, event)
    return InequalityReport.upper_bound(InequalityForm.CH, lhs, CH_BOUND, tolerance)


def correlations_from_columns(data: DataColumns) -> tuple[float, float, float, float]:
    """<ab>, <ab'>, <a'b>, <a'b'> of four columns ordered a, a', b, b'."""
    a, a_prime, b, b_prime = _require_columns(data, 4)
    n = data.length
    return (correlation_sum(a, b) / n, correlation_sum(a, b_prime) / n,
            correlation_sum(a_prime, b) / n, correlation_sum(a_prime, b_prime) / n)
