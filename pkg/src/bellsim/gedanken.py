"""EPR-Bohm gedankenexperiment with a counterfactual second setting at B.

Each trial draws (lambda1, lambda2). A comes from lambda1 alone; B and B'
are both generated from A and the *same* lambda2, using the settings at A.
The resulting triple of correlations is nonstationary in angle: <AB> and
<AB'> are singlet cosines but <BB'> depends on both offsets from theta_A.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from . import hvsampler
from ._chunks import chunk_ranges, sum_over_chunks
from .core import (CorrelationSet, CorrelationSource, DataColumns, HiddenVariables,
                   InequalityReport, TrialRecord, check_angle, format_real,
                   format_spin)
from .ineq import bell3_from_correlations, bell3_from_sums

PAIR_AB = ("a", "b")
PAIR_AB_PRIME = ("a", "b_prime")
PAIR_BB_PRIME = ("b", "b_prime")
PAIRS = (PAIR_AB, PAIR_AB_PRIME, PAIR_BB_PRIME)

DUMP_HEADER = ("trial", "lambda1", "lambda2", "a", "b", "bprime")


@dataclass(frozen=True)
class GedankenConfig:
    theta_a: float
    theta_b: float
    theta_b_prime: float
    trials: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        for name in ("theta_a", "theta_b", "theta_b_prime"):
            object.__setattr__(self, name, check_angle(getattr(self, name), name))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        hvsampler.check_seed(self.seed)

    @property
    def delta_b(self) -> float:
        return self.theta_b - self.theta_a

    @property
    def delta_b_prime(self) -> float:
        return self.theta_b_prime - self.theta_a


def outcomes_from_hidden(config: GedankenConfig, hv: HiddenVariables) -> tuple[int, int, int]:
    a = hvsampler.outcome_a(hv.lambda1)
    b = hvsampler.outcome_b_given_a(a, hv.lambda2, config.delta_b)
    b_prime = hvsampler.outcome_b_given_a(a, hv.lambda2, config.delta_b_prime)
    return a, b, b_prime


def simulate_trial(config: GedankenConfig, trial_index: int) -> TrialRecord:
    if not 0 <= trial_index < config.trials:
        raise IndexError(f"trial_index {trial_index} outside [0, {config.trials})")
    hv = hvsampler.draw_hidden_variables(hvsampler.RandomStream(config.seed, trial_index))
    return TrialRecord(trial_index, hv, *outcomes_from_hidden(config, hv))


def simulate_block(config: GedankenConfig, start: int, count: int):
    """Vectorized trials ``start .. start+count-1``: (lambda1, lambda2, a, b, b')."""
    lam1, lam2 = hvsampler.draw_hidden_variables_block(config.seed, start, count)
    a = hvsampler.outcomes_a(lam1)
    b = hvsampler.outcomes_b_given_a(a, lam2, config.delta_b)
    b_prime = hvsampler.outcomes_b_given_a(a, lam2, config.delta_b_prime)
    return lam1, lam2, a, b, b_prime


def simulate_columns(config: GedankenConfig) -> DataColumns:
    _, _, a, b, b_prime = simulate_block(config, 0, config.trials)
    return DataColumns(("a", "b", "b_prime"), (a, b, b_prime))


def product_sums(config: GedankenConfig, workers: int | None = None) -> tuple[int, int, int]:
    """Integer sums of a*b, a*b' and b*b' over all trials."""

    def kernel(start, count):
        _, _, a, b, bp = simulate_block(config, start, count)
        return int(np.dot(a, b)), int(np.dot(a, bp)), int(np.dot(b, bp))

    return tuple(sum_over_chunks(kernel, config.trials, workers))


def run_experiment(config: GedankenConfig, workers: int | None = None) -> CorrelationSet:
    n = config.trials
    s_ab, s_abp, s_bbp = product_sums(config, workers)
    return CorrelationSet(
        {PAIR_AB: s_ab / n, PAIR_AB_PRIME: s_abp / n, PAIR_BB_PRIME: s_bbp / n},
        CorrelationSource.EMPIRICAL,
    )


def analytic_ab(theta_a: float, theta_b: float) -> float:
    """Singlet correlation -cos(theta_A - theta_B)."""
    return -math.cos(theta_a - theta_b)


def analytic_bb_prime(theta_a: float, theta_b: float, theta_b_prime: float) -> float:
    """<BB'> of the construction: 1 - |cos(theta_B - theta_A) - cos(theta_B' - theta_A)|.

    B and B' share lambda2 and differ only where lambda2 falls between their
    two thresholds, an interval of length |c_B - c_B'| with c = (1 + cos)/2.
    """
    return 1.0 - abs(math.cos(theta_b - theta_a) - math.cos(theta_b_prime - theta_a))


def analytic_correlations(theta_a: float, theta_b: float, theta_b_prime: float) -> CorrelationSet:
    return CorrelationSet(
        {
            PAIR_AB: analytic_ab(theta_a, theta_b),
            PAIR_AB_PRIME: analytic_ab(theta_a, theta_b_prime),
            PAIR_BB_PRIME: analytic_bb_prime(theta_a, theta_b, theta_b_prime),
        },
        CorrelationSource.ANALYTIC_NONSTATIONARY,
    )


def bell_lhs_gedanken(theta_a: float, theta_b: float, theta_b_prime: float) -> InequalityReport:
    corr = analytic_correlations(theta_a, theta_b, theta_b_prime)
    return bell3_from_correlations(corr[PAIR_AB], corr[PAIR_AB_PRIME], corr[PAIR_BB_PRIME])


def empirical_report(config: GedankenConfig, workers: int | None = None) -> InequalityReport:
    """Three-list audit of the simulated columns, exact in integers."""
    s_ab, s_abp, s_bbp = product_sums(config, workers)
    return bell3_from_sums(s_ab, s_abp, s_bbp, config.trials)


def write_trial_dump(config: GedankenConfig, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DUMP_HEADER)
    for start, count in chunk_ranges(config.trials):
        lam1, lam2, a, b, bp = simulate_block(config, start, count)
        writer.writerows(
            (start + k, format_real(lam1[k]), format_real(lam2[k]),
             format_spin(a[k]), format_spin(b[k]), format_spin(bp[k]))
            for k in range(count)
        )


def read_trial_dump(src: IO[str]) -> list[TrialRecord]:
    reader = csv.reader(src)
    header = tuple(next(reader))
    if header != DUMP_HEADER:
        raise ValueError(f"unexpected trial dump header {header}")
    return [
        TrialRecord(int(t), HiddenVariables(float(l1), float(l2)), int(a), int(b), int(bp))
        for t, l1, l2, a, b, bp in reader
    ]
