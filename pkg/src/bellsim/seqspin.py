"""Three successive spin measurements on one particle at angles 0, theta1, theta2.

The outcomes form a Markov chain: s0 is a fair coin, and each later outcome
keeps the previous sign with probability cos^2(d/2) or flips it with
probability sin^2(d/2), where d is the change in analyzer angle.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from . import hvsampler
from ._chunks import chunk_ranges, sum_over_chunks
from .core import (ChainRecord, CorrelationSet, CorrelationSource, DataColumns,
                   InequalityReport, check_angle, check_spin, format_spin)
from .ineq import bell3_from_correlations, bell3_from_sums

PAIR_S0S1 = ("s0", "s1")
PAIR_S1S2 = ("s1", "s2")
PAIR_S0S2 = ("s0", "s2")
PAIRS = (PAIR_S0S1, PAIR_S1S2, PAIR_S0S2)

DUMP_HEADER = ("trial", "s0", "s1", "s2")

SPINS = (1, -1)


@dataclass(frozen=True)
class ChainConfig:
    theta1: float
    theta2: float
    trials: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            object.__setattr__(self, name, check_angle(getattr(self, name), name))
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        hvsampler.check_seed(self.seed)


def transition_prob(s_from: int, s_to: int, delta: float) -> float:
    check_spin(s_from, "s_from")
    check_spin(s_to, "s_to")
    # cos^2(d/2) = (1 + cos d)/2 and sin^2(d/2) = (1 - cos d)/2
    c = math.cos(check_angle(delta, "delta"))
    return (1.0 + c) / 2.0 if s_to == s_from else (1.0 - c) / 2.0


def _keep_probs(config: ChainConfig) -> tuple[float, float]:
    return (transition_prob(1, 1, config.theta1),
            transition_prob(1, 1, config.theta2 - config.theta1))


def _chain_from_uniforms(u: np.ndarray, keep1: float, keep2: float):
    s0 = np.where(u[:, 0] < 0.5, 1, -1).astype(np.int64)
    s1 = np.where(u[:, 1] < keep1, s0, -s0)
    s2 = np.where(u[:, 2] < keep2, s1, -s1)
    return s0, s1, s2


def simulate_block(config: ChainConfig, start: int, count: int):
    u = hvsampler.uniform_block(config.seed, start, count, hvsampler.DOMAIN_CHAIN)
    return _chain_from_uniforms(u, *_keep_probs(config))


def simulate_chain(config: ChainConfig, trial_index: int) -> ChainRecord:
    if not 0 <= trial_index < config.trials:
        raise IndexError(f"trial_index {trial_index} outside [0, {config.trials})")
    s0, s1, s2 = simulate_block(config, trial_index, 1)
    return ChainRecord(trial_index, int(s0[0]), int(s1[0]), int(s2[0]))


def simulate_columns(config: ChainConfig) -> DataColumns:
    return DataColumns(("s0", "s1", "s2"), simulate_block(config, 0, config.trials))


def product_sums(config: ChainConfig, workers: int | None = None) -> tuple[int, int, int]:
    """Integer sums of s0*s1, s1*s2 and s0*s2."""

    def kernel(start, count):
        s0, s1, s2 = simulate_block(config, start, count)
        return int(np.dot(s0, s1)), int(np.dot(s1, s2)), int(np.dot(s0, s2))

    return tuple(sum_over_chunks(kernel, config.trials, workers))


def run_chain(config: ChainConfig, workers: int | None = None) -> CorrelationSet:
    n = config.trials
    s01, s12, s02 = product_sums(config, workers)
    return CorrelationSet(
        {PAIR_S0S1: s01 / n, PAIR_S1S2: s12 / n, PAIR_S0S2: s02 / n},
        CorrelationSource.EMPIRICAL,
    )


def joint_prob(s0: int, s1: int, s2: int, theta1: float, theta2: float) -> float:
    """p(s2 | s1) p(s1 | s0) p(s0) with p(s0) = 1/2."""
    return (transition_prob(s1, s2, theta2 - theta1)
            * transition_prob(s0, s1, theta1) * 0.5)


def joint_prob_s2_s0(s2: int, s0: int, theta1: float, theta2: float) -> float:
    return sum(joint_prob(s0, s1, s2, theta1, theta2) for s1 in SPINS)


def correlations_by_summation(theta1: float, theta2: float) -> CorrelationSet:
    """All three correlations as explicit sums over the eight outcome triples."""
    sums = dict.fromkeys(PAIRS, 0.0)
    for s0, s1, s2 in itertools.product(SPINS, repeat=3):
        p = joint_prob(s0, s1, s2, theta1, theta2)
        sums[PAIR_S0S1] += s0 * s1 * p
        sums[PAIR_S1S2] += s1 * s2 * p
        sums[PAIR_S0S2] += s0 * s2 * p
    return CorrelationSet(sums, CorrelationSource.ANALYTIC_NONSTATIONARY)


def analytic_chain_correlations(theta1: float, theta2: float) -> CorrelationSet:
    c01 = math.cos(theta1)
    c12 = math.cos(theta2 - theta1)
    return CorrelationSet(
        {PAIR_S0S1: c01, PAIR_S1S2: c12, PAIR_S0S2: c01 * c12},
        CorrelationSource.ANALYTIC_NONSTATIONARY,
    )


def chain_margin(theta1: float, theta2: float) -> float:
    """Closed-form slack 2 sin^2((theta2 - theta1)/2) (1 - |cos theta1|) >= 0."""
    return 2.0 * math.sin((theta2 - theta1) / 2.0) ** 2 * (1.0 - abs(math.cos(theta1)))


def bell_lhs_chain(theta1: float, theta2: float) -> InequalityReport:
    """Three-list inequality with a = s(0), b = s(theta1), b' = s(theta2).

    lhs = |cos t1 - cos t1 cos(t2 - t1)| + cos(t2 - t1), bound 1.
    """
    corr = analytic_chain_correlations(theta1, theta2)
    return bell3_from_correlations(corr[PAIR_S0S1], corr[PAIR_S0S2], corr[PAIR_S1S2])


def empirical_report(config: ChainConfig, workers: int | None = None) -> InequalityReport:
    s01, s12, s02 = product_sums(config, workers)
    return bell3_from_sums(s01, s02, s12, config.trials)


def write_trial_dump(config: ChainConfig, out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DUMP_HEADER)
    for start, count in chunk_ranges(config.trials):
        s0, s1, s2 = simulate_block(config, start, count)
        writer.writerows(
            (start + k, format_spin(s0[k]), format_spin(s1[k]), format_spin(s2[k]))
            for k in range(count)
        )
