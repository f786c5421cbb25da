"""Uniform hidden variables and the threshold rules that turn them into spins.

Random numbers come from a counter-based generator (Philox-4x64): trial ``i``
under seed ``s`` always reads the 4-word block at counter ``i`` of the stream
keyed by ``s``. Word ``j`` of that block is sub-stream ``j``; the hidden
variables take words 0 and 1, the sequential chain takes words 0, 1 and 2.
Any slice of trials can therefore be generated independently and in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MINUS, PLUS, HiddenVariables, check_angle, check_spin

SEED_BITS = 64
WORDS_PER_TRIAL = 4

# Second key word separates experiments sharing one seed.
DOMAIN_HIDDEN_VARIABLES = 0
DOMAIN_CHAIN = 1

_TO_UNIT = 2.0 ** -53


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2 ** SEED_BITS:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


@dataclass(frozen=True)
class RandomStream:
    """Address of one trial's random block: (seed, trial_index)."""

    seed: int
    trial_index: int

    def __post_init__(self):
        check_seed(self.seed)
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")


def uniform_block(seed: int, start: int, count: int,
                  domain: int = DOMAIN_HIDDEN_VARIABLES) -> np.ndarray:
    """Uniforms on [0, 1) for trials ``start .. start+count-1``.

    Returns a ``(count, 4)`` float64 array; row ``k`` depends only on
    ``(seed, domain, start + k)``.
    """
    seed = check_seed(seed)
    if start < 0 or count < 0:
        raise ValueError("start and count must be non-negative")
    if count == 0:
        return np.empty((0, WORDS_PER_TRIAL))
    bitgen = np.random.Philox(key=np.array([seed, domain], dtype=np.uint64),
                              counter=np.array([start, 0, 0, 0], dtype=np.uint64))
    raw = bitgen.random_raw(WORDS_PER_TRIAL * count)
    # top 53 bits -> exactly representable multiples of 2**-53
    return (raw >> np.uint64(11)).astype(np.float64).reshape(count, WORDS_PER_TRIAL) * _TO_UNIT


def draw_hidden_variables(stream: RandomStream) -> HiddenVariables:
    u = uniform_block(stream.seed, stream.trial_index, 1)[0]
    return HiddenVariables(float(u[0]), float(u[1]))


def draw_hidden_variables_block(seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`draw_hidden_variables` over consecutive trials."""
    u = uniform_block(seed, start, count, DOMAIN_HIDDEN_VARIABLES)
    return u[:, 0].copy(), u[:, 1].copy()


def _check_unit(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def anticorrelation_threshold(delta: float) -> float:
    """cos^2(delta/2): probability that B is opposite to A.

    Evaluated as (1 + cos delta)/2, which is exact at delta = 0, pi/2, pi.
    """
    return (1.0 + math.cos(check_angle(delta, "delta"))) / 2.0


def outcome_a(lambda1: float) -> int:
    """+1 on [0, 0.5), -1 on [0.5, 1]."""
    return PLUS if _check_unit("lambda1", lambda1) < 0.5 else MINUS


def outcome_b_given_a(a: int, lambda2: float, delta: float) -> int:
    """Spin at B given the spin ``a`` at A and ``delta = theta_B - theta_A``.

    B = -a when ``lambda2 < cos^2(delta/2)``, otherwise B = a.
    """
    a = check_spin(a, "a")
    lambda2 = _check_unit("lambda2", lambda2)
    return -a if lambda2 < anticorrelation_threshold(delta) else a


def outcomes_a(lambda1: np.ndarray) -> np.ndarray:
    lambda1 = np.asarray(lambda1, dtype=np.float64)
    if np.any((lambda1 < 0.0) | (lambda1 > 1.0)):
        raise ValueError("lambda1 values must lie in [0, 1]")
    return np.where(lambda1 < 0.5, PLUS, MINUS).astype(np.int64)


def outcomes_b_given_a(a: np.ndarray, lambda2: np.ndarray, delta: float) -> np.ndarray:
    lambda2 = np.asarray(lambda2, dtype=np.float64)
    if np.any((lambda2 < 0.0) | (lambda2 > 1.0)):
        raise ValueError("lambda2 values must lie in [0, 1]")
    c = anticorrelation_threshold(delta)
    a = np.asarray(a, dtype=np.int64)
    return np.where(lambda2 < c, -a, a)
