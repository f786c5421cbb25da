import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellsim import hvsampler
from bellsim.hvsampler import RandomStream, draw_hidden_variables, outcome_a, outcome_b_given_a

unit = st.floats(min_value=0.0, max_value=1.0)
angles = st.floats(min_value=-20.0, max_value=20.0)


def test_same_address_same_draw():
    s = RandomStream(seed=12345, trial_index=987)
    assert draw_hidden_variables(s) == draw_hidden_variables(RandomStream(12345, 987))
    assert draw_hidden_variables(s) != draw_hidden_variables(RandomStream(12345, 988))
    assert draw_hidden_variables(s) != draw_hidden_variables(RandomStream(12346, 987))


def test_block_is_order_independent():
    whole = hvsampler.uniform_block(3, 0, 1000)
    parts = np.vstack([hvsampler.uniform_block(3, s, 100) for s in reversed(range(0, 1000, 100))][::-1])
    assert np.array_equal(whole, parts)
    hv = draw_hidden_variables(RandomStream(3, 417))
    assert (hv.lambda1, hv.lambda2) == (whole[417, 0], whole[417, 1])


def test_domains_are_distinct_streams():
    a = hvsampler.uniform_block(5, 0, 10, hvsampler.DOMAIN_HIDDEN_VARIABLES)
    b = hvsampler.uniform_block(5, 0, 10, hvsampler.DOMAIN_CHAIN)
    assert not np.array_equal(a, b)


def test_seed_range():
    RandomStream(2 ** 64 - 1, 0)
    with pytest.raises(ValueError):
        RandomStream(2 ** 64, 0)
    with pytest.raises(ValueError):
        RandomStream(-1, 0)
    with pytest.raises(ValueError):
        RandomStream(0, -1)


def test_uniform_moments():
    n = 10 ** 6
    lam1, lam2 = hvsampler.draw_hidden_variables_block(0, 0, n)
    assert lam1.min() >= 0.0 and lam1.max() < 1.0
    # 4 sigma bands, sigma = 1 / sqrt(12 N) for the mean
    assert abs(lam1.mean() - 0.5) < 0.002
    assert abs(lam2.mean() - 0.5) < 0.002
    assert abs(np.corrcoef(lam1, lam2)[0, 1]) < 0.004


@pytest.mark.parametrize("lam, expected", [(0.25, 1), (0.75, -1), (0.5, -1), (0.0, 1), (1.0, -1)])
def test_outcome_a(lam, expected):
    assert outcome_a(lam) == expected


@pytest.mark.parametrize("bad", [-0.01, 1.01])
def test_outcome_domain_errors(bad):
    with pytest.raises(ValueError):
        outcome_a(bad)
    with pytest.raises(ValueError):
        outcome_b_given_a(1, bad, 0.0)


def test_outcome_b_examples():
    assert outcome_b_given_a(1, 0.999, 0.0) == -1
    for lam in (0.0, 0.3, 0.999, 1.0):
        assert outcome_b_given_a(1, lam, math.pi) == 1
    assert outcome_b_given_a(1, 0.3, math.pi / 2) == -1
    assert outcome_b_given_a(1, 0.7, math.pi / 2) == 1
    with pytest.raises(ValueError):
        outcome_b_given_a(0, 0.3, 0.0)


@given(unit, angles)
def test_sign_symmetry(lam2, delta):
    assert outcome_b_given_a(-1, lam2, delta) == -outcome_b_given_a(1, lam2, delta)


@given(st.sampled_from([1, -1]), unit)
def test_threshold_flips_at_most_once(a, lam2):
    # sweep the threshold c = cos^2(delta/2) from 0 to 1 via delta from pi to 0
    deltas = np.linspace(math.pi, 0.0, 181)
    outs = [outcome_b_given_a(a, lam2, d) for d in deltas]
    assert sum(x != y for x, y in zip(outs, outs[1:])) <= 1


def test_vectorized_rules_match_scalar():
    lam1, lam2 = hvsampler.draw_hidden_variables_block(9, 0, 2000)
    a = hvsampler.outcomes_a(lam1)
    b = hvsampler.outcomes_b_given_a(a, lam2, 1.234)
    assert list(a) == [outcome_a(x) for x in lam1]
    assert list(b) == [outcome_b_given_a(int(ai), y, 1.234) for ai, y in zip(a, lam2)]


@pytest.mark.parametrize("delta", [0.3, 1.1, 2.0, 2.9, -1.7])
def test_conditional_frequencies(delta):
    n = 10 ** 5
    lam1, lam2 = hvsampler.draw_hidden_variables_block(77, 0, n)
    a = hvsampler.outcomes_a(lam1)
    b = hvsampler.outcomes_b_given_a(a, lam2, delta)
    p = math.cos(delta / 2) ** 2
    for sign in (1, -1):
        mask = a == sign
        freq = np.mean(b[mask] == -sign)
        assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / mask.sum())


def test_top_bit_seeds_are_distinct():
    top = [hvsampler.uniform_block(s, 0, 4) for s in (2 ** 64 - 1, 2 ** 64 - 2, 2 ** 63, 2 ** 63 + 1)]
    for x, y in zip(top, top[1:]):
        assert not np.array_equal(x, y)
