import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellsim import gedanken
from bellsim.gedanken import (GedankenConfig, analytic_ab, analytic_bb_prime, bell_lhs_gedanken,
                              outcomes_from_hidden, run_experiment, simulate_trial)

PI = math.pi
angles = st.floats(min_value=-2 * PI, max_value=4 * PI, allow_nan=False)


def bb_prime_by_intervals(theta_a, theta_b, theta_b_prime):
    """<BB'> by exact enumeration of lambda2 sub-intervals.

    For each A (probability 1/2) the unit interval is cut at both thresholds
    p(B = -A | A) = cos^2(d/2); on each piece B and B' are constant.
    """
    c_b = math.cos((theta_b - theta_a) / 2) ** 2
    c_bp = math.cos((theta_b_prime - theta_a) / 2) ** 2
    total = 0.0
    for a in (1, -1):
        cuts = sorted({0.0, c_b, c_bp, 1.0})
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            b = -a if mid < c_b else a
            bp = -a if mid < c_bp else a
            total += 0.5 * (hi - lo) * b * bp
    return total


def test_interval_oracle_sanity():
    assert bb_prime_by_intervals(0, 1.0, 1.0) == pytest.approx(1.0)
    assert bb_prime_by_intervals(0, PI, PI / 2) == pytest.approx(0.0)


@pytest.mark.parametrize("ta, tb, expected", [(0, 0, -1.0), (0, PI, 1.0), (0, PI / 3, -0.5)])
def test_analytic_ab(ta, tb, expected):
    assert analytic_ab(ta, tb) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("angles_, expected", [
    ((0, 1.3, 1.3), 1.0),
    ((0, PI, PI / 2), 0.0),
    ((0, 2 * PI / 3, PI / 3), 0.0),
])
def test_analytic_bb_prime_examples(angles_, expected):
    assert analytic_bb_prime(*angles_) == pytest.approx(expected, abs=1e-15)


@given(angles, angles, angles)
def test_analytic_bb_prime_matches_interval_oracle(ta, tb, tbp):
    assert analytic_bb_prime(ta, tb, tbp) == pytest.approx(bb_prime_by_intervals(ta, tb, tbp),
                                                           abs=1e-12)


@given(angles, angles, angles)
def test_bb_prime_symmetric_in_b_labels(ta, tb, tbp):
    assert analytic_bb_prime(ta, tb, tbp) == analytic_bb_prime(ta, tbp, tb)


@pytest.mark.parametrize("triple", [(0, 2 * PI / 3, PI / 3), (0, 0, 0), (0, PI, PI / 2)])
def test_bell_lhs_examples(triple):
    r = bell_lhs_gedanken(*triple)
    assert r.lhs == pytest.approx(1.0, abs=1e-12)
    assert r.satisfied and r.bound == 1.0


def test_saturation_on_grid():
    grid = np.arange(0, 2 * PI, PI / 180)[::7]
    worst = max(abs(bell_lhs_gedanken(ta, tb, tbp).lhs - 1.0)
                for ta, tb, tbp in itertools.product(grid, grid[::3], grid[::3]))
    assert worst <= 1e-12


def test_equal_settings_give_equal_outcomes():
    cfg = GedankenConfig(0.4, 1.9, 1.9, trials=500, seed=3)
    for i in range(cfg.trials):
        t = simulate_trial(cfg, i)
        assert t.b == t.b_prime


def test_zero_offset_gives_singlet_anticorrelation():
    cfg = GedankenConfig(0.7, 0.7, 2.0, trials=500, seed=4)
    assert all(simulate_trial(cfg, i).b == -simulate_trial(cfg, i).a for i in range(cfg.trials))


def test_opposite_settings_never_trigger_threshold():
    cfg = GedankenConfig(0, PI, PI, trials=2000, seed=5)
    for i in range(cfg.trials):
        t = simulate_trial(cfg, i)
        if t.a == 1:
            assert t.b == t.b_prime == 1


def test_trial_index_bounds():
    cfg = GedankenConfig(0, 1, 2, trials=10)
    with pytest.raises(IndexError):
        simulate_trial(cfg, 10)
    with pytest.raises(ValueError):
        GedankenConfig(0, 1, 2, trials=0)
    with pytest.raises(ValueError):
        GedankenConfig(0, math.nan, 2)


def test_single_trial_matches_vectorized_block():
    cfg = GedankenConfig(0.1, 2.2, -0.9, trials=3000, seed=11)
    lam1, lam2, a, b, bp = gedanken.simulate_block(cfg, 0, cfg.trials)
    for i in (0, 1, 1234, 2999):
        t = simulate_trial(cfg, i)
        assert (t.hv.lambda1, t.hv.lambda2, t.a, t.b, t.b_prime) == (lam1[i], lam2[i], a[i], b[i], bp[i])


def test_run_experiment_against_oracles():
    cfg = GedankenConfig(0, 2 * PI / 3, PI / 3, trials=10 ** 6, seed=0)
    corr = run_experiment(cfg)
    assert corr.source.value == "empirical"
    assert abs(corr[gedanken.PAIR_AB] - 0.5) <= 0.005
    assert abs(corr[gedanken.PAIR_AB_PRIME] + 0.5) <= 0.005
    assert abs(corr[gedanken.PAIR_BB_PRIME] - 0.0) <= 0.005


@settings(max_examples=15, deadline=None)
@given(angles, angles, angles, st.integers(0, 2 ** 64 - 1))
def test_empirical_converges_to_analytic(ta, tb, tbp, seed):
    n = 40_000
    corr = run_experiment(GedankenConfig(ta, tb, tbp, trials=n, seed=seed))
    exact = gedanken.analytic_correlations(ta, tb, tbp)
    for pair in gedanken.PAIRS:
        assert abs(corr[pair] - exact[pair]) <= 4 / math.sqrt(n)


def test_identical_b_settings_give_exact_unit_bb_prime():
    for n in (1, 7, 100_001):
        corr = run_experiment(GedankenConfig(0.3, 1.1, 1.1, trials=n, seed=n))
        assert corr[gedanken.PAIR_BB_PRIME] == 1.0


def test_worker_count_does_not_change_sums():
    cfg = GedankenConfig(0.2, 2.0, 0.9, trials=300_000, seed=21)
    assert gedanken.product_sums(cfg, 1) == gedanken.product_sums(cfg, 4) == gedanken.product_sums(cfg, 0)


def test_conditional_structure_per_a():
    # split the empirical <AB> by the value of A: both halves give -cos(delta)
    cfg = GedankenConfig(0, 2.1, 0.6, trials=200_000, seed=8)
    _, _, a, b, bp = gedanken.simulate_block(cfg, 0, cfg.trials)
    for sign in (1, -1):
        m = a == sign
        assert abs(np.mean(a[m] * b[m]) + math.cos(2.1)) < 4 / math.sqrt(m.sum())
        assert abs(np.mean(b[m] * bp[m]) - analytic_bb_prime(0, 2.1, 0.6)) < 4 / math.sqrt(m.sum())


def test_dump_replays_exactly():
    cfg = GedankenConfig(0.5, 2.5, -1.0, trials=2_500, seed=99)
    buf = io.StringIO()
    gedanken.write_trial_dump(cfg, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "trial,lambda1,lambda2,a,b,bprime"
    assert text.splitlines()[1].split(",")[3] in ("+1", "-1")
    records = gedanken.read_trial_dump(io.StringIO(text))
    assert len(records) == cfg.trials
    for rec in records:
        assert rec == simulate_trial(cfg, rec.trial)
        assert outcomes_from_hidden(cfg, rec.hv) == (rec.a, rec.b, rec.b_prime)


def test_bb_prime_is_not_a_function_of_b_difference():
    # both triples have theta_B - theta_B' = pi/2
    first = analytic_bb_prime(0, PI / 4, -PI / 4)
    second = analytic_bb_prime(0, 3 * PI / 4, PI / 4)
    assert first == pytest.approx(1.0)
    assert second == pytest.approx(1 - math.sqrt(2))
    assert abs(first - second) > 1.0


def test_cross_terms_depend_only_on_own_difference():
    assert analytic_ab(0.3, 1.4) == pytest.approx(analytic_ab(1.3, 2.4), abs=1e-15)
