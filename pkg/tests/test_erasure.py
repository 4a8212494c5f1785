import itertools
import math

import numba
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hgpopt.erasure import (
    CostEstimate,
    EnumerationLimitError,
    Erasure,
    estimate_failure_rate,
    is_correctable,
    is_correctable_bruteforce,
    point_seed,
    sample_erasure,
    set_threads,
    sweep_curve,
    trial_erasure,
)
from hgpopt.hgp import build_hgp
from hgpopt.tanner import binary_matrix, random_regular


def all_erasures(n, max_weight=None):
    top = n if max_weight is None else max_weight
    for w in range(top + 1):
        for sup in itertools.combinations(range(n), w):
            yield Erasure(n, sup)


# types ----------------------------------------------------------------------------


def test_erasure_validation():
    with pytest.raises(IndexError):
        Erasure(3, (3,))
    with pytest.raises(ValueError):
        Erasure(3, (1, 1))
    e = Erasure.from_mask(np.array([0, 1, 1, 0], dtype=bool))
    assert e.support == (1, 2) and len(e) == 2
    assert e.mask().tolist() == [False, True, True, False]


def test_cost_estimate_fields():
    est = CostEstimate(25, 100, 0.3)
    assert est.rate == 0.25
    assert est.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 100), rel=1e-15)
    assert CostEstimate(0, 10, 0.1).std_error == 0
    assert CostEstimate(10, 10, 0.1).std_error == 0
    assert CostEstimate(0, 10_000, 0.1).clamped_rate() == 5e-5
    assert est.to_dict() == {"p": 0.3, "trials": 100, "failures": 25, "rate": 0.25, "std_error": est.std_error}


# sampling -------------------------------------------------------------------------


def test_sample_extremes():
    rng = np.random.default_rng(0)
    assert len(sample_erasure(50, 0.0, rng)) == 0
    assert len(sample_erasure(50, 1.0, rng)) == 50
    with pytest.raises(ValueError):
        sample_erasure(5, 1.5, rng)


def test_sample_mean_size():
    rng = np.random.default_rng(1)
    sizes = np.array([len(sample_erasure(625, 9 / 32, rng)) for _ in range(20_000)])
    sd = math.sqrt(625 * (9 / 32) * (23 / 32) / sizes.size)
    assert abs(sizes.mean() - 175.78125) < 3 * sd


def test_trial_erasure_mean_size():
    # the counter-based stream used by the estimator, over 10^5 trials
    sizes = np.array([len(trial_erasure(625, 9 / 32, 42, t)) for t in range(100_000)])
    sd = math.sqrt(625 * (9 / 32) * (23 / 32) / sizes.size)
    assert abs(sizes.mean() - 175.78125) < 3 * sd


def test_trial_erasures_are_independent_across_qubits():
    masks = np.array([trial_erasure(40, 0.5, 3, t).mask() for t in range(4000)], dtype=float)
    corr = np.corrcoef(masks.T)
    off = corr[~np.eye(40, dtype=bool)]
    assert np.abs(off).max() < 5 / math.sqrt(4000)


# correctability -------------------------------------------------------------------


def test_trivial_erasures(code5, code13, code625):
    for code in (code5, code13, code625):
        n = code.num_qubits
        assert is_correctable(code, Erasure(n, ()))
        assert not is_correctable(code, Erasure(n, tuple(range(n))))
        assert code.engine.is_correctable(Erasure(n, ()))
        assert not code.engine.is_correctable(Erasure(n, tuple(range(n))))
    assert is_correctable_bruteforce(code13, Erasure(13, ()))


def test_wrong_size_erasure(code5):
    with pytest.raises(IndexError):
        is_correctable(code5, Erasure(4, ()))
    with pytest.raises(IndexError):
        code5.engine.is_correctable(Erasure(4, ()))


def test_bruteforce_limit(code13):
    with pytest.raises(EnumerationLimitError):
        is_correctable_bruteforce(code13, Erasure(13, tuple(range(13))), limit=12)


def test_all_implementations_agree_on_small_codes(code5, code13):
    for code in (code5, code13):
        for e in all_erasures(code.num_qubits):
            expect = is_correctable_bruteforce(code, e)
            assert is_correctable(code, e) == expect
            assert code.engine.is_correctable(e, peel=True) == expect
            assert code.engine.is_correctable(e, peel=False) == expect


def test_13_code_has_distance_three(code13):
    assert all(is_correctable_bruteforce(code13, e) for e in all_erasures(13, 2))
    assert not all(is_correctable_bruteforce(code13, Erasure(13, s)) for s in itertools.combinations(range(13), 3))


def test_random_erasures_of_5_code(code5):
    rng = np.random.default_rng(9)
    for _ in range(1000):
        e = sample_erasure(5, 0.5, rng)
        assert is_correctable(code5, e) == is_correctable_bruteforce(code5, e)


@st.composite
def small_codes(draw):
    cw, rw, k = draw(st.sampled_from([(2, 3, 1), (2, 4, 1), (3, 4, 1), (2, 3, 2)]))
    s = random_regular(cw * k, rw * k, cw, rw, draw(st.integers(0, 2**32 - 1)))
    return build_hgp(binary_matrix(s))


@settings(max_examples=30)
@given(small_codes(), st.integers(0, 2**32 - 1), st.floats(0.02, 0.4))
def test_engine_matches_rank_form(code, seed, p):
    rng = np.random.default_rng(seed)
    for _ in range(25):
        e = sample_erasure(code.num_qubits, p, rng)
        expect = is_correctable(code, e)
        assert code.engine.is_correctable(e, peel=True) == expect
        assert code.engine.is_correctable(e, peel=False) == expect
        if len(e) <= 12:
            assert is_correctable_bruteforce(code, e) == expect


@settings(max_examples=30)
@given(small_codes(), st.integers(0, 2**32 - 1))
def test_subset_monotonicity(code, seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        big = sample_erasure(code.num_qubits, 0.35, rng)
        keep = rng.random(len(big)) < 0.6
        small = Erasure(code.num_qubits, tuple(i for i, k in zip(big.support, keep) if k))
        if is_correctable(code, big):
            assert is_correctable(code, small)


def test_engine_matches_rank_form_on_625(code625):
    rng = np.random.default_rng(5)
    for _ in range(150):
        e = sample_erasure(625, 9 / 32, rng)
        assert code625.engine.is_correctable(e, peel=False) == is_correctable(code625, e)


# estimation -----------------------------------------------------------------------


def test_rate_extremes(code13, code625):
    for code in (code13, code625):
        assert estimate_failure_rate(code, 0.0, 500, 1).failures == 0
        assert estimate_failure_rate(code, 1.0, 500, 1).failures == 500


def test_estimator_counts_the_trial_erasures(code13):
    outcomes = code13.engine.trial_outcomes(0.3, 400, 77)
    expect = [not is_correctable(code13, trial_erasure(13, 0.3, 77, t)) for t in range(400)]
    assert outcomes.tolist() == expect
    assert estimate_failure_rate(code13, 0.3, 400, 77).failures == sum(expect)


def test_estimator_is_a_prefix_of_longer_runs(code625):
    short = code625.engine.trial_outcomes(9 / 32, 300, 5)
    long = code625.engine.trial_outcomes(9 / 32, 900, 5)
    assert np.array_equal(short, long[:300])


def test_estimator_rejects_bad_arguments(code5):
    with pytest.raises(ValueError):
        estimate_failure_rate(code5, 0.5, 0, 1)
    with pytest.raises(ValueError):
        estimate_failure_rate(code5, -0.1, 10, 1)


def test_estimate_independent_of_thread_count(code625):
    ref = estimate_failure_rate(code625, 9 / 32, 3000, 123)
    try:
        for n in (1, 2, numba.config.NUMBA_NUM_THREADS):
            set_threads(n)
            assert estimate_failure_rate(code625, 9 / 32, 3000, 123) == ref
    finally:
        set_threads(None)


def test_peel_does_not_change_estimates(code625):
    a = code625.engine.trial_outcomes(9 / 32, 2000, 8, peel=False)
    b = code625.engine.trial_outcomes(9 / 32, 2000, 8, peel=True)
    assert np.array_equal(a, b)


def exact_failure_probability(code, p):
    n = code.num_qubits
    total = 0.0
    for e in all_erasures(n):
        if not is_correctable_bruteforce(code, e):
            total += p ** len(e) * (1 - p) ** (n - len(e))
    return total


def test_5_code_rate_matches_enumeration(code5):
    exact = exact_failure_probability(code5, 0.3)
    est = estimate_failure_rate(code5, 0.3, 40_000, 2)
    assert abs(est.rate - exact) < 4 * math.sqrt(exact * (1 - exact) / est.trials)


def test_sweep_curve(code13, code625):
    assert [e.rate for e in sweep_curve(code13, [0.0, 1.0], 200, 0)] == [0.0, 1.0]
    lo, hi = sweep_curve(code625, [8 / 32, 10 / 32], 10_000, 4)
    assert hi.rate >= lo.rate - 4 * math.hypot(lo.std_error, hi.std_error)
    with pytest.raises(ValueError):
        sweep_curve(code13, [], 10, 0)


def test_sweep_points_use_derived_seeds(code625):
    curve = sweep_curve(code625, [0.3, 0.3], 2000, 1)
    seeds = [point_seed(1, 0), point_seed(1, 1)]
    assert seeds[0] != seeds[1]
    assert curve == [estimate_failure_rate(code625, 0.3, 2000, s) for s in seeds]
