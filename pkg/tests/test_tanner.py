import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hgpopt.tanner import (
    AlistError,
    DegreeError,
    SwapAction,
    TannerState,
    action_pairs,
    apply_swap,
    binary_matrix,
    canonical_key,
    enumerate_actions,
    girth,
    num_actions,
    random_regular,
    read_alist,
    write_alist,
)

from .conftest import REP3

REP3_SLOTS = [(0, 0), (0, 1), (1, 1), (1, 2)]


@st.composite
def regular_states(draw):
    cw, rw = draw(st.sampled_from([(2, 3), (3, 4), (2, 4), (1, 1), (3, 6)]))
    k = draw(st.integers(1, 5))
    m, n = cw * k, rw * k
    return random_regular(m, n, cw, rw, draw(st.integers(0, 2**32 - 1)))


@st.composite
def state_and_action(draw):
    s = draw(regular_states().filter(lambda s: s.num_slots >= 2))
    a = draw(st.integers(0, s.num_slots - 1))
    b = draw(st.integers(0, s.num_slots - 1).filter(lambda b: b != a))
    return s, SwapAction(min(a, b), max(a, b))


# swap -----------------------------------------------------------------------------


def test_swap_crosses_endpoints():
    s = apply_swap(TannerState(2, 3, REP3_SLOTS), SwapAction(0, 3))
    assert s.edges.tolist() == [[0, 2], [0, 1], [1, 1], [1, 0]]
    assert binary_matrix(s).to_dense().tolist() == [[0, 1, 1], [1, 1, 0]]


def test_swap_of_identical_slots_is_a_fixed_point():
    s = TannerState(1, 1, [(0, 0), (0, 0)])
    assert apply_swap(s, SwapAction(0, 1)) == s


def test_swap_with_shared_bit_is_a_fixed_point():
    s = TannerState(2, 1, [(0, 0), (1, 0)])
    assert canonical_key(apply_swap(s, SwapAction(0, 1))) == canonical_key(s)


def test_swap_rejects_bad_slots():
    with pytest.raises(ValueError):
        SwapAction(2, 2)
    with pytest.raises(ValueError):
        SwapAction(3, 1)
    with pytest.raises(IndexError):
        apply_swap(TannerState(2, 3, REP3_SLOTS), SwapAction(0, 4))


def test_swap_does_not_mutate_the_input():
    s = TannerState(2, 3, REP3_SLOTS)
    apply_swap(s, SwapAction(0, 3))
    assert s.edges.tolist() == [list(e) for e in REP3_SLOTS]


@given(state_and_action())
def test_swap_preserves_degrees_and_slot_count(sa):
    s, a = sa
    t = apply_swap(s, a)
    assert t.num_slots == s.num_slots
    assert np.array_equal(t.check_degrees(), s.check_degrees())
    assert np.array_equal(t.bit_degrees(), s.bit_degrees())


@given(state_and_action())
def test_swap_is_an_involution(sa):
    s, a = sa
    assert canonical_key(apply_swap(apply_swap(s, a), a)) == canonical_key(s)


@given(state_and_action())
def test_collapsed_weights_bounded_by_degrees(sa):
    s, a = sa
    t = apply_swap(s, a)
    h = binary_matrix(t).to_dense()
    assert (h.sum(axis=1) <= t.check_degrees()).all()
    assert (h.sum(axis=0) <= t.bit_degrees()).all()
    assert (h.sum() == t.num_slots) == (not t.has_parallel_edges())


# matrix view and keys -------------------------------------------------------------


def test_binary_matrix_collapses_parallel_edges():
    h = binary_matrix(TannerState(1, 1, [(0, 0), (0, 0)]))
    assert h.to_dense().tolist() == [[1]]
    assert h.weight() == 1


def test_binary_matrix_round_trip():
    s = TannerState.from_matrix(np.array(REP3))
    assert binary_matrix(s).to_dense().tolist() == REP3
    assert binary_matrix(s).weight() == s.num_slots


@given(regular_states(), st.integers(0, 2**32 - 1))
def test_key_ignores_slot_order(s, seed):
    perm = np.random.default_rng(seed).permutation(s.num_slots)
    assert canonical_key(TannerState(s.num_checks, s.num_bits, s.edges[perm])) == canonical_key(s)


def test_key_separates_distinct_multisets():
    s = TannerState(2, 3, REP3_SLOTS)
    assert canonical_key(apply_swap(s, SwapAction(0, 3))) != canonical_key(s)
    once = TannerState(2, 2, [(0, 0), (0, 1), (1, 1), (1, 0)])
    twice = TannerState(2, 2, [(0, 0), (0, 0), (1, 1), (1, 1)])
    assert canonical_key(once) != canonical_key(twice)
    assert binary_matrix(twice).weight() == 2


def test_key_includes_shape():
    assert canonical_key(TannerState(1, 2, [(0, 0)])) != canonical_key(TannerState(2, 1, [(0, 0)]))


# actions --------------------------------------------------------------------------


@pytest.mark.parametrize("slots, count", [(4, 6), (60, 1770), (2, 1)])
def test_action_count(slots, count):
    s = TannerState(1, slots, [(0, j) for j in range(slots)])
    assert num_actions(s) == count == math.comb(slots, 2)
    assert len(enumerate_actions(s)) == count


def test_actions_are_lexicographic():
    s = TannerState(1, 4, [(0, j) for j in range(4)])
    pairs = [(a.slot_a, a.slot_b) for a in enumerate_actions(s)]
    assert pairs == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    first, second = action_pairs(4)
    assert list(zip(first.tolist(), second.tolist())) == pairs


# random graphs --------------------------------------------------------------------


def test_random_regular_degrees():
    s = random_regular(15, 20, 3, 4, seed=1)
    assert s.num_slots == 60
    assert (s.check_degrees() == 4).all() and (s.bit_degrees() == 3).all()


def test_random_regular_single_slot():
    assert random_regular(1, 1, 1, 1, seed=0).edges.tolist() == [[0, 0]]


def test_random_regular_infeasible_degrees():
    with pytest.raises(DegreeError):
        random_regular(2, 3, 1, 1, seed=0)


def test_random_regular_is_seeded():
    assert random_regular(15, 20, 3, 4, seed=5) == random_regular(15, 20, 3, 4, seed=5)
    assert random_regular(15, 20, 3, 4, seed=5) != random_regular(15, 20, 3, 4, seed=6)


def test_random_regular_simple_has_no_parallel_edges():
    for seed in range(20):
        assert not random_regular(6, 8, 3, 4, seed, simple=True).has_parallel_edges()


def test_random_regular_pairing_covers_all_bit_stubs():
    # every bit-stub multiset is reachable; marginal check of uniformity on bit 0
    hits = np.zeros(3)
    for seed in range(600):
        s = random_regular(3, 3, 1, 1, seed)
        hits[s.edges[s.edges[:, 1] == 0, 0][0]] += 1
    assert (np.abs(hits - 200) < 4 * math.sqrt(600 * (1 / 3) * (2 / 3))).all()


# girth ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "h, expect",
    [
        ([[1, 1], [1, 1]], 4),
        ([[1, 1, 0], [0, 1, 1]], math.inf),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], math.inf),
        ([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 6),
    ],
)
def test_girth(h, expect):
    assert girth(TannerState.from_matrix(np.array(h))) == expect


def test_girth_ignores_parallel_edges():
    assert girth(TannerState(1, 2, [(0, 0), (0, 0), (0, 1)])) == math.inf


# alist ----------------------------------------------------------------------------

REP3_ALIST = """3 2
2 2
1 2 1
2 2
1 0
1 2
2 0
1 2
2 3
"""


def test_write_alist_exact_format():
    assert write_alist(TannerState.from_matrix(np.array(REP3))) == REP3_ALIST


def test_alist_round_trip():
    s = read_alist(REP3_ALIST)
    assert binary_matrix(s).to_dense().tolist() == REP3


def test_alist_accepts_unpadded_lines_and_blank_lines():
    text = REP3_ALIST.replace("1 0\n", "1\n").replace("2 0\n", "2\n\n")
    assert binary_matrix(read_alist(text)).to_dense().tolist() == REP3


@given(regular_states())
def test_alist_round_trip_random(s):
    back = read_alist(write_alist(s))
    assert binary_matrix(back) == binary_matrix(s)


def test_alist_collapses_parallel_edges_on_write():
    s = TannerState(1, 1, [(0, 0), (0, 0)])
    assert read_alist(write_alist(s)).num_slots == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("", None),
        ("3 2\n", 2),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2 3\n2 0\n1 2\n2 3\n", 6),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 x\n", 9),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 4\n", 9),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n7\n", 10),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 1\n2 3\n", 8),
        ("3 2\n2 2\n1 2 1 4\n2 2\n", 3),
    ],
    ids=["empty", "truncated", "too-many-entries", "non-integer", "out-of-range", "trailing", "repeat", "weights-count"],
)
def test_alist_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(AlistError) as info:
        read_alist(text)
    if line is not None:
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")


def test_alist_rejects_more_neighbors_than_declared_max():
    # max column weight 1, but bit 2 lists two checks
    text = "3 2\n1 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"
    with pytest.raises(AlistError):
        read_alist(text)


def test_alist_rejects_inconsistent_lists():
    # check 2 claims bit 1, which bit 1's own list does not mention
    text = REP3_ALIST.replace("2 3\n", "1 3\n")
    with pytest.raises(AlistError):
        read_alist(text)
