import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from simplexpred.cooccurrence import CoOccurrenceStore, record_arrivals, score
from simplexpred.errors import SliceOrderViolation, VertexAlreadyMember

A, B, C, D = 0, 1, 2, 3


def brute_score(log, s, v):
    """Walk the whole arrival log; each arrival of dimension d adds d per shared pair."""
    total = 0
    for arrival in log:
        verts = set(arrival)
        d = len(verts) - 1
        for u in s:
            if u in verts and v in verts and d >= 1:
                total += d
    return total


def test_triangle_weights():
    st_ = record_arrivals(CoOccurrenceStore(), [[A, B, C]], 0)
    assert st_.weight(A, B) == st_.weight(B, C) == st_.weight(A, C) == 2


def test_edge_then_triangle():
    st_ = record_arrivals(CoOccurrenceStore(), [[A, B]], 0)
    st_ = record_arrivals(st_, [[A, B, C]], 1)
    assert st_.weight(A, B) == 3


def test_vertex_arrival_ignored():
    st_ = record_arrivals(CoOccurrenceStore(), [[A]], 0)
    assert st_.weights == {}
    assert st_.last_updated_slice == 0


def test_functional_form_leaves_input_untouched():
    base = CoOccurrenceStore()
    record_arrivals(base, [[A, B]], 0)
    assert base.weights == {} and base.last_updated_slice == -1


def test_out_of_order_slice():
    st_ = record_arrivals(CoOccurrenceStore(), [[A, B]], 0)
    with pytest.raises(SliceOrderViolation):
        record_arrivals(st_, [[A, C]], 2)
    with pytest.raises(SliceOrderViolation):
        record_arrivals(st_, [[A, C]], 0)


def test_empty_history_scores_zero():
    assert score(CoOccurrenceStore(), [A, B], C) == 0


def test_score_after_triangle():
    st_ = record_arrivals(CoOccurrenceStore(), [[A, B, C]], 0)
    assert score(st_, [A, B], C) == 4


def test_score_rejects_member():
    with pytest.raises(VertexAlreadyMember):
        score(CoOccurrenceStore(), [A, B], A)


def test_repeated_arrivals_count_each_time():
    st_ = record_arrivals(CoOccurrenceStore(), [[A, B], [A, B]], 0)
    assert st_.weight(A, B) == 2


# -- properties ---------------------------------------------------------------

arrival_log = st.lists(
    st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=4), max_size=6), min_size=1, max_size=5
)


def replay(slices):
    store = CoOccurrenceStore()
    for t, group in enumerate(slices):
        store = record_arrivals(store, group, t)
    return store


@given(arrival_log, st.sets(st.integers(0, 7), min_size=1, max_size=3), st.integers(0, 7))
def test_score_matches_log_walk(slices, s, v):
    if v in s:
        return
    flat = [a for group in slices for a in group]
    assert score(replay(slices), sorted(s), v) == brute_score(flat, s, v)


@given(arrival_log)
def test_deterministic_and_symmetric(slices):
    a, b = replay(slices), replay(slices)
    assert a == b
    for u in range(8):
        for v in range(8):
            assert a.weight(u, v) == a.weight(v, u) >= 0


@given(arrival_log, st.sets(st.integers(0, 7), min_size=1, max_size=3), st.integers(0, 7))
def test_score_monotone_and_additive(slices, s, v):
    if v in s:
        return
    s = sorted(s)
    prev = -1
    store = CoOccurrenceStore()
    for t, group in enumerate(slices):
        store = record_arrivals(store, group, t)
        now = score(store, s, v)
        assert now >= prev
        prev = now
    # additive over a split of the simplex
    left, right = s[: len(s) // 2], s[len(s) // 2 :]
    parts = (score(store, left, v) if left else 0) + score(store, right, v)
    assert parts == score(store, s, v)


def test_log_oracle_on_long_random_log():
    rng = random.Random(7)
    log = [rng.sample(range(30), rng.randint(1, 5)) for _ in range(500)]
    store = replay([log[i : i + 50] for i in range(0, 500, 50)])
    for _ in range(200):
        s = rng.sample(range(30), rng.randint(1, 3))
        v = rng.choice([x for x in range(30) if x not in s])
        assert score(store, s, v) == brute_score(log, s, v)
