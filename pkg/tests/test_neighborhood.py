from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_f_vector
from simplexpred.complex import ComplexSnapshot, contains, insert, iter_bits, simplices_of_dim, vertex_mask
from simplexpred.errors import SimplexNotPresent, UnknownVertex
from simplexpred.neighborhood import (
    ball_mask,
    k_ball_simplex,
    k_ball_vertex,
    neighborhood_feature,
    sub_complex,
)
from strategies import simplex_lists


def reach_oracle(c, sources, k):
    """Vertices within k hops via powers of (I + A); no BFS involved."""
    verts = sorted(c.vertex_set)
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    A = np.eye(n, dtype=np.int64)
    for e in simplices_of_dim(c, 1):
        A[pos[e[0]], pos[e[1]]] = A[pos[e[1]], pos[e[0]]] = 1
    R = np.linalg.matrix_power(A, k) if k else np.eye(n, dtype=np.int64)
    hit = R[[pos[v] for v in sources]].sum(axis=0) > 0
    return {verts[i] for i in np.flatnonzero(hit)}


def induced_oracle(c, ball, D):
    """Face counts of the induced complex, materialising every face."""
    faces = set()
    for m in c.maximal:
        kept = sorted(set(m) & ball)
        for r in range(1, len(kept) + 1):
            faces.update(combinations(kept, r))
    return (1,) + tuple(sum(1 for f in faces if len(f) == j + 1) for j in range(D))


class TestWorkedExample:
    def test_vertex_ball(self, worked):
        assert k_ball_vertex(worked, 9, 1) == {9, 13, 8, 5, 6, 10}

    def test_simplex_ball(self, worked):
        ball = k_ball_simplex(worked, [9, 10], 1)
        assert ball.members == {9, 13, 8, 5, 6, 10, 14, 7, 11, 15}
        assert ball.center == (9, 10) and ball.radius == 1

    def test_sub_complex_f_vector(self, worked):
        assert sub_complex(worked, [9, 10], 1).f_vector(3) == (1, 10, 11, 2)
        assert neighborhood_feature(worked, [9, 10], 1, 3) == (1, 10, 11, 2)

    def test_vertex_7_joins_at_t(self, worked_before, worked):
        before = k_ball_simplex(worked_before, [9, 10], 1).members
        assert 7 not in before
        assert before < k_ball_simplex(worked, [9, 10], 1).members


class TestKBall:
    def test_isolated_vertex(self):
        c = ComplexSnapshot([[4], [1, 2]])
        for k in range(4):
            assert k_ball_vertex(c, 4, k) == {4}

    def test_path(self):
        c = ComplexSnapshot([[1, 2], [2, 3]])
        assert k_ball_vertex(c, 1, 2) == {1, 2, 3}
        assert k_ball_vertex(c, 1, 1) == {1, 2}

    def test_single_vertex_simplex(self, worked):
        assert k_ball_simplex(worked, [9], 2).members == k_ball_vertex(worked, 9, 2)

    def test_k_zero(self, worked):
        assert k_ball_simplex(worked, [9, 10], 0).members == {9, 10}

    def test_unknown_vertex(self, worked):
        with pytest.raises(UnknownVertex):
            k_ball_vertex(worked, 99, 1)

    def test_simplex_not_present(self, worked):
        with pytest.raises(SimplexNotPresent):
            k_ball_simplex(worked, [9, 14], 1)


class TestSubComplex:
    def test_large_k_whole_component(self):
        c = ComplexSnapshot([[1, 2, 3], [3, 4], [4, 5, 6]])
        assert sub_complex(c, [1, 2], 10) == c

    def test_k_zero_induced_on_simplex(self):
        c = ComplexSnapshot([[1, 2, 3], [3, 4]])
        assert sub_complex(c, [1, 2], 0).maximal == {(1, 2)}

    def test_isolated_edge(self):
        assert neighborhood_feature(ComplexSnapshot([[3, 8]]), [3, 8], 1, 4) == (1, 2, 1, 0, 0)


# -- properties ---------------------------------------------------------------

complexes = simplex_lists.filter(lambda s: len(s) > 0).map(ComplexSnapshot)


@given(complexes, st.data(), st.integers(0, 3))
def test_ball_matches_matrix_oracle(c, data, k):
    s = data.draw(st.sampled_from(sorted(c.maximal)))
    assert k_ball_simplex(c, s, k).members == reach_oracle(c, s, k)


@given(complexes, st.data(), st.integers(0, 3))
def test_ball_monotone_in_k(c, data, k):
    s = data.draw(st.sampled_from(sorted(c.maximal)))
    small = k_ball_simplex(c, s, k).members
    assert set(s) <= small <= k_ball_simplex(c, s, k + 1).members


@given(complexes, st.lists(st.integers(0, 12), min_size=1, max_size=4), st.data(), st.integers(0, 2))
def test_ball_monotone_in_time(c, extra, data, k):
    s = data.draw(st.sampled_from(sorted(c.maximal)))
    later = insert(c, extra)
    assert k_ball_simplex(c, s, k).members <= k_ball_simplex(later, s, k).members


@given(complexes, st.data(), st.integers(0, 2), st.integers(1, 5))
def test_feature_matches_materialised_oracle(c, data, k, D):
    s = data.draw(st.sampled_from(sorted(c.maximal)))
    ball = set(k_ball_simplex(c, s, k).members)
    sub = sub_complex(c, s, k)
    assert neighborhood_feature(c, s, k, D) == induced_oracle(c, ball, D)
    assert sub.f_vector(D) == brute_f_vector(sub.maximal, D)
    for m in sub.maximal:
        assert contains(c, m)


@given(complexes, st.data(), st.integers(0, 3))
def test_bitmask_ball_agrees(c, data, k):
    s = data.draw(st.sampled_from(sorted(c.maximal)))
    adj = c.trie(2).adj
    assert set(iter_bits(ball_mask(adj, vertex_mask(s), k))) == k_ball_simplex(c, s, k).members
