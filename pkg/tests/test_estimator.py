import itertools
import random
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_estimate, brute_index, random_filtration
from simplexpred.errors import (
    DimensionMismatch,
    InsufficientData,
    InsufficientSlices,
    LabelSliceMissing,
    MalformedDataset,
)
from simplexpred.estimator import (
    FeatureIndex,
    KernelParams,
    build_index,
    build_slice_counts,
    confidence_interval,
    estimate,
    estimate_or_fallback,
    kernel,
    lattice_ball_size,
)
from simplexpred.ingestion import Filtration
from simplexpred.synthetic import SyntheticConfig, generate

A, B, C = 0, 1, 2


def lattice_oracle(F, delta):
    ranges = [range(max(0, x - delta), x + delta + 1) for x in F]
    return sum(1 for G in itertools.product(*ranges) if sum(abs(a - b) for a, b in zip(F, G)) <= delta)


def raw_observation_estimate(cube, F, params):
    """Kernel-weighted mean of the labels of every individual observation."""
    num = den = 0.0
    for G, (n, r) in cube.items():
        w = kernel(F, G, params)
        num += w * r
        den += w * n
    return num / den


@st.composite
def indices(draw, dim=3):
    keys = draw(st.lists(st.tuples(*[st.integers(0, 3)] * dim), min_size=1, max_size=8, unique=True))
    cube = {}
    for k in keys:
        n = draw(st.integers(1, 6))
        cube[k] = (n, draw(st.integers(0, n)))
    return FeatureIndex(cube)


class TestBuildIndex:
    def test_no_arrivals_means_no_positives(self):
        f = Filtration([[[1, 2], [2, 3]], [[3, 4]], [[4, 5]]])
        idx = build_index(f, T=1, d=1, k=1)
        assert idx.cube and all(r == 0 for _, r in idx.cube.values())

    def test_open_triangle_closes(self):
        f = Filtration([[[A, B], [B, C], [A, C]], [[A, B, C]]])
        idx = build_index(f, T=0, d=1, k=1)
        # every edge of the open triangle sees the third vertex, score 1 + 1
        assert idx.cube == {(1, 3, 3, 0, 2): (3, 3)}

    def test_hand_built_six_node(self):
        f = Filtration([
            [[0, 1], [1, 2], [2, 3]],
            [[3, 4], [0, 2], [4, 5]],
            [[0, 1, 2], [2, 3, 4], [1, 5]],
        ])
        for T, p, k in [(0, None, 1), (1, None, 1), (1, 1, 2), (1, None, 2)]:
            assert build_index(f, T, p, d=1, k=k).cube == brute_index(f, T, p, 1, k, 3)

    def test_label_slice_missing(self):
        f = Filtration([[[1, 2]], [[2, 3]]])
        with pytest.raises(LabelSliceMissing):
            build_index(f, T=1)

    def test_bad_window(self):
        f = Filtration([[[1, 2]], [[2, 3]], [[3, 4]]])
        with pytest.raises(ValueError):
            build_index(f, T=1, p=2)
        with pytest.raises(ValueError):
            build_index(f, T=1, p=0)

    def test_metadata(self):
        f = Filtration([[[1, 2]], [[2, 3]], [[3, 4]]])
        idx = build_index(f, T=1, d=0, k=1)
        assert (idx.T, idx.p, idx.d, idx.k, idx.D) == (1, 1, 0, 1, 2)

    def test_slice_counts_merge_to_index(self):
        f = random_filtration(random.Random(5), 8, 4)
        counts = build_slice_counts(f, T=2, d=1, k=2)
        assert FeatureIndex.merge(counts).cube == build_index(f, T=2, d=1, k=2).cube
        assert len(counts) == 3

    def test_counts_well_formed(self):
        f = random_filtration(random.Random(9), 10, 4, per_slice=(2, 5))
        for F, (n, r) in build_index(f, T=2, d=1, k=1).cube.items():
            assert n >= 1 and 0 <= r <= n and F[0] == 1


def test_build_index_brute_force_random():
    rng = random.Random(11)
    for _ in range(150):
        f = random_filtration(rng, rng.randint(3, 10), rng.randint(2, 4))
        d, k = rng.randint(0, 2), rng.randint(1, 2)
        T = rng.randint(0, f.T - 2)
        p = rng.choice([None, max(T, 1)]) if T else None
        assert build_index(f, T, p, d, k).cube == brute_index(f, T, p, d, k, d + 2)


class TestLatticeBall:
    def test_delta_zero(self):
        assert lattice_ball_size((3, 0, 7), 0) == 1

    def test_interior(self):
        assert lattice_ball_size((5, 5), 1) == 5

    def test_corner(self):
        assert lattice_ball_size((0, 0), 1) == 3

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(0, 3))
    def test_matches_enumeration(self, F, delta):
        assert lattice_ball_size(F, delta) == lattice_oracle(F, delta)


class TestKernel:
    def test_equal_beta_zero(self):
        assert kernel((1, 2), (1, 2), KernelParams(0.0, 1)) == 1.0

    def test_equal_beta_positive(self):
        beta = 0.5
        gamma = lattice_ball_size((1, 2), 1)
        assert kernel((1, 2), (1, 2), KernelParams(beta, 1)) == pytest.approx((1 + beta) / (1 + beta * gamma))

    def test_outside_radius(self):
        assert kernel((1, 2), (1, 4), KernelParams(2.0, 1)) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            kernel((1, 2), (1, 2, 3), KernelParams())

    @pytest.mark.parametrize("beta, delta", [(-1.0, 1), (1.0, -1), (1.0, 0.5)])
    def test_params_validated(self, beta, delta):
        with pytest.raises(ValueError):
            KernelParams(beta, delta)


class TestEstimate:
    def test_single_key_frequency(self):
        assert estimate(FeatureIndex({(1, 2): (4, 3)}), (1, 2), KernelParams(0.0, 1)) == 0.75

    def test_large_beta_pools_ball(self):
        idx = FeatureIndex({(1, 2): (4, 3), (1, 3): (6, 1), (5, 5): (10, 10)})
        pooled = (3 + 1) / (4 + 6)
        assert estimate(idx, (1, 2), KernelParams(1e9, 1)) == pytest.approx(pooled, rel=1e-8)

    def test_empty_neighbourhood_falls_back(self):
        idx = FeatureIndex({(1, 2): (4, 1), (1, 3): (4, 3)})
        with pytest.raises(InsufficientData) as info:
            estimate(idx, (9, 9), KernelParams(1.0, 1))
        assert info.value.fallback == 0.5
        assert estimate_or_fallback(idx, (9, 9), KernelParams(1.0, 1)) == 0.5

    def test_beta_zero_unseen(self):
        with pytest.raises(InsufficientData):
            estimate(FeatureIndex({(1, 2): (4, 1)}), (1, 3), KernelParams(0.0, 1))

    def test_empty_index(self):
        with pytest.raises(InsufficientData):
            estimate(FeatureIndex(), (1, 2), KernelParams())

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            estimate(FeatureIndex({(1, 2): (1, 1)}), (1, 2, 3), KernelParams())

    @given(indices(), st.tuples(*[st.integers(0, 3)] * 3), st.floats(0, 50), st.integers(0, 3))
    def test_matches_raw_observation_sum(self, idx, F, beta, delta):
        params = KernelParams(beta, delta)
        try:
            got = estimate(idx, F, params)
        except InsufficientData:
            # no stored key near F, so the raw sum is 0/0 too
            assert all(sum(abs(a - b) for a, b in zip(G, F)) > delta for G in idx.cube) or (
                beta == 0 and F not in idx
            )
            return
        assert 0.0 <= got <= 1.0
        assert got == pytest.approx(raw_observation_estimate(idx.cube, F, params), rel=1e-12)
        assert got == pytest.approx(brute_estimate(idx.cube, F, beta, delta), rel=1e-12)

    @given(indices())
    def test_beta_zero_is_exact_frequency(self, idx):
        for F, (n, r) in idx.cube.items():
            assert estimate(idx, F, KernelParams(0.0, 2)) == r / n

    @given(indices(), st.data())
    def test_positive_observation_never_lowers_estimate(self, idx, data):
        F = data.draw(st.sampled_from(sorted(idx.cube)))
        n, r = idx.cube[F]
        more = FeatureIndex({**idx.cube, F: (n + 1, r + 1)})
        assert estimate(more, F, KernelParams(0.0, 1)) >= estimate(idx, F, KernelParams(0.0, 1))


class TestDumpLoad:
    def test_round_trip(self, tmp_path):
        idx = FeatureIndex({(1, 3, 2, 0, 1): (5, 2), (1, 4, 3, 0, 0): (1, 0)}, T=7, p=3, d=1, k=2, D=3)
        idx.dump(tmp_path / "idx.tsv")
        text = (tmp_path / "idx.tsv").read_text().splitlines()
        assert text[0] == "#simplexpred-index T=7 p=3 d=1 k=2 D=3"
        assert text[1] == "1,3,2,0,1\t5\t2"
        assert FeatureIndex.load(tmp_path / "idx.tsv") == idx

    def test_rejects_bad_counts(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("#simplexpred-index T=1 p=1 d=1 k=1 D=3\n1,2\t2\t3\n")
        with pytest.raises(MalformedDataset):
            FeatureIndex.load(path)


class TestConfidenceInterval:
    F = (1, 2)

    def slices(self, rows):
        return [{self.F: (n, r)} for n, r in rows]

    def test_all_realized(self):
        counts = self.slices([(3, 3)] * 6)
        assert confidence_interval(counts, self.F, KernelParams(0.5, 1), 0.9, seed=0) == (1.0, 1.0)

    def test_level_zero_is_point(self):
        counts = self.slices([(3, 1), (2, 2), (4, 0), (3, 3), (5, 2)])
        lo, hi = confidence_interval(counts, self.F, KernelParams(0.0, 1), 0.0)
        assert lo == hi == pytest.approx(8 / 17)

    def test_contains_point(self):
        counts = self.slices([(3, 1), (2, 2), (4, 0), (3, 3), (5, 2), (1, 0)])
        point = estimate(FeatureIndex.merge(counts), self.F, KernelParams(0.0, 1))
        lo, hi = confidence_interval(counts, self.F, KernelParams(0.0, 1), 0.9, seed=1, block_length=2)
        assert lo <= point <= hi and lo < hi

    def test_too_few_slices(self):
        with pytest.raises(InsufficientSlices):
            confidence_interval(self.slices([(1, 1)] * 4), self.F, KernelParams(), 0.9)

    def test_reproducible(self):
        counts = self.slices([(3, 1), (2, 2), (4, 0), (3, 3), (5, 2), (1, 0)])
        a = confidence_interval(counts, self.F, KernelParams(), 0.8, seed=3)
        assert a == confidence_interval(counts, self.F, KernelParams(), 0.8, seed=3)


def test_bootstrap_coverage_on_synthetic_truth():
    """Nominal 90% intervals should cover the true g in at least 80% of runs."""
    config = SyntheticConfig(T=100, immigration=0.5)
    F = (1, 4, 3, 0, 0)  # most frequent positive-probability feature of this family
    g = config.ground_truth(F)
    params = KernelParams(1 / config.T, 1)
    hits = 0
    for r in range(200):
        f = generate(replace(config, seed=r))
        counts = build_slice_counts(f, T=f.T - 2, d=config.d, k=config.k)
        lo, hi = confidence_interval(counts, F, params, 0.9, n_boot=500, seed=r)
        hits += lo <= g <= hi
    assert hits / 200 >= 0.80
