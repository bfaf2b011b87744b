"""Discrete kernel, feature index and the smoothed arrival-probability estimator."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from ._engine import FeatureEngine
from .errors import (
    DimensionMismatch,
    InsufficientData,
    InsufficientSlices,
    LabelSliceMissing,
    MalformedDataset,
)
from .features import format_feature, l1_distance, parse_feature
from .ingestion import Filtration


@dataclass(frozen=True)
class KernelParams:
    beta: float = 1.0
    delta: int = 1

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if int(self.delta) != self.delta or self.delta < 0:
            raise ValueError(f"delta must be a non-negative integer, got {self.delta}")


@dataclass
class FeatureIndex:
    """Counts of possible and realized (sigma, candidate) pairs per feature."""

    cube: dict[tuple[int, ...], tuple[int, int]] = field(default_factory=dict)
    T: int = 0
    p: int = 0
    d: int = 1
    k: int = 1
    D: int = 3
    _arrays: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __len__(self):
        return len(self.cube)

    def __contains__(self, F):
        return tuple(F) in self.cube

    def possible(self, F) -> int:
        return self.cube.get(tuple(F), (0, 0))[0]

    def realized(self, F) -> int:
        return self.cube.get(tuple(F), (0, 0))[1]

    @property
    def totals(self) -> tuple[int, int]:
        return (sum(p for p, _ in self.cube.values()), sum(r for _, r in self.cube.values()))

    @property
    def base_rate(self) -> float:
        p, r = self.totals
        return r / p if p else float("nan")

    @property
    def feature_length(self) -> int:
        return self.D + 2

    def arrays(self):
        """``(keys, possible, realized)`` as numpy arrays (cached)."""
        if self._arrays is None:
            keys = list(self.cube)
            X = np.array(keys, dtype=np.int64).reshape(len(keys), -1)
            P = np.array([self.cube[k][0] for k in keys], dtype=np.float64)
            R = np.array([self.cube[k][1] for k in keys], dtype=np.float64)
            self._arrays = (X, P, R)
        return self._arrays

    @classmethod
    def from_counts(cls, possible: Mapping, realized: Mapping, **meta) -> "FeatureIndex":
        cube = {F: (int(n), int(realized.get(F, 0))) for F, n in possible.items() if n}
        return cls(cube, **meta)

    @classmethod
    def merge(cls, slices: Iterable[Mapping], **meta) -> "FeatureIndex":
        possible: dict = {}
        realized: dict = {}
        for counts in slices:
            for F, (n, r) in counts.items():
                possible[F] = possible.get(F, 0) + n
                realized[F] = realized.get(F, 0) + r
        return cls.from_counts(possible, realized, **meta)

    def dump(self, path) -> None:
        lines = [f"#simplexpred-index T={self.T} p={self.p} d={self.d} k={self.k} D={self.D}"]
        for F in sorted(self.cube):
            n, r = self.cube[F]
            lines.append(f"{format_feature(F)}\t{n}\t{r}")
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "FeatureIndex":
        text = Path(path).read_text().splitlines()
        if not text or not text[0].startswith("#simplexpred-index"):
            raise MalformedDataset(f"{path}: missing index header")
        meta = {}
        for tok in text[0].split()[1:]:
            key, _, val = tok.partition("=")
            meta[key] = int(val)
        cube = {}
        for lineno, line in enumerate(text[1:], 2):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedDataset(f"{path}:{lineno}: expected 3 tab-separated fields")
            n, r = int(parts[1]), int(parts[2])
            if not 0 <= r <= n or n < 1:
                raise MalformedDataset(f"{path}:{lineno}: need 0 <= realized <= possible, possible >= 1")
            cube[parse_feature(parts[0])] = (n, r)
        return cls(cube, **meta)


def _window(filtration: Filtration, T: int, p: int | None) -> tuple[int, int]:
    if p is None:
        p = T
    elif p < 1:
        raise ValueError(f"window length p must be >= 1, got {p}")
    if T - p < 0:
        raise ValueError(f"window p={p} does not fit before slice T={T}")
    if T < 0 or T + 1 >= filtration.T:
        raise LabelSliceMissing(
            f"labels for slice {T} need slice {T + 1}, filtration has {filtration.T} slices"
        )
    return T, p


def _replay(filtration: Filtration, T: int, p: int, d: int, k: int, D: int) -> Iterator:
    """Yield ``(slice, current_counts, positive_pairs)`` for each window slice."""
    engine = FeatureEngine(d, k, D)
    arrivals = filtration.slice_arrivals
    for t in range(T + 1):
        engine.advance(arrivals[t])
        if t >= T - p:
            engine.refresh()
            yield t, engine.current, engine.positive_pairs(arrivals[t + 1])


def build_index(
    filtration: Filtration,
    T: int,
    p: int | None = None,
    d: int = 1,
    k: int = 1,
    D: int | None = None,
) -> FeatureIndex:
    """Aggregate feature counts over slices ``T-p .. T`` with labels from the next slice.

    ``p=None`` uses all history (window starts at slice 0). ``D`` defaults to
    ``d + 2``.
    """
    D = d + 2 if D is None else D
    T, p = _window(filtration, T, p)
    possible: dict = {}
    realized: dict = {}
    for _, current, positives in _replay(filtration, T, p, d, k, D):
        for F, n in current.items():
            possible[F] = possible.get(F, 0) + n
        for _, _, F in positives:
            realized[F] = realized.get(F, 0) + 1
    return FeatureIndex.from_counts(possible, realized, T=T, p=p, d=d, k=k, D=D)


def build_slice_counts(
    filtration: Filtration,
    T: int,
    p: int | None = None,
    d: int = 1,
    k: int = 1,
    D: int | None = None,
) -> list[dict[tuple[int, ...], tuple[int, int]]]:
    """Per-slice ``feature -> (possible, realized)`` maps over the same window."""
    D = d + 2 if D is None else D
    T, p = _window(filtration, T, p)
    out = []
    for _, current, positives in _replay(filtration, T, p, d, k, D):
        realized: dict = {}
        for _, _, F in positives:
            realized[F] = realized.get(F, 0) + 1
        out.append({F: (n, realized.get(F, 0)) for F, n in current.items()})
    return out


def lattice_ball_size(F: Sequence[int], delta: int) -> int:
    """Number of non-negative integer vectors within L1 distance ``delta`` of ``F``."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    # ways[j]: vectors over the coordinates seen so far at total distance j
    ways = [1] + [0] * delta
    for x in F:
        nxt = [0] * (delta + 1)
        for j, w in enumerate(ways):
            if not w:
                continue
            nxt[j] += w
            for step in range(1, delta - j + 1):
                # one coordinate moved up by `step`, or down if it stays >= 0
                nxt[j + step] += w * (2 if x >= step else 1)
        ways = nxt
    return sum(ways)


def kernel(F: Sequence[int], F2: Sequence[int], params: KernelParams) -> float:
    dist = l1_distance(F, F2)
    num = (1.0 if tuple(F) == tuple(F2) else 0.0) + params.beta * (dist <= params.delta)
    return num / (1.0 + params.beta * lattice_ball_size(F, params.delta))


def _ball_sums(index: FeatureIndex, F: tuple[int, ...], delta: int) -> tuple[float, float]:
    X, P, R = index.arrays()
    if X.shape[1] != len(F):
        raise DimensionMismatch(f"feature has length {len(F)}, index keys have {X.shape[1]}")
    near = np.abs(X - np.asarray(F, dtype=np.int64)).sum(axis=1) <= delta
    return float(P[near].sum()), float(R[near].sum())


def estimate(index: FeatureIndex, F: Sequence[int], params: KernelParams) -> float:
    """Kernel-smoothed arrival probability at feature ``F``.

    ``(r(F) + beta * sum_near r) / (p(F) + beta * sum_near p)`` where the sums
    run over stored features within L1 distance ``delta`` of ``F`` (``F``
    included). Raises :class:`InsufficientData` when the denominator is zero.
    """
    F = tuple(int(x) for x in F)
    if not index.cube:
        raise InsufficientData("feature index is empty")
    if len(F) != len(next(iter(index.cube))):
        raise DimensionMismatch(
            f"feature has length {len(F)}, index keys have {len(next(iter(index.cube)))}"
        )
    n, r = index.cube.get(F, (0, 0))
    if params.beta == 0:
        if n == 0:
            raise InsufficientData(f"no observations at {F}", fallback=index.base_rate)
        return r / n
    near_p, near_r = _ball_sums(index, F, params.delta)
    den = n + params.beta * near_p
    if den == 0:
        raise InsufficientData(f"no observations within {params.delta} of {F}", fallback=index.base_rate)
    return min(1.0, max(0.0, (r + params.beta * near_r) / den))


def estimate_or_fallback(index: FeatureIndex, F, params: KernelParams) -> float:
    try:
        return estimate(index, F, params)
    except InsufficientData as exc:
        return exc.fallback


def confidence_interval(
    slice_counts: Sequence[Mapping[tuple[int, ...], tuple[int, int]]],
    F: Sequence[int],
    params: KernelParams,
    level: float = 0.9,
    *,
    n_boot: int = 500,
    block_length: int = 1,
    seed=None,
) -> tuple[float, float]:
    """Percentile interval from a moving-block bootstrap over time slices."""
    n = len(slice_counts)
    if n < 5:
        raise InsufficientSlices(f"need at least 5 slices, got {n}")
    if not 0 <= level < 1:
        raise ValueError("level must be in [0, 1)")
    if not 1 <= block_length <= n:
        raise ValueError("block_length must be in [1, number of slices]")
    F = tuple(int(x) for x in F)
    # per-slice numerator / denominator pieces at F
    own = np.zeros((n, 2))
    near = np.zeros((n, 2))
    for t, counts in enumerate(slice_counts):
        pr = counts.get(F)
        if pr is not None:
            own[t] = pr
        if params.beta:
            for G, (pp, rr) in counts.items():
                if len(G) == len(F) and sum(abs(a - b) for a, b in zip(G, F)) <= params.delta:
                    near[t, 0] += pp
                    near[t, 1] += rr
    num_t = own[:, 1] + params.beta * near[:, 1]
    den_t = own[:, 0] + params.beta * near[:, 0]
    if den_t.sum() == 0:
        index = FeatureIndex.merge(slice_counts)
        raise InsufficientData(f"no observations near {F}", fallback=index.base_rate)
    point = min(1.0, num_t.sum() / den_t.sum())
    if level == 0:
        return point, point
    rng = np.random.default_rng(seed)
    n_blocks = -(-n // block_length)
    starts = rng.integers(0, n - block_length + 1, size=(n_boot, n_blocks))
    picks = (starts[:, :, None] + np.arange(block_length)).reshape(n_boot, -1)[:, :n]
    num = num_t[picks].sum(axis=1)
    den = den_t[picks].sum(axis=1)
    ok = den > 0
    boots = num[ok] / den[ok]
    alpha = (1 - level) / 2
    lo, hi = np.quantile(boots, [alpha, 1 - alpha])
    return min(float(lo), point), max(float(hi), point)
