"""Filtrations drawn from a known arrival-probability function, and Monte Carlo
checks of the estimator's consistency and asymptotic normality.

Generation: slice 0 is a set of disjoint "strips" (chains of overlapping
simplices) on fresh vertices. At every later slice each d-simplex ``sigma``
and each candidate ``v`` in its k-ball whose coface ``sigma + v`` is not yet
present draws ``Y ~ Bernoulli(g(F(sigma, v)))``; successes arrive in the next
slice. Optionally ``Poisson(immigration)`` fresh strips arrive every slice,
which keeps the process from freezing once old strips saturate.

With ``k >= 2`` and a ground truth that vanishes whenever the score is
positive (:func:`gated_ball`, :func:`score_step` with threshold 1), every
coface that can arrive has exactly one (sigma, candidate) pair, so the labels
follow the Bernoulli model exactly. Candidates with a positive score are
adjacent to the simplex and share their coface with other pairs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from ._engine import FeatureEngine
from ._parallel import pmap
from .errors import DegenerateDistribution, DegenerateStart, InsufficientData
from .estimator import FeatureIndex, KernelParams, build_slice_counts, estimate
from .ingestion import Filtration


@dataclass(frozen=True)
class GroundTruth:
    """Named parametric map from feature vectors to probabilities.

    ``fn`` should be a module-level function (or a partial of one) so that
    configs can be shipped to worker processes.
    """

    name: str
    params: tuple[tuple[str, float], ...] = ()
    fn: Callable[[tuple[int, ...]], float] = field(default=None, compare=False, repr=False)

    def __call__(self, F: Sequence[int]) -> float:
        return self.fn(tuple(F))

    def __str__(self):
        args = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.name}({args})"


def _constant(F, c):
    return c


def _score_step(F, high, low, threshold):
    return high if F[-1] < threshold else low


def _gated_ball(F, scale):
    if F[-1] > 0 or F[1] == 0:
        return 0.0
    return min(1.0, scale / F[1])


def constant(c: float) -> GroundTruth:
    if not 0 <= c <= 1:
        raise ValueError("probability must be in [0, 1]")
    return GroundTruth("constant", (("c", c),), partial(_constant, c=c))


def score_step(high: float, low: float = 0.0, threshold: int = 1) -> GroundTruth:
    """``high`` below the score threshold, ``low`` at or above it."""
    if not (0 <= high <= 1 and 0 <= low <= 1):
        raise ValueError("probabilities must be in [0, 1]")
    return GroundTruth(
        "score_step",
        (("high", high), ("low", low), ("threshold", threshold)),
        partial(_score_step, high=high, low=low, threshold=threshold),
    )


def gated_ball(scale: float) -> GroundTruth:
    """``min(1, scale / f_0)`` for unscored candidates, 0 otherwise.

    ``f_0`` (the second coordinate) is the number of vertices in the ball.
    """
    if scale < 0:
        raise ValueError("scale must be >= 0")
    return GroundTruth("gated_ball", (("scale", scale),), partial(_gated_ball, scale=scale))


FAMILIES = {"constant": constant, "score_step": score_step, "gated_ball": gated_ball}


def parse_ground_truth(text: str) -> GroundTruth:
    """Parse ``name`` or ``name(key=value,...)``, e.g. ``gated_ball(scale=1.2)``."""
    name, _, rest = text.strip().partition("(")
    if name not in FAMILIES:
        raise ValueError(f"unknown ground truth {name!r}; choose from {sorted(FAMILIES)}")
    kwargs = {}
    rest = rest.rstrip(")").strip()
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"bad ground-truth parameter {item!r}")
            kwargs[key.strip()] = float(val)
    return FAMILIES[name](**kwargs)


@dataclass(frozen=True)
class SyntheticConfig:
    n_vertices: int = 40
    T: int = 50
    d: int = 1
    k: int = 2
    D: int | None = None
    ground_truth: GroundTruth = field(default_factory=lambda: gated_ball(1.2))
    seed: int = 0
    immigration: float = 0.0
    strip_sizes: tuple[int, ...] = ()

    @property
    def face_dim(self) -> int:
        return self.d + 2 if self.D is None else self.D

    def sizes(self) -> tuple[int, ...]:
        if self.strip_sizes:
            return self.strip_sizes
        w = max(self.d, 1)
        return (w + 3, w + 4)


def _strip(first: int, size: int, width: int) -> list[tuple[int, ...]]:
    """Chain of overlapping ``width``-simplices on ``size`` consecutive ids."""
    if size <= width:
        return [tuple(range(first, first + size))]
    return [tuple(range(first + i, first + i + width + 1)) for i in range(size - width)]


def _strips(rng, n_vertices: int, first: int, sizes, width: int, count=None):
    """Strips on fresh vertex ids; either ``count`` strips or fill ``n_vertices``."""
    out = []
    nxt = first
    while True:
        size = int(sizes[rng.integers(len(sizes))])
        if count is None:
            size = min(size, first + n_vertices - nxt)
            if size <= 0:
                break
        elif len(out) >= count:
            break
        out.append(_strip(nxt, size, width))
        nxt += size
    return [s for strip in out for s in strip], nxt


def generate(config: SyntheticConfig) -> Filtration:
    """Filtration with ``config.T`` slices; reproducible under ``config.seed``."""
    if config.T < 1:
        raise ValueError("T must be >= 1")
    rng = np.random.default_rng(config.seed)
    d, g = config.d, config.ground_truth
    width = max(d, 1)
    sizes = config.sizes()
    start, next_id = _strips(rng, config.n_vertices, 0, sizes, width)
    if not any(len(s) >= d + 1 for s in start):
        raise DegenerateStart(f"starting complex on {config.n_vertices} vertices has no {d}-simplices")
    slices = [sorted(start)]
    engine = FeatureEngine(d, config.k, config.face_dim, track_counts=False)
    active: dict[tuple[int, ...], list[tuple[tuple[int, ...], float]]] = {}
    for t in range(config.T - 1):
        engine.advance(slices[t])
        for sigma in engine.refresh():
            fvec, cands = engine.cache[sigma]
            entries = []
            for v, h in cands.items():
                q = g(fvec + (h,))
                if q > 0:
                    entries.append((tuple(sorted(sigma + (v,))), q))
            if entries:
                active[sigma] = entries
            else:
                active.pop(sigma, None)
        taus, probs = [], []
        trie = engine.trie
        for sigma in sorted(active):
            for tau, q in active[sigma]:
                if not trie.has(tau):
                    taus.append(tau)
                    probs.append(q)
        hits = rng.random(len(probs)) < np.asarray(probs)
        nxt = sorted({tau for tau, hit in zip(taus, hits) if hit})
        if config.immigration:
            n_new = int(rng.poisson(config.immigration))
            if n_new:
                fresh, next_id = _strips(rng, 0, next_id, sizes, width, count=n_new)
                nxt.extend(fresh)
        slices.append(nxt)
    return Filtration(slices)


def _g_positive_features(config: SyntheticConfig, slice_counts) -> list[tuple[int, ...]]:
    """Features with ``g > 0`` ordered by how often they were observed."""
    totals = FeatureIndex.merge(slice_counts).cube
    ranked = sorted(totals, key=lambda F: (-totals[F][0], F))
    return [F for F in ranked if config.ground_truth(F) > 0]


def pilot_features(config: SyntheticConfig, n: int = 1, pilot_seed_offset: int = 10_007) -> list[tuple[int, ...]]:
    """The ``n`` most frequent features with positive ground truth in a pilot run."""
    cfg = replace(config, seed=config.seed + pilot_seed_offset)
    f = generate(cfg)
    counts = build_slice_counts(f, T=f.T - 2, d=cfg.d, k=cfg.k, D=cfg.face_dim)
    feats = _g_positive_features(cfg, counts)
    if not feats:
        raise DegenerateDistribution("pilot run observed no feature with positive ground truth")
    return feats[:n]


def _estimate(index: FeatureIndex, F, params: KernelParams) -> float:
    try:
        return estimate(index, F, params)
    except InsufficientData as exc:
        return exc.fallback if not math.isnan(exc.fallback) else 0.0


def _inverse(T: int) -> float:
    return 1.0 / T


def _consistency_replicate(job) -> list[float]:
    config, T_grid, probes, delta, beta_rule = job
    truth = [config.ground_truth(F) for F in probes]
    f = generate(config)
    counts = build_slice_counts(f, T=f.T - 2, d=config.d, k=config.k, D=config.face_dim)
    out = []
    for T in T_grid:
        # slices 0..T-2 carry labels from slices 1..T-1
        index = FeatureIndex.merge(counts[: T - 1])
        params = KernelParams(beta_rule(T), delta)
        out.append(float(np.mean([abs(_estimate(index, F, params) - g) for F, g in zip(probes, truth)])))
    return out


def consistency_experiment(
    config: SyntheticConfig,
    T_grid: Sequence[int],
    replicates: int,
    *,
    n_probes: int = 3,
    delta: int = 1,
    beta_rule: Callable[[int], float] = _inverse,
    jobs: int | None = 1,
) -> list[tuple[int, float]]:
    """Mean ``|g_est(F) - g(F)|`` over replicates and probed features, per T.

    Each replicate generates one filtration of ``max(T_grid)`` slices; the
    estimate at ``T`` uses its first ``T`` slices (label slices up to
    ``T - 1``), which has the same law as a fresh ``T``-slice run. Probed
    features are the ``n_probes`` most frequent ones with ``g > 0`` in a
    pilot run.
    """
    T_grid = list(T_grid)
    if not T_grid:
        raise ValueError("T_grid is empty")
    if T_grid != sorted(T_grid) or len(set(T_grid)) != len(T_grid):
        raise ValueError("T_grid must be strictly ascending")
    if T_grid[0] < 3:
        raise ValueError("every T must be >= 3")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    top = replace(config, T=T_grid[-1])
    probes = pilot_features(top, n_probes)
    jobs_ = [(replace(top, seed=config.seed + r), T_grid, probes, delta, beta_rule) for r in range(replicates)]
    errors = np.array(pmap(_consistency_replicate, jobs_, jobs))
    return [(T, float(e)) for T, e in zip(T_grid, errors.mean(axis=0))]


@dataclass
class NormalityResult:
    ks_statistic: float
    p_value: float
    empirical_variance: float
    z_values: np.ndarray
    probe: tuple[int, ...]

    def __iter__(self):
        return iter((self.ks_statistic, self.p_value, self.empirical_variance))


def _normality_replicate(job) -> float:
    config, F, params = job
    f = generate(config)
    counts = build_slice_counts(f, T=f.T - 2, d=config.d, k=config.k, D=config.face_dim)
    g = config.ground_truth(F)
    return math.sqrt(config.T) * (_estimate(FeatureIndex.merge(counts), F, params) - g)


def normality_experiment(
    config: SyntheticConfig,
    T: int,
    replicates: int,
    *,
    beta: float | None = None,
    delta: int = 1,
    probe: Sequence[int] | None = None,
    jobs: int | None = 1,
) -> NormalityResult:
    """KS test of standardized ``sqrt(T) * (g_est(F) - g(F))`` against N(0, 1).

    ``beta`` defaults to ``T ** -0.6``; ``F`` defaults to the most frequent
    positive-probability feature of a pilot run.
    """
    if replicates < 100:
        raise ValueError("normality check needs at least 100 replicates")
    beta = T ** -0.6 if beta is None else beta
    params = KernelParams(beta, delta)
    cfg = replace(config, T=T)
    F = tuple(probe) if probe is not None else pilot_features(cfg, 1)[0]
    jobs_ = [(replace(cfg, seed=config.seed + r), F, params) for r in range(replicates)]
    z = np.array(pmap(_normality_replicate, jobs_, jobs))
    return ks_against_normal(z, F)


def ks_against_normal(z, probe=(), *, n_mc: int = 9999, seed: int = 0) -> NormalityResult:
    """Standardize ``z`` by its own mean and sd, then KS-test against N(0, 1).

    Because the mean and sd are estimated from ``z``, the plain KS p-value
    would be conservative; the p-value here is calibrated by ``n_mc`` Monte
    Carlo draws under the same standardization (Lilliefors), so it is
    uniform under normality.
    """
    z = np.asarray(z, dtype=float)
    sd = z.std(ddof=1) if len(z) > 1 else 0.0
    if not sd > 0:
        raise DegenerateDistribution("all replicates gave the same value")
    res = stats.goodness_of_fit(stats.norm, z, statistic="ks", n_mc_samples=n_mc, random_state=seed)
    return NormalityResult(float(res.statistic), float(res.pvalue), float(sd**2), z, tuple(probe))


def consistency_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["T", "mean_abs_error"])
    w.writerows((T, f"{e:.6g}") for T, e in rows)
    return buf.getvalue()


def normality_csv(result: NormalityResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["replicate", "z_value"])
    w.writerows((i, f"{z:.6g}") for i, z in enumerate(result.z_values))
    return buf.getvalue()
