"""Sampling of labelled (simplex, candidate) pairs, AUC, and beta selection.

Slices are 0-based. The label slice is the last slice of the filtration;
sampled d-simplices come from the earlier slices, each tagged with the slice
where it first appeared (its origin). Candidates, features and baseline
scores are all taken at the origin slice.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from ._engine import FeatureEngine
from ._parallel import pmap
from .baselines import METHODS, baseline_score
from .complex import Simplex
from .errors import (
    DegenerateLabels,
    EmptyGrid,
    InsufficientNegatives,
    InsufficientPositives,
)
from .estimator import FeatureIndex, KernelParams, build_index, estimate_or_fallback
from .ingestion import Filtration, load_named, slice_log

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledSample:
    simplex: Simplex
    candidate: int
    origin_slice: int
    label: bool
    feature: tuple[int, ...] | None = field(default=None, compare=False)


def candidate_population(f: Filtration, d: int, k: int, D: int | None = None) -> list[LabeledSample]:
    """Every (d-simplex, candidate) pair at its origin slice, labelled by the last slice."""
    D = d + 2 if D is None else D
    if f.T < 2:
        raise ValueError("need at least two slices")
    L = f.T - 1
    engine = FeatureEngine(d, k, D, track_counts=False)
    origin: dict[tuple[int, ...], int] = {}
    records = []
    for t in range(L):
        engine.advance(f.slice_arrivals[t])
        for sigma in engine.refresh():
            if sigma in origin:
                continue
            origin[sigma] = t
            fvec, cands = engine.cache[sigma]
            records.extend((sigma, v, t, fvec + (h,)) for v, h in cands.items())
    arriving = engine.new_cofaces(f.slice_arrivals[L])
    out = []
    for sigma, v, t, F in sorted(records):
        tau = tuple(sorted(sigma + (v,)))
        out.append(LabeledSample(Simplex(sigma), v, t, tau in arriving, F))
    return out


def sample_candidates(
    f: Filtration,
    d: int,
    k: int,
    n_per_class: int,
    seed: int = 0,
    D: int | None = None,
) -> list[LabeledSample]:
    """``n_per_class`` positives followed by ``n_per_class`` negatives, drawn without replacement."""
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    population = candidate_population(f, d, k, D)
    pos = [s for s in population if s.label]
    neg = [s for s in population if not s.label]
    if len(pos) < n_per_class:
        raise InsufficientPositives(
            f"only {len(pos)} positive pairs available, {n_per_class} requested", achievable=len(pos)
        )
    if len(neg) < n_per_class:
        raise InsufficientNegatives(
            f"only {len(neg)} negative pairs available, {n_per_class} requested", achievable=len(neg)
        )
    rng = np.random.default_rng(seed)
    pi = rng.choice(len(pos), size=n_per_class, replace=False)
    ni = rng.choice(len(neg), size=n_per_class, replace=False)
    return [pos[i] for i in sorted(pi)] + [neg[i] for i in sorted(ni)]


def auc(scores: Sequence[float], labels: Sequence) -> float:
    """Mann-Whitney AUC; ties count one half."""
    y = np.asarray(labels, dtype=bool)
    s = np.asarray(scores, dtype=float)
    if y.shape != s.shape:
        raise ValueError("scores and labels differ in length")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("AUC needs both positive and negative labels")
    ranks = rankdata(s)
    return float((ranks[y].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def training_index(f: Filtration, d: int, k: int, D: int | None, p: int | None = None) -> FeatureIndex:
    """Index whose labels stop one slice before the label slice."""
    L = f.T - 1
    T = L - 2
    if T < 0:
        raise ValueError(f"need at least 3 slices to train and test, got {f.T}")
    return build_index(f, T=T, p=p, d=d, k=k, D=D)


def score_samples(samples, method: str, f: Filtration, index=None, params=None) -> list[float]:
    if method == "ours":
        return [estimate_or_fallback(index, s.feature, params) for s in samples]
    return [baseline_score(method, f.snapshot(s.origin_slice), s.simplex, s.candidate) for s in samples]


def _seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def cross_validate_beta(
    f: Filtration,
    betas: Sequence[float],
    K: int = 3,
    *,
    d: int = 1,
    k: int = 1,
    D: int | None = None,
    delta: int = 1,
    n_per_class: int = 100,
    seed: int = 0,
    p: int | None = None,
) -> tuple[float, dict[float, float]]:
    """Pick beta by mean AUC over K folds.

    Fold ``j`` drops the last ``j`` slices so slice ``T-1-j`` becomes the label
    slice; its training index ends two slices earlier. Ties go to the smaller
    beta.
    """
    betas = sorted(set(float(b) for b in betas))
    if not betas:
        raise EmptyGrid("beta grid is empty")
    if K < 2:
        raise ValueError("K must be >= 2")
    if f.T < K + 3:
        raise ValueError(f"{K}-fold validation needs at least {K + 3} slices, got {f.T}")
    if len(betas) == 1:
        return betas[0], {}
    totals = {b: 0.0 for b in betas}
    for j in range(1, K + 1):
        fold = f.truncate(f.T - j)
        samples = sample_candidates(fold, d, k, n_per_class, _seed(seed, j), D)
        index = training_index(fold, d, k, D, p)
        labels = [s.label for s in samples]
        for b in betas:
            scores = score_samples(samples, "ours", fold, index, KernelParams(b, delta))
            totals[b] += auc(scores, labels)
    mean = {b: totals[b] / K for b in betas}
    best = betas[0]
    for b in betas[1:]:
        if mean[b] > mean[best]:
            best = b
    return best, mean


@dataclass
class ExperimentConfig:
    data: str = "enron"
    data_dir: str | None = None
    method: str = "ours"
    d: int = 1
    k: int = 1
    D: int | None = None
    delta: int = 1
    betas: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0)
    T: int = 20
    K: int = 3
    p: int | None = None
    repeats: int = 10
    n_per_class: int = 100
    seed: int = 0

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        """Flat ``key=value`` file; keys mirror the command-line flags."""
        types = {fld.name: fld.type for fld in fields(cls)}
        values = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key == "beta_grid":
                key = "betas"
            if not sep or key not in types:
                raise ValueError(f"{path}:{lineno}: unknown setting {line!r}")
            values[key] = _coerce(key, val.strip())
        return cls(**values)


def _coerce(key: str, val: str):
    if key == "betas":
        return tuple(float(x) for x in val.split(","))
    if key in ("data", "data_dir", "method"):
        return val
    if val.lower() in ("", "none", "all"):
        return None
    return int(val)


@dataclass
class EvalReport:
    auc: float
    runtime_seconds: float
    beta_selected: float | None
    n_samples: int
    repeats: int
    method: str = "ours"
    auc_std: float = 0.0
    per_repeat_auc: list[float] = field(default_factory=list)
    per_repeat_beta: list[float | None] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def to_table(self) -> str:
        beta = "-" if self.beta_selected is None else f"{self.beta_selected:g}"
        rows = [
            ("method", self.method),
            ("auc", f"{self.auc:.4f} (sd {self.auc_std:.4f})"),
            ("runtime_s", f"{self.runtime_seconds:.3f}"),
            ("beta", beta),
            ("samples", str(self.n_samples)),
            ("repeats", str(self.repeats)),
        ]
        return "\n".join(f"{k}\t{v}" for k, v in rows)


def _run_repeat(job) -> tuple[float, float, float | None, int]:
    config, f, r = job
    seed_r = _seed(config.seed, 10_000 + r)
    t0 = time.perf_counter()
    beta = None
    if config.method == "ours":
        beta, table = cross_validate_beta(
            f, config.betas, config.K, d=config.d, k=config.k, D=config.D,
            delta=config.delta, n_per_class=config.n_per_class, seed=seed_r, p=config.p,
        )
        log.info("repeat %d: cv table %s -> beta=%g", r, table, beta)
        index = training_index(f, config.d, config.k, config.D, config.p)
        samples = sample_candidates(f, config.d, config.k, config.n_per_class, seed_r, config.D)
        scores = score_samples(samples, "ours", f, index, KernelParams(beta, config.delta))
    else:
        samples = sample_candidates(f, config.d, config.k, config.n_per_class, seed_r, config.D)
        scores = score_samples(samples, config.method, f)
    value = auc(scores, [s.label for s in samples])
    runtime = time.perf_counter() - t0
    log.info("repeat %d: auc=%.4f runtime=%.3fs", r, value, runtime)
    return value, runtime, beta, len(samples)


def run_experiment(
    config: ExperimentConfig, filtration: Filtration | None = None, jobs: int | None = 1
) -> EvalReport:
    """Average AUC and wall-clock runtime over ``config.repeats`` repeats.

    Loading and slicing the dataset is excluded from the runtime. Repeats
    differ only in their sampling seed; ``jobs`` runs them in parallel.
    """
    if config.method != "ours" and config.method not in METHODS:
        raise ValueError(f"unknown method {config.method!r}")
    if config.repeats < 1:
        raise ValueError("repeats must be >= 1")
    if filtration is None:
        filtration = slice_log(load_named(config.data, config.data_dir), config.T)
    results = pmap(_run_repeat, [(config, filtration, r) for r in range(config.repeats)], jobs)
    aucs = [r[0] for r in results]
    runtimes = [r[1] for r in results]
    chosen = [r[2] for r in results]
    betas = [b for b in chosen if b is not None]
    beta_selected = None
    if betas:
        vals, counts = np.unique(betas, return_counts=True)
        beta_selected = float(vals[np.argmax(counts)])
    return EvalReport(
        auc=float(np.mean(aucs)),
        runtime_seconds=float(np.mean(runtimes)),
        beta_selected=beta_selected,
        n_samples=results[-1][3],
        repeats=config.repeats,
        method=config.method,
        auc_std=float(np.std(aucs)),
        per_repeat_auc=aucs,
        per_repeat_beta=chosen,
    )
