"""Timestamped-simplex datasets and the time-sliced filtration built from them.

Datasets use the three-file layout ``<name>-nverts.txt`` (vertices per
simplex), ``<name>-simplices.txt`` (flattened vertex ids) and
``<name>-times.txt`` (one timestamp per simplex), whitespace separated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .complex import ComplexBuilder, ComplexSnapshot, Simplex
from .cooccurrence import CoOccurrenceStore
from .errors import MalformedDataset, ParseError, TooManySlices

# short names accepted on the command line
DATASET_ALIASES = {
    "enron": "email-Enron",
    "eu": "email-Eu",
    "contact": "contact-high-school",
    "ndc": "NDC-classes",
}


@dataclass
class ArrivalLog:
    arrivals: list[tuple[int, Simplex]] = field(default_factory=list)

    def __len__(self):
        return len(self.arrivals)

    def __iter__(self):
        return iter(self.arrivals)

    def sorted(self) -> "ArrivalLog":
        return ArrivalLog(sorted(self.arrivals, key=lambda a: a[0]))

    def to_lines(self) -> list[str]:
        return [" ".join(map(str, (t, *s))) for t, s in self.arrivals]

    def write(self, path) -> None:
        """Normalized single-file format: ``timestamp v1 v2 ... vk`` per line."""
        Path(path).write_text("".join(line + "\n" for line in self.to_lines()))

    @classmethod
    def read(cls, path) -> "ArrivalLog":
        arrivals = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            if not line.strip():
                continue
            toks = _ints(line.split(), f"{path}:{lineno}")
            if len(toks) < 2:
                raise MalformedDataset(f"{path}:{lineno}: need a timestamp and at least one vertex")
            arrivals.append((toks[0], Simplex(toks[1:])))
        return cls(arrivals).sorted()


def _ints(tokens: Iterable[str], where: str) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"{where}: non-integer token {tok!r}") from None
    return out


def _read_ints(path) -> list[int]:
    return _ints(Path(path).read_text().split(), str(path))


def load_dataset(nverts_path, simplices_path, times_path) -> ArrivalLog:
    nverts = _read_ints(nverts_path)
    flat = _read_ints(simplices_path)
    times = _read_ints(times_path)
    if sum(nverts) != len(flat):
        raise MalformedDataset(
            f"nverts sums to {sum(nverts)} but the simplices file has {len(flat)} ids"
        )
    if len(times) != len(nverts):
        raise MalformedDataset(f"{len(nverts)} simplices but {len(times)} timestamps")
    if any(n < 1 for n in nverts):
        raise MalformedDataset("every simplex needs at least one vertex")
    arrivals = []
    pos = 0
    for n, t in zip(nverts, times):
        arrivals.append((t, Simplex(flat[pos : pos + n])))
        pos += n
    return ArrivalLog(arrivals).sorted()


def dataset_paths(name_or_prefix: str, data_dir=None) -> tuple[Path, Path, Path]:
    """Resolve a dataset name (or alias, or path prefix) to its three files.

    Search order: the literal prefix, then ``<data_dir>/<name>/<name>``,
    then ``<data_dir>/<name>``. ``data_dir`` defaults to ``$SIMPLEXPRED_DATA``
    or ``./data``.
    """
    name = DATASET_ALIASES.get(name_or_prefix.lower(), name_or_prefix)
    root = Path(data_dir or os.environ.get("SIMPLEXPRED_DATA", "data"))
    for prefix in (Path(name_or_prefix), root / name / name, root / name, Path(name)):
        files = tuple(Path(f"{prefix}-{part}.txt") for part in ("nverts", "simplices", "times"))
        if all(f.exists() for f in files):
            return files
    raise MalformedDataset(
        f"dataset {name_or_prefix!r} not found (looked for {name}-nverts.txt etc. under {root})"
    )


def load_named(name_or_prefix: str, data_dir=None) -> ArrivalLog:
    return load_dataset(*dataset_paths(name_or_prefix, data_dir))


class Filtration:
    """Cumulative sequence of complexes, one per time slice.

    Only the per-slice arrival lists are stored; snapshots are rebuilt on
    demand and cached.
    """

    def __init__(self, slice_arrivals: Sequence[Sequence[Iterable[int]]]):
        self.slice_arrivals: list[list[Simplex]] = [
            [s if isinstance(s, Simplex) else Simplex(s) for s in group] for group in slice_arrivals
        ]
        self._snapshots: dict[int, ComplexSnapshot] = {}

    @property
    def T(self) -> int:
        return len(self.slice_arrivals)

    def __len__(self) -> int:
        return self.T

    def __getitem__(self, t: int) -> ComplexSnapshot:
        return self.snapshot(t)

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        return self.slice_arrivals == other.slice_arrivals

    def snapshot(self, t: int) -> ComplexSnapshot:
        if t < 0:
            t += self.T
        if not 0 <= t < self.T:
            raise IndexError(f"slice {t} outside [0, {self.T})")
        if t not in self._snapshots:
            start = max((u for u in self._snapshots if u < t), default=-1)
            builder = ComplexBuilder()
            if start >= 0:
                builder = ComplexBuilder(self._snapshots[start].maximal)
            for u in range(start + 1, t + 1):
                for s in self.slice_arrivals[u]:
                    builder.insert(s)
            self._snapshots[t] = builder.snapshot()
        return self._snapshots[t]

    @property
    def slices(self) -> list[ComplexSnapshot]:
        builder = ComplexBuilder()
        out = []
        for t, group in enumerate(self.slice_arrivals):
            if t in self._snapshots:
                builder = ComplexBuilder(self._snapshots[t].maximal)
            else:
                for s in group:
                    builder.insert(s)
                self._snapshots[t] = builder.snapshot()
            out.append(self._snapshots[t])
        return out

    def store(self, t: int) -> CoOccurrenceStore:
        """Co-occurrence store after recording slices ``0..t``."""
        st = CoOccurrenceStore()
        for u in range(t + 1):
            st.record_arrivals(self.slice_arrivals[u], u)
        return st

    def truncate(self, n_slices: int) -> "Filtration":
        return Filtration(self.slice_arrivals[:n_slices])

    def n_arrivals(self) -> int:
        return sum(len(g) for g in self.slice_arrivals)


def slice_log(log: ArrivalLog, T: int) -> Filtration:
    """Split the log, in arrival order, into ``T`` groups of near-equal count.

    With ``n = q*T + r`` arrivals the first ``r`` groups get ``q + 1``.
    """
    n = len(log)
    if T < 2:
        raise ValueError("T must be >= 2")
    if n == 0:
        raise ValueError("cannot slice an empty log")
    if T > n:
        raise TooManySlices(f"{T} slices requested but only {n} arrivals")
    q, r = divmod(n, T)
    groups = []
    pos = 0
    for i in range(T):
        size = q + (1 if i < r else 0)
        groups.append([s for _, s in log.arrivals[pos : pos + size]])
        pos += size
    return Filtration(groups)
