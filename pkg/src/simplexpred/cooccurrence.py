"""Pairwise co-occurrence weights and the candidate scoring function."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .errors import SliceOrderViolation, VertexAlreadyMember


class CoOccurrenceStore:
    """Cumulative co-occurrence weights between vertex pairs.

    Every arriving simplex of dimension ``d >= 1`` adds ``d`` to the weight of
    each vertex pair it contains. Repeated arrivals count every time.
    Slices must be recorded in order, starting at slice 0.
    """

    def __init__(self):
        self._w: dict[int, dict[int, int]] = {}
        self.last_updated_slice = -1

    def copy(self) -> "CoOccurrenceStore":
        other = CoOccurrenceStore()
        other._w = {v: dict(nb) for v, nb in self._w.items()}
        other.last_updated_slice = self.last_updated_slice
        return other

    def __eq__(self, other):
        if not isinstance(other, CoOccurrenceStore):
            return NotImplemented
        return self.last_updated_slice == other.last_updated_slice and self.weights == other.weights

    def add(self, simplex: Iterable[int]) -> None:
        """Record one arrival without slice bookkeeping."""
        vs = tuple(sorted(set(simplex)))
        d = len(vs) - 1
        if d < 1:
            return
        w = self._w
        for u, v in combinations(vs, 2):
            nu = w.setdefault(u, {})
            nu[v] = nu.get(v, 0) + d
            nv = w.setdefault(v, {})
            nv[u] = nv.get(u, 0) + d

    def record_arrivals(self, arrivals: Iterable[Iterable[int]], slice_index: int) -> "CoOccurrenceStore":
        if slice_index != self.last_updated_slice + 1:
            raise SliceOrderViolation(
                f"expected slice {self.last_updated_slice + 1}, got {slice_index}"
            )
        for s in arrivals:
            self.add(s)
        self.last_updated_slice = slice_index
        return self

    def weight(self, u: int, v: int) -> int:
        return self._w.get(u, {}).get(v, 0)

    @property
    def weights(self) -> dict[tuple[int, int], int]:
        """Weights keyed by ordered pairs ``(u, v)`` with ``u < v``."""
        return {(u, v): x for u, nb in self._w.items() for v, x in nb.items() if u < v}

    def neighbors(self, v: int) -> dict[int, int]:
        return self._w.get(v, {})

    def score(self, s: Iterable[int], v: int) -> int:
        """Sum of the weights between ``v`` and each vertex of ``s``."""
        s = tuple(s)
        if v in s:
            raise VertexAlreadyMember(f"vertex {v} already belongs to {list(s)}")
        w = self._w
        return sum(w.get(u, {}).get(v, 0) for u in s)


def record_arrivals(store: CoOccurrenceStore, arrivals, slice_index: int) -> CoOccurrenceStore:
    """Functional form: returns an updated copy and leaves ``store`` untouched."""
    return store.copy().record_arrivals(arrivals, slice_index)


def score(store: CoOccurrenceStore, s, v: int) -> int:
    return store.score(s, v)
