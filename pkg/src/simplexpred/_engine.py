"""Incremental slice-by-slice feature maintenance.

Replays arrivals one slice at a time and keeps, for every d-simplex, its
face vector and the scores of its k-ball candidates. After a slice only the
d-simplices with a vertex within ``k`` hops of that slice's arrivals are
recomputed; everything else provably keeps its features (balls, induced
faces and scores can only change through an arrival within reach).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .complex import FaceTrie, iter_bits, vertex_mask
from .cooccurrence import CoOccurrenceStore
from .neighborhood import ball_mask


class FeatureEngine:
    def __init__(self, d: int, k: int, D: int, *, track_counts: bool = True):
        if d < 0 or k < 0 or D < 0:
            raise ValueError("d, k and D must be non-negative")
        self.d, self.k, self.D = d, k, D
        self.trie = FaceTrie(max(D, d + 2))
        self.store = CoOccurrenceStore()
        self.slice = -1
        self.track_counts = track_counts
        self._seen: set[tuple[int, ...]] = set()
        self._dfaces_by_vertex: dict[int, set[tuple[int, ...]]] = {}
        self._pending: set[tuple[int, ...]] = set()
        # sigma -> (face vector, {candidate: score})
        self.cache: dict[tuple[int, ...], tuple[tuple[int, ...], dict[int, int]]] = {}
        # feature -> number of (sigma, candidate) pairs carrying it right now
        self.current: dict[tuple[int, ...], int] = {}

    def advance(self, arrivals: Iterable[Iterable[int]]) -> None:
        """Apply the next slice's arrivals."""
        self.slice += 1
        self.store.last_updated_slice = self.slice
        touched = 0
        size = self.d + 1
        trie = self.trie
        for s in arrivals:
            t = tuple(s)
            touched |= vertex_mask(t)
            self.store.add(t)
            if t in self._seen:
                continue
            self._seen.add(t)
            if len(t) >= size:
                for f in combinations(t, size):
                    if not trie.has(f):
                        for v in f:
                            self._dfaces_by_vertex.setdefault(v, set()).add(f)
                        self._pending.add(f)
            trie.add(t)
        if not touched or not self.cache:
            return
        region = ball_mask(trie.adj, touched, self.k)
        by_vertex = self._dfaces_by_vertex
        for v in iter_bits(region):
            faces = by_vertex.get(v)
            if faces:
                self._pending.update(faces)

    def refresh(self) -> set[tuple[int, ...]]:
        """Recompute features of every d-simplex marked dirty; return them."""
        pending = self._pending
        if not pending:
            return set()
        trie, store, k, D = self.trie, self.store, self.k, self.D
        adj = trie.adj
        cache = self.cache
        current = self.current
        track = self.track_counts
        fvec_memo: dict[int, tuple[int, ...]] = {}
        for sigma in pending:
            cm = vertex_mask(sigma)
            ball = ball_mask(adj, cm, k)
            fvec = fvec_memo.get(ball)
            if fvec is None:
                fvec = trie.count_within(ball, D)
                fvec_memo[ball] = fvec
            nbw = [store.neighbors(u) for u in sigma]
            if len(nbw) == 1:
                w0 = nbw[0]
                cands = {v: w0.get(v, 0) for v in iter_bits(ball & ~cm)}
            else:
                cands = {v: sum(w.get(v, 0) for w in nbw) for v in iter_bits(ball & ~cm)}
            if track:
                old = cache.get(sigma)
                if old is not None:
                    ofv = old[0]
                    for h in old[1].values():
                        key = ofv + (h,)
                        n = current[key] - 1
                        if n:
                            current[key] = n
                        else:
                            del current[key]
                for h in cands.values():
                    key = fvec + (h,)
                    current[key] = current.get(key, 0) + 1
            cache[sigma] = (fvec, cands)
        refreshed = set(pending)
        pending.clear()
        return refreshed

    def new_cofaces(self, next_arrivals: Iterable[Iterable[int]]) -> set[tuple[int, ...]]:
        """(d+1)-simplices that the given arrivals add to the current complex."""
        size = self.d + 2
        trie = self.trie
        out: set[tuple[int, ...]] = set()
        for s in next_arrivals:
            t = tuple(s)
            if len(t) < size or t in self._seen:
                continue
            for tau in combinations(t, size):
                if tau not in out and not trie.has(tau):
                    out.add(tau)
        return out

    def positive_pairs(self, next_arrivals) -> list[tuple[tuple[int, ...], int, tuple[int, ...]]]:
        """``(sigma, candidate, feature)`` for every pair whose coface arrives next."""
        cache = self.cache
        out = []
        for tau in self.new_cofaces(next_arrivals):
            for i, v in enumerate(tau):
                sigma = tau[:i] + tau[i + 1 :]
                entry = cache.get(sigma)
                if entry is None:
                    continue
                h = entry[1].get(v)
                if h is not None:
                    out.append((sigma, v, entry[0] + (h,)))
        return out

    def pairs(self):
        """Iterate ``(sigma, candidate, feature)`` over the current complex."""
        for sigma, (fvec, cands) in self.cache.items():
            for v, h in cands.items():
                yield sigma, v, fvec + (h,)
