"""Simplices and simplicial complexes stored by their maximal simplices."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .errors import InvalidDimension, InvalidSimplex


class Simplex(tuple):
    """A simplex as a strictly increasing tuple of non-negative vertex ids.

    Compares and hashes like the underlying tuple, so ``Simplex([2, 1]) ==
    (1, 2)``.
    """

    __slots__ = ()

    def __new__(cls, vertices: Iterable[int] = ()):
        try:
            vs = sorted({int(v) for v in vertices})
        except (TypeError, ValueError) as exc:
            raise InvalidSimplex(f"vertex ids must be integers: {vertices!r}") from exc
        if not vs:
            raise InvalidSimplex("a simplex needs at least one vertex")
        if vs[0] < 0:
            raise InvalidSimplex(f"vertex ids must be non-negative: {vs!r}")
        return super().__new__(cls, vs)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self)

    def dimension(self) -> int:
        return len(self) - 1

    def __repr__(self) -> str:
        return f"Simplex({list(self)})"


def make_simplex(vertices: Iterable[int]) -> Simplex:
    return Simplex(vertices)


def faces(s: Simplex, dim: int) -> list[Simplex]:
    """All ``dim``-dimensional faces of ``s`` in lexicographic order."""
    if not 0 <= dim <= len(s) - 1:
        raise InvalidDimension(f"dim={dim} outside [0, {len(s) - 1}] for {s!r}")
    return [Simplex(c) for c in combinations(s, dim + 1)]


def vertex_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FaceTrie:
    """Prefix index of every face with at most ``max_size`` vertices.

    ``ext[prefix]`` is a bitmask of the vertices ``w > prefix[-1]`` such that
    ``prefix + (w,)`` is a face; ``ext[()]`` is the vertex mask. ``adj[v]``
    is the neighbourhood mask of ``v`` in the 1-skeleton.
    """

    __slots__ = ("max_size", "ext", "adj")

    def __init__(self, max_size: int):
        if max_size < 1:
            raise ValueError("max_size must be >= 1")
        self.max_size = max_size
        self.ext: dict[tuple[int, ...], int] = {(): 0}
        self.adj: dict[int, int] = {}

    def copy(self) -> "FaceTrie":
        other = FaceTrie.__new__(FaceTrie)
        other.max_size = self.max_size
        other.ext = dict(self.ext)
        other.adj = dict(self.adj)
        return other

    def add(self, simplex: tuple[int, ...]) -> None:
        """Register all faces of a sorted vertex tuple (capped at ``max_size``)."""
        ext = self.ext
        n = len(simplex)
        # suffix[i]: mask of simplex[i:]
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] | (1 << simplex[i])
        ext[()] |= suffix[0]
        full = suffix[0]
        adj = self.adj
        for v in simplex:
            adj[v] = adj.get(v, 0) | (full & ~(1 << v))
        index = {v: i for i, v in enumerate(simplex)}
        for size in range(1, min(self.max_size, n)):
            for pre in combinations(simplex, size):
                rest = suffix[index[pre[-1]] + 1]
                if rest:
                    ext[pre] = ext.get(pre, 0) | rest

    def has(self, face: tuple[int, ...]) -> bool:
        if not face:
            return True
        if len(face) > self.max_size:
            raise InvalidDimension(f"trie only indexes faces up to {self.max_size} vertices")
        return bool((self.ext.get(face[:-1], 0) >> face[-1]) & 1)

    @property
    def vertex_mask(self) -> int:
        return self.ext[()]

    def count_within(self, ball: int, D: int) -> tuple[int, ...]:
        """Face vector ``(1, f_0, ..., f_{D-1})`` of the complex induced on ``ball``."""
        if D > self.max_size:
            raise InvalidDimension(f"trie only indexes faces up to {self.max_size} vertices")
        counts = [1] + [0] * D
        ext = self.ext
        level: list[tuple[int, ...]] = [()]
        for size in range(1, D + 1):
            nxt = []
            total = 0
            last = size == D
            for pre in level:
                m = ext.get(pre, 0) & ball
                if m:
                    total += m.bit_count()
                    if not last:
                        nxt.extend(pre + (w,) for w in iter_bits(m))
            counts[size] = total
            if not total:
                break
            level = nxt
        return tuple(counts)

    def count_all(self, D: int) -> tuple[int, ...]:
        if D > self.max_size:
            raise InvalidDimension(f"trie only indexes faces up to {self.max_size} vertices")
        counts = [1] + [0] * D
        for pre, m in self.ext.items():
            if len(pre) < D:
                counts[len(pre) + 1] += m.bit_count()
        return tuple(counts)


class ComplexBuilder:
    """Mutable single-writer complex; call :meth:`snapshot` to freeze it."""

    def __init__(self, maximal: Iterable[Iterable[int]] = ()):
        self._maximal: dict[Simplex, frozenset[int]] = {}
        self._by_vertex: dict[int, set[Simplex]] = {}
        for s in maximal:
            self.insert(s)

    def _containing(self, vset: frozenset[int], s: tuple[int, ...]) -> bool:
        best = None
        for v in s:
            bucket = self._by_vertex.get(v)
            if not bucket:
                return False
            if best is None or len(bucket) < len(best):
                best = bucket
        return any(vset <= self._maximal[m] for m in best)

    def contains(self, s: Iterable[int]) -> bool:
        s = s if isinstance(s, Simplex) else Simplex(s)
        return self._containing(frozenset(s), s)

    def insert(self, s: Iterable[int]) -> bool:
        """Insert ``s`` with all its faces; return whether the complex changed."""
        s = s if isinstance(s, Simplex) else Simplex(s)
        vset = frozenset(s)
        if self._containing(vset, s):
            return False
        absorbed = set()
        for v in s:
            for m in self._by_vertex.get(v, ()):
                if self._maximal[m] <= vset:
                    absorbed.add(m)
        for m in absorbed:
            del self._maximal[m]
            for v in m:
                self._by_vertex[v].discard(m)
        self._maximal[s] = vset
        for v in s:
            self._by_vertex.setdefault(v, set()).add(s)
        return True

    @property
    def maximal(self) -> frozenset[Simplex]:
        return frozenset(self._maximal)

    def snapshot(self) -> "ComplexSnapshot":
        snap = ComplexSnapshot.__new__(ComplexSnapshot)
        snap._init_from(self._maximal)
        return snap


class ComplexSnapshot:
    """Immutable simplicial complex given by its maximal simplices.

    A simplex belongs to the complex iff it is a subset of some maximal
    simplex. Derived indexes (face tries, 1-skeleton) are computed lazily
    and cached.
    """

    def __init__(self, maximal: Iterable[Iterable[int]] = ()):
        builder = ComplexBuilder(maximal)
        self._init_from(builder._maximal)

    def _init_from(self, maximal: dict) -> None:
        self.maximal: frozenset[Simplex] = frozenset(maximal)
        self._sets = dict(maximal)
        self.vertex_set: frozenset[int] = frozenset(v for m in self.maximal for v in m)
        self._by_vertex: dict[int, list[Simplex]] | None = None
        self._tries: dict[int, FaceTrie] = {}
        self._skeleton: dict[int, frozenset[int]] | None = None

    def __eq__(self, other):
        if not isinstance(other, ComplexSnapshot):
            return NotImplemented
        return self.maximal == other.maximal

    def __hash__(self):
        return hash(self.maximal)

    def __repr__(self):
        body = ", ".join(str(list(m)) for m in sorted(self.maximal))
        return f"ComplexSnapshot({{{body}}})"

    def __len__(self):
        return len(self.maximal)

    def __contains__(self, s) -> bool:
        return self.contains(s)

    def _index(self) -> dict[int, list[Simplex]]:
        if self._by_vertex is None:
            idx: dict[int, list[Simplex]] = {}
            for m in self.maximal:
                for v in m:
                    idx.setdefault(v, []).append(m)
            self._by_vertex = idx
        return self._by_vertex

    def contains(self, s: Iterable[int]) -> bool:
        s = s if isinstance(s, Simplex) else Simplex(s)
        idx = self._index()
        best = None
        for v in s:
            bucket = idx.get(v)
            if not bucket:
                return False
            if best is None or len(bucket) < len(best):
                best = bucket
        vset = frozenset(s)
        return any(vset <= self._sets[m] for m in best)

    def insert(self, s: Iterable[int]) -> "ComplexSnapshot":
        builder = ComplexBuilder()
        builder._maximal = dict(self._sets)
        builder._by_vertex = {v: set(ms) for v, ms in self._index().items()}
        if not builder.insert(s):
            return self
        return builder.snapshot()

    def dimension(self) -> int:
        return max((len(m) for m in self.maximal), default=0) - 1

    def trie(self, max_size: int) -> FaceTrie:
        """Face trie with faces of up to ``max_size`` vertices (cached)."""
        for size, t in self._tries.items():
            if size >= max_size:
                return t
        t = FaceTrie(max_size)
        for m in self.maximal:
            t.add(m)
        self._tries[max_size] = t
        return t

    def skeleton(self) -> dict[int, frozenset[int]]:
        """Adjacency of the 1-skeleton (every vertex present as a key)."""
        if self._skeleton is None:
            nbrs: dict[int, set[int]] = {v: set() for v in self.vertex_set}
            for m in self.maximal:
                for u, v in combinations(m, 2):
                    nbrs[u].add(v)
                    nbrs[v].add(u)
            self._skeleton = {v: frozenset(n) for v, n in nbrs.items()}
        return self._skeleton

    def simplices_of_dim(self, dim: int) -> set[Simplex]:
        if dim < 0:
            raise InvalidDimension("dim must be >= 0")
        out: set[Simplex] = set()
        for m in self.maximal:
            if len(m) > dim:
                out.update(combinations(m, dim + 1))
        return {Simplex(c) for c in out}

    def f_vector(self, D: int) -> tuple[int, ...]:
        """``(f_{-1}, f_0, ..., f_{D-1})`` with ``f_{-1} = 1``, zero-padded."""
        if D < 0:
            raise InvalidDimension("D must be >= 0")
        if D == 0:
            return (1,)
        return self.trie(D).count_all(D)


EMPTY = ComplexSnapshot()


def insert(c: ComplexSnapshot, s: Iterable[int]) -> ComplexSnapshot:
    return c.insert(s)


def contains(c: ComplexSnapshot, s: Iterable[int]) -> bool:
    return c.contains(s)


def simplices_of_dim(c: ComplexSnapshot, dim: int) -> set[Simplex]:
    return c.simplices_of_dim(dim)


def f_vector(c: ComplexSnapshot, D: int) -> tuple[int, ...]:
    return c.f_vector(D)
