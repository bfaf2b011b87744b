"""k-balls in the 1-skeleton and the sub-complexes they span."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .complex import ComplexBuilder, ComplexSnapshot, Simplex, iter_bits, vertex_mask
from .errors import SimplexNotPresent, UnknownVertex


@dataclass(frozen=True)
class KBall:
    center: Simplex
    radius: int
    members: frozenset[int]

    def __contains__(self, v) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


def _bfs(adjacency: dict[int, frozenset[int]], sources: Iterable[int], k: int) -> set[int]:
    seen = set(sources)
    frontier = list(seen)
    for _ in range(k):
        nxt = []
        for u in frontier:
            for w in adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return seen


def k_ball_vertex(c: ComplexSnapshot, v: int, k: int) -> set[int]:
    """Vertices joined to ``v`` by a path of at most ``k`` edges (including ``v``)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if v not in c.vertex_set:
        raise UnknownVertex(f"vertex {v} is not in the complex")
    return _bfs(c.skeleton(), [v], k)


def k_ball_simplex(c: ComplexSnapshot, s: Iterable[int], k: int) -> KBall:
    """Union of the k-balls of the vertices of ``s``."""
    s = s if isinstance(s, Simplex) else Simplex(s)
    if k < 0:
        raise ValueError("k must be >= 0")
    if not c.contains(s):
        raise SimplexNotPresent(f"{list(s)} is not a simplex of the complex")
    return KBall(s, k, frozenset(_bfs(c.skeleton(), s, k)))


def sub_complex(c: ComplexSnapshot, s: Iterable[int], k: int) -> ComplexSnapshot:
    """Complex induced on the vertices of the k-ball around ``s``.

    A face is kept iff all of its vertices lie in the ball.
    """
    ball = k_ball_simplex(c, s, k).members
    builder = ComplexBuilder()
    for m in c.maximal:
        kept = ball.intersection(m)
        if kept:
            builder.insert(kept)
    return builder.snapshot()


def neighborhood_feature(c: ComplexSnapshot, s: Iterable[int], k: int, D: int) -> tuple[int, ...]:
    return sub_complex(c, s, k).f_vector(D)


def ball_mask(adj: dict[int, int], center_mask: int, k: int) -> int:
    """Bitmask k-ball from adjacency bitmasks (fast path used by the index builder)."""
    reach = center_mask
    frontier = center_mask
    for _ in range(k):
        nb = 0
        for v in iter_bits(frontier):
            nb |= adj.get(v, 0)
        frontier = nb & ~reach
        if not frontier:
            break
        reach |= frontier
    return reach


__all__ = [
    "KBall",
    "k_ball_vertex",
    "k_ball_simplex",
    "sub_complex",
    "neighborhood_feature",
    "ball_mask",
    "vertex_mask",
]
