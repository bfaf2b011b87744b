"""Pairwise link-prediction heuristics averaged over a simplex's vertices.

All scores use the 1-skeleton of the given snapshot.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from .complex import ComplexSnapshot
from .errors import VertexAlreadyMember


def _nbrs(c: ComplexSnapshot, v: int) -> frozenset[int]:
    return c.skeleton().get(v, frozenset())


def adamic_adar(c: ComplexSnapshot, u: int, v: int) -> float:
    sk = c.skeleton()
    total = 0.0
    for w in _nbrs(c, u) & _nbrs(c, v):
        deg = len(sk[w])
        if deg > 1:  # log(1) == 0
            total += 1.0 / math.log(deg)
    return total


def jaccard(c: ComplexSnapshot, u: int, v: int) -> float:
    nu, nv = _nbrs(c, u), _nbrs(c, v)
    union = nu | nv
    if not union:
        return 0.0
    return len(nu & nv) / len(union)


def preferential_attachment(c: ComplexSnapshot, u: int, v: int) -> float:
    return float(len(_nbrs(c, u)) * len(_nbrs(c, v)))


METHODS: dict[str, Callable[[ComplexSnapshot, int, int], float]] = {
    "aa": adamic_adar,
    "jc": jaccard,
    "pa": preferential_attachment,
}


def baseline_score(method, c: ComplexSnapshot, s: Iterable[int], v: int) -> float:
    """Mean of ``method(c, v_i, v)`` over the vertices ``v_i`` of ``s``."""
    fn = METHODS[method] if isinstance(method, str) else method
    s = tuple(s)
    if v in s:
        raise VertexAlreadyMember(f"vertex {v} already belongs to {list(s)}")
    return sum(fn(c, u, v) for u in s) / len(s)
