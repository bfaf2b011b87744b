"""Feature vectors: neighbourhood face vector followed by the candidate score.

Feature vectors are plain tuples of non-negative ints so they can be used as
dictionary keys.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .complex import ComplexSnapshot, Simplex
from .cooccurrence import CoOccurrenceStore
from .errors import CandidateOutsideBall, DimensionMismatch, VertexAlreadyMember
from .neighborhood import k_ball_simplex, neighborhood_feature

FeatureVector = tuple[int, ...]


def extract(
    c: ComplexSnapshot,
    store: CoOccurrenceStore,
    s: Iterable[int],
    v: int,
    k: int,
    D: int,
) -> FeatureVector:
    s = s if isinstance(s, Simplex) else Simplex(s)
    if v in s:
        raise VertexAlreadyMember(f"candidate {v} already belongs to {list(s)}")
    ball = k_ball_simplex(c, s, k)
    if v not in ball.members:
        raise CandidateOutsideBall(f"candidate {v} is not within {k} hops of {list(s)}")
    return neighborhood_feature(c, s, k, D) + (store.score(s, v),)


def l1_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise DimensionMismatch(f"lengths differ: {len(a)} vs {len(b)}")
    return sum(abs(x - y) for x, y in zip(a, b))


def format_feature(F: Sequence[int]) -> str:
    return ",".join(str(int(x)) for x in F)


def parse_feature(text: str) -> FeatureVector:
    return tuple(int(x) for x in text.strip().split(","))
