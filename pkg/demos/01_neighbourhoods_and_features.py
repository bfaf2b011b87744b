"""
Neighbourhoods, face vectors and features
=========================================

A small graph simplicial complex with two filled triangles. We take the
edge [9, 10], grow its 1-hop ball in the 1-skeleton, count the faces of the
sub-complex induced on that ball, and append the co-occurrence score of a
candidate vertex to get the feature used by the estimator.
"""

from simplexpred import (
    ComplexSnapshot,
    CoOccurrenceStore,
    extract,
    k_ball_simplex,
    k_ball_vertex,
    sub_complex,
)

maximal = [
    [6, 9, 10], [9, 10, 13], [5, 9], [8, 9], [10, 14], [10, 15], [10, 11], [10, 7],
    [1, 2, 5], [2, 8], [3, 4, 11], [4, 7], [12, 14], [12, 15],
]
c = ComplexSnapshot(maximal)

print("1-ball of vertex 9:     ", sorted(k_ball_vertex(c, 9, 1)))
ball = k_ball_simplex(c, [9, 10], 1)
print("1-ball of edge [9, 10]: ", sorted(ball.members))

# (f_-1, f_0, f_1, f_2): the empty face, 10 vertices, 11 edges, 2 triangles
print("face vector:            ", sub_complex(c, [9, 10], 1).f_vector(3))

# The score counts past co-occurrences of the candidate with each vertex of
# the simplex; an edge contributes 1 per pair, a triangle contributes 2.
store = CoOccurrenceStore()
store.record_arrivals([[9, 10, 13], [10, 14], [9, 14]], slice_index=0)
for v in (13, 14, 7):
    print(f"feature of ([9, 10], {v:2d}):", extract(c, store, [9, 10], v, 1, 3))
