"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

vertex = st.integers(min_value=0, max_value=9)
simplex_lists = st.lists(st.lists(vertex, min_size=1, max_size=4), min_size=0, max_size=8)
slice_lists = st.lists(
    st.lists(st.lists(vertex, min_size=1, max_size=4), min_size=0, max_size=3), min_size=2, max_size=4
)
feature = st.lists(st.integers(min_value=0, max_value=4), min_size=3, max_size=3).map(tuple)
