from __future__ import annotations

from hypothesis import strategies as st

from lmax_ptas.core import Instance, Timeline


@st.composite
def instances(draw: st.DrawFn, *, min_n: int = 1, max_n: int = 5, p_max: int = 8, r_max: int = 12, q_max: int = 10) -> Instance:
    rows = draw(
        st.lists(
            st.tuples(st.integers(1, p_max), st.integers(0, r_max), st.integers(0, q_max)),
            min_size=min_n,
            max_size=max_n,
        )
    )
    return Instance.from_rows(rows)


@st.composite
def windows(draw: st.DrawFn, *, horizon: int = 20, min_length: int = 0) -> tuple[int, int]:
    t1 = draw(st.integers(0, horizon))
    t2 = draw(st.integers(t1 + min_length, horizon + min_length + 8))
    return t1, t2
