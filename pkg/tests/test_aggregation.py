import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcomm.aggregation import (
    Aggregator,
    KINDS,
    Partial,
    aggregate_direct,
    exact_kind,
    finalize,
    global_aggregate,
    local_aggregate,
    merge_partials,
    values_close,
)
from abcomm.errors import DimMismatch, KindMismatch


def test_direct_sum():
    a = Aggregator("sum", 2)
    out = aggregate_direct(a, [[1, 2], [3, 4]])
    assert out.tolist() == [4, 6]


def test_direct_mean():
    a = Aggregator("mean", 2)
    out = aggregate_direct(a, [[2, 0], [4, 2], [0, 4]])
    assert out.tolist() == [2, 2]


def test_direct_max():
    a = Aggregator("max", 2)
    assert aggregate_direct(a, [[1, 5], [2, 0]]).tolist() == [2, 5]


def test_direct_empty_is_zero():
    for kind in KINDS:
        out = aggregate_direct(Aggregator(kind, 3), [])
        assert out.tolist() == [0, 0, 0]
        assert out.dtype == np.float32


def test_local_mean_carries_sum_and_count():
    part = local_aggregate(Aggregator("mean", 2), [[2, 0], [4, 2]])
    assert part.values.tolist() == [6, 2]
    assert part.count == 2


def test_local_empty_sum():
    part = local_aggregate(Aggregator("sum", 2), [])
    assert part.empty and part.values.tolist() == [0, 0]


def test_local_max_singleton():
    part = local_aggregate(Aggregator("max", 2), [[1, 5]])
    assert not part.empty
    assert part.values.tolist() == [1, 5]


def test_global_mean():
    a = Aggregator("mean", 2)
    parts = [
        Partial("mean", np.array([6, 2], dtype=np.float32), 2),
        Partial("mean", np.array([0, 4], dtype=np.float32), 1),
    ]
    assert global_aggregate(a, parts).tolist() == [2, 2]


def test_global_sum_matches_direct_three_vectors():
    # one neighbor set split 2+1: local sums merged equal the direct sum
    a = Aggregator("sum", 3)
    rng = np.random.default_rng(5)
    xv, xw, xz = rng.uniform(-1, 1, (3, 3)).astype(np.float32)
    merged = global_aggregate(a, [local_aggregate(a, [xv, xw]), local_aggregate(a, [xz])])
    direct = aggregate_direct(a, [xv, xw, xz])
    assert values_close(merged, direct)


def test_global_max_of_singletons():
    a = Aggregator("max", 2)
    rows = np.random.default_rng(0).uniform(-1, 1, (3, 2)).astype(np.float32)
    parts = [local_aggregate(a, [row]) for row in rows]
    assert global_aggregate(a, parts).tobytes() == aggregate_direct(a, rows).tobytes()


def test_global_all_empty_is_zero():
    for kind in KINDS:
        a = Aggregator(kind, 2)
        parts = [local_aggregate(a, [])] * 3
        assert global_aggregate(a, parts).tolist() == [0, 0]


def test_kind_and_dim_mismatch():
    a = Aggregator("sum", 2)
    with pytest.raises(KindMismatch):
        global_aggregate(a, [local_aggregate(Aggregator("max", 2), [[1, 2]])])
    with pytest.raises(DimMismatch):
        global_aggregate(a, [local_aggregate(Aggregator("sum", 3), [[1, 2, 3]])])
    with pytest.raises(DimMismatch):
        aggregate_direct(a, [[1, 2, 3]])


multisets = st.tuples(
    st.sampled_from(KINDS),
    st.integers(1, 8),
    st.integers(0, 32),
    st.integers(1, 4),
    st.integers(0, 2**32 - 1),
)


@settings(max_examples=120, deadline=None)
@given(multisets)
def test_block_decomposition_equivalence(params):
    kind, dim, size, nblocks, seed = params
    rng = np.random.default_rng(seed)
    a = Aggregator(kind, dim)
    xs = rng.uniform(-1, 1, (size, dim)).astype(np.float32)
    labels = rng.integers(0, nblocks, size)
    parts = [local_aggregate(a, xs[labels == b]) for b in range(nblocks)]
    merged = global_aggregate(a, parts)
    direct = aggregate_direct(a, xs)
    if exact_kind(kind):
        assert merged.tobytes() == direct.tobytes()
    else:
        assert values_close(merged, direct)


@settings(max_examples=80, deadline=None)
@given(multisets)
def test_permutation_invariance(params):
    kind, dim, size, _nblocks, seed = params
    rng = np.random.default_rng(seed)
    a = Aggregator(kind, dim)
    xs = rng.uniform(-1, 1, (size, dim)).astype(np.float32)
    perm = rng.permutation(size)
    out = aggregate_direct(a, xs)
    out_p = aggregate_direct(a, xs[perm])
    if exact_kind(kind):
        assert out.tobytes() == out_p.tobytes()
    else:
        assert values_close(out, out_p)


@settings(max_examples=80, deadline=None)
@given(multisets)
def test_merge_grouping_insensitive(params):
    kind, dim, size, _nblocks, seed = params
    rng = np.random.default_rng(seed)
    a = Aggregator(kind, dim)
    xs = rng.uniform(-1, 1, (max(size, 4), dim)).astype(np.float32)
    p1, p2, p3, p4 = (local_aggregate(a, xs[i::4]) for i in range(4))
    flat = finalize(a, merge_partials(a, [p1, p2, p3, p4]))
    nested = finalize(
        a, merge_partials(a, [merge_partials(a, [p1, p2]), merge_partials(a, [p3, p4])])
    )
    if exact_kind(kind):
        assert flat.tobytes() == nested.tobytes()
    else:
        assert values_close(flat, nested)


def test_partial_equality_is_bitwise():
    a = Partial("sum", np.array([1.0, 2.0], dtype=np.float32), 2)
    b = Partial("sum", np.array([1.0, 2.0], dtype=np.float32), 2)
    c = Partial("sum", np.array([1.0, 2.5], dtype=np.float32), 2)
    assert a == b and a != c
