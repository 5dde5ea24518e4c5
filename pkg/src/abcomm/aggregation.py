"""Decomposable neighbor-aggregation algebra.

Four permutation-invariant reductions over multisets of float32 vectors: sum,
mean, max, min. Each one splits into a local stage producing a compact
Partial and a global stage merging Partials, such that merging the partials
of any disjoint blocks reproduces the direct reduction over the union.

Numerics: inputs, Partial payloads, and final results live in float32 (the
wire type); running sums accumulate in float64 so that the only float32
roundings happen at partial boundaries. With that, block reassociation moves
sum/mean results by at most a few float32 ulps, and max/min are bit-exact.
Closeness for sum/mean is judged by ``values_close``: componentwise
|a - b| <= rtol * max(1, |a|, |b|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvalidParams, KindMismatch

KINDS = ("sum", "mean", "max", "min")
REL_TOL = 1e-5


@dataclass(frozen=True)
class Aggregator:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"aggregator kind must be one of {KINDS}, got {self.kind!r}")
        if self.dim < 1:
            raise InvalidParams(f"aggregator dim must be >= 1, got {self.dim}")


@dataclass(frozen=True, eq=False)
class Partial:
    """Result of the local stage.

    values: for sum/mean the running (float32) sum, for max/min the running
    extremum. count: how many inputs were folded in; count == 0 marks the
    neutral/empty partial (values are zeros then).
    """

    kind: str
    values: np.ndarray
    count: int

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @property
    def empty(self) -> bool:
        return self.count == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partial):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.count == other.count
            and self.values.tobytes() == other.values.tobytes()
        )

    def __repr__(self) -> str:
        return f"Partial(kind={self.kind!r}, count={self.count}, values={self.values.tolist()})"


def _as_rows(a: Aggregator, xs) -> np.ndarray:
    rows = np.asarray(list(xs), dtype=np.float32)
    if rows.size == 0:
        return rows.reshape(0, a.dim)
    if rows.ndim != 2 or rows.shape[1] != a.dim:
        raise DimMismatch(f"expected vectors of dim {a.dim}, got shape {rows.shape}")
    return rows


def _fold_sum64(rows: np.ndarray) -> np.ndarray:
    acc = np.zeros(rows.shape[1], dtype=np.float64)
    for row in rows:
        acc += row
    return acc


def _fold_extremum(rows: np.ndarray, kind: str) -> np.ndarray:
    op = np.maximum if kind == "max" else np.minimum
    acc = rows[0].copy()
    for row in rows[1:]:
        acc = op(acc, row)
    return acc


def aggregate_direct(a: Aggregator, xs) -> np.ndarray:
    """Reduce a multiset of vectors in one pass (left fold in given order).

    The empty multiset reduces to the zero vector for every kind.
    """
    rows = _as_rows(a, xs)
    if rows.shape[0] == 0:
        return np.zeros(a.dim, dtype=np.float32)
    if a.kind == "sum":
        return _fold_sum64(rows).astype(np.float32)
    if a.kind == "mean":
        return (_fold_sum64(rows) / rows.shape[0]).astype(np.float32)
    return _fold_extremum(rows, a.kind)


def local_aggregate(a: Aggregator, xs) -> Partial:
    """Local stage: fold a block of vectors into a Partial."""
    rows = _as_rows(a, xs)
    k = rows.shape[0]
    if k == 0:
        return Partial(kind=a.kind, values=np.zeros(a.dim, dtype=np.float32), count=0)
    if a.kind in ("sum", "mean"):
        values = _fold_sum64(rows).astype(np.float32)
    else:
        values = _fold_extremum(rows, a.kind).astype(np.float32)
    return Partial(kind=a.kind, values=values, count=k)


def _check_parts(a: Aggregator, parts: list[Partial]) -> None:
    for p in parts:
        if p.kind != a.kind:
            raise KindMismatch(f"partial of kind {p.kind!r} under {a.kind!r} aggregator")
        if p.dim != a.dim:
            raise DimMismatch(f"partial dim {p.dim} != aggregator dim {a.dim}")


def merge_partials(a: Aggregator, parts) -> Partial:
    """Merge any number of Partials into one (grouping-insensitive)."""
    parts = list(parts)
    _check_parts(a, parts)
    total = sum(p.count for p in parts)
    if total == 0:
        return Partial(kind=a.kind, values=np.zeros(a.dim, dtype=np.float32), count=0)
    if a.kind in ("sum", "mean"):
        acc = np.zeros(a.dim, dtype=np.float64)
        for p in parts:
            if not p.empty:
                acc += p.values
        return Partial(kind=a.kind, values=acc.astype(np.float32), count=total)
    live = [p.values for p in parts if not p.empty]
    return Partial(kind=a.kind, values=_fold_extremum(np.stack(live), a.kind), count=total)


def finalize(a: Aggregator, part: Partial) -> np.ndarray:
    _check_parts(a, [part])
    if part.empty:
        return np.zeros(a.dim, dtype=np.float32)
    if a.kind == "mean":
        return (part.values.astype(np.float64) / part.count).astype(np.float32)
    return part.values.copy()


def global_aggregate(a: Aggregator, parts) -> np.ndarray:
    """Global stage: merge partials and finalize to the reduced vector."""
    return finalize(a, merge_partials(a, parts))


def values_close(x: np.ndarray, y: np.ndarray, rtol: float = REL_TOL) -> bool:
    """Componentwise |x - y| <= rtol * max(1, |x|, |y|)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        return False
    scale = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
    return bool(np.all(np.abs(x - y) <= rtol * scale))


def exact_kind(kind: str) -> bool:
    """True when block decomposition must be bit-exact (idempotent folds)."""
    return kind in ("max", "min")
