"""Immutable undirected simple graphs in compressed adjacency form.

Vertices are dense ids 0..n-1. Adjacency is stored CSR-style (indptr into a
flat, per-row-sorted neighbor array), which keeps neighbor lookups cheap and
makes structural equality and serialization unambiguous. Feature matrices are
plain float32 numpy arrays with one row per vertex.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatch,
    DuplicateEdge,
    GenerationFailed,
    InvalidParams,
    MalformedHeader,
    SelfLoop,
    VertexOutOfRange,
    ZeroDim,
)

EXCLUDED_LABEL = -1


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph. Construct through :meth:`from_edges`."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs.

        Rejects endpoints outside 0..n-1, self-loops, and repeated undirected
        edges. Neighbor lists come out sorted ascending.
        """
        if n < 0:
            raise InvalidParams(f"vertex count must be >= 0, got {n}")
        seen: set[tuple[int, int]] = set()
        deg = np.zeros(n, dtype=np.int64)
        pairs = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n) or not (0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(f"edge ({key[0]}, {key[1]}) listed twice")
            seen.add(key)
            pairs.append(key)
            deg[u] += 1
            deg[v] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.zeros(int(indptr[-1]), dtype=np.int64)
        cursor = indptr[:-1].copy()
        for u, v in pairs:
            indices[cursor[u]] = v
            cursor[u] += 1
            indices[cursor[v]] = u
            cursor[v] += 1
        for v in range(n):
            indices[indptr[v]:indptr[v + 1]].sort()
        indptr.setflags(write=False)
        indices.setflags(write=False)
        return cls(n=n, indptr=indptr, indices=indices)

    @property
    def m_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def edges(self):
        """Yield each undirected edge once, as (u, v) with u < v, ascending."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if v > u:
                    yield u, int(v)

    def is_complete(self) -> bool:
        return self.m_edges == self.n * (self.n - 1) // 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m_edges})"


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    queue = deque([0])
    seen[0] = True
    found = 1
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                found += 1
                queue.append(int(v))
    return found == g.n


def components_excluding(g: Graph, excluded) -> tuple[int, list[int]]:
    """Connected components of the graph minus a vertex set.

    Returns (component count, labels). Labels run 0..count-1 in order of each
    component's smallest vertex; excluded vertices get ``EXCLUDED_LABEL``.
    """
    excluded = set(int(v) for v in excluded)
    for v in excluded:
        if not (0 <= v < g.n):
            raise VertexOutOfRange(f"excluded vertex {v} outside 0..{g.n - 1}")
    labels = [EXCLUDED_LABEL] * g.n
    count = 0
    for start in range(g.n):
        if start in excluded or labels[start] != EXCLUDED_LABEL:
            continue
        labels[start] = count
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                v = int(v)
                if v not in excluded and labels[v] == EXCLUDED_LABEL:
                    labels[v] = count
                    queue.append(v)
        count += 1
    return count, labels


# ---------------------------------------------------------------------------
# generators


def gen_er_connected(n: int, p: float, seed: int, max_attempts: int = 1000) -> Graph:
    """Connected Erdős–Rényi sample, rejection-sampled until connected."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    if not (0.0 < p <= 1.0):
        raise InvalidParams(f"p must be in (0, 1], got {p}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            return g
    raise GenerationFailed(
        f"no connected sample in {max_attempts} draws (n={n}, p={p}); raise p"
    )


def _clique_edges(vertices) -> list[tuple[int, int]]:
    vs = list(vertices)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def gen_family(kind: str, **params) -> Graph:
    """Deterministic named families used as bound-check instances.

    Kinds and parameters:
      ring(n>=3), star(n>=2), grid(rows>=1, cols>=1),
      barbell(k>=2) - two k-cliques joined by one bridge edge,
      bridge_cliques(a>=2, b>=2) - cliques of unequal size joined by a bridge.
    """
    def need(*names):
        if set(params) != set(names):
            raise InvalidParams(f"{kind} takes parameters {names}, got {sorted(params)}")
        return [int(params[name]) for name in names]

    if kind == "ring":
        (n,) = need("n")
        if n < 3:
            raise InvalidParams("ring needs n >= 3")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "star":
        (n,) = need("n")
        if n < 2:
            raise InvalidParams("star needs n >= 2")
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if kind == "grid":
        rows, cols = need("rows", "cols")
        if rows < 1 or cols < 1:
            raise InvalidParams("grid needs rows >= 1 and cols >= 1")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return Graph.from_edges(rows * cols, edges)
    if kind == "barbell":
        (k,) = need("k")
        if k < 2:
            raise InvalidParams("barbell needs clique size k >= 2")
        return gen_family("bridge_cliques", a=k, b=k)
    if kind == "bridge_cliques":
        a, b = need("a", "b")
        if a < 2 or b < 2:
            raise InvalidParams("bridge_cliques needs clique sizes >= 2")
        edges = _clique_edges(range(a)) + _clique_edges(range(a, a + b))
        edges.append((a - 1, a))
        return Graph.from_edges(a + b, edges)
    raise InvalidParams(f"unknown family kind {kind!r}")


def attach_random_features(g: Graph, d: int, seed: int) -> np.ndarray:
    """n x d float32 matrix, entries i.i.d. uniform on [-1, 1]."""
    if d == 0:
        raise ZeroDim("feature dimension must be >= 1")
    if d < 0:
        raise InvalidParams(f"feature dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(g.n, d)).astype(np.float32)


def check_features(g: Graph, feats: np.ndarray) -> None:
    if feats.ndim != 2 or feats.shape[0] != g.n:
        raise DimMismatch(
            f"feature matrix shape {feats.shape} does not match graph with n={g.n}"
        )
    if feats.shape[1] < 1:
        raise ZeroDim("feature dimension must be >= 1")
    if not np.all(np.isfinite(feats)):
        raise InvalidParams("feature matrix contains non-finite values")


# ---------------------------------------------------------------------------
# text and document I/O


def _fmt_float(x: np.float32) -> str:
    # float32 -> float64 is exact, and repr(float) round-trips, so casting
    # back to float32 on parse recovers the original bits.
    return repr(float(x))


def parse_edge_list(text: str):
    """Parse the plain-text graph format.

    Layout: header line "n m d", then m lines "u v", then (when d > 0)
    n rows of d decimal floats. Returns (Graph, features-or-None).
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if len(head) != 3:
        raise MalformedHeader(f"header must be 'n m d', got {lines[0]!r}")
    try:
        n, m, d = (int(tok) for tok in head)
    except ValueError as exc:
        raise MalformedHeader(f"non-integer header field in {lines[0]!r}") from exc
    if n < 0 or m < 0 or d < 0:
        raise MalformedHeader(f"negative header field in {lines[0]!r}")
    expected = 1 + m + (n if d > 0 else 0)
    if len(lines) != expected:
        raise MalformedHeader(f"expected {expected} non-blank lines, found {len(lines)}")
    edges = []
    for ln in lines[1:1 + m]:
        toks = ln.split()
        if len(toks) != 2:
            raise MalformedHeader(f"edge line must be 'u v', got {ln!r}")
        try:
            edges.append((int(toks[0]), int(toks[1])))
        except ValueError as exc:
            raise MalformedHeader(f"non-integer edge endpoint in {ln!r}") from exc
    g = Graph.from_edges(n, edges)
    feats = None
    if d > 0:
        rows = []
        for ln in lines[1 + m:]:
            toks = ln.split()
            if len(toks) != d:
                raise MalformedHeader(f"feature row needs {d} values, got {ln!r}")
            try:
                rows.append([float(tok) for tok in toks])
            except ValueError as exc:
                raise MalformedHeader(f"non-numeric feature in {ln!r}") from exc
        feats = np.asarray(rows, dtype=np.float32)
        if n == 0:
            feats = feats.reshape(0, d)
        if not np.all(np.isfinite(feats)):
            raise MalformedHeader("non-finite feature value")
    return g, feats


def serialize_edge_list(g: Graph, feats: np.ndarray | None = None) -> str:
    d = 0 if feats is None else int(feats.shape[1])
    out = [f"{g.n} {g.m_edges} {d}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    if feats is not None:
        check_features(g, feats)
        out.extend(" ".join(_fmt_float(x) for x in row) for row in feats)
    return "\n".join(out) + "\n"


def graph_to_doc(g: Graph, feats: np.ndarray | None = None) -> dict:
    """Structured-text (JSON-style) graph document for CLI interchange."""
    doc = {
        "n": g.n,
        "m": g.m_edges,
        "d": 0 if feats is None else int(feats.shape[1]),
        "edges": [[u, v] for u, v in g.edges()],
        "features": None if feats is None else [[float(x) for x in row] for row in feats],
    }
    return doc


def graph_from_doc(doc: dict):
    required = {"n", "m", "d", "edges", "features"}
    if not isinstance(doc, dict) or set(doc) != required:
        raise MalformedHeader(f"graph document must carry exactly keys {sorted(required)}")
    g = Graph.from_edges(int(doc["n"]), [tuple(e) for e in doc["edges"]])
    if g.m_edges != int(doc["m"]):
        raise MalformedHeader(f"declared m={doc['m']} but document lists {g.m_edges} edges")
    feats = None
    if int(doc["d"]) > 0:
        if doc["features"] is None:
            raise MalformedHeader("d > 0 but no features present")
        feats = np.asarray(doc["features"], dtype=np.float32).reshape(g.n, int(doc["d"]))
        if not np.all(np.isfinite(feats)):
            raise MalformedHeader("non-finite feature value")
    elif doc["features"] not in (None, []):
        raise MalformedHeader("d = 0 but features present")
    return g, feats


def load_graph_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_doc(json.loads(text))
    return parse_edge_list(text)


def save_graph_doc(path: str, g: Graph, feats: np.ndarray | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_doc(g, feats), fh)
        fh.write("\n")
