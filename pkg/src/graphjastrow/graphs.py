"""Connectivity graphs for pair-product wavefunctions.

A graph is a symmetric nonnegative weight matrix with zero diagonal.  Simple
graphs (all weights 0 or 1) are the usual case; real-valued weights feed the
weighted-bond evaluators in :mod:`graphjastrow.model`.  Families cover the
standard lattices (complete, path, cycle, banded/circulant, star, wheel,
complete bipartite) and product-derived ones (ladder, prism, Creutz ladder,
hypercube), all built from the join and product operations so that the
algebraic identities between them hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "empty_graph",
    "complete",
    "path",
    "cycle",
    "banded",
    "circulant",
    "star",
    "wheel",
    "complete_bipartite",
    "ladder",
    "prism",
    "creutz_ladder",
    "hypercube",
    "make_family",
    "FAMILY_NAMES",
    "join",
    "disjoint_union",
    "graph_complement",
    "cartesian",
    "tensor",
    "strong",
    "lexicographic",
    "corona",
    "product",
    "PRODUCT_KINDS",
    "to_dot",
    "to_edge_list",
    "from_edge_list",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected weighted graph on vertices 0..n-1.

    Attributes:
        weights: (n, n) symmetric float array, zero diagonal.  Entry (i, j)
            is the bond weight p_ij; nonzero means edge present.
        labels: optional vertex labels (products record composite indices).
    """

    weights: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise ValueError("graph needs at least one vertex")
        if not np.all(np.isfinite(w)):
            raise ValueError("weight matrix contains non-finite entries")
        if not np.allclose(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diagonal(w) != 0.0):
            raise ValueError("weight matrix must have zero diagonal")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != w.shape[0]:
                raise ValueError("label count does not match vertex count")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def is_simple(self) -> bool:
        """True when every weight is exactly 0 or 1."""
        w = self.weights
        return bool(np.all((w == 0.0) | (w == 1.0)))

    def edges(self) -> list[tuple[int, int]]:
        """Edges (i, j) with i < j and nonzero weight, lexicographic order."""
        i, j = np.nonzero(np.triu(self.weights, k=1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    def degree_sequence(self) -> np.ndarray:
        """Number of neighbours of each vertex (edge multiplicity, not weight)."""
        return (self.weights != 0.0).sum(axis=1)

    def two_path_count(self) -> int:
        """Number of two-edge paths (wedges): sum over vertices of C(deg, 2)."""
        d = self.degree_sequence()
        return int((d * (d - 1) // 2).sum())

    def neighbors(self, i: int) -> np.ndarray:
        return np.nonzero(self.weights[i])[0]

    def enumerate_wedges(self) -> Iterator[tuple[int, int, int]]:
        """Yield wedges (center, j, k) with j < k both adjacent to center.

        Deterministic order: centers ascending, leg pairs lexicographic.
        """
        for c in range(self.n):
            nb = self.neighbors(c)
            for a in range(len(nb)):
                for b in range(a + 1, len(nb)):
                    yield c, int(nb[a]), int(nb[b])

    def is_connected(self) -> bool:
        adj = self.weights != 0.0
        seen = np.zeros(self.n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for u in np.nonzero(adj[v] & ~seen)[0]:
                seen[u] = True
                stack.append(int(u))
        return bool(seen.all())

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.weights.shape == other.weights.shape and bool(
            np.array_equal(self.weights, other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.weights.shape[0], self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def _from_matrix(w: np.ndarray, labels: Sequence[str] | None = None) -> Graph:
    return Graph(np.asarray(w, dtype=float), None if labels is None else tuple(labels))


# ---------------------------------------------------------------------------
# families

def empty_graph(n: int) -> Graph:
    _need(n >= 1, f"empty graph needs n >= 1, got {n}")
    return _from_matrix(np.zeros((n, n)))


def complete(n: int) -> Graph:
    _need(n >= 1, f"complete graph needs n >= 1, got {n}")
    return _from_matrix(np.ones((n, n)) - np.eye(n))


def banded(n: int, r: int, periodic: bool = True) -> Graph:
    """Vertices i, j adjacent when their (circular) distance is at most r.

    Periodic: the circulant graph with offsets 1..r, edges clamped to {0, 1}
    when offsets coincide modulo n (so banded(n, n//2) is complete).  Open:
    the truncated band |i - j| <= r on a path layout.
    """
    _need(n >= 1, f"banded graph needs n >= 1, got {n}")
    if periodic:
        _need(1 <= r <= n // 2, f"circulant range must satisfy 1 <= r <= n//2, got r={r}, n={n}")
    else:
        _need(1 <= r <= max(n - 1, 1), f"open band range must satisfy 1 <= r <= n-1, got r={r}, n={n}")
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :])
    if periodic:
        dist = np.minimum(dist, n - dist)
    return _from_matrix(((dist >= 1) & (dist <= r)).astype(float))


def circulant(n: int, r: int) -> Graph:
    return banded(n, r, periodic=True)


def path(n: int) -> Graph:
    _need(n >= 1, f"path needs n >= 1, got {n}")
    if n == 1:
        return empty_graph(1)
    return banded(n, 1, periodic=False)


def cycle(n: int) -> Graph:
    _need(n >= 3, f"cycle needs n >= 3, got {n}")
    return banded(n, 1, periodic=True)


def star(n: int) -> Graph:
    """Hub vertex 0 joined to n-1 leaves."""
    _need(n >= 2, f"star needs n >= 2, got {n}")
    return join(empty_graph(1), empty_graph(n - 1))


def wheel(n: int) -> Graph:
    """Hub vertex 0 joined to a rim cycle on the other n-1 vertices."""
    _need(n >= 4, f"wheel needs n >= 4, got {n}")
    return join(empty_graph(1), cycle(n - 1))


def complete_bipartite(m: int, n: int) -> Graph:
    _need(m >= 1 and n >= 1, f"complete bipartite needs m, n >= 1, got {m}, {n}")
    return join(empty_graph(m), empty_graph(n))


def ladder(n: int) -> Graph:
    """Two rails of length n with rungs: cartesian product path(n) x path(2)."""
    _need(n >= 2, f"ladder needs n >= 2, got {n}")
    return cartesian(path(n), path(2))


def prism(n: int) -> Graph:
    """Two n-cycles with rungs: cartesian product cycle(n) x path(2)."""
    _need(n >= 3, f"prism needs n >= 3, got {n}")
    return cartesian(cycle(n), path(2))


def creutz_ladder(n: int) -> Graph:
    """Ladder with both diagonals on every plaquette: lexicographic path(n)[path(2)]."""
    _need(n >= 2, f"Creutz ladder needs n >= 2, got {n}")
    return lexicographic(path(n), path(2))


def hypercube(n: int) -> Graph:
    """n-fold cartesian power of a single edge; 2**n vertices."""
    _need(n >= 1, f"hypercube needs n >= 1, got {n}")
    g = complete(2)
    for _ in range(n - 1):
        g = cartesian(g, complete(2))
    return g


FAMILY_NAMES = (
    "complete",
    "path",
    "cycle",
    "circulant",
    "banded",
    "star",
    "wheel",
    "complete_bipartite",
    "ladder",
    "prism",
    "creutz_ladder",
    "hypercube",
    "empty",
)


def make_family(name: str, n: int, r: int | None = None, m: int | None = None,
                periodic: bool = True) -> Graph:
    """Build a named family; r is the circulant/band range, m the second
    bipartite block size, periodic selects the circulant vs open-band layout."""
    key = name.lower().replace("-", "_")
    if key not in FAMILY_NAMES:
        raise ValueError(f"unknown graph family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    if key in ("circulant", "banded"):
        if r is None:
            raise ValueError(f"family {key!r} needs the range parameter r")
        return banded(n, r, periodic=periodic if key == "banded" else True)
    if key == "complete_bipartite":
        if m is None:
            raise ValueError("family 'complete_bipartite' needs the block size parameter m")
        return complete_bipartite(m, n)
    builder = {
        "complete": complete, "path": path, "cycle": cycle, "star": star,
        "wheel": wheel, "ladder": ladder, "prism": prism,
        "creutz_ladder": creutz_ladder, "hypercube": hypercube, "empty": empty_graph,
    }[key]
    return builder(n)


# ---------------------------------------------------------------------------
# operations

def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def graph_complement(g: Graph) -> Graph:
    """Simple-graph complement: edges exactly where g has none."""
    _need(g.is_simple, "complement is defined for simple graphs")
    n = g.n
    return _from_matrix((np.ones((n, n)) - np.eye(n)) - g.weights, g.labels)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    w = np.zeros((g1.n + g2.n, g1.n + g2.n))
    w[: g1.n, : g1.n] = g1.weights
    w[g1.n :, g1.n :] = g2.weights
    labels = tuple(g1.label(i) for i in range(g1.n)) + tuple(
        f"{g1.n + i}" if g2.labels is None else g2.label(i) for i in range(g2.n)
    )
    return _from_matrix(w, labels)


def join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union plus every cross edge (weight 1)."""
    w = disjoint_union(g1, g2).weights.copy()
    w[: g1.n, g1.n :] = 1.0
    w[g1.n :, : g1.n] = 1.0
    return _from_matrix(w)


def _pair_labels(g1: Graph, g2: Graph) -> tuple[str, ...]:
    # row-major: composite vertex (a, x) sits at index a * n2 + x
    return tuple(f"{g1.label(a)},{g2.label(x)}" for a in range(g1.n) for x in range(g2.n))


def cartesian(g1: Graph, g2: Graph) -> Graph:
    a1, a2 = g1.weights, g2.weights
    w = np.kron(a1, np.eye(g2.n)) + np.kron(np.eye(g1.n), a2)
    return _from_matrix(w, _pair_labels(g1, g2))


def tensor(g1: Graph, g2: Graph) -> Graph:
    return _from_matrix(np.kron(g1.weights, g2.weights), _pair_labels(g1, g2))


def strong(g1: Graph, g2: Graph) -> Graph:
    a1, a2 = g1.weights, g2.weights
    w = np.kron(a1, np.eye(g2.n)) + np.kron(np.eye(g1.n), a2) + np.kron(a1, a2)
    return _from_matrix(w, _pair_labels(g1, g2))


def lexicographic(g1: Graph, g2: Graph) -> Graph:
    a1, a2 = g1.weights, g2.weights
    w = np.kron(a1, np.ones((g2.n, g2.n))) + np.kron(np.eye(g1.n), a2)
    return _from_matrix(w, _pair_labels(g1, g2))


def corona(g1: Graph, g2: Graph) -> Graph:
    """g1 plus one private copy of g2 per g1 vertex, hub joined to its copy.

    Vertex order: the g1 copy first, then the g2 copies in g1-vertex order.
    """
    n1, n2 = g1.n, g2.n
    n = n1 + n1 * n2
    w = np.zeros((n, n))
    w[:n1, :n1] = g1.weights
    for i in range(n1):
        lo = n1 + i * n2
        w[lo : lo + n2, lo : lo + n2] = g2.weights
        w[i, lo : lo + n2] = 1.0
        w[lo : lo + n2, i] = 1.0
    labels = tuple(g1.label(i) for i in range(n1)) + tuple(
        f"{g1.label(i)}:{g2.label(x)}" for i in range(n1) for x in range(n2)
    )
    return _from_matrix(w, labels)


PRODUCT_KINDS = ("cartesian", "tensor", "strong", "lexicographic", "corona")


def product(kind: str, g1: Graph, g2: Graph) -> Graph:
    try:
        op = {
            "cartesian": cartesian,
            "tensor": tensor,
            "strong": strong,
            "lexicographic": lexicographic,
            "corona": corona,
        }[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown product kind {kind!r}; choose from {', '.join(PRODUCT_KINDS)}") from None
    return op(g1, g2)


# ---------------------------------------------------------------------------
# text formats

def to_dot(g: Graph) -> str:
    """Undirected DOT text, vertices 0-based, one `i -- j;` line per edge.

    Isolated vertices get their own `i;` line; non-unit weights are recorded
    in a weight attribute.  Output is byte-stable for a given graph.
    """
    lines = ["graph G {"]
    deg = g.degree_sequence()
    for i in range(g.n):
        if deg[i] == 0:
            lines.append(f"  {i};")
    for i, j in g.edges():
        wij = float(g.weights[i, j])
        if wij == 1.0:
            lines.append(f"  {i} -- {j};")
        else:
            lines.append(f"  {i} -- {j} [weight={wij!r}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_edge_list(g: Graph) -> str:
    """Plain edge-list text: header `n <N>`, then `i j [w]` per edge, i < j."""
    lines = [f"n {g.n}"]
    for i, j in g.edges():
        wij = float(g.weights[i, j])
        lines.append(f"{i} {j}" if wij == 1.0 else f"{i} {j} {wij!r}")
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    """Parse the edge-list format written by :func:`to_edge_list`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n "):
        raise ValueError("edge list must start with a header line 'n <N>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError(f"bad header line {lines[0]!r}") from None
    _need(n >= 1, f"edge list header needs n >= 1, got {n}")
    w = np.zeros((n, n))
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"bad edge line {ln!r}; expected 'i j' or 'i j weight'")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge {ln!r} references a vertex outside 0..{n - 1}")
        if i == j:
            raise ValueError(f"self edge {ln!r} is not allowed")
        wij = float(parts[2]) if len(parts) == 3 else 1.0
        w[i, j] = w[j, i] = wij
    return _from_matrix(w)
