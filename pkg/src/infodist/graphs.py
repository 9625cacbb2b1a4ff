"""Mutual-information graphs, spanning-forest factorizations, graph distances.

A joint distribution induces a weighted graph whose edge weights are the
pairwise mutual informations.  A rooted spanning forest of that graph defines
a pairwise factorization (product of one marginal per root and one
conditional per edge), and two graphs over the same variables can be compared
either through their weight vectors or through the distance between their
factorized distributions.  The two routes agree only in special cases, so
both are computed and reported side by side.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .distribution import JointDistribution, Schema, marginal, normalize
from .errors import DomainError
from .lattice import mutual_information
from .metrics import uniform_distance

#: Pairwise MI below this is rounding dust from independent pairs, not signal.
MI_DUST = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected MI-weighted graph over a schema's variables.

    Edges are (i, j, weight) with i < j, at most one per pair, weights
    non-negative (bits).  ``parent`` optionally orients a spanning forest:
    it maps child index to parent index, roots absent, and every child link
    must be one of the edges.  The schema is carried so the state count is
    available to distance scaling.
    """

    schema: Schema
    edges: tuple[tuple[int, int, float], ...]
    parent: Mapping[int, int] | None = None

    def __post_init__(self):
        n = len(self.schema)
        seen: set[tuple[int, int]] = set()
        canon = []
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise DomainError(f"self-loop on variable {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i},{j}) out of range for {n} variables")
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise DomainError(f"duplicate edge ({i},{j})")
            if w < 0:
                raise DomainError(f"negative weight {w} on edge ({i},{j})")
            seen.add((i, j))
            canon.append((i, j, w))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.parent is not None:
            pairs = {(min(c, p), max(c, p)) for c, p in self.parent.items()}
            if not pairs <= seen:
                raise DomainError("parent map uses a pair that is not an edge")
            for child in self.parent:
                hops, node = 0, child
                while node in self.parent:
                    node = self.parent[node]
                    hops += 1
                    if hops > n:
                        raise DomainError("parent map contains a cycle")
            object.__setattr__(self, "parent", dict(self.parent))

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.schema.names

    def weight(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        for a, b, w in self.edges:
            if (a, b) == (i, j):
                return w
        return 0.0

    def roots(self) -> tuple[int, ...]:
        if self.parent is None:
            raise DomainError("graph has no orientation")
        return tuple(i for i in range(len(self.schema)) if i not in self.parent)

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)


def mi_weighted_graph(
    dist: JointDistribution, threshold: float = 0.0, units: str = "bits"
) -> WeightedGraph:
    """Graph with an edge wherever pairwise mutual information exceeds the threshold.

    MI below :data:`MI_DUST` is treated as exactly zero, so independent pairs
    never sprout edges from accumulated rounding.
    """
    if threshold < 0:
        raise DomainError(f"threshold must be non-negative, got {threshold}")
    n = len(dist.schema)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            w = mutual_information(dist, i, j, units=units)
            if w < MI_DUST:
                w = 0.0
            if w > threshold:
                edges.append((i, j, w))
    return WeightedGraph(schema=dist.schema, edges=tuple(edges))


class _UnionFind:
    def __init__(self, n: int):
        self.root = list(range(n))

    def find(self, x: int) -> int:
        while self.root[x] != x:
            self.root[x] = self.root[self.root[x]]
            x = self.root[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.root[max(ra, rb)] = min(ra, rb)
        return True


def chowliu_tree(graph: WeightedGraph) -> WeightedGraph:
    """Maximum-weight spanning forest of an MI graph, oriented from its roots.

    Kruskal's scan in descending weight with ties broken by ascending edge
    index (i, j), so the result is deterministic.  Each connected component
    is rooted at its lowest variable index; isolated variables become roots
    of their own.
    """
    n = len(graph.schema)
    ordered = sorted(graph.edges, key=lambda e: (-e[2], e[0], e[1]))
    uf = _UnionFind(n)
    kept = [e for e in ordered if uf.union(e[0], e[1])]

    adjacency: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j, _ in kept:
        adjacency[i].append(j)
        adjacency[j].append(i)

    parent: dict[int, int] = {}
    visited = [False] * n
    for start in range(n):
        if visited[start]:
            continue
        visited[start] = True
        queue = [start]
        while queue:
            node = queue.pop(0)
            for nxt in sorted(adjacency[node]):
                if not visited[nxt]:
                    visited[nxt] = True
                    parent[nxt] = node
                    queue.append(nxt)
    return WeightedGraph(schema=graph.schema, edges=tuple(sorted(kept)), parent=parent)


def graph_distribution(tree: WeightedGraph, source: JointDistribution) -> JointDistribution:
    """Distribution factorized along a rooted forest, marginals drawn from source.

    Each state's probability is the product of the root marginals and one
    conditional per child edge.  A child whose parent level has zero source
    probability has no defined conditional there; such states get probability
    zero and the table is renormalized, with a warning.
    """
    if tree.parent is None:
        raise DomainError("graph_distribution needs an oriented forest (parent map)")
    if tree.schema != source.schema:
        raise DomainError("tree and source describe different variables")
    n = len(source.schema)
    shape = source.schema.cardinalities
    table = np.ones(shape)

    def expand(arr: np.ndarray, axes: Sequence[int]) -> np.ndarray:
        # arr's axes must already follow ascending variable order
        idx: list = [np.newaxis] * n
        for ax in axes:
            idx[ax] = slice(None)
        return arr[tuple(idx)]

    for r in tree.roots():
        table = table * expand(marginal(source, [r]).table(), [r])

    dropped = False
    for child, par in sorted(tree.parent.items()):
        lo, hi = min(child, par), max(child, par)
        pair = marginal(source, [lo, hi]).table()  # axes ordered (lo, hi)
        par_axis = 0 if par == lo else 1
        par_marg = pair.sum(axis=1 - par_axis)
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = pair / (
                par_marg[:, np.newaxis] if par_axis == 0 else par_marg[np.newaxis, :]
            )
        bad = ~np.isfinite(cond)
        if bad.any():
            dropped = True
            cond = np.where(bad, 0.0, cond)
        table = table * expand(cond, [lo, hi])

    flat = table.reshape(-1)
    total = float(flat.sum())
    if dropped or abs(total - 1.0) > 1e-9:
        warnings.warn(
            "forest factorization lost mass on zero-probability parent levels; "
            f"renormalizing from {total}",
            RuntimeWarning,
            stacklevel=2,
        )
        return normalize(source.schema, flat).dist
    return JointDistribution(source.schema, flat)


def graph_distance_mi(g_r: WeightedGraph, g_s: WeightedGraph) -> float:
    """(1/N)|sum of signed edge-weight differences| in bits.

    Missing edges count as weight zero, so an absent dependence in one graph
    can be compensated by an equal absence elsewhere.  N is the shared state
    count of the node schema.
    """
    if g_r.schema != g_s.schema:
        raise DomainError("graphs describe different variable sets")
    pairs = {(i, j) for i, j, _ in g_r.edges} | {(i, j) for i, j, _ in g_s.edges}
    signed = sum(g_r.weight(i, j) - g_s.weight(i, j) for i, j in pairs)
    return abs(signed) / g_r.schema.n_states


def edge_contributions(
    g_r: WeightedGraph, g_s: WeightedGraph
) -> tuple[tuple[int, int, float, float, float], ...]:
    """Per-pair breakdown (i, j, weight_r, weight_s, signed contribution)."""
    if g_r.schema != g_s.schema:
        raise DomainError("graphs describe different variable sets")
    n_states = g_r.schema.n_states
    pairs = sorted({(i, j) for i, j, _ in g_r.edges} | {(i, j) for i, j, _ in g_s.edges})
    out = []
    for i, j in pairs:
        wr, ws = g_r.weight(i, j), g_s.weight(i, j)
        out.append((i, j, wr, ws, (wr - ws) / n_states))
    return tuple(out)


def graph_distance_direct(d_r: JointDistribution, d_s: JointDistribution) -> float:
    """Uniform-reference distance between two factorized distributions, in bits."""
    return uniform_distance(d_r, d_s).value


@dataclass(frozen=True)
class DualPathReport:
    """Both routes to a graph distance and the gap between them.

    The weight route works on edge-weight differences (scaled by 1/N); the
    direct route evaluates the uniform-reference distance between the
    factorized distributions.  They coincide only under conditions the
    weight identity does not guarantee in general, so the gap is data.
    """

    mi_distance: float
    direct_distance: float
    contributions: tuple[tuple[int, int, float, float, float], ...] = field(compare=False)

    @property
    def gap(self) -> float:
        return self.mi_distance - self.direct_distance


def dual_path_report(
    g_r: WeightedGraph,
    g_s: WeightedGraph,
    d_r: JointDistribution,
    d_s: JointDistribution,
) -> DualPathReport:
    """Evaluate both graph-distance routes on a pair of oriented graphs."""
    return DualPathReport(
        mi_distance=graph_distance_mi(g_r, g_s),
        direct_distance=graph_distance_direct(d_r, d_s),
        contributions=edge_contributions(g_r, g_s),
    )
