"""Geometric tree realization of 0-hyperbolic metrics.

Points are inserted one at a time; each attaches along the path from the
base point at the depth given by its largest Gromov product with the
already-embedded points.  For a metric satisfying the four-point condition
this realizes every pairwise distance exactly, which is verified and is
how non-tree-like inputs are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotZeroHyperbolic
from .metric import MetricSpace, four_point_witness


@dataclass
class RTree:
    """Weighted tree with optional Steiner branch nodes.

    ``labels[k]`` is the input-point label embedded at node k, or None for
    a Steiner node.  ``embed`` maps labels back to node ids.
    """

    labels: list[str | None] = field(default_factory=list)
    edges: list[tuple[int, int, Fraction]] = field(default_factory=list)
    embed: dict[str, int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    def add_node(self, label: str | None) -> int:
        self.labels.append(label)
        if label is not None:
            self.embed[label] = len(self.labels) - 1
        return len(self.labels) - 1

    def adjacency(self) -> list[list[tuple[int, Fraction]]]:
        adj: list[list[tuple[int, Fraction]]] = [[] for _ in self.labels]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def node_distances(self, src: int) -> list[Fraction]:
        adj = self.adjacency()
        dist: list[Fraction | None] = [None] * self.n_nodes
        dist[src] = Fraction(0)
        stack = [src]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                if dist[v] is None:
                    dist[v] = dist[u] + w
                    stack.append(v)
        return dist  # type: ignore[return-value]

    def degrees(self) -> list[int]:
        deg = [0] * self.n_nodes
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class TreeLocation:
    """A point of the geometric realization: on edge ``edge`` at distance
    ``offset`` from that edge's first endpoint."""

    edge: int
    offset: Fraction


def _path_nodes(adj, src: int, dst: int) -> list[int]:
    parent = {src: src}
    stack = [src]
    while stack:
        u = stack.pop()
        if u == dst:
            break
        for v, _ in adj[u]:
            if v not in parent:
                parent[v] = u
                stack.append(v)
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def realize_rtree(X: MetricSpace) -> RTree:
    """Exact additive-tree realization; raises NotZeroHyperbolic with a
    witness quadruple when the metric does not embed."""
    R = RTree()
    base = R.add_node(X.points[0])
    if X.n == 1:
        return R
    first = R.add_node(X.points[1])
    R.edges.append((base, first, X.dist[0][1]))

    def fail():
        raise NotZeroHyperbolic(four_point_witness(X))

    for p in range(2, X.n):
        # largest Gromov product (q|p)_base over embedded points q
        best_t = Fraction(-1)
        best_q = -1
        for q in range(1, p):
            t = (X.dist[0][p] + X.dist[0][q] - X.dist[p][q]) / 2
            if t > best_t:
                best_t, best_q = t, q
        if best_t < 0:
            fail()
        # walk from base toward best_q and attach at depth best_t
        adj = R.adjacency()
        path = _path_nodes(adj, base, R.embed[X.points[best_q]])
        walked = Fraction(0)
        attach = base
        for a, b in zip(path, path[1:]) if best_t > 0 else ():
            w = next(wt for x, wt in adj[a] if x == b)
            if walked + w < best_t:
                walked += w
                attach = b
                continue
            if walked + w == best_t:
                attach = b
                walked = best_t
                break
            # split edge (a, b) at depth best_t
            off = best_t - walked
            mid = R.add_node(None)
            R.edges = [
                e for e in R.edges if {e[0], e[1]} != {a, b}
            ]
            R.edges.append((a, mid, off))
            R.edges.append((mid, b, w - off))
            attach = mid
            walked = best_t
            break
        if walked != best_t:
            fail()  # Gromov product beyond the realized distance to best_q
        residual = X.dist[0][p] - best_t
        if residual == 0:
            # p coincides with an existing location on the path
            if R.labels[attach] is not None:
                fail()
            R.labels[attach] = X.points[p]
            R.embed[X.points[p]] = attach
        else:
            node = R.add_node(X.points[p])
            R.edges.append((attach, node, residual))

    # exact verification of all realized distances
    for i in range(X.n):
        dist = R.node_distances(R.embed[X.points[i]])
        for j in range(X.n):
            if i != j and dist[R.embed[X.points[j]]] != X.dist[i][j]:
                fail()
    _contract_degree_two_steiner(R)
    assert all(w > 0 for _, _, w in R.edges), "zero-length edge in realization"
    return R


def _contract_degree_two_steiner(R: RTree) -> None:
    changed = True
    while changed:
        changed = False
        deg = R.degrees()
        for k in range(R.n_nodes):
            if R.labels[k] is None and deg[k] == 2:
                inc = [(i, e) for i, e in enumerate(R.edges) if k in e[:2]]
                (i1, e1), (i2, e2) = inc
                a = e1[0] if e1[1] == k else e1[1]
                b = e2[0] if e2[1] == k else e2[1]
                merged = (a, b, e1[2] + e2[2])
                R.edges = [
                    e for i, e in enumerate(R.edges) if i not in (i1, i2)
                ]
                R.edges.append(merged)
                changed = True
                break


def zero_hyperbolic_fast(X: MetricSpace) -> bool:
    """Realization-based check, quadratic in practice; agrees with the
    brute-force four-point oracle (property-tested)."""
    if X.n < 4:
        return True
    try:
        realize_rtree(X)
        return True
    except NotZeroHyperbolic:
        return False


@dataclass(frozen=True)
class Component:
    """A connected component of the realization minus the input points."""

    edge_ids: tuple[int, ...]
    steiner_nodes: tuple[int, ...]
    boundary: tuple[int, ...]  # node ids of incident input points


def complement_components(R: RTree) -> list[Component]:
    """Components of the geometric realization with the embedded input
    points removed; each open edge belongs to exactly one component."""
    if not R.edges:
        return []
    # union-find over edges: edges sharing a Steiner endpoint merge
    parent = list(range(len(R.edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_node: dict[int, list[int]] = {}
    for ei, (u, v, _) in enumerate(R.edges):
        for node in (u, v):
            if R.labels[node] is None:
                by_node.setdefault(node, []).append(ei)
    for eids in by_node.values():
        for other in eids[1:]:
            ri, rj = find(eids[0]), find(other)
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for ei in range(len(R.edges)):
        groups.setdefault(find(ei), []).append(ei)
    comps = []
    for eids in sorted(groups.values(), key=min):
        steiner = set()
        boundary = set()
        for ei in eids:
            u, v, _ = R.edges[ei]
            for node in (u, v):
                if R.labels[node] is None:
                    steiner.add(node)
                else:
                    boundary.add(node)
        comps.append(
            Component(
                tuple(sorted(eids)),
                tuple(sorted(steiner)),
                tuple(sorted(boundary, key=lambda k: R.labels[k])),
            )
        )
    return comps


def component_root(R: RTree, comp: Component) -> TreeLocation:
    """Deterministic interior root: midpoint of the component's diametral
    boundary-to-boundary path."""
    # distances restricted to the component's edges
    adj: dict[int, list[tuple[int, Fraction, int]]] = {}
    for ei in comp.edge_ids:
        u, v, w = R.edges[ei]
        adj.setdefault(u, []).append((v, w, ei))
        adj.setdefault(v, []).append((u, w, ei))

    def dists(src):
        out = {src: Fraction(0)}
        stack = [src]
        while stack:
            u = stack.pop()
            for v, w, _ in adj[u]:
                if v not in out:
                    out[v] = out[u] + w
                    if R.labels[v] is None:
                        stack.append(v)
        return out

    best = None
    for bi in range(len(comp.boundary)):
        da = dists(comp.boundary[bi])
        for bj in range(bi + 1, len(comp.boundary)):
            b = comp.boundary[bj]
            if b in da:
                key = (-da[b], bi, bj)
                if best is None or key < best:
                    best = key
                    pair = (comp.boundary[bi], comp.boundary[bj])
    assert best is not None, "component with fewer than two boundary points"
    src, dst = pair
    # walk the path and stop at half the diameter
    half = -best[0] / 2
    parent: dict[int, tuple[int, Fraction, int]] = {}
    stack = [src]
    seen = {src}
    while stack:
        u = stack.pop()
        if u == dst:
            break
        for v, w, ei in adj.get(u, []):
            if v not in seen and (R.labels[v] is None or v == dst):
                seen.add(v)
                parent[v] = (u, w, ei)
                stack.append(v)
    chain = [dst]
    while chain[-1] != src:
        chain.append(parent[chain[-1]][0])
    chain.reverse()
    walked = Fraction(0)
    for a, b in zip(chain, chain[1:]):
        _, w, ei = parent[b]
        if walked + w >= half:
            off = half - walked
            u, v, _ = R.edges[ei]
            return TreeLocation(ei, off if a == u else R.edges[ei][2] - off)
        walked += w
    raise AssertionError("midpoint walk overran the diametral path")
