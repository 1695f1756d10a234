"""Tree-scaffolded Lipschitz extension into Euclidean space.

A spanning-tree scaffold on the subset Z is realized geometrically; the
embedding of Z extends point by point to all of X through hyperconvex
one-point extensions (ball constraints with radii L d(x, y)), and the
given values extend by linear interpolation along scaffold edges.  The
composite map is L-Lipschitz with L = 8 c_N(Z) for the dyadic scaffold
and L = 8 for the sphere-halving scaffold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleConstraints, InputError, OutOfRange
from .gupta import gupta_tree
from .hierarchy import nagata_tree
from .metric import MetricSpace, nagata_constant
from .rtree import RTree, TreeLocation
from .trees import WeightedTree

Vector = tuple[float, ...]


@dataclass(frozen=True)
class ValuedSubset:
    labels: tuple[str, ...]
    values: dict[str, Vector]

    @property
    def dim(self) -> int:
        return len(next(iter(self.values.values())))


@dataclass(frozen=True)
class ExtensionResult:
    extended: dict[str, Vector]
    scaffold: WeightedTree
    achieved_lip: float
    guaranteed_lip: Fraction


def _euclid(a: Vector, b: Vector) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def scaffold_embedding(Z: MetricSpace, method: str) -> tuple[WeightedTree, RTree]:
    """Spanning tree on Z realized geometrically; every vertex is a point
    of Z and edges are segments of the stated weight."""
    if method == "nagata":
        T = nagata_tree(Z)
    elif method == "gupta":
        T = gupta_tree(Z)
    else:
        raise OutOfRange(f"unknown scaffold method {method!r}")
    R = RTree()
    for lbl in T.vertices:
        R.add_node(lbl)
    for u, v, w in T.edges:
        R.edges.append((u, v, w))
    return T, R


def _node_distances(R: RTree, src: int) -> list[Fraction]:
    return R.node_distances(src)


def _location_node(R: RTree, loc: TreeLocation) -> int | None:
    """Node id if the location coincides with a vertex, else None."""
    u, v, w = R.edges[loc.edge]
    if loc.offset == 0:
        return u
    if loc.offset == w:
        return v
    return None


def one_point_extension(
    R: RTree, anchors: list[tuple[TreeLocation, Fraction]]
) -> TreeLocation:
    """A location within every anchor's ball, by exact minimization of
    g(w) = max_i (d(w, anchor_i) - r_i), which is linear per edge once
    anchors sit at vertices.

    Among the minimizers: closest to the smallest-radius anchor, then
    smallest edge index, then smallest offset.
    """
    if not anchors:
        raise InfeasibleConstraints("no anchors given")
    # working copy with anchor locations materialized as vertices;
    # seg = (a, b, length, orig_edge, offset of a on that edge)
    n_nodes = R.n_nodes
    segs: list[tuple[int, int, Fraction, int, Fraction]] = []
    on_edge: dict[int, list[tuple[Fraction, int]]] = {}
    anchor_nodes: list[int] = [-1] * len(anchors)
    for i, (loc, _) in enumerate(anchors):
        nid = _location_node(R, loc)
        if nid is None:
            on_edge.setdefault(loc.edge, []).append((loc.offset, i))
        else:
            anchor_nodes[i] = nid
    for ei, (u, v, w) in enumerate(R.edges):
        cuts = sorted(set(off for off, _ in on_edge.get(ei, [])))
        here = {off: None for off in cuts}
        prev, prev_off = u, Fraction(0)
        for off in cuts:
            nid = n_nodes
            n_nodes += 1
            here[off] = nid
            segs.append((prev, nid, off - prev_off, ei, prev_off))
            prev, prev_off = nid, off
        segs.append((prev, v, w - prev_off, ei, prev_off))
        for off, i in on_edge.get(ei, []):
            anchor_nodes[i] = here[off]

    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(n_nodes)]
    for a, b, ln, _, _ in segs:
        adj[a].append((b, ln))
        adj[b].append((a, ln))

    def dist_from(src: int) -> list[Fraction]:
        out: list[Fraction | None] = [None] * n_nodes
        out[src] = Fraction(0)
        stack = [src]
        while stack:
            x = stack.pop()
            for y, ln in adj[x]:
                if out[y] is None:
                    out[y] = out[x] + ln
                    stack.append(y)
        return out  # type: ignore[return-value]

    dists = [dist_from(anchor_nodes[i]) for i in range(len(anchors))]
    radii = [r for _, r in anchors]

    # feasibility of the ball family (Helly property makes pairwise enough)
    for i in range(len(anchors)):
        for j in range(i + 1, len(anchors)):
            if dists[i][anchor_nodes[j]] > radii[i] + radii[j]:
                raise InfeasibleConstraints(
                    f"anchor balls {i} and {j} do not meet"
                )

    # the tie-break reference anchor
    ref = min(range(len(anchors)), key=lambda i: (radii[i], i))

    best: tuple[Fraction, Fraction, int, Fraction] | None = None
    # candidates: both endpoints and the interior minimizer of every segment
    for a, b, ln, ei, start in segs:
        if ln == 0:
            continue
        # every anchor reaches the segment through exactly one endpoint
        P: Fraction | None = None  # anchors entering via a: d = d(a,.) + t
        Q: Fraction | None = None  # anchors entering via b: d = d(b,.) + ln - t
        for i in range(len(anchors)):
            du, dv = dists[i][a], dists[i][b]
            if dv == du + ln:
                if P is None or du - radii[i] > P:
                    P = du - radii[i]
            else:
                assert du == dv + ln
                if Q is None or dv - radii[i] > Q:
                    Q = dv - radii[i]
        cands = [Fraction(0), ln]
        if P is not None and Q is not None:
            t_star = (Q + ln - P) / 2
            if 0 < t_star < ln:
                cands.append(t_star)
        for t in cands:
            terms = []
            if P is not None:
                terms.append(P + t)
            if Q is not None:
                terms.append(Q + ln - t)
            g = max(terms)
            dref = dists[ref][a] + t
            alt = dists[ref][b] + ln - t
            if alt < dref:
                dref = alt
            key = (g, dref, ei, start + t)
            if best is None or key < best:
                best = key
    assert best is not None
    g, _, ei, off = best
    if g > 0:
        raise InfeasibleConstraints("ball constraints have empty intersection")
    return TreeLocation(ei, off)


def _check_one_lipschitz(Z: MetricSpace, data: ValuedSubset) -> None:
    for i in range(Z.n):
        for j in range(i + 1, Z.n):
            d = float(Z.dist[i][j])
            v = _euclid(data.values[Z.points[i]], data.values[Z.points[j]])
            if v > d * (1 + 1e-12):
                raise InfeasibleConstraints(
                    f"values are not 1-Lipschitz on ({Z.points[i]}, {Z.points[j]})"
                )


def lipschitz_extend(
    X: MetricSpace, data: ValuedSubset, method: str = "nagata"
) -> ExtensionResult:
    """Extend 1-Lipschitz values on Z to all of X with Lipschitz constant
    at most 8 c_N(Z) (dyadic scaffold) or 8 (sphere-halving scaffold)."""
    if not data.labels:
        raise InputError("empty subset")
    for lbl in data.labels:
        if lbl not in X.points:
            raise InputError(f"subset label {lbl!r} is not a point of the space")
    z_idx = sorted(X.index(lbl) for lbl in set(data.labels))
    Z = X.restrict(z_idx)
    dims = {len(data.values[lbl]) for lbl in data.labels}
    if len(dims) != 1:
        raise InputError("value vectors have mixed dimensions")
    _check_one_lipschitz(Z, data)

    if method == "gupta":
        L = Fraction(8)
    elif method == "nagata":
        L = 8 * nagata_constant(Z).constant if Z.n > 1 else Fraction(0)
    else:
        raise OutOfRange(f"unknown scaffold method {method!r}")

    extended: dict[str, Vector] = {lbl: tuple(data.values[lbl]) for lbl in data.labels}

    if Z.n == 1:
        # single anchor: constant extension
        only = tuple(data.values[Z.points[0]])
        for lbl in X.points:
            extended.setdefault(lbl, only)
        trivial = WeightedTree((Z.points[0],), ())
        return ExtensionResult(extended, trivial, 0.0, L)

    T, R = scaffold_embedding(Z, method)

    # edge provenance: current edge k spans the original scaffold edge
    # meta[k][0] starting at offset meta[k][1] (orientation preserved)
    meta: list[tuple[int, Fraction]] = [(k, Fraction(0)) for k in range(len(R.edges))]
    placed: dict[str, int] = {lbl: R.embed[lbl] for lbl in Z.points}

    def node_loc(nid: int) -> TreeLocation:
        for k, (u, v, w) in enumerate(R.edges):
            if u == nid:
                return TreeLocation(k, Fraction(0))
            if v == nid:
                return TreeLocation(k, w)
        raise AssertionError("isolated node")

    def materialize(loc: TreeLocation) -> int:
        nid = _location_node(R, loc)
        if nid is not None:
            return nid
        u, v, w = R.edges[loc.edge]
        oid, start = meta[loc.edge]
        mid = R.add_node(None)
        R.edges[loc.edge] = (u, mid, loc.offset)
        meta[loc.edge] = (oid, start)
        R.edges.append((mid, v, w - loc.offset))
        meta.append((oid, start + loc.offset))
        return mid

    node_pos: dict[int, tuple[int, Fraction]] = {}  # node -> scaffold position
    orig_edges = list(T.edges)

    rest = [lbl for lbl in X.points if lbl not in placed]
    for lbl in rest:
        x = X.index(lbl)
        anchors = []
        for ylbl, ynode in placed.items():
            r = L * X.dist[x][X.index(ylbl)]
            anchors.append((node_loc(ynode), r))
        loc = one_point_extension(R, anchors)
        oid, start = meta[loc.edge]
        nid = materialize(loc)
        placed[lbl] = nid
        if nid >= len(T.vertices) and nid not in node_pos:
            node_pos[nid] = (oid, start + loc.offset)

    # values by linear interpolation along the original scaffold edges
    for lbl in rest:
        nid = placed[lbl]
        if nid < len(T.vertices):
            extended[lbl] = extended[T.vertices[nid]]
            continue
        oid, pos = node_pos[nid]
        u, v, w = orig_edges[oid]
        fa = extended[T.vertices[u]]
        fb = extended[T.vertices[v]]
        t = float(pos / w)
        extended[lbl] = tuple(a + t * (b - a) for a, b in zip(fa, fb))

    achieved = 0.0
    for i, j in X.pairs():
        v = _euclid(extended[X.points[i]], extended[X.points[j]])
        achieved = max(achieved, v / float(X.dist[i][j]))
    return ExtensionResult(extended, T, achieved, L)
