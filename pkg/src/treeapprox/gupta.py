"""Sphere-halving construction on realized R-trees.

Per component of the realization minus the input points, a frontier grows
from an interior root; each frontier point claims its nearest boundary
point in its up-set and spawns successors halfway to the claim.  Claimed
points adjacent in this process become tree edges; gluing the component
trees over shared boundary points yields a spanning tree with identity
distortion strictly below 8.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundViolation, NotZeroHyperbolic, SinglePoint
from .metric import MetricSpace
from .rtree import Component, RTree, TreeLocation, complement_components, component_root, realize_rtree
from .trees import WeightedTree, canonical_weights, distortion


class _Loc:
    """Node of the rooted location tree (root = the component root o)."""

    __slots__ = (
        "parent", "plen", "children", "label", "depth",
        "is_v", "claim", "pred", "from_tail",
    )

    def __init__(self, parent, plen: Fraction, label: str | None):
        self.parent: _Loc | None = parent
        self.plen = plen
        self.children: list[_Loc] = []
        self.label = label
        self.depth = parent.depth + plen if parent is not None else Fraction(0)
        self.is_v = False
        self.claim: _Loc | None = None
        self.pred: _Loc | None = None
        self.from_tail = False


def _leaves_below(v: _Loc) -> list[_Loc]:
    out = []
    stack = [v]
    while stack:
        u = stack.pop()
        if u.label is not None:
            out.append(u)
        stack.extend(u.children)
    return out


def _nearest_leaf_below(v: _Loc) -> _Loc:
    best: tuple[Fraction, str] | None = None
    pick = None
    stack = [v]
    while stack:
        u = stack.pop()
        if u.label is not None:
            key = (u.depth - v.depth, u.label)
            if best is None or key < best:
                best, pick = key, u
        else:
            stack.extend(u.children)
    assert pick is not None
    return pick


def _is_ancestor(anc: _Loc, node: _Loc) -> bool:
    while node is not None:
        if node is anc:
            return True
        node = node.parent
    return False


def _lca(a: _Loc, b: _Loc) -> _Loc:
    seen = set()
    x = a
    while x is not None:
        seen.add(id(x))
        x = x.parent
    y = b
    while id(y) not in seen:
        y = y.parent
    return y


def _wdist(a: _Loc, b: _Loc) -> Fraction:
    m = _lca(a, b)
    return a.depth + b.depth - 2 * m.depth


@dataclass
class ComponentRun:
    """Full state of one component's halving process, kept for tracing."""

    root: _Loc
    boundary_leaves: dict[str, _Loc]
    v_nodes: list[_Loc] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)
    # frontier points with a single boundary point above; halving would
    # continue toward it forever, so those nodes are created lazily
    tails: list[_Loc] = field(default_factory=list)

    @property
    def root_claim(self) -> str:
        return self.root.claim.label  # type: ignore[union-attr]


def _build_rooted(R: RTree, comp: Component, o: TreeLocation) -> tuple[_Loc, dict[str, _Loc]]:
    """Closure of the component rooted at the interior location o."""
    adj: dict[int, list[tuple[int, Fraction, int]]] = {}
    for ei in comp.edge_ids:
        u, v, w = R.edges[ei]
        adj.setdefault(u, []).append((v, w, ei))
        adj.setdefault(v, []).append((u, w, ei))
    root = _Loc(None, Fraction(0), None)
    leaves: dict[str, _Loc] = {}
    eu, ev, ew = R.edges[o.edge]

    # stack entries: (parent _Loc, realization node, edge used to arrive)
    stack: list[tuple[_Loc, int, Fraction, int]] = []
    if o.offset == 0 or o.offset == ew:
        # root coincides with a Steiner node of the closure
        rnode = eu if o.offset == 0 else ev
        assert R.labels[rnode] is None
        for v, w, ei in adj[rnode]:
            stack.append((root, v, w, ei))
    else:
        stack.append((root, eu, o.offset, o.edge))
        stack.append((root, ev, ew - o.offset, o.edge))
    while stack:
        parent, rnode, w, via = stack.pop()
        node = _Loc(parent, w, R.labels[rnode])
        parent.children.append(node)
        if R.labels[rnode] is not None:
            leaves[R.labels[rnode]] = node
            continue  # boundary points are leaves of the closure
        for v, wt, ei in adj[rnode]:
            if ei != via:
                stack.append((node, v, wt, ei))
    return root, leaves


def _descend(v: _Loc, h: Fraction) -> list[_Loc]:
    """All locations at distance exactly h above (away from the root of) v,
    inserted as real nodes; never reaches a leaf since h is below the
    nearest-boundary distance."""
    out: list[_Loc] = []
    stack = [(c, h) for c in v.children]
    while stack:
        c, rem = stack.pop()
        if rem < c.plen:
            p = c.parent
            w = _Loc(p, rem, None)
            p.children.remove(c)
            p.children.append(w)
            c.parent = w
            c.plen = c.plen - rem
            w.children.append(c)
            out.append(w)
        elif rem == c.plen:
            assert c.label is None, "sphere reached a boundary point"
            out.append(c)
        else:
            assert c.label is None, "sphere walked past a boundary point"
            stack.extend((cc, rem - c.plen) for cc in c.children)
    return out


def run_component(R: RTree, comp: Component, o: TreeLocation) -> ComponentRun:
    """Execute the halving process on one component."""
    root, leaves = _build_rooted(R, comp, o)
    run = ComponentRun(root=root, boundary_leaves=leaves)
    if len(leaves) < 2:
        # degenerate component: nothing to connect
        if leaves:
            root.claim = next(iter(leaves.values()))
        return run
    root.is_v = True
    root.claim = _nearest_leaf_below(root)
    run.v_nodes.append(root)
    frontier = [root]
    while frontier:
        nxt: list[_Loc] = []
        for v in frontier:
            below = _leaves_below(v)
            if len(below) <= 1:
                run.tails.append(v)
                continue  # every descendant would inherit the same claim
            h = (v.claim.depth - v.depth) / 2
            assert h > 0
            for w in _descend(v, h):
                w.is_v = True
                w.pred = v
                if _is_ancestor(w, v.claim):
                    w.claim = v.claim
                else:
                    w.claim = _nearest_leaf_below(w)
                    run.edges.append((v.claim.label, w.claim.label))
                run.v_nodes.append(w)
                nxt.append(w)
        frontier = nxt
    return run


def gupta_component_tree(
    R: RTree, comp: Component, o: TreeLocation
) -> list[tuple[str, str]]:
    """Edge set on the component's boundary points (labels)."""
    return run_component(R, comp, o).edges


def gupta_tree(X: MetricSpace, with_runs: bool = False):
    """Spanning tree with distortion strictly below 8 for 0-hyperbolic X.

    Component trees are glued over shared boundary points; the union is
    asserted to be a spanning tree.
    """
    if X.n < 2:
        raise SinglePoint("tree construction needs at least two points")
    R = realize_rtree(X)  # raises NotZeroHyperbolic if X is not tree-like
    comps = complement_components(R)
    edges: list[tuple[int, int]] = []
    runs: list[tuple[Component, ComponentRun]] = []
    for comp in comps:
        o = component_root(R, comp)
        run = run_component(R, comp, o)
        runs.append((comp, run))
        for a, b in run.edges:
            edges.append((X.index(a), X.index(b)))
    T = canonical_weights(X, edges)  # validates the spanning-tree shape
    if with_runs:
        return T, runs
    return T


# ---------------------------------------------------------------------------
# proof-term tracing


@dataclass(frozen=True)
class PairTrace:
    """Decomposition terms of one boundary pair along the component tree."""

    x: str
    x_prime: str
    m: int
    term_one: Fraction | None  # 2 c_{m-1} - 4 d(p_{m-1}, x_m), negative
    term_two: Fraction | None  # d(x_1, v_1), at most 3 d(x_m, v_1)
    term_two_bound: Fraction | None
    ck_checks: tuple[tuple[Fraction, Fraction], ...]  # (c_k, a_k + 2 b_k)

    def holds(self) -> bool:
        if self.term_one is not None and not self.term_one < 0:
            return False
        if self.term_two is not None and not self.term_two <= self.term_two_bound:
            return False
        return all(ck <= bound for ck, bound in self.ck_checks)


def _component_tree_paths(run: ComponentRun) -> dict[str, list[tuple[str, Fraction]]]:
    adj: dict[str, list[str]] = {lbl: [] for lbl in run.boundary_leaves}
    for a, b in run.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _tree_path(adj, src: str, dst: str) -> list[str]:
    parent = {src: src}
    stack = [src]
    while stack:
        u = stack.pop()
        if u == dst:
            break
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                stack.append(v)
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _materialize_tail(run: ComponentRun, v0: _Loc, lower: _Loc) -> _Loc:
    """First halving point strictly below ``lower`` on the tail from the
    frontier point v0 toward its single claimed boundary point."""
    L = v0.claim
    D = L.depth - v0.depth
    t = 1
    while v0.depth + D - D / 2**t <= lower.depth:
        t += 1
    depth = v0.depth + D - D / 2**t
    node = L
    while node.parent is not None and node.parent.depth >= depth:
        node = node.parent
    if node.depth == depth:
        w = node  # the halving point was materialized before
        assert w.label is None
    else:
        p = node.parent
        w = _Loc(p, depth - p.depth, None)
        p.children.remove(node)
        p.children.append(w)
        node.parent = w
        node.plen = node.depth - depth
        w.children.append(node)
    w.is_v = True
    w.from_tail = True
    w.claim = L
    w.pred = v0
    run.v_nodes.append(w)
    return w


def _side_terms(run: ComponentRun, path_vertices: list[str]):
    """Terms for one side of a traced pair: path (x_1, ..., x_m)."""
    leaves = run.boundary_leaves
    xs = [leaves[lbl] for lbl in path_vertices]
    m = len(xs)
    if m < 2:
        return None, None, None, ()
    xm = xs[-1]
    ps = [None] + [_lca(xs[k - 1], xm) for k in range(1, m)] + [xm]
    # ps[k] = meet of x_k and x_m for k = 1..m-1; ps[m] = x_m

    def v_after(k: int) -> _Loc:
        # shallowest frontier point on (p_k, p_{k+1}]
        node = ps[k + 1]
        found = None
        tail_hit = None
        while node is not ps[k]:
            assert node is not None, "consecutive meets are not nested"
            if node.is_v:
                if node.from_tail:
                    tail_hit = node
                else:
                    found = node
            node = node.parent
        if found is not None:
            return found
        # the interval lies on a pruned single-claim tail; the halving
        # process would have kept producing points there, so create the
        # shallowest one lazily
        if tail_hit is not None:
            w = _materialize_tail(run, tail_hit.pred, ps[k])
        else:
            v0 = next(
                (
                    t0
                    for t0 in run.tails
                    if _is_ancestor(t0, ps[k + 1])
                    and _is_ancestor(ps[k + 1], t0.claim)
                ),
                None,
            )
            assert v0 is not None, "no frontier point between consecutive meets"
            w = _materialize_tail(run, v0, ps[k])
        assert w.depth <= ps[k + 1].depth
        return w

    vs = {k: v_after(k) for k in range(1, m)}
    cks = []
    for k in range(2, m):
        a_k = ps[k].depth - vs[k - 1].depth
        b_k = vs[k].depth - ps[k].depth
        c_k = xs[k - 1].depth - ps[k].depth
        cks.append((c_k, a_k + 2 * b_k))
    c_m1 = xs[m - 2].depth - ps[m - 1].depth
    term_one = 2 * c_m1 - 4 * (xm.depth - ps[m - 1].depth)
    v1 = vs[1]
    term_two = _wdist(xs[0], v1)
    term_two_bound = 3 * _wdist(xm, v1)
    return term_one, term_two, term_two_bound, tuple(cks)


def trace_pairs(run: ComponentRun) -> list[PairTrace]:
    """Proof-term decomposition for every boundary pair of a component."""
    labels = sorted(run.boundary_leaves)
    if len(labels) < 2:
        return []
    adj = _component_tree_paths(run)
    co = run.root_claim
    traces = []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            x, xp = labels[i], labels[j]
            path = _tree_path(adj, x, xp)
            # x_1: vertex of the path nearest the claimed root in the tree
            anchor_path = _tree_path(adj, co, x)
            on_path = set(path)
            x1 = next(v for v in anchor_path if v in on_path)
            k1 = path.index(x1)
            side_a = path[k1::-1]  # (x_1, ..., x)
            side_b = path[k1:]  # (x_1, ..., x')
            for side, endpoint in ((side_a, x), (side_b, xp)):
                if len(side) < 2:
                    continue
                t1, t2, t2bnd, ck = _side_terms(run, side)
                traces.append(
                    PairTrace(
                        x=x1,
                        x_prime=endpoint,
                        m=len(side),
                        term_one=t1,
                        term_two=t2,
                        term_two_bound=t2bnd,
                        ck_checks=ck,
                    )
                )
    return traces


def verify_gupta_bounds(X: MetricSpace, trace: bool = True) -> WeightedTree:
    """Build the glued tree and check the distortion and (optionally) the
    per-pair proof terms exactly.  Raises BoundViolation on any failure."""
    T, runs = gupta_tree(X, with_runs=True)
    rep = distortion(X, T)
    if not rep.distortion < 8:
        raise BoundViolation(f"glued tree distortion {rep.distortion} >= 8")
    if rep.contraction != 1:
        raise BoundViolation("canonical weights must never contract")
    if trace:
        for comp, run in runs:
            if len(run.boundary_leaves) < 2:
                continue
            sub = X.restrict(sorted(X.index(lbl) for lbl in run.boundary_leaves))
            Tc = canonical_weights(
                sub,
                [(sub.index(a), sub.index(b)) for a, b in run.edges],
            )
            if not distortion(sub, Tc).distortion < 8:
                raise BoundViolation("component tree distortion >= 8")
            for tr in trace_pairs(run):
                if not tr.holds():
                    raise BoundViolation(
                        f"proof-term check failed on pair ({tr.x}, {tr.x_prime})"
                    )
    return T
