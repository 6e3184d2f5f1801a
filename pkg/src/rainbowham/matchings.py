"""Matching subroutines: hypergraph maximal/maximum matchings, bipartite
augmenting-path matchings, monochromatic digraph matchings, and greedy
rainbow path/triangle families.

Family constructions are greedy with deterministic ascending tie-breaking
(vertex id, then colour id) and optional budgeted random restarts; outputs
are certified by machine-checkable invariants rather than by existence
arguments, so a returned family is always valid regardless of how it was
found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .graph import ColouredDigraph, DirectedPath, EdgeMatching, Verdict
from .rng import RngStream

#: brute_force_max_matching refuses beyond this many hyperedges.
BRUTE_FORCE_EDGE_LIMIT = 24


@dataclass(frozen=True)
class Hypergraph:
    """r-uniform hypergraph with multiset edge semantics (duplicates allowed,
    as required by with-replacement sampling)."""

    r: int
    n: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("uniformity r must be >= 2")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        for e in self.edges:
            if len(e) != self.r:
                raise ValueError(f"edge {set(e)} has {len(e)} vertices, expected {self.r}")
            for v in e:
                if not (0 <= v < self.n):
                    raise ValueError(f"vertex {v} out of range")

    @classmethod
    def from_edges(cls, r: int, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(r, n, tuple(frozenset(e) for e in edges))


def is_hypergraph_matching(edges: Iterable[frozenset[int]]) -> bool:
    seen: set[int] = set()
    for e in edges:
        if seen & e:
            return False
        seen |= e
    return True


def greedy_maximal_matching(
    h: Hypergraph, order: Sequence[int]
) -> list[frozenset[int]]:
    """Scan edges in the given index order, keeping each edge disjoint from
    everything kept so far.  order must be a permutation of the edge indices.
    """
    if sorted(order) != list(range(len(h.edges))):
        raise ValueError("order must be a permutation of edge indices")
    used: set[int] = set()
    out: list[frozenset[int]] = []
    for idx in order:
        e = h.edges[idx]
        if not (used & e):
            out.append(e)
            used |= e
    return out


def brute_force_max_matching(h: Hypergraph) -> list[frozenset[int]]:
    """Maximum-cardinality matching by branch and bound; oracle use only."""
    m = len(h.edges)
    if m > BRUTE_FORCE_EDGE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_EDGE_LIMIT} edges")
    edges = h.edges
    best: list[int] = []

    def rec(i: int, used: frozenset[int], picked: list[int]):
        nonlocal best
        if len(picked) > len(best):
            best = list(picked)
        if i == m or len(picked) + (m - i) <= len(best):
            return
        e = edges[i]
        if not (used & e):
            picked.append(i)
            rec(i + 1, used | e, picked)
            picked.pop()
        rec(i + 1, used, picked)

    rec(0, frozenset(), [])
    return [edges[i] for i in best]


def sample_and_match(
    h: Hypergraph,
    mode: str,
    rng: RngStream,
    m: int | None = None,
    p: float | None = None,
) -> list[frozenset[int]]:
    """Greedy maximal matching of a random sub-hypergraph.

    with-replacement mode draws m edge indices uniformly (their draw order is
    the greedy scan order); bernoulli mode keeps each edge independently with
    probability p (one uniform per edge, edge order) and then scans the kept
    edges in a freshly shuffled order.
    """
    g = rng.generator()
    if mode == "with-replacement":
        if m is None or m < 0:
            raise ValueError("with-replacement mode needs m >= 0")
        if m and not h.edges:
            raise ValueError("cannot sample from an edgeless hypergraph")
        idx = g.integers(0, len(h.edges), size=m).tolist() if m else []
        sub = Hypergraph(h.r, h.n, tuple(h.edges[i] for i in idx))
        return greedy_maximal_matching(sub, list(range(len(sub.edges))))
    if mode == "bernoulli":
        if p is None or not (0.0 <= p <= 1.0):
            raise ValueError("bernoulli mode needs p in [0, 1]")
        keep = [i for i in range(len(h.edges)) if g.random() < p]
        sub = Hypergraph(h.r, h.n, tuple(h.edges[i] for i in keep))
        order = g.permutation(len(sub.edges)).tolist()
        return greedy_maximal_matching(sub, order)
    raise ValueError(f"unknown mode: {mode!r}")


def max_bipartite_matching(
    a: Iterable[int], b: Iterable[int], adj: Mapping[int, Iterable[int]]
) -> dict[int, int]:
    """Maximum bipartite matching (Kuhn's augmenting paths), left to right.

    adj maps left vertices to iterables of right vertices; pairs outside
    a x b are ignored.  Deterministic: left vertices and neighbours are
    processed ascending.  Returns {left: right}.
    """
    left = sorted(set(a))
    right = sorted(set(b))
    rset = set(right)
    neigh = {u: sorted(set(adj.get(u, ())) & rset) for u in left}
    match_r: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in neigh[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in left:
        augment(u, set())
    return {u: v for v, u in match_r.items()}


def monochromatic_matching(
    d: ColouredDigraph, c: int, x_set: Iterable[int], y_set: Iterable[int]
) -> EdgeMatching:
    """Maximum vertex-disjoint set of colour-c edges directed from x_set to
    y_set.  The sets may overlap; disjointness is over all endpoints, so the
    conflict structure is a general graph and the overlapping case goes
    through blossom matching (networkx); the disjoint case is bipartite and
    uses the local augmenting-path matcher.
    """
    xs = set(int(v) for v in x_set)
    ys = set(int(v) for v in y_set)
    arcs = [
        (int(u), int(v))
        for u, v in d.colour_edges(c).tolist()
        if u in xs and v in ys and u != v
    ]
    if not arcs:
        return EdgeMatching(frozenset())
    if xs & ys:
        g = nx.Graph()
        g.add_edges_from(arcs)
        pairs = nx.max_weight_matching(g, maxcardinality=True)
        arc_set = set(arcs)
        chosen = []
        for p, q in pairs:
            a, b = min(p, q), max(p, q)
            chosen.append((a, b) if (a, b) in arc_set else (b, a))
        return EdgeMatching(frozenset(chosen))
    adj: dict[int, list[int]] = {}
    for u, v in arcs:
        adj.setdefault(u, []).append(v)
    pairing = max_bipartite_matching(xs, ys, adj)
    return EdgeMatching(frozenset(pairing.items()))


# -- rainbow families ---------------------------------------------------------

FAMILY_KINDS = ("path", "cyclic-triangle", "transitive-triangle")


@dataclass(frozen=True)
class PathFamily:
    """Family of length-3 rainbow structures sharing anchors.

    kind 'path': members (x, y) stand for u -> x -> y -> v with anchors
    (u, v).  kind 'cyclic-triangle': members (x, y) stand for v -> x -> y -> v
    with anchors (v,).  kind 'transitive-triangle': members (v1, v2) stand
    for edges v1 -> v, v -> v2, v1 -> v2 with anchors (v,).

    Interiors are pairwise disjoint and avoid the anchors; rainbowness of
    the edge union is a property of a digraph and is checked by verify().
    """

    kind: str
    anchors: tuple[int, ...]
    members: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind: {self.kind!r}")
        want = 2 if self.kind == "path" else 1
        if len(self.anchors) != want:
            raise ValueError(f"kind {self.kind} needs {want} anchor(s)")
        if self.kind == "path" and self.anchors[0] == self.anchors[1]:
            raise ValueError("path anchors must differ")
        seen: set[int] = set(self.anchors)
        for a, b in self.members:
            if a == b or a in seen or b in seen:
                raise ValueError(f"interiors must be disjoint and avoid anchors: ({a}, {b})")
            seen.add(a)
            seen.add(b)

    def __len__(self) -> int:
        return len(self.members)

    def member_edges(self, i: int) -> tuple[tuple[int, int], ...]:
        a, b = self.members[i]
        if self.kind == "path":
            u, v = self.anchors
            return ((u, a), (a, b), (b, v))
        (v,) = self.anchors
        if self.kind == "cyclic-triangle":
            return ((v, a), (a, b), (b, v))
        return ((a, v), (v, b), (a, b))

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(len(self.members)):
            yield from self.member_edges(i)

    def spine(self, i: int) -> DirectedPath:
        """The open directed path through member i (triangles omit the edge
        that closes, or shortcuts, the spine)."""
        a, b = self.members[i]
        if self.kind == "path":
            u, v = self.anchors
            return DirectedPath((u, a, b, v))
        (v,) = self.anchors
        if self.kind == "cyclic-triangle":
            return DirectedPath((v, a, b))
        return DirectedPath((a, v, b))

    def verify(
        self, d: ColouredDigraph, colour_pool: Iterable[int] | None = None
    ) -> Verdict:
        """Check edge existence, rainbowness of the union, and (optionally)
        colour containment.  Interior disjointness holds by construction."""
        pool = None if colour_pool is None else set(colour_pool)
        seen: set[int] = set()
        for u, v in self.edges():
            if not d.has_edge(u, v):
                return Verdict.fail("missing-edge", (u, v))
            c = d.colour(u, v)
            if c in seen:
                return Verdict.fail("colour-repeat", c)
            if pool is not None and c not in pool:
                return Verdict.fail("colour-outside-pool", c)
            seen.add(c)
        return Verdict.ok()


def _greedy_family(
    d: ColouredDigraph,
    kind: str,
    anchors: tuple[int, ...],
    pool: list[int],
    colour_pool: set[int],
    target: int,
) -> PathFamily:
    rows = d.matrix
    free = set(pool)
    used_colours: set[int] = set()
    members: list[tuple[int, int]] = []

    def edge_cols(a: int, b: int) -> tuple[int, int, int] | None:
        if kind == "path":
            u, v = anchors
            trip = ((u, a), (a, b), (b, v))
        elif kind == "cyclic-triangle":
            (v,) = anchors
            trip = ((v, a), (a, b), (b, v))
        else:
            (v,) = anchors
            trip = ((a, v), (v, b), (a, b))
        cols = []
        for p, q in trip:
            c = int(rows[p, q])
            if c < 0 or c not in colour_pool or c in used_colours:
                return None
            cols.append(c)
        if len(set(cols)) != 3:
            return None
        return tuple(cols)

    for a in pool:
        if len(members) >= target:
            break
        if a not in free:
            continue
        for b in pool:
            if b == a or b not in free:
                continue
            cols = edge_cols(a, b)
            if cols is None:
                continue
            members.append((a, b))
            free.discard(a)
            free.discard(b)
            used_colours.update(cols)
            break
    return PathFamily(kind, anchors, tuple(members))


def _build_family(
    d: ColouredDigraph,
    kind: str,
    anchors: tuple[int, ...],
    interior_pool: Iterable[int],
    colour_pool: Iterable[int],
    target: int,
    rng: RngStream | None,
    restarts: int,
) -> PathFamily:
    if target < 0:
        raise ValueError("target must be >= 0")
    pool = sorted(set(int(v) for v in interior_pool) - set(anchors))
    cpool = set(int(c) for c in colour_pool)
    best = _greedy_family(d, kind, anchors, pool, cpool, target)
    if len(best) >= target or rng is None:
        return best
    g = rng.generator()
    for _ in range(restarts):
        shuffled = list(pool)
        g.shuffle(shuffled)
        cand = _greedy_family(d, kind, anchors, shuffled, cpool, target)
        if len(cand) > len(best):
            best = cand
        if len(best) >= target:
            break
    return best


def rainbow_path_family(
    d: ColouredDigraph,
    u: int,
    v: int,
    interior_pool: Iterable[int],
    colour_pool: Iterable[int],
    target: int,
    rng: RngStream | None = None,
    restarts: int = 8,
) -> PathFamily:
    """Up to `target` paths u -> x -> y -> v with all interiors drawn from
    interior_pool, pairwise disjoint, and the union of all 3*|family| edges
    rainbow within colour_pool."""
    if u == v:
        raise ValueError("endpoints must differ")
    return _build_family(
        d, "path", (u, v), interior_pool, colour_pool, target, rng, restarts
    )


def rainbow_triangle_family(
    d: ColouredDigraph,
    v: int,
    pool: Iterable[int],
    colour_pool: Iterable[int],
    target: int,
    orientation: str = "cyclic",
    rng: RngStream | None = None,
    restarts: int = 8,
) -> PathFamily:
    """Up to `target` triangles through v, pairwise meeting only at v, edge
    union rainbow within colour_pool.

    cyclic: v -> x -> y -> v.  transitive: v1 -> v, v -> v2, v1 -> v2 (the
    orientation absorbers consume).
    """
    if orientation not in ("cyclic", "transitive"):
        raise ValueError(f"unknown orientation: {orientation!r}")
    kind = "cyclic-triangle" if orientation == "cyclic" else "transitive-triangle"
    return _build_family(d, kind, (v,), pool, colour_pool, target, rng, restarts)
