"""The (v, c)-absorber gadget: a 13-vertex structure with 17 edges whose two
extractable paths share endpoints and differ by exactly the vertex v and the
colour c.

Roles: a transitive triangle v1 -> v, v -> v2, v1 -> v2; a bidirected-fork
block on x, y, z, u, w1, w2 (edges x->y, x->z, y->u, z->u, w2->y, w2->z,
y->w1, z->w1); and two length-3 connector paths v2 -> p1a -> p1b -> x and
w1 -> p2a -> p2b -> w2.  The colour pattern ties the triangle to the block:

    C(y->u) = c, C(v1->v) = C(x->y), C(v->v2) = C(z->u),
    C(v1->v2) = C(x->z), C(w2->y) = C(w2->z), C(y->w1) = C(z->w1),

with both connectors rainbow and all twelve colours of the absorbing path
pairwise distinct.

The absorbing path P = v1, v, v2, P1, x, z, w1, P2, w2, y, u covers all 13
vertices and 12 colours; the avoiding path P' = v1, v2, P1, x, y, w1, P2,
w2, z, u skips v and drops exactly colour c.  Swapping P for P' inside a
longer rainbow structure therefore absorbs or releases the pair (v, c).

Search is direct and randomized-restartable rather than extremal: plant-and
-check with fail-first ordering on the rarest constraints (the equal-colour
forks).  Anything found is certified by verify_absorber, which recomputes
every condition from the digraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .graph import ColouredDigraph, DirectedPath, Verdict
from .matchings import PathFamily, rainbow_path_family, rainbow_triangle_family
from .rng import RngStream

ROLE_NAMES = (
    "v", "v1", "v2", "x", "y", "z", "u", "w1", "w2", "p1a", "p1b", "p2a", "p2b",
)

#: Gadget edges as role-name pairs, in the fixed documented order:
#: triangle, fork block, connector P1, connector P2.
GADGET_EDGE_ROLES = (
    ("v1", "v"), ("v", "v2"), ("v1", "v2"),
    ("x", "y"), ("x", "z"), ("y", "u"), ("z", "u"),
    ("w2", "y"), ("w2", "z"), ("y", "w1"), ("z", "w1"),
    ("v2", "p1a"), ("p1a", "p1b"), ("p1b", "x"),
    ("w1", "p2a"), ("p2a", "p2b"), ("p2b", "w2"),
)

#: Role sequence of the absorbing path (13 vertices, 12 edges).
ABSORBING_ROLE_SEQ = (
    "v1", "v", "v2", "p1a", "p1b", "x", "z", "w1", "p2a", "p2b", "w2", "y", "u",
)

#: Role sequence of the avoiding path (12 vertices, 11 edges; omits v).
AVOIDING_ROLE_SEQ = (
    "v1", "v2", "p1a", "p1b", "x", "y", "w1", "p2a", "p2b", "w2", "z", "u",
)


@dataclass(frozen=True)
class Absorber:
    """Role assignment plus the claimed gadget edge colours.

    Construction validates structure only (distinct roles, the exact gadget
    edge set, nonnegative colours); whether the colour pattern holds in a
    digraph is verify_absorber's job, so malformed patterns are representable
    and rejectable.
    """

    v: int
    c: int
    roles: Mapping[str, int]
    edge_colours: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if set(self.roles) != set(ROLE_NAMES):
            raise ValueError("roles must assign exactly the 13 gadget roles")
        vals = [self.roles[r] for r in ROLE_NAMES]
        if len(set(vals)) != len(ROLE_NAMES):
            raise ValueError("role vertices must be pairwise distinct")
        if self.roles["v"] != self.v:
            raise ValueError("roles['v'] must equal v")
        if set(self.edge_colours) != set(self.gadget_edges()):
            raise ValueError("edge_colours must cover exactly the gadget edges")
        for e, col in self.edge_colours.items():
            if col < 0:
                raise ValueError(f"edge {e} has no proper colour")
        if self.c < 0:
            raise ValueError("c must be a proper colour")

    def gadget_edges(self) -> tuple[tuple[int, int], ...]:
        r = self.roles
        return tuple((r[a], r[b]) for a, b in GADGET_EDGE_ROLES)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.roles.values())

    @property
    def internal_vertices(self) -> frozenset[int]:
        """All 12 gadget vertices other than v itself."""
        return self.vertices - {self.v}

    @property
    def colours(self) -> frozenset[int]:
        return frozenset(self.edge_colours.values())

    @property
    def internal_colours(self) -> frozenset[int]:
        """Claimed colours other than c."""
        return self.colours - {self.c}


def absorbing_path(a: Absorber) -> DirectedPath:
    """The spanning path of the gadget: covers all 13 vertices, carries all
    12 colours (including c on its last edge)."""
    return DirectedPath(tuple(a.roles[r] for r in ABSORBING_ROLE_SEQ))


def avoiding_path(a: Absorber) -> DirectedPath:
    """The path that skips v: same endpoints as the absorbing path, 12
    vertices, and exactly the colour c missing."""
    return DirectedPath(tuple(a.roles[r] for r in AVOIDING_ROLE_SEQ))


def verify_absorber(d: ColouredDigraph, a: Absorber) -> Verdict:
    """Recompute every absorber condition from the digraph.

    Check order: edge existence, claimed-colour agreement, the six-equation
    colour pattern, rainbowness of the absorbing path, rainbowness and
    colour set of the avoiding path, vertex sets of both paths.
    """
    r = a.roles
    mat = d.matrix
    n = d.n
    for p, q in a.gadget_edges():
        if not (0 <= p < n and 0 <= q < n) or int(mat[p, q]) < 0:
            return Verdict.fail("missing-edge", (p, q))
        if int(mat[p, q]) != a.edge_colours[(p, q)]:
            return Verdict.fail("colour-mismatch", (p, q))

    def col(ra: str, rb: str) -> int:
        return int(mat[r[ra], r[rb]])

    pattern = (
        (col("y", "u") == a.c, "yu=c"),
        (col("v1", "v") == col("x", "y"), "v1v=xy"),
        (col("v", "v2") == col("z", "u"), "vv2=zu"),
        (col("v1", "v2") == col("x", "z"), "v1v2=xz"),
        (col("w2", "y") == col("w2", "z"), "w2y=w2z"),
        (col("y", "w1") == col("z", "w1"), "yw1=zw1"),
        (col("y", "w1") != col("w2", "y"), "forks-differ"),
    )
    for ok, tag in pattern:
        if not ok:
            return Verdict.fail("colour-pattern", tag)

    p_abs = absorbing_path(a)
    p_avoid = avoiding_path(a)
    abs_cols = [int(mat[e[0], e[1]]) for e in p_abs.edges()]
    if len(set(abs_cols)) != len(abs_cols):
        return Verdict.fail("colour-repeat", "absorbing-path")
    avoid_cols = [int(mat[e[0], e[1]]) for e in p_avoid.edges()]
    if len(set(avoid_cols)) != len(avoid_cols):
        return Verdict.fail("colour-repeat", "avoiding-path")
    if (p_abs.first, p_abs.last) != (p_avoid.first, p_avoid.last):
        return Verdict.fail("endpoint-mismatch", (p_abs.first, p_avoid.first))
    if set(avoid_cols) != set(abs_cols) - {a.c}:
        return Verdict.fail("colour-set-mismatch", set(avoid_cols) ^ (set(abs_cols) - {a.c}))
    if set(p_abs.vertices) != a.vertices:
        return Verdict.fail("vertex-set-mismatch", "absorbing-path")
    if set(p_avoid.vertices) != a.vertices - {a.v}:
        return Verdict.fail("vertex-set-mismatch", "avoiding-path")
    return Verdict.ok()


@dataclass(frozen=True)
class AbsorberSearchBudget:
    """max_tuples bounds examined (w2, y, z) fork candidates per search pass;
    max_restarts bounds randomized re-tries (used only when an RngStream is
    supplied)."""

    max_tuples: int = 500_000
    max_restarts: int = 4

    def __post_init__(self):
        if self.max_tuples < 0 or self.max_restarts < 0:
            raise ValueError("budget fields must be >= 0")


@dataclass(frozen=True)
class K24Instance:
    """The fork block: roles x, y, z, u, w1, w2 with matched colour triple
    (C(zu), C(xz), C(xy)), out-fork colour C(w2y)=C(w2z) and in-fork colour
    C(yw1)=C(zw1)."""

    x: int
    y: int
    z: int
    u: int
    w1: int
    w2: int
    triple: tuple[int, int, int]
    out_fork_colour: int
    in_fork_colour: int

    def vertices(self) -> tuple[int, ...]:
        return (self.x, self.y, self.z, self.u, self.w1, self.w2)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return (
            (self.x, self.y), (self.x, self.z), (self.y, self.u), (self.z, self.u),
            (self.w2, self.y), (self.w2, self.z), (self.y, self.w1), (self.z, self.w1),
        )


def find_k24(
    d: ColouredDigraph,
    c: int,
    c0: Iterable[tuple[int, int, int]],
    vertex_pool: Iterable[int],
    colour_pool: Iterable[int],
    budget: AbsorberSearchBudget = AbsorberSearchBudget(),
    w2_order: Iterable[int] | None = None,
) -> K24Instance | None:
    """Search for the fork block against a set of candidate colour triples.

    c0 entries are ordered triples (b, e, a) that must be matched as
    (C(zu), C(xz), C(xy)); they must be pairwise colour-disjoint and avoid c,
    which makes colour -> triple lookup unambiguous.  Scan order: w2
    ascending (or w2_order), equal-colour out-pairs (y, z), then the cheap
    u-probe on colour c, then x via in-edge intersection, then the w1 vector
    scan.  Returns None when the tuple budget is exhausted or the scan
    completes without a hit.
    """
    triples = list(c0)
    seen_cols: set[int] = set()
    first_map: dict[int, tuple[int, int, int]] = {}
    for t in triples:
        b, e, a = t
        if len({b, e, a}) != 3 or c in t:
            raise ValueError(f"bad triple {t}: not distinct or touches c")
        if seen_cols & {b, e, a}:
            raise ValueError(f"triples are not pairwise colour-disjoint at {t}")
        seen_cols |= {b, e, a}
        first_map[b] = t
    if not triples:
        return None

    n = d.n
    mat = d.matrix
    vpool = np.zeros(n, dtype=bool)
    for w in vertex_pool:
        vpool[w] = True
    cpool = np.zeros(d.kappa, dtype=bool)
    for cc in colour_pool:
        cpool[cc] = True

    # Out-edges of colour c inside the pool, grouped by tail: the u-probe.
    c_out: dict[int, list[int]] = {}
    for p, q in d.colour_edges(c).tolist():
        if vpool[p] and vpool[q]:
            c_out.setdefault(int(p), []).append(int(q))

    tuples_left = budget.max_tuples
    order = list(w2_order) if w2_order is not None else np.nonzero(vpool)[0].tolist()
    for w2 in order:
        if not vpool[w2]:
            continue
        row = mat[w2]
        tgt = np.nonzero((row >= 0) & vpool)[0]
        if len(tgt) < 2:
            continue
        fcols = row[tgt]
        keep = cpool[fcols] & (fcols != c)
        tgt, fcols = tgt[keep], fcols[keep]
        if len(tgt) < 2:
            continue
        srt = np.argsort(fcols, kind="stable")
        tgt, fcols = tgt[srt].tolist(), fcols[srt].tolist()
        i = 0
        while i < len(tgt):
            j = i
            while j < len(tgt) and fcols[j] == fcols[i]:
                j += 1
            group, f = tgt[i:j], int(fcols[i])
            i = j
            if len(group) < 2:
                continue
            for y in group:
                uc = c_out.get(y)
                if not uc:
                    continue
                for z in group:
                    if z == y:
                        continue
                    if tuples_left <= 0:
                        return None
                    tuples_left -= 1
                    hit = _close_fork(
                        d, c, first_map, vpool, cpool, w2, f, y, z, uc,
                    )
                    if hit is not None:
                        return hit
    return None


def _close_fork(
    d: ColouredDigraph,
    c: int,
    first_map: dict[int, tuple[int, int, int]],
    vpool: np.ndarray,
    cpool: np.ndarray,
    w2: int,
    f: int,
    y: int,
    z: int,
    uc: list[int],
) -> K24Instance | None:
    mat = d.matrix
    col_y = col_z = None
    w_pairs: list[tuple[int, int]] | None = None
    for u in uc:
        if u == z or u == w2:
            continue
        b = int(mat[z, u])
        if b < 0:
            continue
        triple = first_map.get(b)
        if triple is None or f in triple:
            continue
        _, e, a = triple
        if col_y is None:
            col_y = mat[:, y]
            col_z = mat[:, z]
        xs = np.nonzero((col_y == a) & (col_z == e) & vpool)[0].tolist()
        if not xs:
            continue
        if w_pairs is None:
            # Equal-colour out-pairs from y and z; only the triple- and
            # role-dependent checks are left for the inner loop.
            ry = mat[y]
            rz = mat[z]
            wmask = (ry == rz) & (ry >= 0) & vpool
            w_pairs = []
            for w1 in np.nonzero(wmask)[0].tolist():
                g = int(ry[w1])
                if cpool[g] and g != c and g != f:
                    w_pairs.append((w1, g))
        for x in xs:
            if x in (y, z, u, w2):
                continue
            for w1, g in w_pairs:
                if g in triple:
                    continue
                if w1 in (x, y, z, u, w2):
                    continue
                return K24Instance(x, y, z, u, w1, w2, triple, f, g)
    return None


DEFAULT_TRIANGLE_TARGET = 24

#: Local lead-connector re-tries per search order before a full restart.
_CONNECTOR_RETRIES = 5

SEARCH_STAGES = ("triangle-family", "k24", "connector-p1", "connector-p2", "ok")


@dataclass(frozen=True)
class AbsorberSearchResult:
    """Outcome of one find_absorber run: the absorber (or None) plus the
    stage reached and fork tuples spent."""

    absorber: Absorber | None
    stage: str
    restarts_used: int


def find_absorber_search(
    d: ColouredDigraph,
    v: int,
    c: int,
    allowed_v: Iterable[int],
    allowed_c: Iterable[int],
    budget: AbsorberSearchBudget = AbsorberSearchBudget(),
    rng: RngStream | None = None,
    triangle_target: int = DEFAULT_TRIANGLE_TARGET,
) -> AbsorberSearchResult:
    """Staged absorber search with the failing stage recorded.

    Stages: (1) transitive rainbow triangle family at v inside the allowed
    sets; (2) its colour triples (C(vv2), C(v1v2), C(v1v)) become the
    candidate set for (3) the fork-block search, run on the allowed vertices
    minus every family vertex so the matched triangle stays disjoint; (4) two
    fresh rainbow length-3 connectors v2 -> x and w1 -> w2.  A supplied rng
    enables up to budget.max_restarts shuffled re-tries after a deterministic
    first pass.
    """
    pool_v = set(int(w) for w in allowed_v) - {v}
    pool_c = set(int(cc) for cc in allowed_c) - {c}
    passes = 1 + (budget.max_restarts if rng is not None else 0)
    last_stage = "triangle-family"
    for attempt in range(passes):
        sub_rng = rng.child("restart", attempt) if rng is not None else None
        tris = rainbow_triangle_family(
            d, v, pool_v, pool_c, triangle_target,
            orientation="transitive",
            rng=sub_rng.child("triangles") if sub_rng is not None else None,
        )
        if not len(tris):
            last_stage = "triangle-family"
            continue
        tri_vertices = {w for pair in tris.members for w in pair}
        c0 = []
        tri_by_first: dict[int, tuple[int, int]] = {}
        for v1, v2 in tris.members:
            b = d.colour(v, v2)
            e = d.colour(v1, v2)
            a = d.colour(v1, v)
            c0.append((b, e, a))
            tri_by_first[b] = (v1, v2)
        k24_pool = pool_v - tri_vertices
        w2_order = None
        if sub_rng is not None:
            order = sorted(k24_pool)
            sub_rng.child("w2").generator().shuffle(order)
            w2_order = order
        k = find_k24(d, c, c0, k24_pool, pool_c, budget, w2_order=w2_order)
        if k is None:
            last_stage = "k24"
            continue
        v1, v2 = tri_by_first[k.triple[0]]
        used_v = {v, v1, v2, *k.vertices()}
        used_c = {c, *k.triple, k.out_fork_colour, k.in_fork_colour}
        # The two connectors compete for the same pools and the greedy is
        # deterministic, so whichever path is searched first can starve the
        # second; back the lead path off locally (excluding its previous
        # interiors) and try both search orders before restarting outright.
        ends = {"p1": (v2, k.x), "p2": (k.w1, k.w2)}
        p1_seen = False
        found: dict[str, PathFamily] = {}
        for lead_tag, tail_tag in (("p1", "p2"), ("p2", "p1")):
            exclude: set[int] = set()
            for _ in range(_CONNECTOR_RETRIES):
                lead = rainbow_path_family(
                    d, *ends[lead_tag],
                    pool_v - used_v - exclude, pool_c - used_c, 1,
                    rng=sub_rng.child(lead_tag) if sub_rng is not None else None,
                )
                if not len(lead):
                    break
                la, lb = lead.members[0]
                lead_cols = {d.colour(*ed) for ed in lead.member_edges(0)}
                p1_seen = p1_seen or lead_tag == "p1"
                tail = rainbow_path_family(
                    d, *ends[tail_tag],
                    pool_v - used_v - {la, lb},
                    pool_c - used_c - lead_cols, 1,
                    rng=sub_rng.child(tail_tag) if sub_rng is not None else None,
                )
                if len(tail):
                    p1_seen = True
                    found = {lead_tag: lead, tail_tag: tail}
                    break
                exclude |= {la, lb}
            if found:
                break
        if not found:
            last_stage = "connector-p2" if p1_seen else "connector-p1"
            continue
        p1, p2 = found["p1"], found["p2"]
        p1a, p1b = p1.members[0]
        p2a, p2b = p2.members[0]
        roles = {
            "v": v, "v1": v1, "v2": v2,
            "x": k.x, "y": k.y, "z": k.z, "u": k.u, "w1": k.w1, "w2": k.w2,
            "p1a": p1a, "p1b": p1b, "p2a": p2a, "p2b": p2b,
        }
        edge_colours = {
            (roles[ra], roles[rb]): d.colour(roles[ra], roles[rb])
            for ra, rb in GADGET_EDGE_ROLES
        }
        return AbsorberSearchResult(
            Absorber(v, c, roles, edge_colours), "ok", attempt
        )
    return AbsorberSearchResult(None, last_stage, passes - 1)


def find_absorber(
    d: ColouredDigraph,
    v: int,
    c: int,
    allowed_v: Iterable[int],
    allowed_c: Iterable[int],
    budget: AbsorberSearchBudget = AbsorberSearchBudget(),
    rng: RngStream | None = None,
) -> Absorber | None:
    """Absorber for (v, c) with internal vertices in allowed_v and internal
    colours in allowed_c, or None; see find_absorber_search for stages."""
    return find_absorber_search(d, v, c, allowed_v, allowed_c, budget, rng).absorber
