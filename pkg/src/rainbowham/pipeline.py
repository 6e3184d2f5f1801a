"""End-to-end absorption pipeline.

Stages, in order: flexible vertex/colour sets (random inclusion plus top-up);
an absorbing structure (one absorber per edge of a robustly matchable
bipartite template, wired in sequence by fresh rainbow length-3 connectors);
a long rainbow path on everything the structure does not touch; absorption of
the leftover through length-7 flexible connectors plus one robust-matching
query; concatenation into a rainbow Hamilton cycle.

The load-bearing exchange: the template's left labels are the flexible and
buffer vertices, its right labels the flexible and buffer colours, and every
template edge (v, c) owns an absorber whose two extractable paths differ by
exactly v and c.  Flexible connectors spend flexible vertices and colours;
whatever they spend is deleted from the template sides, and a perfect
matching of the remainder decides which absorbers run in absorbing mode.
Spent labels are covered by the connectors, matched labels by the absorbing
paths, so the union covers everything exactly once.

Every success is certified by the graph-core verifiers before it is
returned; a failure raises PipelineFailure naming its stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Iterable, Mapping

from .absorbers import (
    Absorber,
    AbsorberSearchBudget,
    absorbing_path,
    avoiding_path,
    find_absorber_search,
    verify_absorber,
)
from .graph import (
    ColouredDigraph,
    DirectedPath,
    Verdict,
    concat_paths,
    verify_rainbow_hamilton_cycle,
    verify_rainbow_path_contract,
)
from .matchings import rainbow_path_family
from .models import round_half_up
from .rmbg import RmbgTemplate, build_rmbg, robust_match
from .rng import RngStream
from .search import rainbow_dfs_path

PIPELINE_STAGES = (
    "flexible-sets",
    "absorbing-structure",
    "dfs-path",
    "leftover-connect",
    "robust-match",
    "final-verify",
)

_INCLUSION_RETRIES = 100


class PipelineFailure(Exception):
    """A pipeline stage gave up; carries the stage tag and a witness."""

    def __init__(self, stage: str, detail: str, witness: object = None):
        if stage not in PIPELINE_STAGES:
            raise ValueError(f"unknown stage: {stage!r}")
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail
        self.witness = witness


@dataclass(frozen=True)
class FlexibleSets:
    """Equal-sized flexible vertex and colour sets; half the size each of the
    template scale m = round(mu * n)."""

    v_flex: frozenset[int]
    c_flex: frozenset[int]
    mu: float

    def __post_init__(self):
        if len(self.v_flex) != len(self.c_flex):
            raise ValueError("flexible sets must have equal size")

    @property
    def size(self) -> int:
        return len(self.v_flex)


@dataclass(frozen=True)
class PipelineParams:
    """Explicit knobs replacing the asymptotic parameter chain.

    m, when given, must equal round(mu * n) for the digraph actually used
    (checked at build time); None derives it.  k is the path-search slack
    parameter, defaulting to ceil(n / 50).
    """

    mu: float = 0.01
    d: int = 2
    m: int | None = None
    k: int | None = None
    triangle_target: int = 24
    absorber_budget: AbsorberSearchBudget = field(default_factory=AbsorberSearchBudget)

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1 when given")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1 when given")
        if self.triangle_target < 1:
            raise ValueError("triangle_target must be >= 1")

    def m_for(self, n: int) -> int:
        m = round_half_up(self.mu * n)
        if self.m is not None and self.m != m:
            raise ValueError(f"m={self.m} inconsistent with round(mu*n)={m}")
        return m

    def k_for(self, n: int) -> int:
        return self.k if self.k is not None else max(1, ceil(n / 50))


def build_flexible_sets(d: ColouredDigraph, mu: float, rng: RngStream) -> FlexibleSets:
    """Independent-inclusion sample at rate mu on each side, topped up with
    the lowest ids missing to exact size 2*round(mu*n); an overshooting
    sample is resampled wholesale (bounded retries), never truncated.
    """
    n, kappa = d.n, d.kappa
    if mu <= 0:
        raise ValueError("mu must be > 0")
    m = round_half_up(mu * n)
    target = 2 * m
    if m < 1:
        raise ValueError("round(mu*n) must be >= 1")
    if target > n or target > kappa:
        raise ValueError(f"2*round(mu*n) = {target} exceeds n or kappa")
    g = rng.generator()

    def sample(count: int) -> frozenset[int]:
        for _ in range(_INCLUSION_RETRIES):
            hit = [i for i in range(count) if g.random() < mu]
            if len(hit) <= target:
                chosen = set(hit)
                for i in range(count):
                    if len(chosen) == target:
                        break
                    chosen.add(i)
                return frozenset(chosen)
        raise ValueError("inclusion sample kept exceeding the target size")

    v_flex = sample(n)
    c_flex = sample(kappa)
    return FlexibleSets(v_flex, c_flex, mu)


def flexible_connect(
    d: ColouredDigraph,
    f: FlexibleSets,
    u: int,
    v: int,
    c: int,
    v_used: Iterable[int],
    c_used: Iterable[int],
) -> DirectedPath | None:
    """Rainbow 7-edge path from u to v whose middle edge is coloured c with
    both ends in the unused flexible vertices, all six interior vertices
    flexible and unused, and the six remaining colours flexible and unused.

    Greedy over colour-c edges (ascending), then over the two length-3
    halves.  Returns None when no candidate completes.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    avail_v = set(f.v_flex) - set(v_used) - {u, v}
    avail_c = set(f.c_flex) - set(c_used) - {c}
    for a, b in sorted((int(p), int(q)) for p, q in d.colour_edges(c).tolist()):
        if a not in avail_v or b not in avail_v or a in (u, v) or b in (u, v):
            continue
        left = rainbow_path_family(d, u, a, avail_v - {b}, avail_c, 1)
        if not len(left):
            continue
        i1, i2 = left.members[0]
        lcols = {d.colour(*ed) for ed in left.member_edges(0)}
        right = rainbow_path_family(
            d, b, v, avail_v - {a, i1, i2}, avail_c - lcols, 1
        )
        if not len(right):
            continue
        j1, j2 = right.members[0]
        return DirectedPath((u, i1, i2, a, b, j1, j2, v))
    return None


@dataclass(frozen=True)
class AbsorbingStructure:
    """One absorber per template edge, wired in edge order by length-3
    rainbow connectors (the first connector is the trivial empty path).

    left_vertices maps template left labels to digraph vertices (flexible
    prefix first, then buffer); right_colours likewise for colours.
    absorbers and connectors are keyed by the realized (vertex, colour) pair
    of the template edge.  w and w_prime are the shared endpoints of every
    assembled path: first absorber's first vertex and last absorber's last.
    """

    template: RmbgTemplate
    left_vertices: tuple[int, ...]
    right_colours: tuple[int, ...]
    edge_order: tuple[tuple[int, int], ...]
    absorbers: Mapping[tuple[int, int], Absorber]
    connectors: Mapping[tuple[int, int], DirectedPath]
    w: int
    w_prime: int

    def vertices(self) -> set[int]:
        out: set[int] = set(self.left_vertices)
        for a in self.absorbers.values():
            out |= a.vertices
        for p in self.connectors.values():
            out |= set(p.vertices)
        return out

    def colours(self, d: ColouredDigraph) -> set[int]:
        out: set[int] = set(self.right_colours)
        for a in self.absorbers.values():
            out |= a.colours
        for p in self.connectors.values():
            out |= {d.colour(x, y) for x, y in p.edges()}
        return out

    def label_of_vertex(self, v: int) -> int:
        return self.left_vertices.index(v)

    def label_of_colour(self, c: int) -> int:
        return self.right_colours.index(c)


def structure_capacity(n: int, kappa: int, m: int, d: int) -> tuple[int, int, int]:
    """(absorber count e, vertices needed, colours needed) for an (m, d)
    structure: 7m labels a side, 12 fresh vertices and 11 fresh colours per
    absorber, 2 fresh vertices and 3 fresh colours per connector (e-1 of
    them)."""
    e = 7 * m * d
    need_v = 7 * m + 12 * e + 2 * (e - 1)
    need_c = 7 * m + 11 * e + 3 * (e - 1)
    return e, need_v, need_c


def build_absorbing_structure(
    d: ColouredDigraph,
    f: FlexibleSets,
    params: PipelineParams,
    rng: RngStream,
) -> AbsorbingStructure:
    """Greedy construction in template-edge order; every absorber and
    connector draws from vertices/colours outside the template labels and
    outside everything previously consumed, which makes the structure
    invariants hold by construction and keeps failures local to one edge."""
    n, kappa = d.n, d.kappa
    m = params.m_for(n)
    if 2 * m != f.size:
        raise ValueError(f"flexible size {f.size} is not 2m for m={m}")
    e, need_v, need_c = structure_capacity(n, kappa, m, params.d)
    if need_v > n or need_c > kappa:
        raise PipelineFailure(
            "absorbing-structure",
            f"capacity: need {need_v} vertices and {need_c} colours "
            f"for m={m}, d={params.d}, have n={n}, kappa={kappa}",
        )
    v_flex = sorted(f.v_flex)
    c_flex = sorted(f.c_flex)
    v_buf = [w for w in range(n) if w not in f.v_flex][: 5 * m]
    c_buf = [c for c in range(kappa) if c not in f.c_flex][: 5 * m]
    left = tuple(v_flex + v_buf)
    right = tuple(c_flex + c_buf)

    template = build_rmbg(m, params.d, rng.child("template"))
    avail_v = set(range(n)) - set(left)
    avail_c = set(range(kappa)) - set(right)

    absorbers: dict[tuple[int, int], Absorber] = {}
    connectors: dict[tuple[int, int], DirectedPath] = {}
    order: list[tuple[int, int]] = []
    prev_last: int | None = None
    first_vertex: int | None = None
    for a_label, b_label in template.edges():
        v_e, c_e = left[a_label], right[b_label]
        res = find_absorber_search(
            d, v_e, c_e, avail_v, avail_c,
            params.absorber_budget,
            rng.child("absorber", a_label, b_label),
            params.triangle_target,
        )
        if res.absorber is None:
            raise PipelineFailure(
                "absorbing-structure",
                f"absorber search failed at template edge ({a_label}, {b_label}) "
                f"in stage {res.stage}",
                witness=(a_label, b_label, res.stage),
            )
        absorber = res.absorber
        avail_v -= absorber.internal_vertices
        avail_c -= absorber.internal_colours
        if prev_last is None:
            conn = DirectedPath(())
            first_vertex = absorber.roles["v1"]
        else:
            fam = rainbow_path_family(
                d, prev_last, absorber.roles["v1"], avail_v, avail_c, 1,
                rng=rng.child("connector", a_label, b_label),
            )
            if not len(fam):
                raise PipelineFailure(
                    "absorbing-structure",
                    f"connector search failed before template edge ({a_label}, {b_label})",
                    witness=(a_label, b_label, "connector"),
                )
            i1, i2 = fam.members[0]
            conn = DirectedPath((prev_last, i1, i2, absorber.roles["v1"]))
            avail_v -= {i1, i2}
            avail_c -= {d.colour(*ed) for ed in fam.member_edges(0)}
        absorbers[(v_e, c_e)] = absorber
        connectors[(v_e, c_e)] = conn
        order.append((v_e, c_e))
        prev_last = absorber.roles["u"]

    s = AbsorbingStructure(
        template, left, right, tuple(order), absorbers, connectors,
        w=first_vertex, w_prime=prev_last,
    )
    n_v, n_c = len(s.vertices()), len(s.colours(d))
    if n_v != need_v or n_c != need_c or n_c != n_v - 1:
        raise AssertionError(
            f"structure bookkeeping broken: |V|={n_v} (want {need_v}), "
            f"|C|={n_c} (want {need_c})"
        )
    return s


def assemble_structure_path(
    s: AbsorbingStructure, matched: Iterable[tuple[int, int]]
) -> DirectedPath:
    """Path from s.w to s.w_prime: per template edge, the absorbing path iff
    the edge is matched, else the avoiding path, joined by the connectors.

    matched must be a submatching of the template edges: no left vertex or
    right colour twice."""
    mset = set(matched)
    seen_v: set[int] = set()
    seen_c: set[int] = set()
    for v_e, c_e in mset:
        if (v_e, c_e) not in s.absorbers:
            raise ValueError(f"({v_e}, {c_e}) is not a template edge")
        if v_e in seen_v or c_e in seen_c:
            raise ValueError("matched edges must form a matching")
        seen_v.add(v_e)
        seen_c.add(c_e)
    parts: list[DirectedPath] = []
    for key in s.edge_order:
        parts.append(s.connectors[key])
        a = s.absorbers[key]
        parts.append(absorbing_path(a) if key in mset else avoiding_path(a))
    return concat_paths(parts)


def verify_absorbing_structure(d: ColouredDigraph, s: AbsorbingStructure) -> Verdict:
    """Recheck every structure invariant against the digraph: each absorber
    verifies and sits on its claimed (v, c); internals and connector
    interiors are pairwise disjoint and avoid the template labels (both
    sides); connectors are rainbow 3-edge paths joining consecutive absorber
    endpoints with globally fresh colours; the first connector is trivial;
    and the colour count is exactly the vertex count minus one."""
    side = s.template.side
    if len(s.left_vertices) != side or len(s.right_colours) != side:
        return Verdict.fail("label-size-mismatch", side)
    label_edges = {
        (s.left_vertices[a], s.right_colours[b]) for a, b in s.template.edges()
    }
    if set(s.edge_order) != label_edges or len(s.edge_order) != len(label_edges):
        return Verdict.fail("edge-order-mismatch", None)

    taken_v: set[int] = set(s.left_vertices)
    taken_c: set[int] = set(s.right_colours)
    if len(taken_v) != side or len(taken_c) != side:
        return Verdict.fail("label-collision", None)
    prev_last: int | None = None
    for idx, key in enumerate(s.edge_order):
        v_e, c_e = key
        a = s.absorbers[key]
        if a.v != v_e or a.c != c_e:
            return Verdict.fail("role-mismatch", key)
        verdict = verify_absorber(d, a)
        if not verdict:
            return Verdict.fail("absorber-invalid", (key, verdict.violation))
        if a.internal_vertices & taken_v:
            return Verdict.fail("vertex-overlap", key)
        if a.internal_colours & taken_c:
            return Verdict.fail("colour-overlap", key)
        taken_v |= a.internal_vertices
        taken_c |= a.internal_colours
        conn = s.connectors[key]
        if idx == 0:
            if len(conn) != 0:
                return Verdict.fail("connector-invalid", (key, "first must be trivial"))
            if s.w != a.roles["v1"]:
                return Verdict.fail("endpoint-mismatch", "w")
        else:
            if len(conn) != 4:
                return Verdict.fail("connector-invalid", (key, "length"))
            if conn.first != prev_last or conn.last != a.roles["v1"]:
                return Verdict.fail("connector-invalid", (key, "endpoints"))
            interior = set(conn.vertices[1:3])
            if interior & taken_v:
                return Verdict.fail("vertex-overlap", (key, "connector"))
            cols = set()
            for p, q in conn.edges():
                if not d.has_edge(p, q):
                    return Verdict.fail("missing-edge", (p, q))
                cols.add(d.colour(p, q))
            if len(cols) != 3 or cols & taken_c:
                return Verdict.fail("colour-overlap", (key, "connector"))
            taken_v |= interior
            taken_c |= cols
        prev_last = a.roles["u"]
    if s.w_prime != prev_last:
        return Verdict.fail("endpoint-mismatch", "w_prime")
    if len(s.colours(d)) != len(s.vertices()) - 1:
        return Verdict.fail("identity", (len(s.vertices()), len(s.colours(d))))
    return Verdict.ok()


def absorb_leftover(
    d: ColouredDigraph,
    s: AbsorbingStructure,
    f: FlexibleSets,
    v_left: Iterable[int],
    c_left: Iterable[int],
    x: int,
    y: int,
) -> DirectedPath:
    """Rainbow path from x to y covering V(S) plus the leftover vertices and
    carrying C(S) plus the leftover colours.

    Procedure: the lowest leftover colour rides the connector from x into
    the structure entry w; the structure path runs to w_prime; length-7
    flexible connectors then hop through the remaining leftover vertices
    (ascending, y last), each carrying one remaining leftover colour
    (ascending).  The flexible vertices and colours the connectors consumed
    are removed from the template sides and a robust matching of the rest
    decides each absorber's mode, so consumed labels re-enter via the
    connectors and everything is covered exactly once.
    """
    vl = sorted(set(int(w) for w in v_left))
    cl = sorted(set(int(cc) for cc in c_left))
    if len(vl) != len(cl):
        raise ValueError("leftover vertex and colour sets must have equal size")
    if len(vl) < 2:
        raise ValueError("need at least two leftover vertices")
    if x == y or x not in vl or y not in vl:
        raise ValueError("x and y must be distinct members of the leftover")
    sv = s.vertices()
    sc = s.colours(d)
    if sv & set(vl):
        raise ValueError("leftover vertices must avoid the structure")
    if sc & set(cl):
        raise ValueError("leftover colours must avoid the structure colours")

    hops = [v for v in vl if v not in (x, y)] + [y]
    hop_colours = [c for c in cl if c != cl[0]]
    c0 = cl[0]
    flex_v_budget = 6 * (len(hops) + 1)
    if flex_v_budget > s.template.m:
        raise PipelineFailure(
            "leftover-connect",
            f"connectors need {flex_v_budget} flexible vertices/colours; "
            f"robust matching tolerates at most m={s.template.m}",
        )

    v_used: set[int] = set(vl)
    c_used: set[int] = set(cl)
    q1 = flexible_connect(d, f, x, s.w, c0, v_used, c_used)
    if q1 is None:
        raise PipelineFailure("leftover-connect", "entry connector failed", (x, s.w, c0))
    v_used |= set(q1.vertices)
    c_used |= {d.colour(*ed) for ed in q1.edges()}
    tail_paths: list[DirectedPath] = []
    prev = s.w_prime
    for v_i, c_i in zip(hops, hop_colours):
        q = flexible_connect(d, f, prev, v_i, c_i, v_used, c_used)
        if q is None:
            raise PipelineFailure(
                "leftover-connect", f"hop connector failed at {v_i}", (prev, v_i, c_i)
            )
        v_used |= set(q.vertices)
        c_used |= {d.colour(*ed) for ed in q.edges()}
        tail_paths.append(q)
        prev = v_i

    consumed_v = (v_used & f.v_flex)
    consumed_c = (c_used & f.c_flex)
    x_labels = sorted(s.label_of_vertex(v) for v in consumed_v)
    y_labels = sorted(s.label_of_colour(c) for c in consumed_c)
    pairing = robust_match(s.template, x_labels, y_labels)
    if pairing is None:
        raise PipelineFailure(
            "robust-match", "template lost its perfect matching",
            witness=(tuple(x_labels), tuple(y_labels)),
        )
    matched = {
        (s.left_vertices[a], s.right_colours[b]) for a, b in pairing.items()
    }
    q_abs = assemble_structure_path(s, matched)
    full = concat_paths([q1, q_abs, *tail_paths])
    v_req = sv | set(vl)
    c_req = sc | set(cl)
    verdict = verify_rainbow_path_contract(d, full, x, y, v_req, c_req)
    if not verdict:
        raise PipelineFailure("final-verify", "leftover path contract", verdict.violation)
    return full


def assemble_hamilton_cycle(
    d: ColouredDigraph, params: PipelineParams, rng: RngStream
) -> tuple[int, ...]:
    """Full pipeline; returns a verified rainbow Hamilton cycle as a vertex
    sequence or raises PipelineFailure with the failing stage.

    Requires kappa = n: with fewer colours no rainbow Hamilton cycle exists,
    and with more the colour-side accounting of the structure breaks.
    """
    if not d.fully_coloured:
        raise ValueError("digraph contains uncoloured edges")
    n = d.n
    if d.kappa != n:
        raise ValueError(f"need kappa = n, got kappa={d.kappa}, n={n}")
    try:
        flex = build_flexible_sets(d, params.mu, rng.child("flex"))
    except ValueError as exc:
        raise PipelineFailure("flexible-sets", str(exc)) from exc
    s = build_absorbing_structure(d, flex, params, rng.child("structure"))

    k = params.k_for(n)
    outside = sorted(set(range(n)) - s.vertices())
    if len(outside) < k + 2:
        raise PipelineFailure(
            "dfs-path", f"only {len(outside)} vertices outside the structure, need {k + 2}"
        )
    reserved = outside[:k]
    v2 = outside[k:]
    c2 = sorted(set(range(d.kappa)) - s.colours(d))
    sub, vmap = d.induced_subgraph(v2, c2)
    p2_local = rainbow_dfs_path(sub, k)
    p2 = DirectedPath(tuple(vmap[i] for i in p2_local.vertices))
    if len(p2) < 2:
        raise PipelineFailure("dfs-path", f"path too short: {len(p2)} vertices")

    v2_unused = (set(v2) - set(p2.vertices)) | set(reserved)
    c2_unused = set(c2) - {d.colour(*ed) for ed in p2.edges()}
    if len(c2_unused) != len(v2_unused) + 2:
        raise AssertionError(
            f"leftover accounting broken: {len(c2_unused)} colours vs "
            f"{len(v2_unused)} vertices"
        )
    x, yy = p2.last, p2.first
    v_left = v2_unused | {x, yy}
    q = absorb_leftover(d, s, flex, v_left, c2_unused, x, yy)
    seq = tuple(p2.vertices) + tuple(q.vertices[1:-1])
    verdict = verify_rainbow_hamilton_cycle(d, seq)
    if not verdict:
        raise PipelineFailure("final-verify", "cycle verifier rejected", verdict.violation)
    return seq
