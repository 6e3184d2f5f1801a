"""Shared builders for the test suite.

Two families of fixtures live here: small hand-planted digraphs whose
expected outputs are known by construction (gadgets, connector chains), and
fully synthetic absorbing structures wired edge by edge so that assembly and
leftover absorption can be exercised without running the randomized searches.
"""

from types import SimpleNamespace

import numpy as np

from rainbowham import (
    GADGET_EDGE_ROLES,
    NO_EDGE,
    ROLE_NAMES,
    Absorber,
    AbsorbingStructure,
    ColouredDigraph,
    DirectedPath,
    FlexibleSets,
    RmbgTemplate,
    RngStream,
    colour_uniform,
    make_seed_digraph,
    perturb,
)

#: Canonical gadget colour assignment: c = 0, the five repeated-pair colours
#: 1..5, connector P1 colours 6..8, connector P2 colours 9..11.
CANONICAL_PATTERN = {
    ("v1", "v"): 1, ("v", "v2"): 2, ("v1", "v2"): 3,
    ("x", "y"): 1, ("x", "z"): 3, ("y", "u"): 0, ("z", "u"): 2,
    ("w2", "y"): 4, ("w2", "z"): 4, ("y", "w1"): 5, ("z", "w1"): 5,
    ("v2", "p1a"): 6, ("p1a", "p1b"): 7, ("p1b", "x"): 8,
    ("w1", "p2a"): 9, ("p2a", "p2b"): 10, ("p2b", "w2"): 11,
}


def pattern_colours(c, a, b, e, f, g, p1, p2):
    """Gadget edge colours, keyed by role pair, for the given palette."""
    return {
        ("v1", "v"): a, ("v", "v2"): b, ("v1", "v2"): e,
        ("x", "y"): a, ("x", "z"): e, ("y", "u"): c, ("z", "u"): b,
        ("w2", "y"): f, ("w2", "z"): f, ("y", "w1"): g, ("z", "w1"): g,
        ("v2", "p1a"): p1[0], ("p1a", "p1b"): p1[1], ("p1b", "x"): p1[2],
        ("w1", "p2a"): p2[0], ("p2a", "p2b"): p2[1], ("p2b", "w2"): p2[2],
    }


def canonical_gadget():
    """13-vertex digraph holding exactly one absorber, roles in id order."""
    roles = {name: i for i, name in enumerate(ROLE_NAMES)}
    edges = [
        (roles[ra], roles[rb], col)
        for (ra, rb), col in CANONICAL_PATTERN.items()
    ]
    d = ColouredDigraph.from_edges(13, 12, edges)
    a = Absorber(
        v=roles["v"], c=0, roles=roles,
        edge_colours={
            (roles[ra], roles[rb]): col
            for (ra, rb), col in CANONICAL_PATTERN.items()
        },
    )
    return d, a


def plant_gadget(n, kappa, seed):
    """Random background with one full gadget planted on 13 random vertices.

    Returns (digraph, target vertex v, target colour c, role map).  The
    planted vertex v keeps only its gadget edges, and equal-colour out-pairs
    from y and z toward any vertex other than w1 are broken so the planted
    fork stays findable.
    """
    rs = RngStream(seed)
    empty = ColouredDigraph(np.full((n, n), NO_EDGE, dtype=np.int32), kappa)
    bg = colour_uniform(perturb(empty, 3.0, rs.child("bg")), kappa, rs.child("bgcol"))
    g = rs.child("plant").generator()
    ids = [int(w) for w in g.choice(n, size=13, replace=False)]
    roles = dict(zip(ROLE_NAMES, ids))
    cols = [int(cc) for cc in g.choice(kappa, size=12, replace=False)]
    pattern = pattern_colours(
        cols[0], cols[1], cols[2], cols[3], cols[4], cols[5],
        cols[6:9], cols[9:12],
    )
    mat = bg.matrix.copy()
    v = roles["v"]
    mat[v, :] = NO_EDGE
    mat[:, v] = NO_EDGE
    for (ra, rb), col in pattern.items():
        mat[roles[ra], roles[rb]] = col
    y, z, w1 = roles["y"], roles["z"], roles["w1"]
    for t in range(n):
        if t != w1 and mat[y, t] >= 0 and mat[y, t] == mat[z, t]:
            mat[z, t] = NO_EDGE
    return ColouredDigraph(mat, kappa), v, cols[0], roles


def shifted_template(m, shifts):
    """Template whose left vertex a is joined to b = a + s (mod 7m) for each
    shift s; distinct shifts give a union of disjoint perfect matchings."""
    side = 7 * m
    adj = tuple(
        tuple(sorted((a + s) % side for s in shifts)) for a in range(side)
    )
    return RmbgTemplate(m, len(shifts), adj)


def planted_structure(m, shifts, plant_leftover=True, spare_vertices=0,
                      spare_colours=0, close_cycle=False):
    """Fully synthetic absorbing structure over an explicitly wired digraph.

    Left label i is vertex i and right label j is colour j (side 7m each);
    every absorber and connector is planted with fresh ids, so no search
    runs.  With plant_leftover, two extra vertices x, y and two extra
    colours c0, c1 are wired through the flexible labels 0..11: a 7-edge
    entry x -> w carrying c0 via labels 0..5 and a 7-edge hop
    w_prime -> y carrying c1 via labels 6..11.  close_cycle adds the edge
    y -> x under one more fresh colour.
    """
    t = shifted_template(m, shifts)
    side = t.side
    edges: dict[tuple[int, int], int] = {}
    vnext = side
    cnext = side

    def put(u, v, col):
        assert (u, v) not in edges, (u, v)
        edges[(u, v)] = col

    absorbers = {}
    connectors = {}
    order = []
    prev_u = None
    for a_lab, b_lab in t.edges():
        key = (a_lab, b_lab)
        order.append(key)
        internal = list(range(vnext, vnext + 12))
        vnext += 12
        roles = dict(zip(ROLE_NAMES, [a_lab] + internal))
        palette = list(range(cnext, cnext + 11))
        cnext += 11
        pattern = pattern_colours(
            b_lab, palette[0], palette[1], palette[2], palette[3], palette[4],
            palette[5:8], palette[8:11],
        )
        edge_colours = {}
        for (ra, rb), col in pattern.items():
            put(roles[ra], roles[rb], col)
            edge_colours[(roles[ra], roles[rb])] = col
        absorbers[key] = Absorber(v=a_lab, c=b_lab, roles=roles,
                                  edge_colours=edge_colours)
        if prev_u is None:
            connectors[key] = DirectedPath(())
        else:
            i1, i2 = vnext, vnext + 1
            vnext += 2
            put(prev_u, i1, cnext)
            put(i1, i2, cnext + 1)
            put(i2, roles["v1"], cnext + 2)
            cnext += 3
            connectors[key] = DirectedPath((prev_u, i1, i2, roles["v1"]))
        prev_u = roles["u"]

    first = absorbers[order[0]]
    last = absorbers[order[-1]]
    s = AbsorbingStructure(
        template=t,
        left_vertices=tuple(range(side)),
        right_colours=tuple(range(side)),
        edge_order=tuple(order),
        absorbers=absorbers,
        connectors=connectors,
        w=first.roles["v1"],
        w_prime=last.roles["u"],
    )

    x = y = c0 = c1 = close_colour = None
    if plant_leftover:
        assert t.flex >= 12
        x, y = vnext, vnext + 1
        vnext += 2
        c0, c1 = cnext, cnext + 1
        cnext += 2
        chain = [x, 0, 1, 2, 3, 4, 5, s.w]
        cols = [0, 1, 2, c0, 3, 4, 5]
        for (u, v), col in zip(zip(chain, chain[1:]), cols):
            put(u, v, col)
        chain = [s.w_prime, 6, 7, 8, 9, 10, 11, y]
        cols = [6, 7, 8, c1, 9, 10, 11]
        for (u, v), col in zip(zip(chain, chain[1:]), cols):
            put(u, v, col)
        if close_cycle:
            close_colour = cnext
            cnext += 1
            put(y, x, close_colour)

    spare_v = tuple(range(vnext, vnext + spare_vertices))
    vnext += spare_vertices
    spare_c = tuple(range(cnext, cnext + spare_colours))
    cnext += spare_colours

    d = ColouredDigraph.from_edges(
        vnext, cnext, [(u, v, col) for (u, v), col in edges.items()]
    )
    flex = FlexibleSets(frozenset(range(t.flex)), frozenset(range(t.flex)),
                        t.flex / (2 * vnext))
    return SimpleNamespace(d=d, s=s, t=t, flex=flex, x=x, y=y, c0=c0, c1=c1,
                           close_colour=close_colour, spare_v=spare_v,
                           spare_c=spare_c)


def coloured_instance(kind, n, delta, C, kappa, seed):
    """Seed digraph of the given kind, perturbed and uniformly coloured."""
    rs = RngStream(seed)
    d0 = make_seed_digraph(kind, n, delta, rng=rs.child("seed"))
    return colour_uniform(perturb(d0, C, rs.child("perturb")), kappa,
                          rs.child("colour"))
