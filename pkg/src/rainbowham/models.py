"""Samplers: seed digraphs, random perturbation, uniform colouring, and the
interpolation chain between the bidirected-coupled and fully independent
random models.

Every sampler is a pure function of its parameters and an :class:`RngStream`
(or a generator derived from one), so identical seeds reproduce identical
digraphs byte for byte.  Draw order is part of each sampler's contract and is
documented on the sampler.

Undirected objects never get their own type: an undirected graph is a
bidirected :class:`~rainbowham.graph.ColouredDigraph` (both orientations of
every pair present).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import NO_EDGE, UNCOLOURED, ColouredDigraph, min_semidegree, read_graph_file
from .rng import RngStream

SEED_KINDS = (
    "complete-bipartite-bidirected",
    "random-semidegree",
    "complete-bidirected",
    "from-file",
)


def round_half_up(x: float) -> int:
    """Round with ties away from zero for nonnegative x (2.5 -> 3)."""
    if x < 0:
        raise ValueError("round_half_up is defined for nonnegative values")
    return int(x + 0.5)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the perturbed coloured model.

    kappa is derived as round(q * n), ties rounding up.
    """

    n: int
    delta: float
    C: float
    q: float
    seed_kind: str = "complete-bipartite-bidirected"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        if self.C < 0:
            raise ValueError("C must be >= 0")
        if self.q <= 0:
            raise ValueError("q must be > 0")
        if self.seed_kind not in SEED_KINDS:
            raise ValueError(f"unknown seed_kind: {self.seed_kind!r}")
        if self.kappa < 1:
            raise ValueError("q too small: round(q*n) must be >= 1")

    @property
    def kappa(self) -> int:
        return round_half_up(self.q * self.n)


def _uncoloured_from_bool(present: np.ndarray) -> ColouredDigraph:
    mat = np.where(present, np.int32(UNCOLOURED), np.int32(NO_EDGE))
    np.fill_diagonal(mat, NO_EDGE)
    return ColouredDigraph(mat, 1)


def make_seed_digraph(
    kind: str,
    n: int,
    delta: float,
    rng: RngStream | None = None,
    path=None,
) -> ColouredDigraph:
    """Deterministic or random seed digraph with min semidegree at least
    floor(delta*n); edges carry the uncoloured sentinel (kappa placeholder 1).

    Kinds:
      complete-bipartite-bidirected: parts {0..s-1} and {s..n-1} with
        s = floor(delta*n), all cross pairs in both orientations.  Requires
        s <= n - s, otherwise the part sizes themselves would break the
        semidegree guarantee.
      random-semidegree: union, over every vertex, of floor(delta*n) random
        out-neighbours and floor(delta*n) random in-neighbours.
      complete-bidirected: all ordered pairs.
      from-file: read from ``path`` (graph file format), colours discarded;
        validated against n and the semidegree bound.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    s = int(delta * n)
    if s == 0:
        raise ValueError("floor(delta*n) must be >= 1")

    if kind == "complete-bipartite-bidirected":
        if 2 * s > n:
            raise ValueError(
                "complete-bipartite-bidirected needs floor(delta*n) <= n/2"
            )
        present = np.zeros((n, n), dtype=bool)
        present[:s, s:] = True
        present[s:, :s] = True
        return _uncoloured_from_bool(present)

    if kind == "complete-bidirected":
        present = np.ones((n, n), dtype=bool)
        return _uncoloured_from_bool(present)

    if kind == "random-semidegree":
        if rng is None:
            raise ValueError("random-semidegree seed kind needs an RngStream")
        g = rng.generator()
        present = np.zeros((n, n), dtype=bool)
        # Draw order: all out-sets for u = 0..n-1, then all in-sets for
        # v = 0..n-1; each set is a size-s choice among the other vertices.
        others = np.arange(n)
        for u in range(n):
            pool = np.delete(others, u)
            present[u, g.choice(pool, size=s, replace=False)] = True
        for v in range(n):
            pool = np.delete(others, v)
            present[g.choice(pool, size=s, replace=False), v] = True
        return _uncoloured_from_bool(present)

    if kind == "from-file":
        if path is None:
            raise ValueError("from-file seed kind needs a path")
        d = read_graph_file(path)
        if d.n != n:
            raise ValueError(f"seed file has n={d.n}, expected {n}")
        present = d.matrix >= UNCOLOURED
        seed = _uncoloured_from_bool(present)
        if min_semidegree(seed) < s:
            raise ValueError(
                f"seed file min semidegree {min_semidegree(seed)} < floor(delta*n) = {s}"
            )
        return seed

    raise ValueError(f"unknown seed_kind: {kind!r}")


def perturb(d0: ColouredDigraph, C: float, rng: RngStream) -> ColouredDigraph:
    """Union of d0 with a random digraph where each ordered pair of distinct
    vertices appears independently with probability C/n.

    Existing edges keep their colours; new edges are uncoloured.  Draw order:
    one uniform per matrix cell, row-major (diagonal cells burn a draw so the
    count is independent of d0).
    """
    n = d0.n
    if C < 0:
        raise ValueError("C must be >= 0")
    p = C / n if n else 0.0
    if p > 1.0:
        raise ValueError(f"C/n = {p} exceeds 1")
    g = rng.generator()
    mat = d0.matrix.copy()
    # Chunk rows to bound memory at large n; the draw sequence is identical
    # to a single full-matrix fill because fills are row-major.
    block = max(1, (1 << 22) // max(n, 1))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        u = g.random((hi - lo, n))
        add = (u < p) & (mat[lo:hi] == NO_EDGE)
        mat[lo:hi][add] = UNCOLOURED
    np.fill_diagonal(mat, NO_EDGE)
    return ColouredDigraph(mat, d0.kappa)


def colour_uniform(d: ColouredDigraph, kappa: int, rng: RngStream) -> ColouredDigraph:
    """Recolour every edge with an independent uniform colour in 0..kappa-1.

    The edge set is unchanged; any prior colours (including the sentinel) are
    overwritten.  Draw order: one colour per edge, edges row-major.
    """
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    g = rng.generator()
    mat = np.full((d.n, d.n), NO_EDGE, dtype=np.int32)
    eu, ev, _ = d._edge_arrays()
    if len(eu):
        mat[eu, ev] = g.integers(0, kappa, size=len(eu), dtype=np.int32)
    return ColouredDigraph(mat, kappa)


def sample_perturbed_coloured(params: ModelParams, rng: RngStream, seed_path=None) -> ColouredDigraph:
    """One draw from the full model: seed, perturb, colour uniformly.

    Child streams: ``seed`` (random seed kinds only), ``perturb``, ``colour``.
    """
    d0 = make_seed_digraph(
        params.seed_kind, params.n, params.delta, rng.child("seed"), path=seed_path
    )
    d1 = perturb(d0, params.C, rng.child("perturb"))
    return colour_uniform(d1, params.kappa, rng.child("colour"))


# -- interpolation chain ------------------------------------------------------


def chain_length(n: int) -> int:
    """Number of unordered vertex pairs, the last index of the chain."""
    return n * (n - 1) // 2


def pair_enumeration(n: int) -> list[tuple[int, int]]:
    """The fixed pair enumeration e_1..e_N: lexicographic on (min, max)."""
    return [(x, y) for x in range(n) for y in range(x + 1, n)]


def sample_gamma(
    g0: ColouredDigraph, i: int, C: float, kappa: int, rng: RngStream
) -> ColouredDigraph:
    """One sample of the i-th chain digraph, 0 <= i <= n(n-1)/2.

    g0 must be bidirected (an undirected graph as bidirected pairs); its
    colours are ignored.  Pairs are processed in the fixed enumeration order.
    For 1-based pair index j:

      j > i ("coupled" rule): a g0-pair is present in both orientations with
        one shared uniform colour; a non-pair appears, with probability C/n,
        as a bidirected pair sharing one uniform colour.
      j <= i ("independent" rule): a g0-pair with probability 1/3 keeps both
        orientations but colours them independently; otherwise each
        orientation appears independently with probability C/(2n), colours
        independent.  A non-pair always takes the latter branch.

    Draw order within a pair: decision draws before colour draws, the (x, y)
    orientation before (y, x).  Shared colours consume one draw, independent
    colourings two.
    """
    n = g0.n
    if not (0 <= i <= chain_length(n)):
        raise ValueError(f"chain index {i} out of 0..{chain_length(n)}")
    if C < 0 or (n and C / n > 1.0):
        raise ValueError("need 0 <= C <= n")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    m0 = g0.matrix
    if not np.array_equal(m0 >= UNCOLOURED, (m0 >= UNCOLOURED).T):
        raise ValueError("g0 must be bidirected")
    g = rng.generator()
    p_pair = C / n if n else 0.0
    p_half = C / (2 * n) if n else 0.0
    mat = np.full((n, n), NO_EDGE, dtype=np.int32)

    def colour() -> np.int32:
        return np.int32(g.integers(0, kappa))

    for j, (x, y) in enumerate(pair_enumeration(n), start=1):
        in_g0 = m0[x, y] >= UNCOLOURED
        if j > i:
            if in_g0:
                mat[x, y] = mat[y, x] = colour()
            elif g.random() < p_pair:
                mat[x, y] = mat[y, x] = colour()
        else:
            if in_g0 and g.random() < 1.0 / 3.0:
                mat[x, y] = colour()
                mat[y, x] = colour()
            else:
                if g.random() < p_half:
                    mat[x, y] = colour()
                if g.random() < p_half:
                    mat[y, x] = colour()
    return ColouredDigraph(mat, kappa)
