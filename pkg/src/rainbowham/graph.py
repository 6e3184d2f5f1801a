"""Coloured digraph data model and rainbow verification primitives.

Vertices and colours are dense integer ids: vertices ``0..n-1``, colours
``0..kappa-1``.  An edge may also carry the sentinel :data:`UNCOLOURED`
(``-1``) meaning "present but not yet coloured"; solvers reject digraphs that
still contain the sentinel.

Storage is a dense ``n x n`` int32 matrix (``NO_EDGE`` = -2 on non-edges, the
colour otherwise), which makes colour-constrained neighbour queries a single
vectorised row scan.  Adjacency is additionally exposed as Python-int bit
masks for the set-intersection-heavy searches.  Instances are immutable and
safe to share; derived indexes are built lazily and cached.

Verdict-producing checks report the *first* violation in a documented fixed
order: vertex coverage, then edge existence, then rainbowness (set conditions
last where they apply).

Graph file format (text): a header line ``n kappa`` followed by one line
``u v c`` per edge, all 0-based decimal; ``c`` may be ``-1`` for an
uncoloured edge.  Readers reject duplicate edges, self-loops and
out-of-range ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

NO_EDGE = -2
UNCOLOURED = -1

#: Hard ceiling on vertex/colour ids (bit-mask width and dense-matrix guard).
MAX_IDS = 16384


class GraphFormatError(ValueError):
    """Raised when a graph file violates the documented format."""


@dataclass(frozen=True)
class Violation:
    """First failed condition of a verification, with a witness object."""

    tag: str
    witness: object = None


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification; accepted iff there is no violation."""

    violation: Violation | None = None

    @property
    def accepted(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.accepted

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(None)

    @classmethod
    def fail(cls, tag: str, witness: object = None) -> "Verdict":
        return cls(Violation(tag, witness))


@dataclass(frozen=True)
class DirectedPath:
    """A directed path as its vertex sequence; empty and single-vertex paths
    are permitted (the empty path acts as the trivial connector)."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path vertices must be pairwise distinct")

    @property
    def length(self) -> int:
        """Number of edges."""
        return max(len(self.vertices) - 1, 0)

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    def edges(self) -> Iterator[tuple[int, int]]:
        for a, b in zip(self.vertices, self.vertices[1:]):
            yield (a, b)

    def __len__(self) -> int:
        return len(self.vertices)


def concat_paths(paths: Sequence[DirectedPath]) -> DirectedPath:
    """Concatenate paths that agree on consecutive endpoints.

    Empty paths are identity elements.  Raises ValueError on endpoint
    mismatch or on any vertex repetition other than the shared endpoints.
    """
    chain: list[int] = []
    for p in paths:
        if not p.vertices:
            continue
        if not chain:
            chain.extend(p.vertices)
            continue
        if chain[-1] != p.vertices[0]:
            raise ValueError(
                f"endpoint-mismatch: {chain[-1]} != {p.vertices[0]}"
            )
        chain.extend(p.vertices[1:])
    if len(set(chain)) != len(chain):
        seen: set[int] = set()
        dup = next(v for v in chain if v in seen or seen.add(v))
        raise ValueError(f"vertex repetition across paths: {dup}")
    return DirectedPath(tuple(chain))


@dataclass(frozen=True)
class EdgeMatching:
    """A set of directed edges, no two sharing a vertex (heads and tails all
    distinct across the set)."""

    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        seen: set[int] = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop in matching: {u}")
            if u in seen or v in seen:
                raise ValueError(f"matching edges share a vertex: ({u}, {v})")
            seen.add(u)
            seen.add(v)

    def __len__(self) -> int:
        return len(self.edges)


class ColouredDigraph:
    """Immutable edge-coloured digraph on ``n`` vertices with ``kappa``
    colours (plus the uncoloured sentinel)."""

    __slots__ = (
        "_mat",
        "_kappa",
        "_eu",
        "_ev",
        "_ec",
        "_out_deg",
        "_in_deg",
        "_out_masks",
        "_in_masks",
        "_by_colour",
    )

    def __init__(self, matrix: np.ndarray, kappa: int):
        # Internal constructor; use from_edges for validated construction.
        mat = np.ascontiguousarray(matrix, dtype=np.int32)
        n = mat.shape[0]
        if mat.ndim != 2 or mat.shape[1] != n:
            raise ValueError("adjacency matrix must be square")
        if n > MAX_IDS or kappa > MAX_IDS:
            raise ValueError(f"n and kappa must be <= {MAX_IDS}")
        if kappa < 1:
            raise ValueError("kappa must be >= 1")
        if n and np.any(np.diagonal(mat) != NO_EDGE):
            raise ValueError("self-loops are not allowed")
        if mat.size and (mat.min(initial=NO_EDGE) < NO_EDGE or mat.max(initial=NO_EDGE) >= kappa):
            raise ValueError("colours must lie in -1..kappa-1")
        mat.setflags(write=False)
        self._mat = mat
        self._kappa = int(kappa)
        present = mat >= UNCOLOURED
        self._out_deg = present.sum(axis=1).astype(np.int64) if n else np.zeros(0, np.int64)
        self._in_deg = present.sum(axis=0).astype(np.int64) if n else np.zeros(0, np.int64)
        self._eu = None
        self._ev = None
        self._ec = None
        self._out_masks = None
        self._in_masks = None
        self._by_colour = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(
        cls, n: int, kappa: int, edges: Iterable[tuple[int, int, int]]
    ) -> "ColouredDigraph":
        """Validated construction from ``(u, v, c)`` triples."""
        if n < 0 or n > MAX_IDS:
            raise ValueError(f"n must be in 0..{MAX_IDS}")
        mat = np.full((n, n), NO_EDGE, dtype=np.int32)
        for u, v, c in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex id out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop: {u}")
            if not (UNCOLOURED <= c < kappa):
                raise ValueError(f"colour out of range: {c}")
            if mat[u, v] != NO_EDGE:
                raise ValueError(f"duplicate edge: ({u}, {v})")
            mat[u, v] = c
        return cls(mat, kappa)

    # -- basic queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return self._mat.shape[0]

    @property
    def kappa(self) -> int:
        return self._kappa

    @property
    def edge_count(self) -> int:
        return int(self._out_deg.sum())

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._mat[u, v] >= UNCOLOURED)

    def colour(self, u: int, v: int) -> int:
        """Colour of edge (u, v); raises KeyError if the edge is absent."""
        c = int(self._mat[u, v])
        if c == NO_EDGE:
            raise KeyError(f"no edge ({u}, {v})")
        return c

    def row(self, u: int) -> np.ndarray:
        """Read-only colour row: entry v is colour(u, v) or NO_EDGE."""
        return self._mat[u]

    def column(self, v: int) -> np.ndarray:
        return self._mat[:, v]

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def out_degrees(self) -> np.ndarray:
        return self._out_deg

    @property
    def in_degrees(self) -> np.ndarray:
        return self._in_deg

    @property
    def fully_coloured(self) -> bool:
        return not bool(np.any(self._mat == UNCOLOURED))

    def out_neighbours(self, u: int) -> np.ndarray:
        return np.nonzero(self._mat[u] >= UNCOLOURED)[0]

    def in_neighbours(self, v: int) -> np.ndarray:
        return np.nonzero(self._mat[:, v] >= UNCOLOURED)[0]

    # -- cached indexes ----------------------------------------------------

    def _edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # Row-major edge enumeration; this order is the documented draw order
        # for bulk colour assignment.
        if self._eu is None:
            eu, ev = np.nonzero(self._mat >= UNCOLOURED)
            self._eu, self._ev = eu, ev
            self._ec = self._mat[eu, ev]
        return self._eu, self._ev, self._ec

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Edges as (u, v, colour), row-major."""
        eu, ev, ec = self._edge_arrays()
        for u, v, c in zip(eu.tolist(), ev.tolist(), ec.tolist()):
            yield (u, v, c)

    def out_mask(self, u: int) -> int:
        """Out-neighbourhood of u as a bit mask."""
        if self._out_masks is None:
            self._out_masks = [None] * self.n
        m = self._out_masks[u]
        if m is None:
            m = _bits_from_bool(self._mat[u] >= UNCOLOURED)
            self._out_masks[u] = m
        return m

    def in_mask(self, v: int) -> int:
        if self._in_masks is None:
            self._in_masks = [None] * self.n
        m = self._in_masks[v]
        if m is None:
            m = _bits_from_bool(self._mat[:, v] >= UNCOLOURED)
            self._in_masks[v] = m
        return m

    def colour_edges(self, c: int) -> np.ndarray:
        """All edges of colour c as an array of shape (k, 2)."""
        if not (0 <= c < self._kappa):
            raise ValueError(f"colour out of range: {c}")
        if self._by_colour is None:
            eu, ev, ec = self._edge_arrays()
            order = np.argsort(ec, kind="stable")
            sc = ec[order]
            pairs = np.stack([eu[order], ev[order]], axis=1) if len(eu) else np.zeros((0, 2), np.int64)
            self._by_colour = (pairs, sc)
        pairs, sc = self._by_colour
        lo = int(np.searchsorted(sc, c, side="left"))
        hi = int(np.searchsorted(sc, c, side="right"))
        return pairs[lo:hi]

    # -- derived graphs ----------------------------------------------------

    def induced_subgraph(
        self, vertices: Sequence[int], colours: Iterable[int] | None = None
    ) -> tuple["ColouredDigraph", list[int]]:
        """Subgraph induced on ``vertices`` (relabelled 0..k-1, ascending);
        if ``colours`` is given, only edges with those colours survive.
        Returns the subgraph and the new-id -> old-id map."""
        vs = sorted(set(int(v) for v in vertices))
        if vs and not (0 <= vs[0] and vs[-1] < self.n):
            raise ValueError("vertex id out of range")
        sub = self._mat[np.ix_(vs, vs)].copy() if vs else np.zeros((0, 0), np.int32)
        if colours is not None:
            keep = np.zeros(self._kappa + 2, dtype=bool)
            for c in colours:
                if not (0 <= c < self._kappa):
                    raise ValueError(f"colour out of range: {c}")
                keep[c + 2] = True
            drop = ~keep[sub + 2]
            sub[drop & (sub >= UNCOLOURED)] = NO_EDGE
        return ColouredDigraph(sub, self._kappa), vs

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColouredDigraph):
            return NotImplemented
        return (
            self._kappa == other._kappa
            and self._mat.shape == other._mat.shape
            and bool(np.array_equal(self._mat, other._mat))
        )

    def __hash__(self):
        raise TypeError("ColouredDigraph is not hashable")

    def __repr__(self) -> str:
        return f"ColouredDigraph(n={self.n}, kappa={self._kappa}, edges={self.edge_count})"


def _bits_from_bool(mask: np.ndarray) -> int:
    # Little-endian packbits, then one int.from_bytes; bit v = vertex v.
    packed = np.packbits(mask, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- queries and verifiers --------------------------------------------------


def min_semidegree(d: ColouredDigraph) -> int:
    """min over vertices of min(out-degree, in-degree); n >= 1 required."""
    if d.n == 0:
        raise ValueError("min_semidegree needs at least one vertex")
    return int(min(d.out_degrees.min(), d.in_degrees.min()))


def is_rainbow(d: ColouredDigraph, edges: Iterable[tuple[int, int]]) -> bool:
    """True iff the given edges carry pairwise distinct colours.

    Raises KeyError if any edge is absent from the digraph.  Uncoloured
    edges all share the sentinel and are therefore never rainbow together.
    """
    seen: set[int] = set()
    for u, v in edges:
        c = d.colour(u, v)
        if c in seen:
            return False
        seen.add(c)
    return True


def verify_rainbow_hamilton_cycle(d: ColouredDigraph, seq: Sequence[int]) -> Verdict:
    """Check order: vertex-coverage, edge-existence (cyclically), rainbow."""
    n = d.n
    if len(seq) != n or set(seq) != set(range(n)) or n == 0:
        return Verdict.fail("vertex-coverage", len(seq))
    colours: set[int] = set()
    for idx in range(n):
        u, v = seq[idx], seq[(idx + 1) % n]
        cv = int(d.matrix[u, v]) if u != v else NO_EDGE
        if cv == NO_EDGE:
            return Verdict.fail("missing-edge", (u, v))
        if cv in colours:
            return Verdict.fail("colour-repeat", cv)
        colours.add(cv)
    return Verdict.ok()


def verify_rainbow_path_contract(
    d: ColouredDigraph,
    p: DirectedPath,
    x: int,
    y: int,
    v_req: Iterable[int],
    c_req: Iterable[int],
) -> Verdict:
    """Accept iff p is a directed path of d from x to y, rainbow, with vertex
    set exactly v_req and colour set exactly c_req.

    Check order: endpoints, vertex distinctness, edge existence, rainbow,
    vertex set, colour set.
    """
    if not p.vertices:
        return Verdict.fail("endpoint-mismatch", None)
    if p.first != x or p.last != y:
        return Verdict.fail("endpoint-mismatch", (p.first, p.last))
    # DirectedPath already guarantees distinctness at construction.
    colours: set[int] = set()
    for u, v in p.edges():
        cv = int(d.matrix[u, v])
        if cv == NO_EDGE:
            return Verdict.fail("missing-edge", (u, v))
        if cv in colours:
            return Verdict.fail("colour-repeat", cv)
        colours.add(cv)
    if set(p.vertices) != set(v_req):
        return Verdict.fail("vertex-set-mismatch", set(p.vertices) ^ set(v_req))
    if colours != set(c_req):
        return Verdict.fail("colour-set-mismatch", colours ^ set(c_req))
    return Verdict.ok()


# -- file format -------------------------------------------------------------


def read_graph_file(path) -> ColouredDigraph:
    """Parse the text graph format; strict (no comments, no blank lines)."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise GraphFormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"bad header: {lines[0]!r}")
    try:
        n, kappa = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header: {lines[0]!r}") from exc
    if n < 0 or kappa < 1:
        raise GraphFormatError(f"bad header values: n={n}, kappa={kappa}")
    edges = []
    for ln, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {ln}: expected 'u v c', got {raw!r}")
        try:
            u, v, c = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"line {ln}: non-integer field in {raw!r}") from exc
        edges.append((u, v, c))
    try:
        return ColouredDigraph.from_edges(n, kappa, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def write_graph_file(d: ColouredDigraph, path) -> None:
    """Write the text graph format, edges row-major; uncoloured edges as -1."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{d.n} {d.kappa}\n")
        for u, v, c in d.edges():
            fh.write(f"{u} {v} {c}\n")
