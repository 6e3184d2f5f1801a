"""Rainbow path and cycle search.

Three searchers share this module: a colour-reserving DFS that, under a
colour-spread hypothesis, finds a rainbow directed path of length at least
n - 2k; an exact backtracking decision procedure for rainbow directed
Hamilton cycles; and a factorial brute-force oracle for cross-checking the
exact solver on tiny instances.

All searchers reject digraphs containing uncoloured edges and are
deterministic functions of their inputs (ties break on ascending vertex id,
budgets count node expansions rather than time).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from math import comb

import numpy as np

from .graph import ColouredDigraph, DirectedPath, verify_rainbow_hamilton_cycle
from .rng import RngStream

#: Exhaustive colour-spread checks refuse to enumerate more ordered pairs.
EXHAUSTIVE_PAIR_BUDGET = 10_000_000


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a Hamilton cycle decision run.

    status 'found' carries a verified cycle; 'not-found' means the search
    space was exhausted; 'budget-exhausted' means the answer is unknown.
    """

    status: str
    cycle: tuple[int, ...] | None
    nodes: int
    wall_ms: float

    def __post_init__(self):
        if self.status not in ("found", "not-found", "budget-exhausted"):
            raise ValueError(f"bad status: {self.status!r}")
        if (self.status == "found") != (self.cycle is not None):
            raise ValueError("cycle must be present exactly when status is found")


@dataclass(frozen=True)
class SpreadCheck:
    """Boolean verdict of a colour-spread check plus how it was obtained.

    Truthiness is the verdict.  In sampled mode the verdict is one-sided:
    True only means no sampled pair failed.
    """

    ok: bool
    mode: str
    pairs_checked: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _require_coloured(d: ColouredDigraph) -> None:
    if not d.fully_coloured:
        raise ValueError("digraph contains uncoloured edges")


def _pair_colour_count(mat_rows: list, xs: tuple[int, ...], ys: tuple[int, ...]) -> int:
    mask = 0
    for u in xs:
        row = mat_rows[u]
        for v in ys:
            c = row[v]
            if c >= 0:
                mask |= 1 << c
    return mask.bit_count()


def colour_spread_ok(
    d: ColouredDigraph,
    k: int,
    t: int,
    mode: str = "exhaustive",
    trials: int = 1000,
    rng: RngStream | None = None,
) -> SpreadCheck:
    """Check that every (or, in sampled mode, each sampled) ordered pair of
    disjoint k-sets X, Y spans at least t distinct colours on the edges
    directed from X to Y.

    Exhaustive mode enumerates all C(n,k)*C(n-k,k) ordered pairs and refuses
    when that exceeds EXHAUSTIVE_PAIR_BUDGET.  A failing check carries the
    first bad (X, Y) as witness.
    """
    _require_coloured(d)
    n = d.n
    if k < 1:
        raise ValueError("k must be >= 1")
    if 2 * k > n:
        raise ValueError(f"need 2k <= n, got k={k}, n={n}")
    mat_rows = [row.tolist() for row in d.matrix]

    if mode == "exhaustive":
        total = comb(n, k) * comb(n - k, k)
        if total > EXHAUSTIVE_PAIR_BUDGET:
            raise ValueError(
                f"{total} ordered pairs exceeds exhaustive budget {EXHAUSTIVE_PAIR_BUDGET}"
            )
        vs = range(n)
        checked = 0
        for xs in itertools.combinations(vs, k):
            xset = set(xs)
            # Per-X row masks: colours from X into each outside vertex.
            outside = [v for v in vs if v not in xset]
            vmask = {}
            for v in outside:
                m = 0
                for u in xs:
                    c = mat_rows[u][v]
                    if c >= 0:
                        m |= 1 << c
                vmask[v] = m
            for ys in itertools.combinations(outside, k):
                checked += 1
                acc = 0
                for v in ys:
                    acc |= vmask[v]
                if acc.bit_count() < t:
                    return SpreadCheck(False, "exhaustive", checked, (xs, ys))
        return SpreadCheck(True, "exhaustive", checked)

    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an RngStream")
        g = rng.generator()
        for idx in range(trials):
            pick = g.choice(n, size=2 * k, replace=False)
            xs, ys = tuple(pick[:k].tolist()), tuple(pick[k:].tolist())
            if _pair_colour_count(mat_rows, xs, ys) < t:
                return SpreadCheck(False, "sampled", idx + 1, (xs, ys))
        return SpreadCheck(True, "sampled", trials)

    raise ValueError(f"unknown mode: {mode!r}")


def rainbow_dfs_path(d: ColouredDigraph, k: int) -> DirectedPath:
    """Longest rainbow directed path found by colour-reserving DFS.

    k parameterizes only the guarantee: when the colour-spread hypothesis
    holds at threshold n (every disjoint k-set pair spans >= n colours), the
    result has length >= n - 2k.  The procedure itself never reads k.

    Procedure: grow a path from the lowest unvisited vertex, scanning
    out-edges in ascending head order and taking any edge whose head is
    unvisited and whose colour is neither on the path nor reserved.  On
    backtracking over an edge its colour is permanently reserved; visited
    vertices stay visited.  When the stack empties the search restarts at
    the lowest unvisited vertex, keeping the best path seen.  Per-vertex
    scan positions persist, so each edge is examined at most once.
    """
    _require_coloured(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = d.n
    if n == 0:
        return DirectedPath(())
    out_lists = [d.out_neighbours(u).tolist() for u in range(n)]
    mat_rows = [row.tolist() for row in d.matrix]
    scan_pos = [0] * n
    visited = [False] * n
    reserved: set[int] = set()

    best: tuple[int, ...] = ()
    for start in range(n):
        if visited[start]:
            continue
        visited[start] = True
        stack: list[int] = [start]
        edge_colours: list[int] = []
        path_colours: set[int] = set()
        if len(stack) > len(best):
            best = tuple(stack)
        while stack:
            u = stack[-1]
            outs = out_lists[u]
            row = mat_rows[u]
            advanced = False
            pos = scan_pos[u]
            while pos < len(outs):
                v = outs[pos]
                pos += 1
                if visited[v]:
                    continue
                c = row[v]
                if c in path_colours or c in reserved:
                    continue
                scan_pos[u] = pos
                visited[v] = True
                stack.append(v)
                edge_colours.append(c)
                path_colours.add(c)
                if len(stack) > len(best):
                    best = tuple(stack)
                advanced = True
                break
            if advanced:
                continue
            scan_pos[u] = pos
            stack.pop()
            if edge_colours:
                c = edge_colours.pop()
                path_colours.discard(c)
                reserved.add(c)
    return DirectedPath(best)


def _solve_exact(d: ColouredDigraph, budget: int | None) -> tuple[str, tuple[int, ...] | None, int]:
    n = d.n
    if n < 2:
        return "not-found", None, 0
    out_masks = [d.out_mask(u) for u in range(n)]
    in_masks = [d.in_mask(v) for v in range(n)]
    mat_rows = [row.tolist() for row in d.matrix]
    full = (1 << n) - 1
    start = 0
    start_bit = 1

    nodes = 0

    def viable(unvisited: int, endpoint: int) -> bool:
        # Colour-blind structural prune: every unvisited vertex still needs
        # an in-edge from unvisited-or-endpoint and an out-edge to
        # unvisited-or-start.
        in_src = unvisited | (1 << endpoint)
        out_tgt = unvisited | start_bit
        rest = unvisited
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            if not (in_masks[w] & in_src & ~low):
                return False
            if not (out_masks[w] & out_tgt & ~low):
                return False
        return True

    path = [start]
    used_colours = 0

    def dfs(u: int, unvisited: int) -> tuple[str, tuple[int, ...] | None] | None:
        nonlocal nodes, used_colours
        nodes += 1
        if budget is not None and nodes > budget:
            return ("budget-exhausted", None)
        if not unvisited:
            c = mat_rows[u][start]
            if c >= 0 and not (used_colours >> c) & 1:
                return ("found", tuple(path))
            return None
        cand_mask = out_masks[u] & unvisited
        cands = []
        rest = cand_mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            cands.append(((out_masks[v] & unvisited).bit_count(), v))
        cands.sort()
        for _, v in cands:
            c = mat_rows[u][v]
            if (used_colours >> c) & 1:
                continue
            nxt = unvisited & ~(1 << v)
            if nxt and not viable(nxt, v):
                continue
            path.append(v)
            used_colours |= 1 << c
            res = dfs(v, nxt)
            path.pop()
            used_colours &= ~(1 << c)
            if res is not None:
                return res
        return None

    res = dfs(start, full & ~start_bit)
    if res is None:
        return "not-found", None, nodes
    return res[0], res[1], nodes


def exact_rainbow_hc(d: ColouredDigraph, budget: int | None = None) -> SolveOutcome:
    """Decide rainbow directed Hamilton cycle existence by backtracking.

    Fail-first branching (fewest onward moves first) plus a colour-blind
    reachability prune; both preserve exactness.  budget bounds search-tree
    node expansions; None means unlimited, and an exhausted search without a
    find is then a proof of non-existence.
    """
    _require_coloured(d)
    t0 = time.perf_counter()
    status, cycle, nodes = _solve_exact(d, budget)
    ms = (time.perf_counter() - t0) * 1000.0
    if cycle is not None:
        verdict = verify_rainbow_hamilton_cycle(d, cycle)
        if not verdict:
            raise AssertionError(f"solver produced a bad cycle: {verdict.violation}")
    return SolveOutcome(status, cycle, nodes, ms)


#: brute_force_rainbow_hc refuses beyond this many vertices ((n-1)! blowup).
BRUTE_FORCE_MAX_N = 9


def brute_force_rainbow_hc(d: ColouredDigraph) -> SolveOutcome:
    """Oracle: try all (n-1)! cyclic orders with vertex 0 pinned first."""
    _require_coloured(d)
    n = d.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}")
    t0 = time.perf_counter()
    nodes = 0
    if n >= 2:
        for perm in itertools.permutations(range(1, n)):
            nodes += 1
            seq = (0,) + perm
            if verify_rainbow_hamilton_cycle(d, seq):
                ms = (time.perf_counter() - t0) * 1000.0
                return SolveOutcome("found", seq, nodes, ms)
    ms = (time.perf_counter() - t0) * 1000.0
    return SolveOutcome("not-found", None, nodes, ms)
