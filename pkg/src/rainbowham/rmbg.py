"""Robustly matchable bipartite templates.

A template is a d-regular bipartite graph on sides A and B of size 7m with
flexible prefixes of size 2m on each side.  Robust matchability means: after
deleting any equal-sized sets X from the A-prefix and Y from the B-prefix
(at most m each), a perfect matching of the remainder survives.

The template is the combinatorial backbone of the absorbing structure: left
labels become absorbable vertices, right labels absorbable colours, and each
template edge is realized by one absorber, so a robust matching choice
translates directly into which (vertex, colour) pairs get absorbed.

Construction is a union of d random perfect matchings (wholesale resample on
edge collision); the property is certified empirically by the exhaustive or
sampled checker rather than assumed from regularity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .matchings import max_bipartite_matching
from .rng import RngStream

#: certify(exhaustive) refuses to enumerate more (X, Y) pairs than this.
EXHAUSTIVE_XY_BUDGET = 1_000_000

#: build_rmbg gives up after this many resamples of a single matching.
_RESAMPLE_CAP = 200_000


@dataclass(frozen=True)
class RmbgTemplate:
    """d-regular bipartite graph, sides 0..7m-1 each, flexible prefixes
    0..2m-1; adj[a] lists the B-neighbours of left vertex a, ascending."""

    m: int
    d: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.d < 1:
            raise ValueError("m and d must be >= 1")
        side = self.side
        if self.d > side:
            raise ValueError("d cannot exceed the side size 7m")
        if len(self.adj) != side:
            raise ValueError("adj must have one row per left vertex")
        right_deg = [0] * side
        for a, row in enumerate(self.adj):
            if len(row) != self.d or len(set(row)) != self.d:
                raise ValueError(f"left vertex {a} does not have degree {self.d}")
            if list(row) != sorted(row):
                raise ValueError(f"adjacency row {a} must be ascending")
            for b in row:
                if not (0 <= b < side):
                    raise ValueError(f"right vertex {b} out of range")
                right_deg[b] += 1
        if any(deg != self.d for deg in right_deg):
            raise ValueError("right side is not d-regular")

    @property
    def side(self) -> int:
        return 7 * self.m

    @property
    def flex(self) -> int:
        return 2 * self.m

    def a_flex(self) -> range:
        return range(self.flex)

    def b_flex(self) -> range:
        return range(self.flex)

    def edges(self) -> list[tuple[int, int]]:
        """All (a, b) template edges, row-major ascending."""
        return [(a, b) for a, row in enumerate(self.adj) for b in row]

    def to_json(self) -> dict:
        return {"m": self.m, "d": self.d, "adj": [list(r) for r in self.adj]}

    @classmethod
    def from_json(cls, obj: dict) -> "RmbgTemplate":
        return cls(int(obj["m"]), int(obj["d"]), tuple(tuple(r) for r in obj["adj"]))


def build_rmbg(m: int, d: int, rng: RngStream) -> RmbgTemplate:
    """Union of d uniformly random perfect matchings between the sides; a
    matching colliding with an already-placed edge is resampled wholesale.
    """
    if m < 1 or d < 1:
        raise ValueError("m and d must be >= 1")
    side = 7 * m
    if d > side:
        raise ValueError("d cannot exceed 7m")
    g = rng.generator()
    rows: list[set[int]] = [set() for _ in range(side)]
    for _ in range(d):
        for _attempt in range(_RESAMPLE_CAP):
            perm = g.permutation(side).tolist()
            if all(perm[a] not in rows[a] for a in range(side)):
                for a in range(side):
                    rows[a].add(perm[a])
                break
        else:
            raise RuntimeError(
                f"could not place a collision-free matching after {_RESAMPLE_CAP} tries"
            )
    return RmbgTemplate(m, d, tuple(tuple(sorted(r)) for r in rows))


def robust_match(
    t: RmbgTemplate, x_removed, y_removed
) -> dict[int, int] | None:
    """Perfect matching of A minus x_removed onto B minus y_removed, or None.

    x_removed and y_removed must be equal-sized subsets of the flexible
    prefixes, of size at most m.
    """
    xs = set(int(v) for v in x_removed)
    ys = set(int(v) for v in y_removed)
    if len(xs) != len(ys):
        raise ValueError("removed sets must have equal size")
    if len(xs) > t.m:
        raise ValueError(f"removed sets must have size <= m = {t.m}")
    if not xs <= set(t.a_flex()) or not ys <= set(t.b_flex()):
        raise ValueError("removed sets must lie in the flexible prefixes")
    left = [a for a in range(t.side) if a not in xs]
    right = [b for b in range(t.side) if b not in ys]
    adj = {a: [b for b in t.adj[a] if b not in ys] for a in left}
    pairing = max_bipartite_matching(left, right, adj)
    if len(pairing) != len(left):
        return None
    return pairing


@dataclass(frozen=True)
class RobustnessReport:
    """Certification outcome; a failing report carries a re-checkable
    counterexample (X, Y)."""

    mode: str
    passed: bool
    counterexample: tuple[tuple[int, ...], tuple[int, ...]] | None
    pairs_checked: int

    def __post_init__(self):
        if not self.passed and self.counterexample is None:
            raise ValueError("failing report needs a counterexample")

    def __bool__(self) -> bool:
        return self.passed


def exhaustive_pair_count(m: int) -> int:
    return sum(comb(2 * m, s) ** 2 for s in range(m + 1))


def certify_robust_matchability(
    t: RmbgTemplate,
    mode: str = "exhaustive",
    trials: int = 1000,
    rng: RngStream | None = None,
) -> RobustnessReport:
    """Exhaustive mode checks every admissible (X, Y); sampled mode checks
    random ones.  Either way, the first failing pair is returned as the
    counterexample."""
    if mode == "exhaustive":
        total = exhaustive_pair_count(t.m)
        if total > EXHAUSTIVE_XY_BUDGET:
            raise ValueError(
                f"{total} (X, Y) pairs exceeds exhaustive budget {EXHAUSTIVE_XY_BUDGET}"
            )
        checked = 0
        flex = list(t.a_flex())
        for s in range(t.m + 1):
            for xs in itertools.combinations(flex, s):
                for ys in itertools.combinations(flex, s):
                    checked += 1
                    if robust_match(t, xs, ys) is None:
                        return RobustnessReport("exhaustive", False, (xs, ys), checked)
        return RobustnessReport("exhaustive", True, None, checked)
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an RngStream")
        g = rng.generator()
        flexn = t.flex
        for i in range(trials):
            s = int(g.integers(0, t.m + 1))
            xs = tuple(sorted(g.choice(flexn, size=s, replace=False).tolist()))
            ys = tuple(sorted(g.choice(flexn, size=s, replace=False).tolist()))
            if robust_match(t, xs, ys) is None:
                return RobustnessReport("sampled", False, (xs, ys), i + 1)
        return RobustnessReport("sampled", True, None, trials)
    raise ValueError(f"unknown mode: {mode!r}")
