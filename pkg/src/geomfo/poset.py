"""Labelled strict partial orders and the interval-to-poset construction.

The strict relation is stored transitively closed (as row bitmasks), since
formula evaluation queries arbitrary pairs and instances are desk-scale.
Width is the maximum antichain size, computed as a minimum chain cover via
bipartite matching; an exhaustive search is kept alongside as a test
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import GeometryError, Interval


class PosetError(Exception):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "irreflexivity" | "antisymmetry" | "transitivity"
    pair: tuple[int, ...]

    def __str__(self):
        return f"{self.kind} violated at {self.pair}"


class LabeledPoset:
    """Elements 0..n-1 with a strict order and named element-label sets."""

    def __init__(self, n: int, lt: Iterable[tuple[int, int]] = (),
                 labels: Optional[dict[str, Iterable[int]]] = None,
                 names: Optional[Sequence[str]] = None):
        self.n = n
        self.rows = [0] * n  # rows[a] bit b set iff a < b
        for a, b in lt:
            if not (0 <= a < n and 0 <= b < n):
                raise PosetError(f"pair ({a},{b}) outside 0..{n - 1}")
            self.rows[a] |= 1 << b
        labs = {}
        for name, vs in (labels or {}).items():
            vs = frozenset(vs)
            if any(not 0 <= v < n for v in vs):
                raise PosetError(f"label {name!r} mentions element outside 0..{n - 1}")
            labs[name] = vs
        self.labels: dict[str, frozenset[int]] = labs
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        if len(self.names) != n:
            raise PosetError("names must match element count")

    def lt(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.lt(a, b)

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(self.n) if self.lt(a, b)]

    def __repr__(self):
        return f"LabeledPoset(n={self.n}, pairs={sum(r.bit_count() for r in self.rows)})"


def transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    rows = [0] * n
    for a, b in pairs:
        rows[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for a in range(n):
            acc = rows[a]
            todo = acc
            while todo:
                b = (todo & -todo).bit_length() - 1
                todo &= todo - 1
                acc |= rows[b]
            if acc != rows[a]:
                rows[a] = acc
                changed = True
    return {(a, b) for a in range(n) for b in range(n) if rows[a] >> b & 1}


def validate_poset(p: LabeledPoset) -> Optional[Violation]:
    """First irreflexivity/antisymmetry/transitivity violation, or None."""
    for a in range(p.n):
        if p.lt(a, a):
            return Violation("irreflexivity", (a,))
    for a in range(p.n):
        row = p.rows[a]
        todo = row
        while todo:
            b = (todo & -todo).bit_length() - 1
            todo &= todo - 1
            if p.lt(b, a):
                return Violation("antisymmetry", (a, b))
            if p.rows[b] & ~row:
                missing = p.rows[b] & ~row
                c = (missing & -missing).bit_length() - 1
                return Violation("transitivity", (a, b, c))
    return None


def poset_width(p: LabeledPoset) -> int:
    """Maximum antichain size, via Dilworth (min chain cover = n - matching)."""
    bad = validate_poset(p)
    if bad is not None:
        raise PosetError(str(bad))
    n = p.n
    match_right = [-1] * n

    def augment(a: int, seen: list[bool]) -> bool:
        row = p.rows[a]
        todo = row
        while todo:
            b = (todo & -todo).bit_length() - 1
            todo &= todo - 1
            if seen[b]:
                continue
            seen[b] = True
            if match_right[b] < 0 or augment(match_right[b], seen):
                match_right[b] = a
                return True
        return False

    matching = 0
    for a in range(n):
        if augment(a, [False] * n):
            matching += 1
    return n - matching


def brute_force_width(p: LabeledPoset) -> int:
    """Exhaustive maximum-antichain search (test oracle, n small)."""
    comparable = [p.rows[a] for a in range(p.n)]
    below = [0] * p.n
    for a in range(p.n):
        todo = p.rows[a]
        while todo:
            b = (todo & -todo).bit_length() - 1
            todo &= todo - 1
            below[b] |= 1 << a

    best = 0

    def rec(i: int, chosen: int, size: int):
        nonlocal best
        if size + (p.n - i) <= best:
            return
        if i == p.n:
            best = max(best, size)
            return
        if not (comparable[i] & chosen or below[i] & chosen):
            rec(i + 1, chosen | 1 << i, size + 1)
        rec(i + 1, chosen, size)

    rec(0, 0, 0)
    return best


def build_interval_poset(intervals: Sequence[Interval], parts: Sequence[int]
                         ) -> tuple[LabeledPoset, list[int], dict[Fraction, int]]:
    """Poset on endpoints plus intervals for a k-fold proper family.

    ``parts`` assigns each interval to a proper part (any hashable part ids;
    each part must be nest-free).  Endpoints carry label ``D`` and are
    ordered numerically; each part is ordered left to right; an interval
    sits above its left end and below its right end.  Returns the poset,
    the element id of each interval, and the element id of each endpoint.
    """
    if len(parts) != len(intervals):
        raise PosetError("one part id per interval required")
    ends: list[Fraction] = []
    for it in intervals:
        ends.extend((it.lo, it.hi))
    if len(set(ends)) != len(ends):
        raise GeometryError("duplicate endpoints")
    by_part: dict = {}
    for i, pid in enumerate(parts):
        by_part.setdefault(pid, []).append(i)
    for pid, members in by_part.items():
        for i in members:
            for j in members:
                if i != j and intervals[i].strictly_contains(intervals[j]):
                    raise PosetError(f"part {pid!r} is not proper: "
                                     f"interval {i} contains interval {j}")

    endpoint_values = sorted(ends)
    d_id = {v: i for i, v in enumerate(endpoint_values)}
    nd = len(endpoint_values)
    interval_ids = [nd + i for i in range(len(intervals))]
    n = nd + len(intervals)

    pairs: set[tuple[int, int]] = set()
    for i in range(nd):
        for j in range(i + 1, nd):
            pairs.add((i, j))
    for pid, members in by_part.items():
        ordered = sorted(members, key=lambda i: intervals[i].lo)
        for a, b in zip(ordered, ordered[1:]):
            pairs.add((interval_ids[a], interval_ids[b]))
    for i, it in enumerate(intervals):
        for v, eid in d_id.items():
            if v <= it.lo:
                pairs.add((eid, interval_ids[i]))
            if v >= it.hi:
                pairs.add((interval_ids[i], eid))

    closed = transitive_closure(n, pairs)
    names = [str(v) for v in endpoint_values] + [f"I{i}" for i in range(len(intervals))]
    poset = LabeledPoset(n, closed, {"D": range(nd)}, names)
    bad = validate_poset(poset)
    if bad is not None:
        raise PosetError(f"interval poset invalid: {bad}")
    return poset, interval_ids, d_id
