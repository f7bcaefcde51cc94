"""Shared test utilities: random instances, oracles, graph enumeration.

The oracles here deliberately use different algorithms from the package
(winding-number point location, Cramer-rule crossings, exhaustive searches)
so agreement is evidence rather than tautology.
"""

import itertools
from fractions import Fraction as Fr

import numpy as np

from geomfo import formula as F
from geomfo.geometry import (Arc, Box, Chord, Disk, GeometryError, Interval,
                             LabeledGraph, PermSegment, Polygon, Representation)


# ---------------------------------------------------------------------------
# random representations

def rand_rat(rng, lo=0, hi=8, den=4):
    return Fr(rng.randint(lo * den, hi * den), den)


def rand_intervals(rng, n):
    out = []
    for _ in range(n):
        a, b = rand_rat(rng), rand_rat(rng)
        while b == a:
            b = rand_rat(rng)
        out.append(Interval(min(a, b), max(a, b)))
    return Representation("interval", tuple(out))


def rand_arcs(rng, n):
    out = []
    for _ in range(n):
        a, b = Fr(rng.randint(0, 31), 32), Fr(rng.randint(0, 31), 32)
        while b == a:
            b = Fr(rng.randint(0, 31), 32)
        out.append(Arc(a, b))
    return Representation("circular_arc", tuple(out))


def rand_chords(rng, n):
    out = []
    for _ in range(n):
        a, b = Fr(rng.randint(0, 31), 32), Fr(rng.randint(0, 31), 32)
        while b == a:
            b = Fr(rng.randint(0, 31), 32)
        out.append(Chord(a, b))
    return Representation("circle", tuple(out))


def rand_segments(rng, n):
    tops = rng.sample(range(4 * n + 8), n)
    bots = rng.sample(range(4 * n + 8), n)
    return Representation("permutation",
                          tuple(PermSegment(Fr(t), Fr(b)) for t, b in zip(tops, bots)))


def rand_boxes(rng, n, k=3):
    ys = []
    for _ in range(k):
        a = rand_rat(rng)
        ys.append((a, a + Fr(rng.randint(1, 8), 4)))
    out = []
    for _ in range(n):
        a = rand_rat(rng)
        w = Fr(rng.randint(1, 8), 4)
        y = ys[rng.randrange(k)]
        out.append(Box(Interval(a, a + w), Interval(*y)))
    return Representation("box", tuple(out))


def rand_disks(rng, n, k=3):
    rows = [Fr(r, 4) for r in sorted(rng.sample(range(0, 9), k))]
    return Representation("unit_disk",
                          tuple(Disk(Fr(rng.randint(0, 24), 8), rows[rng.randrange(k)])
                                for _ in range(n)))


def rand_fan(rng, n):
    """Weak-visibility polygon: star-shaped from u, so weakly visible from uv."""
    while True:
        try:
            m = n - 2
            pts = []
            for i in range(m):
                r = rng.randint(2, 6)
                pts.append((Fr(r * (i + 1)), Fr(r * (m - i))))
            u = (Fr(0), Fr(0))
            v = (Fr(8 * m), Fr(0))
            return Polygon(tuple([u] + pts + [v]))
        except GeometryError:
            continue


def rand_sentence(rng, depth=3, labels=()):
    names = ["x", "y", "z", "w"]

    def rec(d, avail):
        r = rng.random()
        if d <= 0 or (r < 0.25 and avail):
            a, b = rng.choice(avail), rng.choice(avail)
            roll = rng.random()
            if labels and roll < 0.2:
                return F.Label(rng.choice(labels), F.Var(a))
            if roll < 0.65:
                return F.Edge(F.Var(a), F.Var(b))
            return F.Eq(F.Var(a), F.Var(b))
        if r < 0.45:
            return F.Not(rec(d - 1, avail))
        if r < 0.6 and len(avail) < len(names):
            v = names[len(avail)]
            body = rec(d - 1, avail + [v])
            return F.Exists(F.Var(v), body) if rng.random() < 0.5 else F.Forall(F.Var(v), body)
        op = rng.choice([F.And, F.Or, F.Implies])
        return op(rec(d - 1, avail), rec(d - 1, avail))

    v = names[0]
    body = rec(depth - 1, [v])
    return F.Exists(F.Var(v), body) if rng.random() < 0.7 else F.Forall(F.Var(v), body)


# ---------------------------------------------------------------------------
# brute-force oracles

def max_clique(g: LabeledGraph) -> int:
    for r in range(g.n, 0, -1):
        for sub in itertools.combinations(range(g.n), r):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(sub, 2)):
                return r
    return 0


def max_independent_set(g: LabeledGraph) -> int:
    return max_clique(g.complement()) if g.n else 0


def has_dominating_set(g: LabeledGraph, k: int) -> bool:
    for sub in itertools.combinations(range(g.n), min(k, g.n)):
        dominated = set(sub)
        for v in sub:
            dominated |= g.neighbors(v)
        if len(dominated) == g.n:
            return True
    return g.n == 0


def has_subgraph(g: LabeledGraph, h: LabeledGraph) -> bool:
    """Not-necessarily-induced subgraph containment, brute force."""
    if h.n > g.n:
        return False
    for sub in itertools.permutations(range(g.n), h.n):
        if all(g.has_edge(sub[a], sub[b]) for a, b in h.edges):
            return True
    return False


def longest_nesting_chain(intervals) -> int:
    best = 0
    order = sorted(range(len(intervals)), key=lambda i: intervals[i].hi - intervals[i].lo)
    memo = [1] * len(intervals)
    for pos, i in enumerate(order):
        for j in order[:pos]:
            if intervals[i].strictly_contains(intervals[j]):
                memo[i] = max(memo[i], memo[j] + 1)
        best = max(best, memo[i])
    return best


# independent exact visibility: Cramer-rule crossings + winding-number location

def _cross_params(p, q, a, b):
    dx1, dy1 = q[0] - p[0], q[1] - p[1]
    dx2, dy2 = b[0] - a[0], b[1] - a[1]
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        ts = []
        for pt in (a, b):
            if (pt[0] - p[0]) * dy1 == (pt[1] - p[1]) * dx1:
                t = ((pt[0] - p[0]) * dx1 + (pt[1] - p[1]) * dy1) / (dx1 * dx1 + dy1 * dy1)
                if 0 <= t <= 1:
                    ts.append(t)
        for pt, t in ((p, Fr(0)), (q, Fr(1))):
            if (pt[0] - a[0]) * dy2 == (pt[1] - a[1]) * dx2:
                s = ((pt[0] - a[0]) * dx2 + (pt[1] - a[1]) * dy2) / (dx2 * dx2 + dy2 * dy2)
                if 0 <= s <= 1:
                    ts.append(t)
        return sorted(set(ts))
    t = ((a[0] - p[0]) * dy2 - (a[1] - p[1]) * dx2) / den
    s = ((a[0] - p[0]) * dy1 - (a[1] - p[1]) * dx1) / den
    if 0 <= t <= 1 and 0 <= s <= 1:
        return [t]
    return []


def _winding_inside(pt, poly: Polygon) -> bool:
    from geomfo.geometry import _on_segment

    n = poly.n
    for i in range(n):
        a, b = poly.edge_points(i)
        if _on_segment(pt, a, b):
            return True
    wind = 0
    for i in range(n):
        a, b = poly.edge_points(i)
        if a[1] <= pt[1]:
            if b[1] > pt[1]:
                if (b[0] - a[0]) * (pt[1] - a[1]) - (b[1] - a[1]) * (pt[0] - a[0]) > 0:
                    wind += 1
        else:
            if b[1] <= pt[1]:
                if (b[0] - a[0]) * (pt[1] - a[1]) - (b[1] - a[1]) * (pt[0] - a[0]) < 0:
                    wind -= 1
    return wind != 0


def oracle_sees(poly: Polygon, i: int, j: int) -> bool:
    p, q = poly.vertices[i], poly.vertices[j]
    params = {Fr(0), Fr(1)}
    for e in range(poly.n):
        a, b = poly.edge_points(e)
        for t in _cross_params(p, q, a, b):
            params.add(t)
    ordered = sorted(params)
    for t1, t2 in zip(ordered, ordered[1:]):
        tm = (t1 + t2) / 2
        mid = (p[0] + tm * (q[0] - p[0]), p[1] + tm * (q[1] - p[1]))
        if not _winding_inside(mid, poly):
            return False
    return True


# ---------------------------------------------------------------------------
# non-isomorphic graph enumeration (canonical form = min over permutations)

def nonisomorphic_graphs(n: int) -> list[LabeledGraph]:
    pairs = list(itertools.combinations(range(n), 2))
    nbits = len(pairs)
    pos = {p: i for i, p in enumerate(pairs)}
    masks = np.arange(1 << nbits, dtype=np.int64)
    canon = masks.copy()
    for perm in itertools.permutations(range(n)):
        remapped = np.zeros_like(masks)
        for i, (a, b) in enumerate(pairs):
            tgt = pos[(min(perm[a], perm[b]), max(perm[a], perm[b]))]
            remapped |= ((masks >> i) & 1) << tgt
        np.minimum(canon, remapped, out=canon)
    reps = sorted(set(int(c) for c in canon))
    out = []
    for mask in reps:
        edges = {pairs[i] for i in range(nbits) if mask >> i & 1}
        out.append(LabeledGraph(n, edges))
    return out


def graphs_up_to(n: int) -> list[LabeledGraph]:
    out = []
    for m in range(1, n + 1):
        out.extend(nonisomorphic_graphs(m))
    return out
