"""Exact-rational geometric representations and their graphs.

Everything is computed over ``fractions.Fraction``; there is no floating
point anywhere, so predicates are exact and scale-invariant.  Angular
positions live in [0,1) turns measured clockwise from angle 0 (a half turn
is exactly 1/2).

Intersection semantics: closed-set intersection for intervals, arcs, boxes
and disks (tangency is an edge); strict crossing for chords and permutation
segments (shared endpoints are not an edge).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rat = Fraction
Point = tuple[Fraction, Fraction]

INTERSECTION_CLASSES = ("interval", "circular_arc", "circle", "permutation", "box", "unit_disk")
ALL_CLASSES = INTERSECTION_CLASSES + ("visibility",)


class GeometryError(Exception):
    pass


def rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"bad rational {text!r}: {exc}") from None


def format_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# object types

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise GeometryError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


@dataclass(frozen=True)
class Arc:
    """Circle arc from ``start`` clockwise to ``end``; wraps 0 iff start > end."""

    start: Fraction
    end: Fraction

    def __post_init__(self):
        for p in (self.start, self.end):
            if not 0 <= p < 1:
                raise GeometryError(f"arc endpoint {p} outside [0,1)")
        if self.start == self.end:
            raise GeometryError("degenerate arc")

    def wraps(self) -> bool:
        return self.start > self.end

    def length(self) -> Fraction:
        return (self.end - self.start) % 1

    def contains_point(self, p: Fraction) -> bool:
        p = p % 1
        if self.start < self.end:
            return self.start <= p <= self.end
        return p >= self.start or p <= self.end


@dataclass(frozen=True)
class Chord:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        for p in (self.a, self.b):
            if not 0 <= p < 1:
                raise GeometryError(f"chord endpoint {p} outside [0,1)")
        if self.a == self.b:
            raise GeometryError("degenerate chord")


@dataclass(frozen=True)
class PermSegment:
    top: Fraction
    bottom: Fraction


@dataclass(frozen=True)
class Box:
    x: Interval
    y: Interval


@dataclass(frozen=True)
class Disk:
    """Disk of diameter 1 centered at (cx, cy)."""

    cx: Fraction
    cy: Fraction


@dataclass(frozen=True)
class Representation:
    cls: str
    objects: tuple

    def __post_init__(self):
        if self.cls not in ALL_CLASSES:
            raise GeometryError(f"unknown representation class {self.cls!r}")


# ---------------------------------------------------------------------------
# labelled graphs

class LabeledGraph:
    """Finite simple graph with named vertex-label sets."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 labels: Optional[dict[str, Iterable[int]]] = None):
        self.n = n
        es = set()
        for u, v in edges:
            if u == v:
                raise GeometryError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GeometryError(f"edge ({u},{v}) outside 0..{n - 1}")
            es.add((min(u, v), max(u, v)))
        self.edges: frozenset[tuple[int, int]] = frozenset(es)
        labs = {}
        for name, vs in (labels or {}).items():
            vs = frozenset(vs)
            if any(not 0 <= v < n for v in vs):
                raise GeometryError(f"label {name!r} mentions a vertex outside 0..{n - 1}")
            labs[name] = vs
        self.labels: dict[str, frozenset[int]] = labs
        self._adj_rows: Optional[list[bytearray]] = None
        self._nbrs: Optional[list[set[int]]] = None

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (min(u, v), max(u, v)) in self.edges

    def adjacency_rows(self) -> list[bytearray]:
        if self._adj_rows is None:
            rows = [bytearray(self.n) for _ in range(self.n)]
            for u, v in self.edges:
                rows[u][v] = 1
                rows[v][u] = 1
            self._adj_rows = rows
        return self._adj_rows

    def neighbors(self, v: int) -> set[int]:
        if self._nbrs is None:
            nbrs: list[set[int]] = [set() for _ in range(self.n)]
            for a, b in self.edges:
                nbrs[a].add(b)
                nbrs[b].add(a)
            self._nbrs = nbrs
        return self._nbrs[v]

    def complement(self) -> "LabeledGraph":
        es = {(i, j) for i in range(self.n) for j in range(i + 1, self.n)
              if (i, j) not in self.edges}
        return LabeledGraph(self.n, es, self.labels)

    def induced(self, vertices: Sequence[int]) -> "LabeledGraph":
        """Induced subgraph; vertex i of the result is vertices[i]."""
        idx = {v: i for i, v in enumerate(vertices)}
        if len(idx) != len(vertices):
            raise GeometryError("duplicate vertices in induced-subgraph request")
        es = {(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx}
        labs = {name: frozenset(idx[v] for v in vs if v in idx)
                for name, vs in self.labels.items()}
        return LabeledGraph(len(vertices), es, labs)

    def with_labels(self, labels: dict[str, Iterable[int]]) -> "LabeledGraph":
        merged = dict(self.labels)
        for name, vs in labels.items():
            merged[name] = frozenset(vs)
        return LabeledGraph(self.n, self.edges, merged)

    def __eq__(self, other):
        return (isinstance(other, LabeledGraph) and self.n == other.n
                and self.edges == other.edges and self.labels == other.labels)

    def __hash__(self):
        return hash((self.n, self.edges, tuple(sorted(self.labels.items()))))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, m={len(self.edges)})"


def diameter(g: LabeledGraph) -> int:
    """Largest finite BFS eccentricity; raises if the graph is disconnected."""
    best = 0
    for src in range(g.n):
        dist = [-1] * g.n
        dist[src] = 0
        queue = [src]
        for v in queue:
            for w in g.neighbors(v):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        if min(dist) < 0:
            raise GeometryError("graph is disconnected")
        best = max(best, max(dist))
    return best


def true_twins(g: LabeledGraph, u: int, v: int) -> bool:
    """Closed neighbourhoods coincide (u,v adjacent and same neighbours)."""
    if u == v or not g.has_edge(u, v):
        return False
    nu = g.neighbors(u) | {u}
    nv = g.neighbors(v) | {v}
    return nu == nv


def induced_embeds(h: LabeledGraph, g: LabeledGraph) -> bool:
    """Is there a label-respecting induced embedding of h into g?"""
    if h.n > g.n:
        return False
    names = sorted(h.labels)
    hl = [h.labels[n] for n in names]
    gl = [g.labels.get(n, frozenset()) for n in names]

    def ok(mapping: list[int], v: int, img: int) -> bool:
        for name_idx in range(len(names)):
            if (v in hl[name_idx]) != (img in gl[name_idx]):
                return False
        for u in range(v):
            if h.has_edge(u, v) != g.has_edge(mapping[u], img):
                return False
        return True

    used = [False] * g.n

    def rec(v: int, mapping: list[int]) -> bool:
        if v == h.n:
            return True
        for img in range(g.n):
            if not used[img] and ok(mapping, v, img):
                used[img] = True
                mapping.append(img)
                if rec(v + 1, mapping):
                    return True
                mapping.pop()
                used[img] = False
        return False

    return rec(0, [])


def are_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    if sorted(g1.labels) != sorted(g2.labels):
        return False
    deg1 = sorted(len(g1.neighbors(v)) for v in range(g1.n))
    deg2 = sorted(len(g2.neighbors(v)) for v in range(g2.n))
    if deg1 != deg2:
        return False
    return induced_embeds(g1, g2)


# ---------------------------------------------------------------------------
# intersection graphs

def _chords_cross(c1: Chord, c2: Chord) -> bool:
    pts = {c1.a, c1.b, c2.a, c2.b}
    if len(pts) < 4:
        return False
    lo, hi = min(c1.a, c1.b), max(c1.a, c1.b)
    inside_a = lo < c2.a < hi
    inside_b = lo < c2.b < hi
    return inside_a != inside_b


def _segments_cross(s1: PermSegment, s2: PermSegment) -> bool:
    return (s1.top - s2.top) * (s1.bottom - s2.bottom) < 0


def _arcs_intersect(a1: Arc, a2: Arc) -> bool:
    return (a1.contains_point(a2.start) or a1.contains_point(a2.end)
            or a2.contains_point(a1.start))


def _disks_intersect(d1: Disk, d2: Disk) -> bool:
    return (d1.cx - d2.cx) ** 2 + (d1.cy - d2.cy) ** 2 <= 1


def _boxes_intersect(b1: Box, b2: Box) -> bool:
    return b1.x.overlaps(b2.x) and b1.y.overlaps(b2.y)


_PAIR_PREDICATES = {
    "interval": Interval.overlaps,
    "circular_arc": _arcs_intersect,
    "circle": _chords_cross,
    "permutation": _segments_cross,
    "box": _boxes_intersect,
    "unit_disk": _disks_intersect,
}

_OBJECT_TYPES = {
    "interval": Interval,
    "circular_arc": Arc,
    "circle": Chord,
    "permutation": PermSegment,
    "box": Box,
    "unit_disk": Disk,
}


def build_intersection_graph(cls: str, rep: Representation) -> LabeledGraph:
    """Intersection graph of a representation; vertex order = input order."""
    if cls not in INTERSECTION_CLASSES:
        raise GeometryError(f"not an intersection class: {cls!r}")
    if rep.cls != cls:
        raise GeometryError(f"representation is of class {rep.cls!r}, not {cls!r}")
    want = _OBJECT_TYPES[cls]
    for obj in rep.objects:
        if not isinstance(obj, want):
            raise GeometryError(f"object {obj!r} is not a {want.__name__}")
    pred = _PAIR_PREDICATES[cls]
    objs = rep.objects
    n = len(objs)
    edges = {(i, j) for i in range(n) for j in range(i + 1, n) if pred(objs[i], objs[j])}
    return LabeledGraph(n, edges)


def separate_permutation_coordinates(segments: Sequence[PermSegment]) -> list[PermSegment]:
    """Make per-line coordinates distinct without changing any crossing.

    Tied coordinates mean a non-crossing pair; the ties are broken in the
    order of the segments' other endpoints, which keeps them non-crossing.
    """
    segs = list(segments)
    n = len(segs)
    if n == 0:
        return segs
    before = {(i, j) for i in range(n) for j in range(i + 1, n)
              if _segments_cross(segs[i], segs[j])}

    def spread(values, others):
        gaps = sorted(set(values))
        mu = (min(b - a for a, b in zip(gaps, gaps[1:])) / (4 * n * n)
              if len(gaps) > 1 else Fraction(1, 4 * n * n))
        groups: dict = {}
        for idx, v in enumerate(values):
            groups.setdefault(v, []).append(idx)
        out = list(values)
        for v, members in groups.items():
            members.sort(key=lambda idx: (others[idx], idx))
            for t, idx in enumerate(members):
                out[idx] = v + t * mu
        return out

    tops = spread([s.top for s in segs], [s.bottom for s in segs])
    bots = spread([s.bottom for s in segs], tops)
    segs = [PermSegment(t, b) for t, b in zip(tops, bots)]
    after = {(i, j) for i in range(n) for j in range(i + 1, n)
             if _segments_cross(segs[i], segs[j])}
    if after != before:
        raise GeometryError("coordinate separation changed the crossing graph")
    return segs


def permutation_to_chords(segments: Sequence[PermSegment]) -> list[Chord]:
    """Map segments between two parallel lines to chords of a circle.

    Top coordinates map order-preservingly into (0, 1/2), bottom coordinates
    order-reversingly into (1/2, 1); crossings are preserved exactly.
    """
    tops = sorted({s.top for s in segments})
    bots = sorted({s.bottom for s in segments})
    if len(tops) != len(segments) or len(bots) != len(segments):
        raise GeometryError("permutation segments must have distinct coordinates per line")
    tpos = {t: Fraction(i + 1, 2 * (len(tops) + 1)) for i, t in enumerate(tops)}
    bpos = {b: Fraction(1, 2) + Fraction(len(bots) - i, 2 * (len(bots) + 1))
            for i, b in enumerate(bots)}
    return [Chord(tpos[s.top], bpos[s.bottom]) for s in segments]


# ---------------------------------------------------------------------------
# proper partitions and perturbation

def proper_partition(items: Sequence[Interval]) -> tuple[int, list[int]]:
    """Mirsky decomposition of the containment order.

    Returns (k, assignment) where the part of item i counts the longest
    chain of intervals nested around item i (itself included); k is
    minimal, i.e. the family is k-fold proper but not (k-1)-fold proper.
    """
    ends: list[Fraction] = []
    for it in items:
        ends.extend((it.lo, it.hi))
    if len(set(ends)) != len(ends):
        raise GeometryError("duplicate endpoints")
    order = sorted(range(len(items)), key=lambda i: items[i].hi - items[i].lo,
                   reverse=True)
    h = [1] * len(items)
    for pos, i in enumerate(order):
        for j in order[:pos]:
            if items[j].strictly_contains(items[i]):
                h[i] = max(h[i], h[j] + 1)
    return (max(h, default=0), h)


def _min_positive_gap(values: Sequence[Fraction], circular: bool) -> Fraction:
    vals = sorted(set(values))
    if len(vals) < 2:
        raise GeometryError("all endpoints identical")
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    if circular:
        gaps.append((vals[0] - vals[-1]) % 1)
    return min(g for g in gaps if g > 0)


def perturb_endpoints(rep: Representation) -> Representation:
    """Make all endpoints pairwise distinct without changing the graph.

    Intervals and arcs are dilated (object j grows by j*eps at each end), so
    closed-set tangencies stay edges; chords are nudged rotationally with a
    fan-out rule at shared endpoints, so strict crossings are unchanged.
    Arc and chord endpoints also end up away from angle 0.
    """
    if rep.cls not in ("interval", "circular_arc", "circle"):
        raise GeometryError(f"perturbation undefined for class {rep.cls!r}")
    objs = list(rep.objects)
    n = len(objs)
    if n == 0:
        return rep
    before = build_intersection_graph(rep.cls, rep)

    if rep.cls == "interval":
        ends = [e for it in objs for e in (it.lo, it.hi)]
        if len(set(ends)) == len(ends):
            return rep
        eps = _min_positive_gap(ends, circular=False) / (4 * len(ends))
        new = [Interval(it.lo - (j + 1) * eps, it.hi + (j + 1) * eps)
               for j, it in enumerate(objs)]
        out = Representation("interval", tuple(new))
    elif rep.cls == "circular_arc":
        ends = [e for a in objs for e in (a.start, a.end)]
        if len(set(ends)) == len(ends) and 0 not in ends:
            return rep
        eps = _min_positive_gap(ends + [Fraction(0)], circular=True) / (4 * len(ends))
        new = [Arc((a.start - (j + 1) * eps) % 1, (a.end + (j + 1) * eps) % 1)
               for j, a in enumerate(objs)]
        out = Representation("circular_arc", tuple(new))
    else:
        ends = [e for c in objs for e in (c.a, c.b)]
        if len(set(ends)) == len(ends) and 0 not in ends:
            return rep
        eps = _min_positive_gap(ends + [Fraction(0)], circular=True) / (4 * len(ends))
        moved: list[dict] = [{} for _ in range(n)]
        by_value: dict[Fraction, list[tuple[int, Fraction]]] = {}
        for idx, c in enumerate(objs):
            by_value.setdefault(c.a, []).append((idx, c.b))
            by_value.setdefault(c.b, []).append((idx, c.a))
        for value, group in by_value.items():
            # Fan shared endpoints out so that chords from one point do not
            # start crossing each other: farther other-ends get smaller
            # offsets.  Ties (duplicate chords) anti-align at the two ends.
            def sort_key(item):
                idx, far = item
                tie = idx if value < far else -idx
                return (-((far - value) % 1), tie)
            for t, (idx, far) in enumerate(sorted(group, key=sort_key), start=1):
                moved[idx][value] = (value + t * eps) % 1
        new = [Chord(moved[i][c.a], moved[i][c.b]) for i, c in enumerate(objs)]
        out = Representation("circle", tuple(new))

    after = build_intersection_graph(out.cls, out)
    if after.edges != before.edges:
        raise GeometryError("perturbation changed the intersection graph")
    new_ends = [e for o in out.objects
                for e in ((o.lo, o.hi) if rep.cls == "interval" else
                          (o.start, o.end) if rep.cls == "circular_arc" else (o.a, o.b))]
    if len(set(new_ends)) != len(new_ends):
        raise GeometryError("perturbation left duplicate endpoints")
    if rep.cls != "interval" and any(e == 0 for e in new_ends):
        raise GeometryError("perturbation left an endpoint at angle 0")
    return out


# ---------------------------------------------------------------------------
# exact planar predicates

def orient(o: Point, a: Point, b: Point) -> int:
    """Sign of the cross product (a-o) x (b-o): +1 left turn, -1 right, 0 collinear."""
    v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return (v > 0) - (v < 0)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _param_on_segment(p: Point, a: Point, b: Point) -> Fraction:
    if a[0] != b[0]:
        return (p[0] - a[0]) / (b[0] - a[0])
    return (p[1] - a[1]) / (b[1] - a[1])


def _segment_meet_params(a: Point, b: Point, c: Point, d: Point) -> list[Fraction]:
    """Parameters t in [0,1] along closed segment ab where it meets closed cd."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: overlap is a (possibly empty or degenerate) subsegment
        ts = []
        for p in (c, d):
            if _on_segment(p, a, b):
                ts.append(_param_on_segment(p, a, b))
        for p, t in ((a, Fraction(0)), (b, Fraction(1))):
            if _on_segment(p, c, d):
                ts.append(t)
        return sorted(set(ts))
    if o1 != o2 and o3 != o4 and not (o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0):
        denom = ((b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0]))
        t = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / denom
        return [t]
    # touching cases: an endpoint of one lies on the other
    ts = []
    for p in (c, d):
        if _on_segment(p, a, b):
            ts.append(_param_on_segment(p, a, b))
    for p, t in ((a, Fraction(0)), (b, Fraction(1))):
        if _on_segment(p, c, d):
            ts.append(t)
    return sorted(set(ts))


def _properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Interiors cross transversally."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


# ---------------------------------------------------------------------------
# polygons

@dataclass(frozen=True)
class Polygon:
    """Simple polygon, vertices clockwise; first vertex is u, last is v.

    The closing edge v->u is the distinguished edge (the weak-visibility
    edge for the theorems that need one).
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        pts = self.vertices
        if len(pts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        if len(set(pts)) != len(pts):
            raise GeometryError("repeated polygon vertex")
        n = len(pts)
        for i in range(n):
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) == 0:
                raise GeometryError(f"three consecutive collinear vertices at index {i}")
        area2 = sum(pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1]
                    for i in range(n))
        if area2 >= 0:
            raise GeometryError("polygon vertices must be listed clockwise")
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            for j in range(i + 1, n):
                c, d = pts[j], pts[(j + 1) % n]
                adjacent = (j == i + 1) or (i == 0 and j == n - 1)
                if adjacent:
                    shared = {a, b} & {c, d}
                    meet = _segment_meet_params(a, b, c, d)
                    if len(meet) > 1 or _properly_cross(a, b, c, d):
                        raise GeometryError("adjacent edges overlap")
                    # the single meeting point must be the shared vertex
                    if meet:
                        t = meet[0]
                        pt = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
                        if pt not in shared:
                            raise GeometryError("adjacent edges touch off the shared vertex")
                else:
                    if _segment_meet_params(a, b, c, d):
                        raise GeometryError("non-adjacent edges intersect; polygon not simple")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge_points(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n]


def point_in_closed_polygon(p: Point, poly: Polygon) -> bool:
    pts = poly.vertices
    n = len(pts)
    for i in range(n):
        if _on_segment(p, pts[i], pts[(i + 1) % n]):
            return True
    inside = False
    px, py = p
    for i in range(n):
        (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            # x coordinate of the edge at height py, compared exactly
            xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xi:
                inside = not inside
    return inside


def segment_inside_polygon(a: Point, b: Point, poly: Polygon) -> bool:
    """Closed segment ab avoids the open exterior of the polygon.

    Splits ab at every boundary meeting point; each open piece is entirely
    inside or entirely outside, so its midpoint decides.
    """
    if a == b:
        return point_in_closed_polygon(a, poly)
    params = {Fraction(0), Fraction(1)}
    pts = poly.vertices
    n = len(pts)
    for i in range(n):
        c, d = pts[i], pts[(i + 1) % n]
        for t in _segment_meet_params(a, b, c, d):
            if 0 <= t <= 1:
                params.add(t)
    ordered = sorted(params)
    for t1, t2 in zip(ordered, ordered[1:]):
        tm = (t1 + t2) / 2
        mid = (a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1]))
        if not point_in_closed_polygon(mid, poly):
            return False
    return True


def sees(poly: Polygon, i: int, j: int) -> bool:
    """Vertices i and j are mutually visible."""
    if i == j:
        return False
    return segment_inside_polygon(poly.vertices[i], poly.vertices[j], poly)


def visibility_graph(w: Polygon) -> LabeledGraph:
    """Visibility graph in boundary order u..v; boundary neighbours always adjacent."""
    n = w.n
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                edges.add((i, j))
            elif sees(w, i, j):
                edges.add((i, j))
    return LabeledGraph(n, edges)


def reflex_vertices(w: Polygon) -> list[int]:
    pts = w.vertices
    n = len(pts)
    return [i for i in range(n)
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) > 0]


@dataclass
class PolygonReport:
    polygon: Polygon
    reflex_vertices: list[int]
    ears: list[list[int]]
    is_terrain: bool
    _fan_cache: dict = field(default_factory=dict)

    def ear_interiors(self) -> list[list[int]]:
        return [ear[1:-1] for ear in self.ears]

    def is_convex_fan_at(self, v: int) -> bool:
        """Vertex-level test: v is convex and sees every vertex."""
        if v not in self._fan_cache:
            ok = v not in self.reflex_vertices and all(
                u == v or sees(self.polygon, v, u) for u in range(self.polygon.n))
            self._fan_cache[v] = ok
        return self._fan_cache[v]

    def weak_visibility_vertexwise(self) -> bool:
        """Every vertex sees an endpoint of the edge uv or its foot on uv.

        Necessary vertex-level condition only; full weak visibility is a
        continuous property with no finite certificate here.
        """
        poly = self.polygon
        u = poly.vertices[0]
        v = poly.vertices[-1]
        for i in range(poly.n):
            p = poly.vertices[i]
            if i in (0, poly.n - 1):
                continue
            if segment_inside_polygon(p, u, poly) or segment_inside_polygon(p, v, poly):
                continue
            dx, dy = v[0] - u[0], v[1] - u[1]
            t = ((p[0] - u[0]) * dx + (p[1] - u[1]) * dy) / (dx * dx + dy * dy)
            if 0 <= t <= 1:
                foot = (u[0] + t * dx, u[1] + t * dy)
                if segment_inside_polygon(p, foot, poly):
                    continue
            return False
        return True


def polygon_report(w: Polygon) -> PolygonReport:
    refl = reflex_vertices(w)
    n = w.n
    anchors = [0] + [r for r in refl if 0 < r < n - 1] + [n - 1]
    anchors = sorted(set(anchors))
    ears = [list(range(a, b + 1)) for a, b in zip(anchors, anchors[1:])]

    pts = w.vertices
    u, v = pts[0], pts[-1]
    terrain = (u[1] == 0 and v[1] == 0
               and all(pts[i][1] > 0 for i in range(1, n - 1))
               and all(pts[i][0] <= pts[i + 1][0] for i in range(n - 1))
               and u[0] < v[0])
    return PolygonReport(w, refl, ears, terrain)


# ---------------------------------------------------------------------------
# gradual connectivity and clique-width certificates

def gradually_connected_check(g: LabeledGraph, xs: Sequence[int], ys: Sequence[int]) -> bool:
    """x_j y_i must be an edge and x_i y_j a non-edge for all i < j."""
    if len(xs) != len(ys):
        raise GeometryError("gradual connectivity needs equal-size lists")
    if set(xs) & set(ys):
        raise GeometryError("gradual connectivity needs disjoint lists")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise GeometryError("duplicate vertices in ordering")
    adj = g.adjacency_rows()
    m = len(xs)
    for i in range(m):
        for j in range(i + 1, m):
            if not adj[xs[j]][ys[i]] or adj[xs[i]][ys[j]]:
                return False
    return True


def cliquewidth_certificate_check(g: LabeledGraph, parts: Sequence[Sequence[int]],
                                  index_set: Iterable[int], k: int) -> bool:
    """Verify the hypotheses of the clique-width lower-bound lemma.

    ``parts`` are ordered vertex lists V_1..V_r (the list order is the
    certificate ordering); ``index_set`` is the 1-based set I with |I| = 2k.
    The transversal condition is enumerated exhaustively (m^(4k) pairs).
    """
    r = len(parts)
    sizes = {len(p) for p in parts}
    if len(sizes) != 1:
        raise GeometryError("parts must have equal sizes")
    m = sizes.pop()
    allv = [v for p in parts for v in p]
    if sorted(allv) != list(range(g.n)):
        raise GeometryError("parts must partition the vertex set")
    idx = sorted(set(index_set))
    if len(idx) != 2 * k:
        raise GeometryError(f"index set must have exactly 2k = {2 * k} entries")
    if any(i < 1 or i + 1 > r for i in idx):
        raise GeometryError("index set entries must satisfy 1 <= i and i+1 <= r")

    if not m > 6 * k * r:
        return False
    for i in range(r - 1):
        if not (gradually_connected_check(g, parts[i], parts[i + 1])
                or gradually_connected_check(g, parts[i + 1], parts[i])):
            return False

    adj = g.adjacency_rows()
    x_parts = [list(parts[i - 1]) for i in idx]
    y_parts = [list(parts[i]) for i in idx]
    positions = list(range(2 * k))
    pair_list = [(a, b) for a in positions for b in positions if a < b]
    for xs in itertools.product(*x_parts):
        for ys in itertools.product(*y_parts):
            for a, b in pair_list:
                if not adj[xs[b]][ys[a]] or adj[xs[a]][ys[b]]:
                    return False
    return True
