"""Poset interpretations for each tractable geometric class.

Every constructor returns an InterpretationInstance: a labelled poset, the
pair (nu, psi) over it, the map from graph vertices to poset elements, and
the class's width bound.  The defining property, checked wholesale by the
test suite, is that the interpreted graph equals the geometric graph:
uv is an edge iff the poset models psi(u,v) | psi(v,u).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .formula import (And, Eq, Exists, Forall, Formula, Implies, Interpretation,
                      Label, Leq, Not, Or, Var, big_and, big_or)
from .geometry import (Arc, Box, Chord, Disk, GeometryError, Interval, LabeledGraph,
                       PermSegment, Polygon, Representation, permutation_to_chords,
                       perturb_endpoints, polygon_report, proper_partition,
                       visibility_graph)
from .poset import LabeledPoset, PosetError, build_interval_poset, transitive_closure, validate_poset

X, Y, Z = Var("x"), Var("y"), Var("z")


@dataclass
class InterpretationInstance:
    poset: LabeledPoset
    interp: Interpretation
    vertex_map: list[int]
    width_bound: int
    provenance: dict
    complemented: bool = False

    def interpreted_graph(self) -> LabeledGraph:
        """I(P) restricted to the mapped vertices, for roundtrip checks."""
        from .checker import eval_structure

        n = len(self.vertex_map)
        px, py = self.interp.psi_vars
        edges = set()
        for i in range(n):
            for j in range(i + 1, n):
                u, v = self.vertex_map[i], self.vertex_map[j]
                if (eval_structure(self.poset, self.interp.psi, {px: u, py: v})
                        or eval_structure(self.poset, self.interp.psi, {px: v, py: u})):
                    edges.add((i, j))
        return LabeledGraph(n, edges)

    def nu_set(self) -> set[int]:
        from .checker import eval_structure

        nv = self.interp.nu_var
        return {e for e in range(self.poset.n)
                if eval_structure(self.poset, self.interp.nu, {nv: e})}


# ---------------------------------------------------------------------------
# the three interval-poset formulas

def interval_nu(x: Var = X) -> Formula:
    return Not(Label("D", x))


def interval_psi(x: Var = X, y: Var = Y, z: Var = Z) -> Formula:
    """True iff no endpoint sits between the intervals, i.e. they intersect."""
    return Forall(z, Implies(
        Label("D", z),
        And(Or(Not(Leq(x, z)), Not(Leq(z, y))),
            Or(Not(Leq(y, z)), Not(Leq(z, x)))),
    ))


def interval_theta(x: Var = X, y: Var = Y, z: Var = Z) -> Formula:
    """True iff interval x is contained in interval y."""
    return Forall(z, Implies(
        Label("D", z),
        And(Implies(Leq(z, y), Leq(z, x)),
            Implies(Leq(y, z), Leq(x, z))),
    ))


def _require_distinct_endpoints(values) -> None:
    vals = list(values)
    if len(set(vals)) != len(vals):
        raise GeometryError("shared endpoints; apply perturb_endpoints first")


def interval_interpretation(intervals: Sequence[Interval]) -> InterpretationInstance:
    if not intervals:
        raise GeometryError("empty representation")
    _require_distinct_endpoints(e for it in intervals for e in (it.lo, it.hi))
    k, parts = proper_partition(intervals)
    poset, ids, _ = build_interval_poset(intervals, parts)
    interp = Interpretation(interval_nu(), interval_psi(), frozenset({"D"}))
    return InterpretationInstance(poset, interp, ids, k + 1,
                                  {"class": "interval", "k": k})


def circular_arc_interpretation(arcs: Sequence[Arc]) -> InterpretationInstance:
    if not arcs:
        raise GeometryError("empty representation")
    ends = [e for a in arcs for e in (a.start, a.end)]
    _require_distinct_endpoints(ends)
    if any(e == 0 for e in ends):
        raise GeometryError("arc endpoint at angle 0; apply perturb_endpoints first")
    flat = []
    red_idx = set()
    for i, a in enumerate(arcs):
        if a.wraps():
            flat.append(Interval(a.end, a.start))  # complementary arc avoiding 0
            red_idx.add(i)
        else:
            flat.append(Interval(a.start, a.end))
    k_plain, _ = proper_partition([f for i, f in enumerate(flat) if i not in red_idx])
    k_red, _ = proper_partition([f for i, f in enumerate(flat) if i in red_idx])
    k_b, parts = proper_partition(flat)
    poset, ids, _ = build_interval_poset(flat, parts)
    labels = dict(poset.labels)
    labels["red"] = frozenset(ids[i] for i in red_idx)
    poset = LabeledPoset(poset.n, poset.pairs(), labels, poset.names)

    psi1 = big_or([
        And(Label("red", X), Label("red", Y)),
        big_and([Not(Label("red", X)), Not(Label("red", Y)), interval_psi()]),
        big_and([Label("red", X), Not(Label("red", Y)),
                 Not(interval_theta(Y, X))]),
    ])
    interp = Interpretation(interval_nu(), psi1, frozenset({"D", "red"}))
    k = max(k_plain, k_red)
    return InterpretationInstance(poset, interp, ids, 2 * k + 1,
                                  {"class": "circular_arc", "k": k, "k_flat": k_b})


def circle_interpretation(chords: Sequence[Chord]) -> InterpretationInstance:
    if not chords:
        raise GeometryError("empty representation")
    _require_distinct_endpoints(e for c in chords for e in (c.a, c.b))
    flat = [Interval(min(c.a, c.b), max(c.a, c.b)) for c in chords]
    k, parts = proper_partition(flat)
    poset, ids, _ = build_interval_poset(flat, parts)
    sigma = big_and([interval_psi(),
                     Not(interval_theta(X, Y)),
                     Not(interval_theta(Y, X))])
    interp = Interpretation(interval_nu(), sigma, frozenset({"D"}))
    return InterpretationInstance(poset, interp, ids, k + 1,
                                  {"class": "circle", "k": k})


# ---------------------------------------------------------------------------
# permutation graphs

def longest_noncrossing(segments: Sequence[PermSegment]) -> int:
    """Maximum independent set = longest chain of pairwise non-crossing segments."""
    order = sorted(range(len(segments)), key=lambda i: segments[i].top)
    best = [0] * len(segments)
    out = 0
    for pos, i in enumerate(order):
        best[i] = 1
        for j in order[:pos]:
            if segments[j].bottom < segments[i].bottom:
                best[i] = max(best[i], best[j] + 1)
        out = max(out, best[i])
    return out


def longest_crossing(segments: Sequence[PermSegment]) -> int:
    """Maximum clique = longest chain of pairwise crossing segments."""
    order = sorted(range(len(segments)), key=lambda i: segments[i].top)
    best = [0] * len(segments)
    out = 0
    for pos, i in enumerate(order):
        best[i] = 1
        for j in order[:pos]:
            if segments[j].bottom > segments[i].bottom:
                best[i] = max(best[i], best[j] + 1)
        out = max(out, best[i])
    return out


def permutation_plan(segments: Sequence[PermSegment]) -> InterpretationInstance:
    """Reduce via circle graphs, complementing when the clique side is smaller.

    Reversing one line of the representation yields the complement, whose
    independence number is the clique number of the original; the cheaper
    orientation is interpreted and a complementation flag tells the pipeline
    to rewrite edge atoms accordingly.
    """
    if not segments:
        raise GeometryError("empty representation")
    tops = {s.top for s in segments}
    bots = {s.bottom for s in segments}
    if len(tops) != len(segments) or len(bots) != len(segments):
        raise GeometryError("permutation segments need distinct coordinates per line")
    mis = longest_noncrossing(segments)
    clique = longest_crossing(segments)
    reverse = clique < mis
    used = ([PermSegment(s.top, -s.bottom) for s in segments] if reverse
            else list(segments))
    chords = permutation_to_chords(used)
    inst = circle_interpretation(chords)
    inst.provenance = {"class": "permutation", "k": inst.provenance["k"],
                       "mis": mis, "clique": clique, "reversed": reverse}
    inst.complemented = reverse
    return inst


def permutation_subgraph_iso(segments: Sequence[PermSegment], h: LabeledGraph,
                             bound: Optional[int] = None) -> bool:
    """Does the permutation graph contain h as a (not necessarily induced) subgraph?

    A clique of size |V(h)| settles the question immediately (cliques are a
    longest crossing chain); otherwise the FO sentence guessing the subgraph
    is decided through the poset pipeline.
    """
    from .checker import model_check
    from .formula import Edge
    from .generators import size_cap

    if bound is None:
        bound = size_cap(6)
    k = h.n
    if k > bound:
        raise GeometryError(f"pattern on {k} vertices exceeds bound {bound}")
    if k == 0:
        return True
    if k > len(segments):
        return False
    if longest_crossing(segments) >= k:
        return True
    vs = [Var(f"x{i + 1}") for i in range(k)]
    parts: list[Formula] = [Not(Eq(vs[i], vs[j]))
                            for i in range(k) for j in range(i + 1, k)]
    parts += [Edge(vs[i], vs[j])
              for i in range(k) for j in range(i + 1, k) if h.has_edge(i, j)]
    phi = big_and(parts, if_empty=Eq(vs[0], vs[0]))
    for v in reversed(vs):
        phi = Exists(v, phi)
    rep = Representation("permutation", tuple(segments))
    return model_check("permutation", rep, phi).graph_verdict


# ---------------------------------------------------------------------------
# boxes

def box_interpretation(boxes: Sequence[Box], k: Optional[int] = None) -> InterpretationInstance:
    if not boxes:
        raise GeometryError("empty representation")
    xs = [b.x for b in boxes]
    ends = [e for it in xs for e in (it.lo, it.hi)]
    if len(set(ends)) != len(ends):
        rep = perturb_endpoints(Representation("interval", tuple(xs)))
        xs = list(rep.objects)
    ys = sorted({(b.y.lo, b.y.hi) for b in boxes})
    ell = len(ys)
    if k is None:
        k = ell
    if ell > k:
        raise GeometryError(f"{ell} distinct y-intervals exceed the declared k={k}")
    kx, parts = proper_partition(xs)
    poset, ids, _ = build_interval_poset(xs, parts)
    labels = dict(poset.labels)
    lab_name = {t: f"L{i + 1}" for i, t in enumerate(ys)}
    for t in ys:
        labels[lab_name[t]] = frozenset(
            ids[i] for i, b in enumerate(boxes) if (b.y.lo, b.y.hi) == t)
    poset = LabeledPoset(poset.n, poset.pairs(), labels, poset.names)

    clauses = []
    for ti in ys:
        for tj in ys:
            if Interval(*ti).overlaps(Interval(*tj)):
                clauses.append(And(Label(lab_name[ti], X), Label(lab_name[tj], Y)))
    sigma = And(interval_psi(), big_or(clauses))
    interp = Interpretation(interval_nu(), sigma,
                            frozenset({"D"} | set(lab_name.values())))
    return InterpretationInstance(poset, interp, ids, kx + 1,
                                  {"class": "box", "k": max(kx, ell), "kx": kx, "ell": ell})


# ---------------------------------------------------------------------------
# unit disks

def _disk_endpoint_cmp(q4w2: Fraction):
    """Comparator for symbolic chord endpoints (cx + s*w, s*delta, idx*tau).

    q4w2 is (2w)^2, shared by every chord on one midline since all disks
    have the same diameter.  Enlargement delta keeps tangencies as overlaps;
    the index term tau breaks exact coordinate ties without creating
    nestings.
    """

    def real_cmp(c1: Fraction, s1: int, c2: Fraction, s2: int) -> int:
        if s1 == s2:
            return (c1 > c2) - (c1 < c2)
        d = c1 - c2
        if s1 > s2:  # value difference d + 2w
            if d >= 0:
                return 1 if (d > 0 or q4w2 > 0) else 0
            return (d * d < q4w2) - (d * d > q4w2)
        if d <= 0:
            return -1 if (d < 0 or q4w2 > 0) else 0
        return (d * d > q4w2) - (d * d < q4w2)

    def cmp(e1, e2) -> int:
        c1, s1, i1 = e1
        c2, s2, i2 = e2
        r = real_cmp(c1, s1, c2, s2)
        if r:
            return r
        if s1 != s2:
            return -1 if s1 < s2 else 1
        return (i1 > i2) - (i1 < i2)

    return cmp


def unit_disk_interpretation(disks: Sequence[Disk], k: Optional[int] = None
                             ) -> InterpretationInstance:
    """Per-row-pair chord posets on midlines, merged along the x order.

    Chord endpoints involve square roots and are never materialized; all
    order decisions reduce to rational squared-distance comparisons.  Row
    pairs more than a diameter apart contribute no chords and no clause.
    """
    if not disks:
        raise GeometryError("empty representation")
    rows = sorted({d.cy for d in disks})
    ell = len(rows)
    if k is None:
        k = ell
    if ell > k:
        raise GeometryError(f"{ell} distinct y-coordinates exceed the declared k={k}")
    row_of = {y: i for i, y in enumerate(rows)}
    n = len(disks)

    elems: list[str] = [f"d{i}" for i in range(n)]  # disks first
    pairs: set[tuple[int, int]] = set()
    labels: dict[str, set[int]] = {f"B{i + 1}": set() for i in range(ell)}
    for i, d in enumerate(disks):
        labels[f"B{row_of[d.cy] + 1}"].add(i)

    order = sorted(range(n), key=lambda i: (disks[i].cx, i))
    for a, b in zip(order, order[1:]):
        pairs.add((a, b))

    kept_pairs: list[tuple[int, int]] = []
    for ri in range(ell):
        for rj in range(ri, ell):
            dy = rows[rj] - rows[ri]
            if dy > 1:
                continue
            kept_pairs.append((ri, rj))
            q4w2 = 1 - dy * dy  # (2w)^2 on the midline
            members = [i for i in range(n)
                       if row_of[disks[i].cy] in (ri, rj)]
            cmp = _disk_endpoint_cmp(q4w2)
            key = functools.cmp_to_key(cmp)
            ends = []
            dlabel = f"D_{ri + 1}_{rj + 1}"
            labels.setdefault(dlabel, set())
            end_elem: dict[tuple[int, int], int] = {}
            for i in members:
                for s in (-1, 1):
                    eid = len(elems)
                    elems.append(f"e{dlabel}[{i},{'R' if s > 0 else 'L'}]")
                    labels[dlabel].add(eid)
                    end_elem[(i, s)] = eid
                    ends.append((disks[i].cx, s, i))
            ends.sort(key=key)
            for e1, e2 in zip(ends, ends[1:]):
                pairs.add((end_elem[(e1[2], e1[1])], end_elem[(e2[2], e2[1])]))
            for i in members:
                left = (disks[i].cx, -1, i)
                right = (disks[i].cx, 1, i)
                for e in ends:
                    eid = end_elem[(e[2], e[1])]
                    if cmp(e, left) <= 0:
                        pairs.add((eid, i))
                    if cmp(e, right) >= 0:
                        pairs.add((i, eid))

    closed = transitive_closure(len(elems), pairs)
    poset = LabeledPoset(len(elems), closed, labels, elems)
    bad = validate_poset(poset)
    if bad is not None:
        raise PosetError(f"disk poset invalid: {bad}")

    clauses = []
    for ri, rj in kept_pairs:
        for a, b in ((ri, rj), (rj, ri)) if ri != rj else ((ri, ri),):
            dlabel = f"D_{ri + 1}_{rj + 1}"
            clauses.append(big_and([
                Label(f"B{a + 1}", X), Label(f"B{b + 1}", Y),
                Forall(Z, Implies(Label(dlabel, Z),
                                  And(Or(Not(Leq(X, Z)), Not(Leq(Z, Y))),
                                      Or(Not(Leq(Y, Z)), Not(Leq(Z, X)))))),
            ]))
    nu = big_or([Label(f"B{i + 1}", X) for i in range(ell)])
    psi = big_or(clauses)
    interp = Interpretation(nu, psi, frozenset(labels))
    return InterpretationInstance(poset, interp, list(range(n)), k * k + 1,
                                  {"class": "unit_disk", "k": k, "rows": ell})


# ---------------------------------------------------------------------------
# polygon visibility

def _cover(a: Var, b: Var, w: Var) -> Formula:
    return And(Leq(a, b),
               Forall(w, Implies(And(Leq(a, w), Leq(w, b)),
                                 Or(Eq(a, w), Eq(b, w)))))


def _samechain(a: Var, b: Var, w: Var) -> Formula:
    return Forall(w, Implies(Or(And(Leq(a, w), Leq(w, b)),
                                And(Leq(b, w), Leq(w, a))),
                             Not(Label("green", w))))


def _beta0(x: Var, y: Var, z: Var) -> Formula:
    return big_and([
        Label("green", x), Label("green", y), Leq(x, y),
        Forall(z, Implies(big_and([Leq(x, z), Leq(z, y), Label("black", z)]),
                          Or(Eq(z, x), Eq(z, y)))),
    ])


def _beta1(x: Var, y: Var) -> Formula:
    z, t = Var("z"), Var("t")
    w1, w2, w3 = Var("w1"), Var("w2"), Var("w3")
    see = Exists(z, Exists(t, big_and([
        Label("blue", z), Label("blue", t),
        _samechain(z, t, w1),
        _cover(x, z, w2),
        Leq(z, t),
        _cover(t, y, w3),
    ])))
    see_rev = Exists(z, Exists(t, big_and([
        Label("blue", z), Label("blue", t),
        _samechain(z, t, w1),
        _cover(y, z, w2),
        Leq(z, t),
        _cover(t, x, w3),
    ])))
    return big_and([
        Label("green", x), Label("green", y),
        Not(Label("black", x)), Not(Label("black", y)),
        Or(see, see_rev),
    ])


def _beta2(x: Var, y: Var, k: int) -> Formula:
    return And(Label("black", x),
               big_or([And(Label(f"L0_{i}", x), Label(f"L1_{i}", y))
                       for i in range(k + 2)]))


def visibility_interpretation(w: Polygon) -> InterpretationInstance:
    report = polygon_report(w)
    n = w.n
    if 0 in report.reflex_vertices or n - 1 in report.reflex_vertices:
        raise GeometryError("distinguished edge uv is not convex")
    if not report.weak_visibility_vertexwise():
        raise GeometryError("polygon fails the weak-visibility vertexwise check")
    refl = [r for r in report.reflex_vertices if 0 < r < n - 1]
    k = len(refl)
    g = visibility_graph(w)
    interiors = report.ear_interiors()

    elems = [f"v{i}" for i in range(n)]
    pairs: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            pairs.add((i, j))  # the green chain, in boundary order

    labels: dict[str, set[int]] = {
        "green": set(range(n)),
        "black": set(refl) | {0, n - 1},
        "blue": set(),
    }
    anchors = [0] + refl + [n - 1]
    for t, r in enumerate(anchors):
        labels[f"L0_{t}"] = {r}
        labels[f"L1_{t}"] = set(g.neighbors(r))

    for a in range(len(interiors)):
        for b in range(a + 1, len(interiors)):
            aa, ab = interiors[a], interiors[b]
            if not aa or not ab:
                continue
            # visibility between the two ears must be a staircase, else the
            # chain below is not a linear order
            tau = []
            for vi in aa:
                seen = [g.has_edge(vi, vj) for vj in ab]
                first = next((t for t, s in enumerate(seen) if s), len(ab))
                if any(not s for s in seen[first:]):
                    raise GeometryError("ear visibility is not a staircase "
                                        "(polygon not weakly visible from uv?)")
                tau.append(first)
            if any(t2 < t1 for t1, t2 in zip(tau, tau[1:])):
                raise GeometryError("ear visibility staircase is not monotone")

            chain = []  # (sort key, element id)
            base = len(elems)
            copy_of: dict[int, int] = {}
            for pos, vj in enumerate(ab):
                eid = len(elems)
                elems.append(f"b[{a},{b}]{vj}")
                labels["blue"].add(eid)
                copy_of[vj] = eid
                chain.append(((2 * pos, 0, vj), eid))
            for pos, vi in enumerate(aa):
                eid = len(elems)
                elems.append(f"b[{a},{b}]{vi}")
                labels["blue"].add(eid)
                copy_of[vi] = eid
                chain.append(((2 * tau[pos] - 1, 1, vi), eid))
            chain.sort(key=lambda it: it[0])
            for (k1, e1), (k2, e2) in zip(chain, chain[1:]):
                pairs.add((e1, e2))
            for vi in aa:
                pairs.add((vi, copy_of[vi]))
            for vj in ab:
                pairs.add((copy_of[vj], vj))

    closed = transitive_closure(len(elems), pairs)
    poset = LabeledPoset(len(elems), closed, labels, elems)
    bad = validate_poset(poset)
    if bad is not None:
        raise PosetError(f"visibility poset invalid: {bad}")

    z = Var("z")
    psi = big_and([
        Label("green", X), Label("green", Y),
        big_or([
            _beta0(X, Y, z), _beta0(Y, X, z),
            _beta1(X, Y), _beta1(Y, X),
            _beta2(X, Y, k), _beta2(Y, X, k),
        ]),
    ])
    nu = Label("green", X)
    vocab = frozenset(labels)
    interp = Interpretation(nu, psi, vocab)
    bound = (k + 1) * k // 2 + 1
    return InterpretationInstance(poset, interp, list(range(n)), bound,
                                  {"class": "visibility", "k": k})


# ---------------------------------------------------------------------------
# dispatch

def make_instance(cls: str, rep: Representation) -> InterpretationInstance:
    if rep.cls != cls:
        raise GeometryError(f"representation class {rep.cls!r} does not match {cls!r}")
    if cls == "interval":
        return interval_interpretation(perturb_endpoints(rep).objects)
    if cls == "circular_arc":
        return circular_arc_interpretation(perturb_endpoints(rep).objects)
    if cls == "circle":
        return circle_interpretation(perturb_endpoints(rep).objects)
    if cls == "permutation":
        from .geometry import separate_permutation_coordinates

        return permutation_plan(separate_permutation_coordinates(rep.objects))
    if cls == "box":
        return box_interpretation(rep.objects)
    if cls == "unit_disk":
        return unit_disk_interpretation(rep.objects)
    if cls == "visibility":
        return visibility_interpretation(rep.objects[0])
    raise GeometryError(f"unknown class {cls!r}")
