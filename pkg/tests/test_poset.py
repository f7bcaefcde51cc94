import random
from fractions import Fraction as Fr

import pytest

from geomfo.checker import eval_structure
from geomfo.formula import Var
from geomfo.geometry import Interval
from geomfo.interpret import interval_nu, interval_psi, interval_theta
from geomfo.poset import (LabeledPoset, PosetError, brute_force_width,
                          build_interval_poset, poset_width, transitive_closure,
                          validate_poset)

from helpers import rand_intervals
from geomfo.geometry import perturb_endpoints, proper_partition


def test_validate_examples():
    ok = LabeledPoset(3, {(0, 1), (1, 2), (0, 2)})
    assert validate_poset(ok) is None
    anti = LabeledPoset(2, {(0, 1), (1, 0)})
    v = validate_poset(anti)
    assert v is not None and v.kind == "antisymmetry"
    trans = LabeledPoset(3, {(0, 1), (1, 2)})
    v = validate_poset(trans)
    assert v is not None and v.kind == "transitivity"
    refl = LabeledPoset(1, {(0, 0)})
    assert validate_poset(refl).kind == "irreflexivity"


def test_width_chain_and_antichain():
    n = 7
    chain = LabeledPoset(n, {(i, j) for i in range(n) for j in range(i + 1, n)})
    assert poset_width(chain) == 1
    anti = LabeledPoset(n)
    assert poset_width(anti) == n


def test_width_matches_bruteforce_on_random_posets():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(1, 10)
        base = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3}
        closed = transitive_closure(n, base)
        p = LabeledPoset(n, closed)
        assert validate_poset(p) is None
        assert poset_width(p) == brute_force_width(p)


def test_width_rejects_invalid():
    with pytest.raises(PosetError):
        poset_width(LabeledPoset(2, {(0, 1), (1, 0)}))


def test_build_interval_poset_single_interval():
    p, ids, dmap = build_interval_poset([Interval(Fr(1), Fr(2))], [1])
    assert p.n == 3
    a, b = dmap[Fr(1)], dmap[Fr(2)]
    t = ids[0]
    assert p.lt(a, t) and p.lt(t, b) and p.lt(a, b)
    assert p.labels["D"] == frozenset({a, b})


def test_build_interval_poset_two_overlapping():
    items = [Interval(Fr(1), Fr(3)), Interval(Fr(2), Fr(4))]
    k, parts = proper_partition(items)
    assert k == 1
    p, ids, dmap = build_interval_poset(items, parts)
    assert p.n == 6
    # [1,3] incomparable with endpoint 2
    e2 = dmap[Fr(2)]
    assert not p.lt(ids[0], e2) and not p.lt(e2, ids[0])
    assert p.lt(ids[0], ids[1])  # same proper part, left to right
    assert poset_width(p) == 2


def test_build_interval_poset_rejects_nonproper_part():
    items = [Interval(Fr(1), Fr(4)), Interval(Fr(2), Fr(3))]
    with pytest.raises(PosetError):
        build_interval_poset(items, [1, 1])


def test_build_interval_poset_random_properties():
    rng = random.Random(8)
    for _ in range(40):
        rep = perturb_endpoints(rand_intervals(rng, rng.randint(1, 10)))
        items = rep.objects
        k, parts = proper_partition(items)
        p, ids, _ = build_interval_poset(items, parts)
        assert validate_poset(p) is None
        assert poset_width(p) <= k + 1


def test_lemma_formula_semantics():
    """nu/psi/theta evaluate to membership, intersection and containment."""
    rng = random.Random(12)
    x, y = Var("x"), Var("y")
    for _ in range(30):
        rep = perturb_endpoints(rand_intervals(rng, rng.randint(1, 8)))
        items = rep.objects
        k, parts = proper_partition(items)
        p, ids, dmap = build_interval_poset(items, parts)
        nu = interval_nu(x)
        for e in range(p.n):
            assert eval_structure(p, nu, {x: e}) == (e in ids)
        psi = interval_psi(x, y)
        theta = interval_theta(x, y)
        for i, a in enumerate(items):
            for j, b in enumerate(items):
                assert eval_structure(p, psi, {x: ids[i], y: ids[j]}) == a.overlaps(b)
                assert eval_structure(p, theta, {x: ids[i], y: ids[j]}) == b.contains(a)


def test_chain_cover_structure():
    """D and the proper parts each form chains covering the poset."""
    rng = random.Random(13)
    rep = perturb_endpoints(rand_intervals(rng, 9))
    items = rep.objects
    k, parts = proper_partition(items)
    p, ids, dmap = build_interval_poset(items, parts)
    dset = sorted(dmap.values())
    for i in range(len(dset)):
        for j in range(i + 1, len(dset)):
            assert p.lt(dset[i], dset[j]) or p.lt(dset[j], dset[i])
    by_part = {}
    for i, pid in enumerate(parts):
        by_part.setdefault(pid, []).append(ids[i])
    for members in by_part.values():
        for i in members:
            for j in members:
                assert i == j or p.lt(i, j) or p.lt(j, i)
