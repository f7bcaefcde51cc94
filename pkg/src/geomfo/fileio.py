"""Line-oriented ASCII formats for representations, posets and graphs.

All coordinates are reduced rationals written as ``p/q`` (plain integers
allowed).  Comment lines start with ``#``.  Emitting and re-reading any of
these files reproduces an identical structure.
"""

from __future__ import annotations

from fractions import Fraction
from .formula import Formula, parse_formula, print_formula
from .geometry import (Arc, Box, Chord, Disk, Interval, LabeledGraph, PermSegment,
                       Polygon, Representation, format_rat, parse_rat)
from .poset import LabeledPoset

_OBJECT_KEYWORD = {
    "interval": "interval",
    "circular_arc": "arc",
    "circle": "chord",
    "permutation": "perm",
    "box": "box",
    "unit_disk": "disk",
}


class FileFormatError(Exception):
    pass


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def write_representation(rep: Representation) -> str:
    out = [f"class {rep.cls}"]
    if rep.cls == "visibility":
        for poly in rep.objects:
            out.append("polygon")
            for x, y in poly.vertices:
                out.append(f"pt {format_rat(x)} {format_rat(y)}")
        return "\n".join(out) + "\n"
    kw = _OBJECT_KEYWORD[rep.cls]
    for obj in rep.objects:
        if isinstance(obj, Interval):
            fields = (obj.lo, obj.hi)
        elif isinstance(obj, Arc):
            fields = (obj.start, obj.end)
        elif isinstance(obj, Chord):
            fields = (obj.a, obj.b)
        elif isinstance(obj, PermSegment):
            fields = (obj.top, obj.bottom)
        elif isinstance(obj, Box):
            fields = (obj.x.lo, obj.x.hi, obj.y.lo, obj.y.hi)
        elif isinstance(obj, Disk):
            fields = (obj.cx, obj.cy)
        else:
            raise FileFormatError(f"cannot serialize {obj!r}")
        out.append(kw + " " + " ".join(format_rat(f) for f in fields))
    return "\n".join(out) + "\n"


def read_representation(text: str) -> Representation:
    lines = _lines(text)
    if not lines or lines[0][0] != "class" or len(lines[0]) != 2:
        raise FileFormatError("representation must start with 'class <name>'")
    cls = lines[0][1]
    body = lines[1:]
    if cls == "visibility":
        polys = []
        pts: list[tuple[Fraction, Fraction]] = []
        started = False
        for parts in body:
            if parts[0] == "polygon":
                if started:
                    polys.append(Polygon(tuple(pts)))
                    pts = []
                started = True
            elif parts[0] == "pt" and len(parts) == 3:
                pts.append((parse_rat(parts[1]), parse_rat(parts[2])))
            else:
                raise FileFormatError(f"bad polygon line: {' '.join(parts)}")
        if not started:
            raise FileFormatError("visibility representation needs a polygon")
        polys.append(Polygon(tuple(pts)))
        return Representation("visibility", tuple(polys))

    if cls not in _OBJECT_KEYWORD:
        raise FileFormatError(f"unknown representation class {cls!r}")
    kw = _OBJECT_KEYWORD[cls]
    want_fields = {"interval": 2, "arc": 2, "chord": 2, "perm": 2, "box": 4, "disk": 2}[kw]
    objs = []
    for parts in body:
        if parts[0] != kw or len(parts) != want_fields + 1:
            raise FileFormatError(f"bad object line for class {cls}: {' '.join(parts)}")
        vals = [parse_rat(p) for p in parts[1:]]
        if kw == "interval":
            objs.append(Interval(*vals))
        elif kw == "arc":
            objs.append(Arc(*vals))
        elif kw == "chord":
            objs.append(Chord(*vals))
        elif kw == "perm":
            objs.append(PermSegment(*vals))
        elif kw == "box":
            objs.append(Box(Interval(vals[0], vals[1]), Interval(vals[2], vals[3])))
        else:
            objs.append(Disk(*vals))
    return Representation(cls, tuple(objs))


def write_poset(p: LabeledPoset) -> str:
    out = [f"poset {p.n}"]
    for a, b in p.pairs():
        out.append(f"lt {a} {b}")
    for name in sorted(p.labels):
        for v in sorted(p.labels[name]):
            out.append(f"label {name} {v}")
    return "\n".join(out) + "\n"


def read_poset(text: str) -> LabeledPoset:
    lines = _lines(text)
    if not lines or lines[0][0] != "poset" or len(lines[0]) != 2:
        raise FileFormatError("poset must start with 'poset <n>'")
    n = int(lines[0][1])
    lt = []
    labels: dict[str, set[int]] = {}
    for parts in lines[1:]:
        if parts[0] == "lt" and len(parts) == 3:
            lt.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "label" and len(parts) == 3:
            labels.setdefault(parts[1], set()).add(int(parts[2]))
        else:
            raise FileFormatError(f"bad poset line: {' '.join(parts)}")
    return LabeledPoset(n, lt, labels)


def write_graph(g: LabeledGraph) -> str:
    out = [f"graph {g.n}"]
    for a, b in sorted(g.edges):
        out.append(f"edge {a} {b}")
    for name in sorted(g.labels):
        for v in sorted(g.labels[name]):
            out.append(f"label {name} {v}")
    return "\n".join(out) + "\n"


def read_graph(text: str) -> LabeledGraph:
    lines = _lines(text)
    if not lines or lines[0][0] != "graph" or len(lines[0]) != 2:
        raise FileFormatError("graph must start with 'graph <n>'")
    n = int(lines[0][1])
    edges = []
    labels: dict[str, set[int]] = {}
    for parts in lines[1:]:
        if parts[0] == "edge" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "label" and len(parts) == 3:
            labels.setdefault(parts[1], set()).add(int(parts[2]))
        else:
            raise FileFormatError(f"bad graph line: {' '.join(parts)}")
    return LabeledGraph(n, edges, labels)


def write_interpretation_formulas(nu: Formula, psi: Formula) -> str:
    return f"nu {print_formula(nu)}\npsi {print_formula(psi)}\n"


def read_interpretation_formulas(text: str, signature: str) -> tuple[Formula, Formula]:
    nu = psi = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key == "nu":
            nu = parse_formula(rest, signature)
        elif key == "psi":
            psi = parse_formula(rest, signature)
        else:
            raise FileFormatError(f"bad interpretation line: {line}")
    if nu is None or psi is None:
        raise FileFormatError("interpretation file needs both nu and psi")
    return nu, psi
