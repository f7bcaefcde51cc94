"""First-order formulas over graphs and posets.

One AST serves both signatures: ``edge`` atoms belong to the graph
signature, ``<=`` atoms to the poset signature; equality and unary label
atoms are shared.  A formula is an immutable tree, so sharing subtrees is
safe and evaluation caches can key on node identity.

The concrete syntax (whitespace-insensitive)::

    formula := quant | impl
    quant   := ("exists"|"forall") VAR "." formula
    impl    := or [ "->" impl ]
    or      := and { "|" and }
    and     := unary { "&" unary }
    unary   := "!" unary | "(" formula ")" | atom
    atom    := "edge(" VAR "," VAR ")" | VAR "=" VAR | VAR "<=" VAR
             | IDENT "(" VAR ")"

``edge``, ``exists`` and ``forall`` are reserved; any other identifier is a
legal variable or label name.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

GRAPH = "graph"
POSET = "poset"

RESERVED = frozenset({"edge", "exists", "forall"})


class FormulaError(Exception):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class SignatureError(FormulaError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name) or self.name in RESERVED:
            raise FormulaError(f"illegal variable name {self.name!r}")

    def __str__(self):
        return self.name


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Edge(Formula):
    x: Var
    y: Var


@dataclass(frozen=True)
class Leq(Formula):
    x: Var
    y: Var


@dataclass(frozen=True)
class Eq(Formula):
    x: Var
    y: Var


@dataclass(frozen=True)
class Label(Formula):
    name: str
    x: Var

    def __post_init__(self):
        if self.name in RESERVED:
            raise FormulaError(f"label name {self.name!r} is reserved")


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    sub: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    sub: Formula


def big_and(parts: Iterable[Formula], if_empty: Optional[Formula] = None) -> Formula:
    parts = list(parts)
    if not parts:
        if if_empty is None:
            raise FormulaError("empty conjunction")
        return if_empty
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def big_or(parts: Iterable[Formula], if_empty: Optional[Formula] = None) -> Formula:
    parts = list(parts)
    if not parts:
        if if_empty is None:
            raise FormulaError("empty disjunction")
        return if_empty
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists_many(vs: Iterable[Var], body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from walk(f.sub)
    elif isinstance(f, (And, Or, Implies)):
        yield from walk(f.left)
        yield from walk(f.right)
    elif isinstance(f, (Exists, Forall)):
        yield from walk(f.sub)


def free_vars(f: Formula) -> frozenset[Var]:
    if isinstance(f, (Edge, Leq, Eq)):
        return frozenset((f.x, f.y))
    if isinstance(f, Label):
        return frozenset((f.x,))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.sub) - {f.var}
    raise FormulaError(f"not a formula: {f!r}")


def all_var_names(f: Formula) -> set[str]:
    names: set[str] = set()
    for node in walk(f):
        if isinstance(node, (Edge, Leq, Eq)):
            names.add(node.x.name)
            names.add(node.y.name)
        elif isinstance(node, Label):
            names.add(node.x.name)
        elif isinstance(node, (Exists, Forall)):
            names.add(node.var.name)
    return names


def label_names(f: Formula) -> frozenset[str]:
    return frozenset(n.name for n in walk(f) if isinstance(n, Label))


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (Edge, Leq, Eq, Label)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_depth(f.sub)
    raise FormulaError(f"not a formula: {f!r}")


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(n, (Exists, Forall)) for n in walk(f))


def is_existential(f: Formula) -> bool:
    """True for sentences of the form ``exists x1 ... exists xk. qf``."""
    while isinstance(f, Exists):
        f = f.sub
    return is_quantifier_free(f)


def formula_signature(f: Formula) -> Optional[str]:
    """GRAPH, POSET, or None when the formula fits both signatures."""
    has_edge = any(isinstance(n, Edge) for n in walk(f))
    has_leq = any(isinstance(n, Leq) for n in walk(f))
    if has_edge and has_leq:
        raise SignatureError("formula mixes edge and <= atoms")
    if has_edge:
        return GRAPH
    if has_leq:
        return POSET
    return None


def check_signature(f: Formula, signature: str) -> None:
    if signature not in (GRAPH, POSET):
        raise SignatureError(f"unknown signature {signature!r}")
    got = formula_signature(f)
    if got is not None and got != signature:
        raise SignatureError(f"{got} atom used under {signature} signature")


class FreshVars:
    """Deterministic fresh-name supply avoiding a set of used names."""

    def __init__(self, used: Iterable[str] = ()):
        self.used = set(used)
        self._counters: dict[str, int] = {}

    def fresh(self, base: str = "z") -> Var:
        n = self._counters.get(base, 0)
        while True:
            n += 1
            name = f"{base}_{n}"
            if name not in self.used:
                break
        self._counters[base] = n
        self.used.add(name)
        return Var(name)


def instantiate(f: Formula, mapping: dict[Var, Var], fresh: FreshVars) -> Formula:
    """Substitute free variables and rename every bound variable fresh.

    Renaming all binders makes the substitution capture-avoiding without a
    case analysis, at the cost of longer names in the output.
    """

    def sub_var(v: Var, env: dict[Var, Var]) -> Var:
        return env.get(v, v)

    def rec(g: Formula, env: dict[Var, Var]) -> Formula:
        if isinstance(g, Edge):
            return Edge(sub_var(g.x, env), sub_var(g.y, env))
        if isinstance(g, Leq):
            return Leq(sub_var(g.x, env), sub_var(g.y, env))
        if isinstance(g, Eq):
            return Eq(sub_var(g.x, env), sub_var(g.y, env))
        if isinstance(g, Label):
            return Label(g.name, sub_var(g.x, env))
        if isinstance(g, Not):
            return Not(rec(g.sub, env))
        if isinstance(g, And):
            return And(rec(g.left, env), rec(g.right, env))
        if isinstance(g, Or):
            return Or(rec(g.left, env), rec(g.right, env))
        if isinstance(g, Implies):
            return Implies(rec(g.left, env), rec(g.right, env))
        if isinstance(g, (Exists, Forall)):
            nv = fresh.fresh(g.var.name.rstrip("_0123456789") or "z")
            env2 = dict(env)
            env2[g.var] = nv
            body = rec(g.sub, env2)
            return Exists(nv, body) if isinstance(g, Exists) else Forall(nv, body)
        raise FormulaError(f"not a formula: {g!r}")

    return rec(f, dict(mapping))


@dataclass(frozen=True)
class Interpretation:
    """A pair (nu, psi) of poset formulas defining a graph inside a poset.

    ``nu`` has the single free variable ``nu_var``; ``psi`` has exactly the
    two free variables ``psi_vars`` (in that argument order).  ``labels`` is
    the label vocabulary the formulas may mention.
    """

    nu: Formula
    psi: Formula
    labels: frozenset[str] = frozenset()
    nu_var: Var = Var("x")
    psi_vars: tuple[Var, Var] = (Var("x"), Var("y"))

    def __post_init__(self):
        check_signature(self.nu, POSET)
        check_signature(self.psi, POSET)
        if free_vars(self.nu) != {self.nu_var}:
            raise FormulaError("nu must have exactly its declared free variable")
        if free_vars(self.psi) != set(self.psi_vars):
            raise FormulaError("psi must have exactly its two declared free variables")
        undeclared = (label_names(self.nu) | label_names(self.psi)) - self.labels
        if undeclared:
            raise FormulaError(f"undeclared labels in interpretation: {sorted(undeclared)}")


def rewrite_under_interpretation(phi: Formula, interp: Interpretation) -> Formula:
    """Rewrite a graph sentence into the poset sentence phi^I.

    edge(x,y) becomes !(x=y) & (psi(x,y) | psi(y,x)); each quantifier is
    relativized to nu.  Bound variables of nu/psi copies are renamed fresh
    on every instantiation.  The disequality guard keeps the diagonal
    faithful: the interpreted edge set ranges over distinct pairs, while
    psi(u,u) may well hold in the poset even though edge(u,u) is false in
    every simple graph.
    """
    if free_vars(phi):
        raise FormulaError("rewrite requires a sentence (no free variables)")
    check_signature(phi, GRAPH)
    fresh = FreshVars(
        all_var_names(phi) | all_var_names(interp.nu) | all_var_names(interp.psi)
    )
    px, py = interp.psi_vars

    def rec(g: Formula) -> Formula:
        if isinstance(g, Edge):
            return And(Not(Eq(g.x, g.y)), Or(
                instantiate(interp.psi, {px: g.x, py: g.y}, fresh),
                instantiate(interp.psi, {px: g.y, py: g.x}, fresh),
            ))
        if isinstance(g, (Eq, Label)):
            return g
        if isinstance(g, Not):
            return Not(rec(g.sub))
        if isinstance(g, And):
            return And(rec(g.left), rec(g.right))
        if isinstance(g, Or):
            return Or(rec(g.left), rec(g.right))
        if isinstance(g, Implies):
            return Implies(rec(g.left), rec(g.right))
        if isinstance(g, Exists):
            return Exists(g.var, And(instantiate(interp.nu, {interp.nu_var: g.var}, fresh), rec(g.sub)))
        if isinstance(g, Forall):
            return Forall(g.var, Implies(instantiate(interp.nu, {interp.nu_var: g.var}, fresh), rec(g.sub)))
        raise FormulaError(f"not a formula: {g!r}")

    return rec(phi)


def complement_edges(phi: Formula) -> Formula:
    """Replace every edge(x,y) by (!edge(x,y) & !(x=y)).

    Used when a construction hands us the complement of the intended graph
    (reversed permutation representations, complement-flagged witnesses).
    """

    def rec(g: Formula) -> Formula:
        if isinstance(g, Edge):
            return And(Not(g), Not(Eq(g.x, g.y)))
        if isinstance(g, (Leq, Eq, Label)):
            return g
        if isinstance(g, Not):
            return Not(rec(g.sub))
        if isinstance(g, And):
            return And(rec(g.left), rec(g.right))
        if isinstance(g, Or):
            return Or(rec(g.left), rec(g.right))
        if isinstance(g, Implies):
            return Implies(rec(g.left), rec(g.right))
        if isinstance(g, Exists):
            return Exists(g.var, rec(g.sub))
        if isinstance(g, Forall):
            return Forall(g.var, rec(g.sub))
        raise FormulaError(f"not a formula: {g!r}")

    return rec(phi)


# ---------------------------------------------------------------------------
# printing

_QUANT, _IMPL, _OR, _AND, _UNARY = range(5)


def print_formula(f: Formula) -> str:
    def atom(g: Formula) -> str:
        if isinstance(g, Edge):
            return f"edge({g.x},{g.y})"
        if isinstance(g, Leq):
            return f"{g.x}<={g.y}"
        if isinstance(g, Eq):
            return f"{g.x}={g.y}"
        if isinstance(g, Label):
            return f"{g.name}({g.x})"
        raise FormulaError(f"not an atom: {g!r}")

    def rec(g: Formula, level: int) -> str:
        if isinstance(g, (Edge, Leq, Eq, Label)):
            return atom(g)
        if isinstance(g, Not):
            return "!" + rec(g.sub, _UNARY)
        if isinstance(g, (Exists, Forall)):
            kw = "exists" if isinstance(g, Exists) else "forall"
            s = f"{kw} {g.var}. {rec(g.sub, _QUANT)}"
            return f"({s})" if level > _QUANT else s
        if isinstance(g, Implies):
            s = f"{rec(g.left, _OR)} -> {rec(g.right, _IMPL)}"
            return f"({s})" if level > _IMPL else s
        if isinstance(g, Or):
            s = f"{rec(g.left, _OR)} | {rec(g.right, _AND)}"
            return f"({s})" if level > _OR else s
        if isinstance(g, And):
            s = f"{rec(g.left, _AND)} & {rec(g.right, _UNARY)}"
            return f"({s})" if level > _AND else s
        raise FormulaError(f"not a formula: {g!r}")

    return rec(f, _QUANT)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><=|->|[().,=|&!]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        if m.group("ident"):
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: str):
        if signature not in (GRAPH, POSET):
            raise SignatureError(f"unknown signature {signature!r}")
        self.tokens = _tokenize(text)
        self.i = 0
        self.signature = signature

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Formula:
        f = self.formula()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing input starting with {val!r}", pos)
        return f

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "ident" and val in ("exists", "forall"):
            self.next()
            v = self.variable()
            self.expect(".")
            body = self.formula()
            return Exists(v, body) if val == "exists" else Forall(v, body)
        return self.impl()

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "!":
            self.next()
            return Not(self.unary())
        if val == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def variable(self) -> Var:
        kind, val, pos = self.next()
        if kind != "ident":
            raise ParseError(f"expected a variable, found {val or 'end of input'!r}", pos)
        if val in RESERVED:
            raise ParseError(f"{val!r} is a reserved word", pos)
        return Var(val)

    def atom(self) -> Formula:
        kind, val, pos = self.next()
        if kind != "ident":
            raise ParseError(f"expected an atom, found {val or 'end of input'!r}", pos)
        if val == "edge":
            if self.signature != GRAPH:
                raise ParseError("edge atom under poset signature", pos)
            self.expect("(")
            x = self.variable()
            self.expect(",")
            y = self.variable()
            self.expect(")")
            return Edge(x, y)
        if val in RESERVED:
            raise ParseError(f"{val!r} is a reserved word", pos)
        nxt = self.peek()[1]
        if nxt == "(":
            self.next()
            x = self.variable()
            self.expect(")")
            return Label(val, x)
        if nxt == "=":
            self.next()
            return Eq(Var(val), self.variable())
        if nxt == "<=":
            if self.signature != POSET:
                raise ParseError("<= atom under graph signature", pos)
            self.next()
            return Leq(Var(val), self.variable())
        raise ParseError(f"expected '=', '<=' or '(' after {val!r}", self.peek()[2])


def parse_formula(text: str, signature: str) -> Formula:
    """Parse the concrete syntax under the given signature."""
    return _Parser(text, signature).parse()


# ---------------------------------------------------------------------------
# EFO <-> induced-subgraph pattern translations

def pattern_formula(h) -> Formula:
    """EFO sentence asserting an induced copy of the (unlabeled) graph ``h``.

    Vertices 0..k-1 of ``h`` map to variables x1..xk; the quantifier-free
    matrix fixes every pair as an edge or a non-edge plus all disequalities.
    """
    k = h.n
    if k < 1:
        raise FormulaError("pattern graph needs at least one vertex")
    vs = [Var(f"x{i + 1}") for i in range(k)]
    parts: list[Formula] = []
    for i in range(k):
        for j in range(i + 1, k):
            parts.append(Not(Eq(vs[i], vs[j])))
            if h.has_edge(i, j):
                parts.append(Edge(vs[i], vs[j]))
            else:
                parts.append(Not(Edge(vs[i], vs[j])))
    matrix = big_and(parts, if_empty=Eq(vs[0], vs[0]))
    return exists_many(vs, matrix)


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _eval_qf(f: Formula, g, asg: dict[Var, int]) -> bool:
    if isinstance(f, Edge):
        return g.has_edge(asg[f.x], asg[f.y])
    if isinstance(f, Eq):
        return asg[f.x] == asg[f.y]
    if isinstance(f, Label):
        return asg[f.x] in g.labels.get(f.name, frozenset())
    if isinstance(f, Not):
        return not _eval_qf(f.sub, g, asg)
    if isinstance(f, And):
        return _eval_qf(f.left, g, asg) and _eval_qf(f.right, g, asg)
    if isinstance(f, Or):
        return _eval_qf(f.left, g, asg) or _eval_qf(f.right, g, asg)
    if isinstance(f, Implies):
        return (not _eval_qf(f.left, g, asg)) or _eval_qf(f.right, g, asg)
    raise FormulaError(f"not quantifier-free: {f!r}")


def efo_to_patterns(phi: Formula, max_vars: Optional[int] = None) -> list:
    """All pattern graphs equivalent to an EFO sentence.

    Enumerates every identification of the quantified variables and every
    (labelled) graph on the identified vertex set whose induced evaluation
    satisfies the matrix.  ``G |= phi`` iff some returned pattern embeds in
    ``G`` as an induced (label-respecting) subgraph.
    """
    from .geometry import LabeledGraph

    if max_vars is None:
        import os

        try:
            max_vars = int(os.environ.get("GEOMFO_SIZE_CAP", 6))
        except ValueError:
            max_vars = 6
    vs: list[Var] = []
    body = phi
    while isinstance(body, Exists):
        vs.append(body.var)
        body = body.sub
    if not vs or not is_quantifier_free(body):
        raise FormulaError("not an EFO sentence with quantifier-free matrix")
    if free_vars(body) - set(vs):
        raise FormulaError("matrix has free variables outside the prefix")
    if len(vs) > max_vars:
        raise FormulaError(f"EFO prefix of {len(vs)} variables exceeds bound {max_vars}")
    labels = sorted(label_names(body))

    seen = set()
    out = []
    for part in _set_partitions(list(range(len(vs)))):
        m = len(part)
        cls = {}
        for ci, block in enumerate(part):
            for idx in block:
                cls[vs[idx]] = ci
        pairs = list(itertools.combinations(range(m), 2))
        for edge_bits in itertools.product((False, True), repeat=len(pairs)):
            edges = {p for p, b in zip(pairs, edge_bits) if b}
            for label_bits in itertools.product(
                *(itertools.product((False, True), repeat=m) for _ in labels)
            ) if labels else [()]:
                lab = {
                    name: frozenset(i for i in range(m) if bits[i])
                    for name, bits in zip(labels, label_bits)
                }
                cand = LabeledGraph(m, edges, lab)
                if _eval_qf(body, cand, cls):
                    key = (m, frozenset(edges), tuple(sorted((k, v) for k, v in lab.items())))
                    if key not in seen:
                        seen.add(key)
                        out.append(cand)
    return out
