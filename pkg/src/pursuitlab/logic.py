"""First-order logic over the graph vocabulary {E, =}.

AST, recursive-descent parser, printer, a compiled brute-force evaluator,
and constructors for the extension axioms and the game winning-condition
sentences.  The edge atom is irreflexive and symmetric: E(x,x) is false on
every graph, and reflexive movement lives in the game semantics instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Union

from .graphs import Graph

__all__ = [
    "Formula",
    "Forall",
    "Exists",
    "And",
    "Or",
    "Implies",
    "Not",
    "Edge",
    "Eq",
    "LogicError",
    "ParseError",
    "parse",
    "to_text",
    "free_variables",
    "evaluate",
    "extension_axiom",
    "escape_k",
    "trap_escape",
    "complementary_escape",
    "tandem_capture",
    "isolated_vertices",
    "empty_graph",
    "builtin",
    "BUILTIN_NAMES",
]


class LogicError(ValueError):
    """Bad formula construction or evaluation arguments."""


class ParseError(LogicError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Edge:
    a: str
    b: str


@dataclass(frozen=True)
class Eq:
    a: str
    b: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Edge, Eq, Not, And, Or, Implies, Forall, Exists]

_BINARY = (And, Or, Implies)
_QUANT = (Forall, Exists)


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, (Edge, Eq)):
        return frozenset((f.a, f.b))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, _BINARY):
        return free_variables(f.lhs) | free_variables(f.rhs)
    if isinstance(f, _QUANT):
        return free_variables(f.body) - {f.var}
    raise LogicError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Parsing.  Grammar (EBNF):
#   formula := quant | impl
#   quant   := ("forall"|"exists") IDENT formula
#   impl    := or ("->" impl)?
#   or      := and ("|" and)*
#   and     := unary ("&" unary)*
#   unary   := "!" unary | "(" formula ")" | atom
#   atom    := "E(" IDENT "," IDENT ")" | IDENT "=" IDENT
#   IDENT   := [a-z][a-z0-9_]*
# Precedence ! > & > | > ->, implication right-associative, quantifier
# bodies extend as far right as possible.

_TOKEN_RE = re.compile(r"\s*(->|[()!&|,=]|E(?=\()|[a-z][a-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos + len(rest) - len(stripped))
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope: list[str] = []

    def _peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def _next(self) -> str:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of input", len(self.text))
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def _expect(self, tok: str):
        got = self._peek()
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}", self._pos())
        self.i += 1

    def formula(self) -> Formula:
        if self._peek() in ("forall", "exists"):
            kind = self._next()
            pos = self._pos()
            var = self._ident()
            if var in self.scope:
                raise ParseError(f"variable {var!r} is already quantified on this branch", pos)
            self.scope.append(var)
            body = self.formula()
            self.scope.pop()
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        return self.impl()

    def impl(self) -> Formula:
        lhs = self.disj()
        if self._peek() == "->":
            self._next()
            return Implies(lhs, self.impl())
        return lhs

    def disj(self) -> Formula:
        f = self.conj()
        while self._peek() == "|":
            self._next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self._peek() == "&":
            self._next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self._peek()
        if tok == "!":
            self._next()
            return Not(self.unary())
        if tok == "(":
            self._next()
            f = self.formula()
            self._expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        tok = self._peek()
        if tok == "E":
            self._next()
            self._expect("(")
            a = self._ident()
            self._expect(",")
            b = self._ident()
            self._expect(")")
            return Edge(a, b)
        a = self._ident()
        self._expect("=")
        b = self._ident()
        return Eq(a, b)

    def _ident(self) -> str:
        pos = self._pos()
        tok = self._next()
        if not re.fullmatch(r"[a-z][a-z0-9_]*", tok) or tok in ("forall", "exists"):
            raise ParseError(f"expected identifier, found {tok!r}", pos)
        return tok


def parse(text: str) -> Formula:
    """Parse a sentence; rejects free variables and shadowed quantifiers."""
    p = _Parser(text)
    f = p.formula()
    if p.i < len(p.tokens):
        raise ParseError(f"unexpected trailing token {p._peek()!r}", p._pos())
    free = free_variables(f)
    if free:
        raise ParseError(
            "sentence has free variables: " + ", ".join(sorted(free)), len(text)
        )
    return f


def _operand(f: Formula) -> str:
    # Quantifiers are only grammatical at formula level or inside parens.
    text = to_text(f)
    return "(" + text + ")" if isinstance(f, _QUANT) else text


def to_text(f: Formula) -> str:
    """Print a formula; parse(to_text(f)) returns an identical AST."""
    if isinstance(f, Edge):
        return f"E({f.a},{f.b})"
    if isinstance(f, Eq):
        return f"{f.a} = {f.b}"
    if isinstance(f, Not):
        inner = to_text(f.body)
        if isinstance(f.body, (Edge, Not)):
            return "!" + inner
        if isinstance(f.body, _BINARY):
            return "!" + inner  # binaries already carry parentheses
        return "!(" + inner + ")"
    if isinstance(f, And):
        return f"({_operand(f.lhs)} & {_operand(f.rhs)})"
    if isinstance(f, Or):
        return f"({_operand(f.lhs)} | {_operand(f.rhs)})"
    if isinstance(f, Implies):
        return f"({_operand(f.lhs)} -> {_operand(f.rhs)})"
    if isinstance(f, Forall):
        return f"forall {f.var} {to_text(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var} {to_text(f.body)}"
    raise LogicError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Evaluation: plain backtracking with short-circuiting, compiled once per
# sentence into a single Python expression built from any()/all() chains over
# bitmask adjacency rows.  Worst case n**q for q quantifiers.


def _emit(f: Formula, names: dict[str, str], counter: list[int]) -> str:
    if isinstance(f, Edge):
        a, b = names[f.a], names[f.b]
        return f"((_adj[{a}] >> {b}) & 1)"
    if isinstance(f, Eq):
        return f"({names[f.a]} == {names[f.b]})"
    if isinstance(f, Not):
        return f"(not {_emit(f.body, names, counter)})"
    if isinstance(f, And):
        return f"({_emit(f.lhs, names, counter)} and {_emit(f.rhs, names, counter)})"
    if isinstance(f, Or):
        return f"({_emit(f.lhs, names, counter)} or {_emit(f.rhs, names, counter)})"
    if isinstance(f, Implies):
        return f"((not {_emit(f.lhs, names, counter)}) or {_emit(f.rhs, names, counter)})"
    if isinstance(f, _QUANT):
        counter[0] += 1
        py = f"_v{counter[0]}"
        inner = _emit(f.body, {**names, f.var: py}, counter)
        fn = "all" if isinstance(f, Forall) else "any"
        return f"{fn}({inner} for {py} in _rng)"
    raise LogicError(f"not a formula node: {f!r}")


@lru_cache(maxsize=512)
def _compile(f: Formula) -> Callable[[tuple[int, ...], range], bool]:
    expr = _emit(f, {}, [0])
    return eval(f"lambda _adj, _rng: bool({expr})", {"__builtins__": {"all": all, "any": any, "bool": bool}})


def evaluate(f: Formula, g: Graph) -> bool:
    """Tarskian truth of a sentence over the universe 0..n-1 of g."""
    free = free_variables(f)
    if free:
        raise LogicError("evaluate requires a sentence; free variables: " + ", ".join(sorted(free)))
    return _compile(f)(g.adjacency, range(g.n))


# ---------------------------------------------------------------------------
# Sentence constructors.


def _conj(parts: list[Formula]) -> Formula:
    if not parts:
        raise LogicError("empty conjunction")
    return reduce(And, parts)


def extension_axiom(m: int, n: int) -> Formula:
    """The extension axiom with n prescribed vertices, m of them adjacent.

    For all distinct x1..xn there is a z distinct from all of them, adjacent
    to x1..xm and non-adjacent to x(m+1)..xn.
    """
    if n < 1:
        raise LogicError(f"need n >= 1, got n={n}")
    if not 0 <= m <= n:
        raise LogicError(f"need 0 <= m <= n, got m={m}, n={n}")
    xs = [f"x{i}" for i in range(1, n + 1)]
    z = "z"
    body_parts: list[Formula] = [Not(Eq(z, x)) for x in xs]
    body_parts += [Edge(z, xs[i]) for i in range(m)]
    body_parts += [Not(Edge(z, xs[i])) for i in range(m, n)]
    inner: Formula = Exists(z, _conj(body_parts))
    guard = [Not(Eq(xs[i], xs[j])) for i in range(n) for j in range(i + 1, n)]
    if guard:
        inner = Implies(_conj(guard), inner)
    for x in reversed(xs):
        inner = Forall(x, inner)
    return inner


def escape_k(k: int) -> Formula:
    """Robber-escape sentence against k cops.

    For all distinct cop spots x1..xk and robber spot y there is a move
    target z adjacent to y and out of reach of every cop.
    """
    if k < 1:
        raise LogicError(f"need k >= 1, got {k}")
    xs = [f"x{i}" for i in range(1, k + 1)]
    y, z = "y", "z"
    guard_parts = [Not(Eq(xs[i], xs[j])) for i in range(k) for j in range(i + 1, k)]
    guard_parts += [Not(Eq(x, y)) for x in xs]
    cons = [Not(Eq(x, z)) for x in xs]
    cons.append(Not(Eq(y, z)))
    cons += [Not(Edge(x, z)) for x in xs]
    cons.append(Edge(y, z))
    inner: Formula = Exists(z, Implies(_conj(guard_parts), _conj(cons)))
    # Quantifier prefix: all cops, then the robber, then the witness.
    body = inner
    body = Forall(y, body)
    for x in reversed(xs):
        body = Forall(x, body)
    return body


def trap_escape(m: int, t: int) -> Formula:
    """Robber-escape sentence against m cops holding t placed traps."""
    if m < 1 or t < 1:
        raise LogicError(f"need m >= 1 and t >= 1, got m={m}, t={t}")
    xs = [f"x{i}" for i in range(1, m + 1)]
    ts = [f"t{i}" for i in range(1, t + 1)]
    y, z = "y", "z"
    guard: list[Formula] = []
    for x in xs:
        for tv in ts:
            guard += [Not(Eq(x, tv)), Not(Eq(y, x)), Not(Eq(y, tv))]
    guard += [Not(Eq(xs[i], xs[j])) for i in range(m) for j in range(i + 1, m)]
    guard += [Not(Eq(ts[i], ts[j])) for i in range(t) for j in range(i + 1, t)]
    cons: list[Formula] = [Not(Eq(z, x)) for x in xs]
    cons += [Not(Eq(z, tv)) for tv in ts]
    cons.append(Not(Eq(y, z)))
    cons += [Not(Edge(z, x)) for x in xs]
    cons.append(Edge(y, z))
    inner: Formula = Exists(z, Implies(_conj(guard), _conj(cons)))
    body = Forall(y, inner)
    for tv in reversed(ts):
        body = Forall(tv, body)
    for x in reversed(xs):
        body = Forall(x, body)
    return body


def complementary_escape() -> Formula:
    """Escape sentence when the cop moves on the complementary edge set."""
    x, y, z = "x", "y", "z"
    return Forall(x, Forall(y, Exists(z, Implies(Not(Eq(x, y)), And(Edge(y, z), Edge(x, z))))))


def tandem_capture() -> Formula:
    """One-move capture sentence for a tandem cop pair."""
    x1, x2, y, z = "x1", "x2", "y", "z"
    guard = _conj([Not(Eq(x1, x2)), Not(Eq(x1, y)), Not(Eq(x2, y))])
    cons = _conj([Not(Eq(x1, z)), Not(Eq(x2, z)), Not(Eq(y, z)), Edge(x1, z), Edge(y, z)])
    return Forall(x1, Forall(x2, Forall(y, Exists(z, Implies(guard, cons)))))


def isolated_vertices(r: int) -> Formula:
    """Witness sentence naming r isolated vertices.

    No pairwise-distinctness guard is imposed on the witnesses, so the
    sentence is already satisfied once a single isolated vertex exists.
    """
    if r < 1:
        raise LogicError(f"need r >= 1, got {r}")
    xs = [f"x{i}" for i in range(1, r + 1)]
    y = "y"
    body = _conj([Or(Eq(y, x), Not(Edge(y, x))) for x in xs])
    f: Formula = Forall(y, body)
    for x in reversed(xs):
        f = Exists(x, f)
    return f


def empty_graph() -> Formula:
    """The graph has no edges at all."""
    return Forall("x", Forall("y", Not(Edge("x", "y"))))


BUILTIN_NAMES = (
    "escape_k",
    "trap_escape",
    "complementary_escape",
    "tandem_capture",
    "isolated_vertices",
    "empty_graph",
)

_BUILTINS: dict[str, Callable[..., Formula]] = {
    "escape_k": escape_k,
    "trap_escape": trap_escape,
    "complementary_escape": complementary_escape,
    "tandem_capture": tandem_capture,
    "isolated_vertices": isolated_vertices,
    "empty_graph": empty_graph,
}


def builtin(name: str, *params: int) -> Formula:
    """Dispatch to a named winning-condition constructor."""
    if name not in _BUILTINS:
        raise LogicError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return _BUILTINS[name](*params)
