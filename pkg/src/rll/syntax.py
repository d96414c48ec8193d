"""Abstract syntax, parsing and printing for RLL expressions and muLTL formulas.

Everything here is immutable and pure: expressions and formulas are frozen
dataclasses, operations return fresh values, and structural comparison up to
bound-variable renaming goes through ``alpha_key``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional


class RllError(Exception):
    """Base class for user-facing errors raised by the toolkit."""


class ParseError(RllError):
    """Lexical or syntax error, with a character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class AlphabetError(RllError):
    """Bad alphabet declaration or use of an undeclared letter/proposition."""


KEYWORDS = {"mu", "nu", "top", "ff", "tt", "O", "alphabet", "props"}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


# ---------------------------------------------------------------------------
# Alphabets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Alphabet:
    """A finite ordered alphabet, optionally generated from a proposition basis.

    In powerset mode (``props`` not None) the letters are exactly the subsets
    of the basis, named ``{P,Q}`` with propositions in basis order, ordered by
    bitmask over the basis.
    """

    letters: tuple[str, ...]
    props: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if not self.letters:
            raise AlphabetError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise AlphabetError("letter names must be unique")
        if self.props is not None:
            if len(set(self.props)) != len(self.props):
                raise AlphabetError("proposition names must be unique")
            expected = tuple(subset_letter_name(s)
                             for s in _subsets_in_order(self.props))
            if self.letters != expected:
                raise AlphabetError("powerset alphabet letters must be all "
                                    "subsets of the basis, in bitmask order")

    @staticmethod
    def plain(*letters: str) -> "Alphabet":
        return Alphabet(tuple(letters))

    @staticmethod
    def powerset(*props: str) -> "Alphabet":
        basis = tuple(props)
        letters = tuple(subset_letter_name(s) for s in _subsets_in_order(basis))
        return Alphabet(letters, basis)

    @property
    def is_powerset(self) -> bool:
        return self.props is not None

    def letter_props(self, letter: str) -> frozenset[str]:
        """Propositions contained in a powerset letter."""
        if self.props is None:
            raise AlphabetError("alphabet has no proposition basis")
        if letter not in self.letters:
            raise AlphabetError(f"undeclared letter {letter!r}")
        body = letter[1:-1]
        return frozenset(body.split(",")) if body else frozenset()

    def header(self) -> str:
        """The declaration header line used in expression/formula files."""
        if self.props is not None:
            return "props " + " ".join(self.props) + " ;"
        return "alphabet " + " ".join(self.letters) + " ;"


def _subsets_in_order(basis: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    for mask in range(1 << len(basis)):
        yield tuple(p for i, p in enumerate(basis) if mask >> i & 1)


def subset_letter_name(subset: tuple[str, ...]) -> str:
    return "{" + ",".join(subset) + "}"


# ---------------------------------------------------------------------------
# RLL expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Act(Expr):
    letter: str
    body: Expr


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Meet(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mu(Expr):
    var: str
    body: Expr


@dataclass(frozen=True)
class Nu(Expr):
    var: str
    body: Expr


@dataclass(frozen=True)
class Zero(Expr):
    pass


@dataclass(frozen=True)
class Top(Expr):
    pass


ZERO = Zero()
TOP = Top()


def sum_of(terms: list[Expr]) -> Expr:
    """Right-associated sum; empty sum is 0, singleton is the term itself."""
    if not terms:
        return ZERO
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = Sum(t, acc)
    return acc


def meet_of(terms: list[Expr]) -> Expr:
    """Right-associated meet; empty meet is top."""
    if not terms:
        return TOP
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = Meet(t, acc)
    return acc


@lru_cache(maxsize=None)
def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Act):
        return free_vars(e.body)
    if isinstance(e, (Sum, Meet)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, (Mu, Nu)):
        return free_vars(e.body) - {e.var}
    return frozenset()


def expr_size(e: Expr) -> int:
    """Number of AST nodes."""
    if isinstance(e, Act):
        return 1 + expr_size(e.body)
    if isinstance(e, (Sum, Meet)):
        return 1 + expr_size(e.left) + expr_size(e.right)
    if isinstance(e, (Mu, Nu)):
        return 1 + expr_size(e.body)
    return 1


def subexpressions(e: Expr) -> Iterator[Expr]:
    """All subterms of e, including e itself (with repetitions)."""
    yield e
    if isinstance(e, Act):
        yield from subexpressions(e.body)
    elif isinstance(e, (Sum, Meet)):
        yield from subexpressions(e.left)
        yield from subexpressions(e.right)
    elif isinstance(e, (Mu, Nu)):
        yield from subexpressions(e.body)


def fresh_name(base: str, avoid: frozenset[str]) -> str:
    if base not in avoid:
        return base
    for i in itertools.count(1):
        cand = f"{base}_{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(e: Expr, var: str, replacement: Expr) -> Expr:
    """Capture-avoiding substitution of replacement for free occurrences of var."""
    if isinstance(e, Var):
        return replacement if e.name == var else e
    if isinstance(e, Act):
        return Act(e.letter, substitute(e.body, var, replacement))
    if isinstance(e, Sum):
        return Sum(substitute(e.left, var, replacement),
                   substitute(e.right, var, replacement))
    if isinstance(e, Meet):
        return Meet(substitute(e.left, var, replacement),
                    substitute(e.right, var, replacement))
    if isinstance(e, (Mu, Nu)):
        cls = type(e)
        if e.var == var or var not in free_vars(e.body):
            return e
        if e.var in free_vars(replacement):
            # rename the binder to dodge capture
            new = fresh_name(e.var,
                             free_vars(replacement) | free_vars(e.body) | {var})
            body = substitute(e.body, e.var, Var(new))
            return cls(new, substitute(body, var, replacement))
        return cls(e.var, substitute(e.body, var, replacement))
    return e


@lru_cache(maxsize=None)
def alpha_key(e: Expr) -> str:
    """Canonical serialization: alpha-equivalent expressions get equal keys."""
    out: list[str] = []
    counter = itertools.count()

    def go(t: Expr, env: dict[str, int]):
        if isinstance(t, Var):
            out.append(f"b{env[t.name]}" if t.name in env else f"f:{t.name};")
        elif isinstance(t, Act):
            out.append(f"a[{t.letter}](")
            go(t.body, env)
            out.append(")")
        elif isinstance(t, Sum):
            out.append("+(")
            go(t.left, env)
            out.append(",")
            go(t.right, env)
            out.append(")")
        elif isinstance(t, Meet):
            out.append("&(")
            go(t.left, env)
            out.append(",")
            go(t.right, env)
            out.append(")")
        elif isinstance(t, (Mu, Nu)):
            n = next(counter)
            out.append(("mu" if isinstance(t, Mu) else "nu") + f"{n}(")
            go(t.body, {**env, t.var: n})
            out.append(")")
        elif isinstance(t, Zero):
            out.append("0")
        else:
            out.append("T")

    go(e, {})
    return "".join(out)


def alpha_eq(a: Expr, b: Expr) -> bool:
    return alpha_key(a) == alpha_key(b)


# precedence levels: binder 0 < sum 1 < meet 2 < act 3 < atom 4
def print_expr(e: Expr, _prec: int = 0) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Act):
        return f"{e.letter}.{print_expr(e.body, 3)}"
    if isinstance(e, Sum):
        s = f"{print_expr(e.left, 1)} + {print_expr(e.right, 2)}"
        return f"({s})" if _prec > 1 else s
    if isinstance(e, Meet):
        s = f"{print_expr(e.left, 2)} & {print_expr(e.right, 3)}"
        return f"({s})" if _prec > 2 else s
    if isinstance(e, (Mu, Nu)):
        kw = "mu" if isinstance(e, Mu) else "nu"
        s = f"{kw} {e.var}. {print_expr(e.body, 0)}"
        return f"({s})" if _prec > 0 else s
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# muLTL formulas (negation normal form)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuLtlFormula:
    pass


@dataclass(frozen=True)
class Bot(MuLtlFormula):
    pass


@dataclass(frozen=True)
class TopF(MuLtlFormula):
    pass


@dataclass(frozen=True)
class Prop(MuLtlFormula):
    name: str


@dataclass(frozen=True)
class NegProp(MuLtlFormula):
    name: str


@dataclass(frozen=True)
class FVar(MuLtlFormula):
    name: str


@dataclass(frozen=True)
class Or(MuLtlFormula):
    left: MuLtlFormula
    right: MuLtlFormula


@dataclass(frozen=True)
class And(MuLtlFormula):
    left: MuLtlFormula
    right: MuLtlFormula


@dataclass(frozen=True)
class Next(MuLtlFormula):
    body: MuLtlFormula


@dataclass(frozen=True)
class MuF(MuLtlFormula):
    var: str
    body: MuLtlFormula


@dataclass(frozen=True)
class NuF(MuLtlFormula):
    var: str
    body: MuLtlFormula


BOT = Bot()
TT = TopF()


def and_of(parts: list[MuLtlFormula]) -> MuLtlFormula:
    """Right-associated conjunction; the empty conjunction is tt."""
    if not parts:
        return TT
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = And(p, acc)
    return acc


def negate_formula(phi: MuLtlFormula) -> MuLtlFormula:
    """De Morgan dual with self-dual O; an involution, total on open formulas."""
    if isinstance(phi, Bot):
        return TT
    if isinstance(phi, TopF):
        return BOT
    if isinstance(phi, Prop):
        return NegProp(phi.name)
    if isinstance(phi, NegProp):
        return Prop(phi.name)
    if isinstance(phi, FVar):
        return phi
    if isinstance(phi, Or):
        return And(negate_formula(phi.left), negate_formula(phi.right))
    if isinstance(phi, And):
        return Or(negate_formula(phi.left), negate_formula(phi.right))
    if isinstance(phi, Next):
        return Next(negate_formula(phi.body))
    if isinstance(phi, MuF):
        return NuF(phi.var, negate_formula(phi.body))
    if isinstance(phi, NuF):
        return MuF(phi.var, negate_formula(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def implies(a: MuLtlFormula, b: MuLtlFormula) -> MuLtlFormula:
    """The implication macro a -> b, i.e. negate(a) | b in NNF."""
    return Or(negate_formula(a), b)


def iff(a: MuLtlFormula, b: MuLtlFormula) -> MuLtlFormula:
    return And(implies(a, b), implies(b, a))


@lru_cache(maxsize=None)
def free_fvars(phi: MuLtlFormula) -> frozenset[str]:
    if isinstance(phi, FVar):
        return frozenset({phi.name})
    if isinstance(phi, (Or, And)):
        return free_fvars(phi.left) | free_fvars(phi.right)
    if isinstance(phi, Next):
        return free_fvars(phi.body)
    if isinstance(phi, (MuF, NuF)):
        return free_fvars(phi.body) - {phi.var}
    return frozenset()


def substitute_formula(phi: MuLtlFormula, var: str,
                       replacement: MuLtlFormula) -> MuLtlFormula:
    if isinstance(phi, FVar):
        return replacement if phi.name == var else phi
    if isinstance(phi, (Or, And)):
        cls = type(phi)
        return cls(substitute_formula(phi.left, var, replacement),
                   substitute_formula(phi.right, var, replacement))
    if isinstance(phi, Next):
        return Next(substitute_formula(phi.body, var, replacement))
    if isinstance(phi, (MuF, NuF)):
        cls = type(phi)
        if phi.var == var or var not in free_fvars(phi.body):
            return phi
        if phi.var in free_fvars(replacement):
            new = fresh_name(phi.var, free_fvars(replacement)
                             | free_fvars(phi.body) | {var})
            body = substitute_formula(phi.body, phi.var, FVar(new))
            return cls(new, substitute_formula(body, var, replacement))
        return cls(phi.var, substitute_formula(phi.body, var, replacement))
    return phi


@lru_cache(maxsize=None)
def alpha_key_formula(phi: MuLtlFormula) -> str:
    out: list[str] = []
    counter = itertools.count()

    def go(t: MuLtlFormula, env: dict[str, int]):
        if isinstance(t, FVar):
            out.append(f"b{env[t.name]}" if t.name in env else f"f:{t.name};")
        elif isinstance(t, Prop):
            out.append(f"p:{t.name};")
        elif isinstance(t, NegProp):
            out.append(f"n:{t.name};")
        elif isinstance(t, (Or, And)):
            out.append(("|" if isinstance(t, Or) else "&") + "(")
            go(t.left, env)
            out.append(",")
            go(t.right, env)
            out.append(")")
        elif isinstance(t, Next):
            out.append("O(")
            go(t.body, env)
            out.append(")")
        elif isinstance(t, (MuF, NuF)):
            n = next(counter)
            out.append(("mu" if isinstance(t, MuF) else "nu") + f"{n}(")
            go(t.body, {**env, t.var: n})
            out.append(")")
        elif isinstance(t, Bot):
            out.append("ff")
        else:
            out.append("tt")

    go(phi, {})
    return "".join(out)


def alpha_eq_formula(a: MuLtlFormula, b: MuLtlFormula) -> bool:
    return alpha_key_formula(a) == alpha_key_formula(b)


# precedence: binder 0 < or 1 < and 2 < O 3 < atom 4
def print_formula(phi: MuLtlFormula, _prec: int = 0) -> str:
    if isinstance(phi, Bot):
        return "ff"
    if isinstance(phi, TopF):
        return "tt"
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, NegProp):
        return f"~{phi.name}"
    if isinstance(phi, FVar):
        return phi.name
    if isinstance(phi, Or):
        s = f"{print_formula(phi.left, 1)} | {print_formula(phi.right, 2)}"
        return f"({s})" if _prec > 1 else s
    if isinstance(phi, And):
        s = f"{print_formula(phi.left, 2)} & {print_formula(phi.right, 3)}"
        return f"({s})" if _prec > 2 else s
    if isinstance(phi, Next):
        return f"O {print_formula(phi.body, 3)}"
    if isinstance(phi, (MuF, NuF)):
        kw = "mu" if isinstance(phi, MuF) else "nu"
        s = f"{kw} {phi.var}. {print_formula(phi.body, 0)}"
        return f"({s})" if _prec > 0 else s
    raise TypeError(f"not a formula: {phi!r}")


def formula_size(phi: MuLtlFormula) -> int:
    if isinstance(phi, (Or, And)):
        return 1 + formula_size(phi.left) + formula_size(phi.right)
    if isinstance(phi, Next):
        return 1 + formula_size(phi.body)
    if isinstance(phi, (MuF, NuF)):
        return 1 + formula_size(phi.body)
    return 1


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


_SYMBOLS = ["<->", "->", "+", "&", "|", "~", "!", ".", "(", ")", "{", "}", ",",
            ";", "0"]


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(Token("ident", m.group(), i))
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(Token("eof", "", n))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.value!r}", tok.pos)
        return self.next()


def _parse_letter(ts: _TokenStream, alphabet: Alphabet) -> str:
    """A letter token: an identifier, or {P,Q} in powerset mode."""
    tok = ts.peek()
    if tok.kind == "{":
        ts.next()
        names = []
        if ts.peek().kind != "}":
            names.append(ts.expect("ident").value)
            while ts.peek().kind == ",":
                ts.next()
                names.append(ts.expect("ident").value)
        ts.expect("}")
        if alphabet.props is None:
            raise AlphabetError("powerset letter used with a plain alphabet")
        for p in names:
            if p not in alphabet.props:
                raise AlphabetError(f"undeclared proposition {p!r}")
        in_order = tuple(p for p in alphabet.props if p in names)
        return subset_letter_name(in_order)
    if tok.kind == "ident":
        return ts.next().value
    raise ParseError(f"expected a letter, found {tok.value!r}", tok.pos)


# ---------------------------------------------------------------------------
# Expression parser
# ---------------------------------------------------------------------------

def parse_expr(text: str, alphabet: Alphabet, require_closed: bool = False) -> Expr:
    """Parse an RLL expression.

    Grammar (binders weakest and maximally right, & tighter than +, a.e
    tightest): ``0 | top | IDENT | LETTER.e | e+e | e&e | (mu|nu) X. e | (e)``.
    """
    ts = _TokenStream(tokenize(text))
    e = _parse_expr(ts, alphabet)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.value!r}", tok.pos)
    if require_closed and free_vars(e):
        names = ", ".join(sorted(free_vars(e)))
        raise ParseError(f"expression is not closed (free: {names})", 0)
    return e


def _parse_expr(ts: _TokenStream, ab: Alphabet) -> Expr:
    tok = ts.peek()
    if tok.kind == "ident" and tok.value in ("mu", "nu"):
        return _parse_binder(ts, ab)
    return _parse_sum(ts, ab)


def _parse_binder(ts: _TokenStream, ab: Alphabet) -> Expr:
    kw = ts.next().value
    var = _parse_var_name(ts)
    ts.expect(".")
    body = _parse_expr(ts, ab)
    return Mu(var, body) if kw == "mu" else Nu(var, body)


def _parse_var_name(ts: _TokenStream) -> str:
    tok = ts.expect("ident")
    if tok.value in KEYWORDS:
        raise ParseError(f"keyword {tok.value!r} cannot be a variable", tok.pos)
    return tok.value


def _parse_sum(ts: _TokenStream, ab: Alphabet) -> Expr:
    e = _parse_meet(ts, ab)
    while ts.peek().kind == "+":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return Sum(e, _parse_binder(ts, ab))  # trailing binder, max right
        e = Sum(e, _parse_meet(ts, ab))
    return e


def _parse_meet(ts: _TokenStream, ab: Alphabet) -> Expr:
    e = _parse_act(ts, ab)
    while ts.peek().kind == "&":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return Meet(e, _parse_binder(ts, ab))
        e = Meet(e, _parse_act(ts, ab))
    return e


def _parse_act(ts: _TokenStream, ab: Alphabet) -> Expr:
    tok = ts.peek()
    if tok.kind == "{" or (tok.kind == "ident"
                           and ts.tokens[ts.i + 1].kind == "."
                           and tok.value not in ("mu", "nu")):
        pos = tok.pos
        letter = _parse_letter(ts, ab)
        if letter not in ab.letters:
            raise AlphabetError(f"undeclared letter {letter!r} at position {pos}")
        ts.expect(".")
        return Act(letter, _parse_act(ts, ab))
    return _parse_atom(ts, ab)


def _parse_atom(ts: _TokenStream, ab: Alphabet) -> Expr:
    tok = ts.peek()
    if tok.kind == "0":
        ts.next()
        return ZERO
    if tok.kind == "(":
        ts.next()
        e = _parse_expr(ts, ab)
        ts.expect(")")
        return e
    if tok.kind == "ident":
        if tok.value == "top":
            ts.next()
            return TOP
        return Var(_parse_var_name(ts))
    raise ParseError(f"expected an expression, found {tok.value!r}", tok.pos)


# ---------------------------------------------------------------------------
# Formula parser (with ->, <->, ! sugar desugared into NNF)
# ---------------------------------------------------------------------------

def parse_formula(text: str, alphabet: Alphabet,
                  require_closed: bool = False) -> MuLtlFormula:
    """Parse a muLTL formula over a powerset alphabet into NNF."""
    if alphabet.props is None:
        raise AlphabetError("formulas need an alphabet with a proposition basis")
    ts = _TokenStream(tokenize(text))
    phi = _parse_formula(ts, alphabet)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.value!r}", tok.pos)
    if require_closed and free_fvars(phi):
        names = ", ".join(sorted(free_fvars(phi)))
        raise ParseError(f"formula is not closed (free: {names})", 0)
    return phi


def _parse_formula(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    tok = ts.peek()
    if tok.kind == "ident" and tok.value in ("mu", "nu"):
        return _parse_fbinder(ts, ab)
    return _parse_iff(ts, ab)


def _parse_fbinder(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    kw = ts.next().value
    var = _parse_var_name(ts)
    if var in ab.props:
        raise ParseError(f"variable {var!r} clashes with a proposition", 0)
    ts.expect(".")
    body = _parse_formula(ts, ab)
    return MuF(var, body) if kw == "mu" else NuF(var, body)


def _parse_iff(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    phi = _parse_impl(ts, ab)
    while ts.peek().kind == "<->":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return iff(phi, _parse_fbinder(ts, ab))
        phi = iff(phi, _parse_impl(ts, ab))
    return phi


def _parse_impl(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    phi = _parse_or(ts, ab)
    if ts.peek().kind == "->":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return implies(phi, _parse_fbinder(ts, ab))
        return implies(phi, _parse_impl(ts, ab))  # right-associative
    return phi


def _parse_or(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    phi = _parse_and(ts, ab)
    while ts.peek().kind == "|":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return Or(phi, _parse_fbinder(ts, ab))
        phi = Or(phi, _parse_and(ts, ab))
    return phi


def _parse_and(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    phi = _parse_funary(ts, ab)
    while ts.peek().kind == "&":
        ts.next()
        nxt = ts.peek()
        if nxt.kind == "ident" and nxt.value in ("mu", "nu"):
            return And(phi, _parse_fbinder(ts, ab))
        phi = And(phi, _parse_funary(ts, ab))
    return phi


def _parse_funary(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    tok = ts.peek()
    if tok.kind == "ident" and tok.value == "O":
        ts.next()
        return Next(_parse_funary(ts, ab))
    if tok.kind == "~":
        ts.next()
        name = ts.expect("ident")
        if name.value not in ab.props:
            raise AlphabetError(f"undeclared proposition {name.value!r}")
        return NegProp(name.value)
    if tok.kind == "!":
        ts.next()
        return negate_formula(_parse_funary(ts, ab))
    return _parse_fatom(ts, ab)


def _parse_fatom(ts: _TokenStream, ab: Alphabet) -> MuLtlFormula:
    tok = ts.peek()
    if tok.kind == "(":
        ts.next()
        phi = _parse_formula(ts, ab)
        ts.expect(")")
        return phi
    if tok.kind == "ident":
        if tok.value == "ff":
            ts.next()
            return BOT
        if tok.value == "tt":
            ts.next()
            return TT
        name = _parse_var_name(ts)
        return Prop(name) if name in ab.props else FVar(name)
    raise ParseError(f"expected a formula, found {tok.value!r}", tok.pos)


# ---------------------------------------------------------------------------
# Alphabet headers and self-contained files
# ---------------------------------------------------------------------------

def parse_alphabet_header(text: str) -> tuple[Alphabet, str]:
    """Split off a leading ``alphabet a b ;`` or ``props P Q ;`` declaration.

    Returns the alphabet and the remaining text.
    """
    tokens = tokenize(text)
    if not tokens or tokens[0].kind != "ident" \
            or tokens[0].value not in ("alphabet", "props"):
        raise ParseError("expected 'alphabet ... ;' or 'props ... ;' header", 0)
    mode = tokens[0].value
    names: list[str] = []
    i = 1
    while tokens[i].kind == "ident":
        names.append(tokens[i].value)
        i += 1
    semi = tokens[i]
    if semi.kind != ";":
        raise ParseError("alphabet header must end with ';'", semi.pos)
    rest = text[semi.pos + 1:]
    if mode == "alphabet":
        if not names:
            raise AlphabetError("alphabet declaration needs at least one letter")
        return Alphabet.plain(*names), rest
    return Alphabet.powerset(*names), rest


def parse_expr_file(text: str, require_closed: bool = False) -> tuple[Alphabet, Expr]:
    ab, rest = parse_alphabet_header(text)
    return ab, parse_expr(rest, ab, require_closed=require_closed)


def parse_formula_file(text: str,
                       require_closed: bool = False) -> tuple[Alphabet, MuLtlFormula]:
    ab, rest = parse_alphabet_header(text)
    return ab, parse_formula(rest, ab, require_closed=require_closed)
