"""Fischer-Ladner closure, the one-step decomposition relation, and priorities.

The closure of a closed expression is the least set containing it and closed
under one-step decomposition: a.f steps to f, sums and meets step to their
components, and fixpoints step to their unfolding. Members are discovered
breadth-first from the root and deduplicated up to bound-variable renaming.

Priorities realize the parity acceptance condition: pick the Kahn topological
order r of the subformula order on members (discovery-order tie-breaks), and
set priority 2r+1 on mu-members, 2r on everything else. Ranks are injective
and monotone, so along any infinite trace the minimum priority seen infinitely
often belongs to the subformula-minimum member, whose binder decides the
winner (mu-members odd, nu-members even). Non-fixpoint members take the even
value 2r; this is harmless because a never-stabilizing trace's minimum
infinitely-occurring member is always a fixpoint expression.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .syntax import (Act, Alphabet, Expr, Meet, Mu, Nu, RllError, Sum, Top,
                     Var, Zero, alpha_key, free_vars, print_expr,
                     subexpressions, substitute)


class ClosureError(RllError):
    pass


@dataclass(frozen=True)
class FlClosure:
    """The closure of ``root``, with decomposition edges and priorities.

    ``edges`` holds (source index, target index, kind) with kind one of
    ``act:<letter>``, ``sum-left``, ``sum-right``, ``meet-left``,
    ``meet-right``, ``unfold``. ``subformula_pairs`` is the subformula order
    restricted to members, as index pairs (i, j) meaning member i occurs in
    member j. ``priority`` is None until assign_priorities has run.
    """

    root: Expr
    members: tuple[Expr, ...]
    edges: tuple[tuple[int, int, str], ...]
    subformula_pairs: frozenset[tuple[int, int]]
    alphabet: Alphabet
    priority: Optional[tuple[int, ...]] = None

    def successors(self, i: int) -> list[tuple[int, str]]:
        return [(dst, kind) for src, dst, kind in self.edges if src == i]

    def index_of(self, e: Expr) -> int:
        key = alpha_key(e)
        for i, m in enumerate(self.members):
            if alpha_key(m) == key:
                return i
        raise ClosureError(f"not a member: {print_expr(e)}")


def fl_successors(e: Expr) -> list[tuple[str, Expr]]:
    """The one-step decompositions of e, with their edge kinds."""
    if isinstance(e, Act):
        return [(f"act:{e.letter}", e.body)]
    if isinstance(e, Sum):
        return [("sum-left", e.left), ("sum-right", e.right)]
    if isinstance(e, Meet):
        return [("meet-left", e.left), ("meet-right", e.right)]
    if isinstance(e, (Mu, Nu)):
        return [("unfold", substitute(e.body, e.var, e))]
    if isinstance(e, (Zero, Top)):
        return []
    if isinstance(e, Var):
        raise ClosureError("closure is only defined for closed expressions")
    raise TypeError(f"not an expression: {e!r}")


def fl_closure(e: Expr, alphabet: Alphabet) -> FlClosure:
    """Breadth-first closure of a closed expression under decomposition."""
    if free_vars(e):
        raise ClosureError("closure is only defined for closed expressions")
    for sub in subexpressions(e):
        if isinstance(sub, Act) and sub.letter not in alphabet.letters:
            raise ClosureError(f"undeclared letter {sub.letter!r}")

    members: list[Expr] = [e]
    index: dict[str, int] = {alpha_key(e): 0}
    edges: list[tuple[int, int, str]] = []
    frontier = 0
    while frontier < len(members):
        src = frontier
        for kind, tgt in fl_successors(members[src]):
            key = alpha_key(tgt)
            if key not in index:
                index[key] = len(members)
                members.append(tgt)
            edges.append((src, index[key], kind))
        frontier += 1

    sub_keys = [frozenset(alpha_key(s) for s in subexpressions(m))
                for m in members]
    pairs = frozenset((i, j)
                      for i, mi in enumerate(members)
                      for j in range(len(members))
                      if alpha_key(mi) in sub_keys[j])
    return FlClosure(e, tuple(members), tuple(edges), pairs, alphabet)


def assign_priorities(c: FlClosure) -> FlClosure:
    """Fill priorities from a topological linearization of the subformula
    order (discovery-order tie-breaks): mu-members 2r+1, others 2r."""
    n = len(c.members)
    strictly_below = {j: {i for (i, j2) in c.subformula_pairs
                          if j2 == j and i != j} for j in range(n)}
    rank: dict[int, int] = {}
    placed: set[int] = set()
    for r in range(n):
        ready = [j for j in range(n)
                 if j not in placed and strictly_below[j] <= placed]
        nxt = min(ready)  # discovery-order tie-break
        rank[nxt] = r
        placed.add(nxt)
    prio = tuple(2 * rank[i] + 1 if isinstance(m, Mu) else 2 * rank[i]
                 for i, m in enumerate(c.members))
    return replace(c, priority=prio)


def closure_with_priorities(e: Expr, alphabet: Alphabet) -> FlClosure:
    return assign_priorities(fl_closure(e, alphabet))


def format_closure(c: FlClosure) -> str:
    """Stable line-oriented listing of members, edges and priorities."""
    lines = [f"root: {print_expr(c.root)}", "members:"]
    prio = c.priority or ()
    for i, m in enumerate(c.members):
        tag = f"  [p={prio[i]}]" if prio else ""
        lines.append(f"{i}: {print_expr(m)}{tag}")
    lines.append("edges:")
    for src, dst, kind in c.edges:
        lines.append(f"{src} -{kind}-> {dst}")
    return "\n".join(lines)
