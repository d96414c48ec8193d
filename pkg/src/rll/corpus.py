"""Seeded random generation of expressions and lassos for tests and selftest.

Expression shapes are drawn uniformly from the constructors feasible within
the remaining size budget; variables are only emitted under a binder, so a
generated expression is always closed at the top level. Fixed seeds make the
whole corpus reproducible.
"""

from __future__ import annotations

import random
from typing import Optional

from .semantics import Lasso
from .syntax import (Act, Alphabet, Expr, Meet, Mu, Nu, Sum, TOP, Var, ZERO)


def gen_expr(rng: random.Random, alphabet: Alphabet, size: int,
             bound: tuple[str, ...] = ()) -> Expr:
    """A random expression with exactly `size` AST nodes and free variables
    among `bound` (none when bound is empty)."""
    if size <= 1:
        leaves = ["zero", "top"] + (["var"] * 2 if bound else [])
        pick = rng.choice(leaves)
        if pick == "var":
            return Var(rng.choice(bound))
        return ZERO if pick == "zero" else TOP
    shapes = ["act", "mu", "nu"]
    if size >= 3:
        shapes += ["sum", "meet"]
    pick = rng.choice(shapes)
    if pick == "act":
        return Act(rng.choice(alphabet.letters),
                   gen_expr(rng, alphabet, size - 1, bound))
    if pick in ("mu", "nu"):
        var = f"X{len(bound)}"
        body = gen_expr(rng, alphabet, size - 1, bound + (var,))
        return Mu(var, body) if pick == "mu" else Nu(var, body)
    left_size = rng.randint(1, size - 2)
    left = gen_expr(rng, alphabet, left_size, bound)
    right = gen_expr(rng, alphabet, size - 1 - left_size, bound)
    return Sum(left, right) if pick == "sum" else Meet(left, right)


def gen_lasso(rng: random.Random, alphabet: Alphabet, max_prefix: int,
              max_period: int) -> Lasso:
    plen = rng.randint(0, max_prefix)
    vlen = rng.randint(1, max_period)
    u = tuple(rng.choice(alphabet.letters) for _ in range(plen))
    v = tuple(rng.choice(alphabet.letters) for _ in range(vlen))
    return Lasso(u, v, alphabet)


def gen_alphabet(rng: random.Random, max_letters: int = 3) -> Alphabet:
    k = rng.randint(1, max_letters)
    return Alphabet.plain(*"abc"[:k])


def agreement_pairs(seed: int, count: int, max_size: int = 12,
                    max_prefix: int = 3, max_period: int = 4,
                    alphabet: Optional[Alphabet] = None):
    """Seeded (expression, lasso) pairs for the oracle-agreement suites."""
    rng = random.Random(seed)
    for _ in range(count):
        ab = alphabet if alphabet is not None else gen_alphabet(rng)
        size = rng.randint(1, max_size)
        e = gen_expr(rng, ab, size)
        w = gen_lasso(rng, ab, max_prefix, max_period)
        yield e, w
