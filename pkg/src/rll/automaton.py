"""Alternating parity automata built from Fischer-Ladner closures.

States are the closure members; a.f states carry the single letter-transition
to f, every other decomposition edge becomes an epsilon-transition. 0 and sum
states are existential, top and meet states universal; states with a unique
move are assigned to the existential player (the choice is immaterial).
"""

from __future__ import annotations

from dataclasses import dataclass

from .closure import FlClosure
from .syntax import (Act, Alphabet, Expr, Meet, RllError, Sum, Top, print_expr)

EXISTENTIAL = "existential"
UNIVERSAL = "universal"


class AutomatonError(RllError):
    pass


@dataclass(frozen=True)
class Apa:
    """An alternating parity automaton with epsilon-transitions."""

    states: tuple[Expr, ...]
    initial: int
    letter_transitions: tuple[tuple[int, str, int], ...]
    epsilon_transitions: tuple[tuple[int, int], ...]
    owner: tuple[str, ...]
    priority: tuple[int, ...]
    alphabet: Alphabet


def state_owner(e: Expr) -> str:
    if isinstance(e, (Top, Meet)):
        return UNIVERSAL
    return EXISTENTIAL


def build_apa(c: FlClosure) -> Apa:
    """The automaton of the closure's root expression."""
    if c.priority is None:
        raise AutomatonError("closure needs priorities assigned first")
    letter_transitions = []
    epsilon_transitions = []
    for src, dst, kind in c.edges:
        if kind.startswith("act:"):
            letter_transitions.append((src, kind[4:], dst))
        else:
            epsilon_transitions.append((src, dst))
    owner = tuple(state_owner(m) for m in c.members)
    return Apa(c.members, 0, tuple(letter_transitions),
               tuple(epsilon_transitions), owner, c.priority, c.alphabet)


def export_dot(a: Apa) -> str:
    """DOT rendering; existential states are diamonds, universal are boxes.

    Node order is the closure member order, so output is byte-stable.
    """
    lines = ["digraph apa {", "  rankdir=LR;"]
    for i, m in enumerate(a.states):
        shape = "diamond" if a.owner[i] == EXISTENTIAL else "box"
        label = f"{print_expr(m)} [p={a.priority[i]}]"
        extra = ", penwidth=2" if i == a.initial else ""
        lines.append(f'  n{i} [shape={shape}, label="{label}"{extra}];')
    for src, letter, dst in a.letter_transitions:
        lines.append(f'  n{src} -> n{dst} [label="{letter}"];')
    for src, dst in a.epsilon_transitions:
        lines.append(f"  n{src} -> n{dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
