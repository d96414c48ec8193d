"""Proof checking for the equational calculus and the muLTL Hilbert system,
plus a generator for complement derivations.

A derivation is data, not search: an ordered list of steps, each carrying a
claim, a rule name, an instantiation, premise ids, and optionally a
hypothetical sub-derivation (for the quantifier-free duality rules). Checking
rebuilds every rule instance from the recorded instantiation and compares with
the stated claim up to bound-variable renaming; inequational claims e <= f
are compared as their defining equations e+f = f when matching schemata.

Two tiers: "strict" admits the lattice/homomorphism/partition axioms, the
fixpoint rules, the duality rules and structural reasoning; "extended" also
admits bool_taut steps, which decide quasi-equations over closed atoms in the
two-element lattice (sound because closed expressions provably form a Boolean
algebra, with e^c recognized as the Boolean negation of e).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from . import algebra
from .syntax import (Act, Alphabet, Expr, Meet, Mu, MuF, MuLtlFormula, Next,
                     Nu, NuF, Or, RllError, Sum, TOP, Top, Var, ZERO, Zero,
                     alpha_eq, alpha_eq_formula, alpha_key, alpha_key_formula,
                     And, Bot, FVar, NegProp, Prop, TopF, free_fvars,
                     free_vars, fresh_name, implies, iff, negate_formula,
                     parse_expr, parse_formula, print_expr, print_formula,
                     subexpressions, substitute, substitute_formula, sum_of)


class CalculusError(RllError):
    pass


# ---------------------------------------------------------------------------
# Derivation data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    rel: str  # "eq" | "leq"
    lhs: Expr
    rhs: Expr

    def __post_init__(self):
        if self.rel not in ("eq", "leq"):
            raise CalculusError(f"bad claim relation {self.rel!r}")

    def as_equation(self) -> tuple[Expr, Expr]:
        """e <= f read definitionally as e+f = f."""
        if self.rel == "leq":
            return Sum(self.lhs, self.rhs), self.rhs
        return self.lhs, self.rhs


@dataclass(frozen=True)
class FormulaClaim:
    formula: MuLtlFormula


AnyClaim = Union[Claim, FormulaClaim]


@dataclass
class HypContext:
    fresh: list[str]
    steps: list["Step"]


@dataclass
class Step:
    sid: str
    claim: AnyClaim
    rule: str
    subst: dict = field(default_factory=dict)
    premises: list[str] = field(default_factory=list)
    hyp: Optional[HypContext] = None


@dataclass
class Derivation:
    system: str  # "rll" | "multl"
    tier: str  # "strict" | "extended"
    alphabet: Alphabet
    steps: list[Step]

    def conclusion(self) -> AnyClaim:
        return self.steps[-1].claim


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    step: Optional[str] = None
    reason: Optional[str] = None

    @staticmethod
    def ok() -> "Verdict":
        return Verdict(True)

    @staticmethod
    def rejected(step: str, reason: str) -> "Verdict":
        return Verdict(False, step, reason)


def claims_match(a: Claim, b: Claim) -> bool:
    la, ra = a.as_equation()
    lb, rb = b.as_equation()
    return alpha_eq(la, lb) and alpha_eq(ra, rb)


# ---------------------------------------------------------------------------
# JSON (de)serialization
# ---------------------------------------------------------------------------

def derivation_from_json(data: dict) -> Derivation:
    system = data["system"]
    tier = data.get("tier", "strict")
    if system not in ("rll", "multl"):
        raise CalculusError(f"unknown proof system {system!r}")
    if tier not in ("strict", "extended"):
        raise CalculusError(f"unknown tier {tier!r}")
    names = data["alphabet"]
    ab = Alphabet.powerset(*names) if system == "multl" else Alphabet.plain(*names)

    def load_step(s: dict) -> Step:
        claim = s["claim"]
        if system == "multl":
            parsed: AnyClaim = FormulaClaim(parse_formula(claim["formula"], ab))
        else:
            parsed = Claim(claim["rel"], parse_expr(claim["lhs"], ab),
                           parse_expr(claim["rhs"], ab))
        hyp = None
        if s.get("hyp") is not None:
            hyp = HypContext(list(s["hyp"]["fresh"]),
                             [load_step(t) for t in s["hyp"]["steps"]])
        return Step(s["id"], parsed, s["rule"], dict(s.get("subst") or {}),
                    list(s.get("premises") or []), hyp)

    return Derivation(system, tier, ab,
                      [load_step(s) for s in data["steps"]])


def derivation_to_json(d: Derivation) -> dict:
    names = list(d.alphabet.props if d.system == "multl" else d.alphabet.letters)

    def dump_step(s: Step) -> dict:
        if isinstance(s.claim, FormulaClaim):
            claim = {"formula": print_formula(s.claim.formula)}
        else:
            claim = {"rel": s.claim.rel, "lhs": print_expr(s.claim.lhs),
                     "rhs": print_expr(s.claim.rhs)}
        out = {"id": s.sid, "claim": claim, "rule": s.rule}
        if s.subst:
            out["subst"] = s.subst
        if s.premises:
            out["premises"] = s.premises
        if s.hyp is not None:
            out["hyp"] = {"fresh": s.hyp.fresh,
                          "steps": [dump_step(t) for t in s.hyp.steps]}
        return out

    return {"system": d.system, "tier": d.tier, "alphabet": names,
            "steps": [dump_step(s) for s in d.steps]}


def load_proof_file(path: str) -> Derivation:
    with open(path, "r", encoding="utf-8") as fh:
        return derivation_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Equational axiom schemata
# ---------------------------------------------------------------------------

def _schema_claim(name: str, p: dict, alphabet: Alphabet) -> Claim:
    """The claim of an axiom schema instance. p maps parameter names to
    expressions (e, f, g), letters (a, b) or binder names (X)."""
    e, f, g = p.get("e"), p.get("f"), p.get("g")
    if name == "plus_zero":
        return Claim("eq", Sum(e, ZERO), e)
    if name == "plus_assoc":
        return Claim("eq", Sum(e, Sum(f, g)), Sum(Sum(e, f), g))
    if name == "plus_comm":
        return Claim("eq", Sum(e, f), Sum(f, e))
    if name == "plus_idem":
        return Claim("eq", Sum(e, e), e)
    if name == "plus_absorb":
        return Claim("eq", Sum(e, Meet(e, f)), e)
    if name == "plus_dist":
        return Claim("eq", Sum(e, Meet(f, g)), Meet(Sum(e, f), Sum(e, g)))
    if name == "meet_top":
        return Claim("eq", Meet(e, TOP), e)
    if name == "meet_assoc":
        return Claim("eq", Meet(e, Meet(f, g)), Meet(Meet(e, f), g))
    if name == "meet_comm":
        return Claim("eq", Meet(e, f), Meet(f, e))
    if name == "meet_idem":
        return Claim("eq", Meet(e, e), e)
    if name == "meet_absorb":
        return Claim("eq", Meet(e, Sum(e, f)), e)
    if name == "meet_dist":
        return Claim("eq", Meet(e, Sum(f, g)), Sum(Meet(e, f), Meet(e, g)))
    if name == "act_zero":
        return Claim("eq", Act(p["a"], ZERO), ZERO)
    if name == "act_plus":
        return Claim("eq", Act(p["a"], Sum(e, f)),
                     Sum(Act(p["a"], e), Act(p["a"], f)))
    if name == "act_meet":
        return Claim("eq", Act(p["a"], Meet(e, f)),
                     Meet(Act(p["a"], e), Act(p["a"], f)))
    if name == "act_disjoint":
        if p["a"] == p["b"]:
            raise CalculusError("act_disjoint needs two distinct letters")
        return Claim("eq", Meet(Act(p["a"], e), Act(p["b"], f)), ZERO)
    if name == "top_partition":
        return Claim("eq", TOP,
                     sum_of([Act(a, TOP) for a in alphabet.letters]))
    if name == "zero_def":
        return Claim("eq", ZERO, Mu("X", Var("X")))
    if name == "top_def":
        return Claim("eq", TOP, Nu("X", Var("X")))
    if name == "prefix":
        body, x = p["e"], p["X"]
        mu = Mu(x, body)
        return Claim("leq", substitute(body, x, mu), mu)
    if name == "postfix":
        body, x = p["e"], p["X"]
        nu = Nu(x, body)
        return Claim("leq", nu, substitute(body, x, nu))
    raise CalculusError(f"unknown axiom schema {name!r}")


_AXIOM_PARAMS = {
    "plus_zero": ("e",), "plus_assoc": ("e", "f", "g"), "plus_comm": ("e", "f"),
    "plus_idem": ("e",), "plus_absorb": ("e", "f"), "plus_dist": ("e", "f", "g"),
    "meet_top": ("e",), "meet_assoc": ("e", "f", "g"), "meet_comm": ("e", "f"),
    "meet_idem": ("e",), "meet_absorb": ("e", "f"), "meet_dist": ("e", "f", "g"),
    "act_zero": ("a",), "act_plus": ("a", "e", "f"), "act_meet": ("a", "e", "f"),
    "act_disjoint": ("a", "b", "e", "f"), "top_partition": (),
    "zero_def": (), "top_def": (),
    "prefix": ("X", "e"), "postfix": ("X", "e"),
}


# ---------------------------------------------------------------------------
# Boolean-oracle steps
# ---------------------------------------------------------------------------

def maximal_atoms(exprs: list[Expr]) -> list[Expr]:
    """Maximal subterms whose head is not a lattice operation or constant,
    deduplicated up to renaming, in first-occurrence order."""
    seen: dict[str, Expr] = {}

    def walk(t: Expr):
        if isinstance(t, (Sum, Meet)):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, (Zero, Top)):
            pass
        else:
            seen.setdefault(alpha_key(t), t)

    for e in exprs:
        walk(e)
    return list(seen.values())


def bool_taut(claim: Claim, premises: list[Claim], atoms: Optional[list[Expr]],
              alphabet: Alphabet) -> bool:
    """Validity of (premises => claim) in the two-element bounded distributive
    lattice, treating the given closed atoms as Boolean variables, with the
    syntactic complement of an atom identified as its negation.

    Raises CalculusError on open atoms or subterms missing from the atom list.
    """
    sides = [s for c in [claim] + premises for s in (c.lhs, c.rhs)]
    found = maximal_atoms(sides)
    if atoms is None:
        atoms = found
    else:
        keys = {alpha_key(a) for a in atoms}
        for t in found:
            if alpha_key(t) not in keys:
                raise CalculusError(
                    f"subterm {print_expr(t)} is not among the atoms")
    for t in atoms:
        if free_vars(t):
            raise CalculusError(f"open atom {print_expr(t)}")

    # group each atom with its syntactic complement if both are present
    keys = [alpha_key(a) for a in atoms]
    var_of: dict[str, tuple[int, bool]] = {}  # alpha key -> (var index, sign)
    nvars = 0
    for i, a in enumerate(atoms):
        if keys[i] in var_of:
            continue
        comp_key = alpha_key(algebra.complement(a, alphabet))
        partner = None
        for j in range(len(atoms)):
            if j != i and keys[j] not in var_of:
                if keys[j] == comp_key or \
                        alpha_key(algebra.complement(atoms[j], alphabet)) == keys[i]:
                    partner = j
                    break
        var_of[keys[i]] = (nvars, True)
        if partner is not None:
            var_of[keys[partner]] = (nvars, False)
        nvars += 1
    if nvars > 16:
        raise CalculusError("too many Boolean atoms")

    def value(t: Expr, assign: tuple[bool, ...]) -> bool:
        if isinstance(t, Sum):
            return value(t.left, assign) or value(t.right, assign)
        if isinstance(t, Meet):
            return value(t.left, assign) and value(t.right, assign)
        if isinstance(t, Zero):
            return False
        if isinstance(t, Top):
            return True
        idx, sign = var_of[alpha_key(t)]
        return assign[idx] if sign else not assign[idx]

    def holds(c: Claim, assign: tuple[bool, ...]) -> bool:
        l, r = value(c.lhs, assign), value(c.rhs, assign)
        return l == r if c.rel == "eq" else (not l) or r

    for assign in itertools.product((False, True), repeat=nvars):
        if all(holds(p, assign) for p in premises) and not holds(claim, assign):
            return False
    return True


# ---------------------------------------------------------------------------
# The RLL_L checker
# ---------------------------------------------------------------------------

@dataclass
class _Frame:
    steps: dict[str, AnyClaim] = field(default_factory=dict)
    fresh: frozenset = frozenset()
    hypothesis: Optional[AnyClaim] = None


class _Failure(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class _Checker:
    def __init__(self, d: Derivation, tier: str):
        self.d = d
        self.alphabet = d.alphabet
        self.tier = tier
        self.frames: list[_Frame] = [_Frame()]

    # -- substitution-field access --------------------------------------
    def sub_raw(self, step: Step, key: str) -> str:
        if key not in step.subst:
            raise _Failure(f"rule {step.rule} needs subst entry {key!r}")
        return step.subst[key]

    def sub_expr(self, step: Step, key: str) -> Expr:
        try:
            return parse_expr(self.sub_raw(step, key), self.alphabet)
        except RllError as err:
            raise _Failure(f"bad expression in subst[{key!r}]: {err}")

    def sub_name(self, step: Step, key: str) -> str:
        name = self.sub_raw(step, key)
        if not isinstance(name, str) or not name.isidentifier():
            raise _Failure(f"bad variable name in subst[{key!r}]")
        return name

    def sub_letter(self, step: Step, key: str) -> str:
        letter = self.sub_raw(step, key)
        if letter not in self.alphabet.letters:
            raise _Failure(f"undeclared letter in subst[{key!r}]")
        return letter

    # -- scope ----------------------------------------------------------
    def resolve(self, sid: str) -> AnyClaim:
        for depth in range(len(self.frames) - 1, -1, -1):
            claim = self.frames[depth].steps.get(sid)
            if claim is not None:
                self._check_escape(claim, depth)
                return claim
        raise _Failure(f"premise {sid!r} is not in scope")

    def _check_escape(self, claim: AnyClaim, depth: int):
        """Fresh variables of frames inside `depth` must not occur in a claim
        cited from outside (the eigenvariable condition)."""
        if isinstance(claim, FormulaClaim):
            fv = free_fvars(claim.formula)
        else:
            fv = free_vars(claim.lhs) | free_vars(claim.rhs)
        for frame in self.frames[depth + 1:]:
            leaked = frame.fresh & fv
            if leaked:
                raise _Failure("cited claim mentions hypothetical variable "
                               f"{sorted(leaked)[0]!r}")

    def register(self, step: Step):
        for frame in self.frames:
            if step.sid in frame.steps:
                raise _Failure(f"duplicate step id {step.sid!r}")
        self.frames[-1].steps[step.sid] = step.claim

    # -- main walk --------------------------------------------------------
    def run(self) -> Verdict:
        try:
            self.check_steps(self.d.steps)
        except _FailureAt as err:
            return Verdict.rejected(err.sid, err.reason)
        except _Failure as err:
            return Verdict.rejected("-", err.reason)
        return Verdict.ok()

    def check_steps(self, steps: list[Step]) -> AnyClaim:
        if not steps:
            raise _Failure("empty derivation")
        last: Optional[AnyClaim] = None
        for step in steps:
            try:
                prems = [self.resolve(sid) for sid in step.premises]
                self.check_step(step, prems)
                self.register(step)
            except _Failure as err:
                raise _FailureAt(step.sid, err.reason)
            last = step.claim
        return last

    def check_step(self, step: Step, prems: list[AnyClaim]):
        raise NotImplementedError


class _FailureAt(Exception):
    def __init__(self, sid: str, reason: str):
        super().__init__(f"step {sid}: {reason}")
        self.sid = sid
        self.reason = reason


def _want(n: int, prems: list, rule: str):
    if len(prems) != n:
        raise _Failure(f"{rule} needs exactly {n} premise(s)")


def _eclaim(c: AnyClaim) -> Claim:
    if not isinstance(c, Claim):
        raise _Failure("expected an equational claim")
    return c


class _RllChecker(_Checker):
    def check_step(self, step: Step, prems: list[AnyClaim]):
        claim = _eclaim(step.claim)
        rule = step.rule
        if rule in _AXIOM_PARAMS:
            _want(0, prems, rule)
            params: dict = {}
            for key in _AXIOM_PARAMS[rule]:
                if key in ("a", "b"):
                    params[key] = self.sub_letter(step, key)
                elif key == "X":
                    params[key] = self.sub_name(step, key)
                else:
                    params[key] = self.sub_expr(step, key)
            try:
                want = _schema_claim(rule, params, self.alphabet)
            except CalculusError as err:
                raise _Failure(str(err))
            if not claims_match(claim, want):
                raise _Failure(f"claim is not the stated {rule} instance")
        elif rule == "refl":
            _want(0, prems, rule)
            if not alpha_eq(claim.lhs, claim.rhs):
                raise _Failure("refl needs identical sides")
        elif rule == "sym":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if claim.rel != "eq" or p.rel != "eq":
                raise _Failure("sym applies to equations")
            if not (alpha_eq(claim.lhs, p.rhs) and alpha_eq(claim.rhs, p.lhs)):
                raise _Failure("sym must swap the premise sides")
        elif rule == "trans":
            _want(2, prems, rule)
            p1, p2 = _eclaim(prems[0]), _eclaim(prems[1])
            if not alpha_eq(p1.rhs, p2.lhs):
                raise _Failure("premises do not chain")
            want_rel = "eq" if p1.rel == p2.rel == "eq" else "leq"
            if claim.rel != want_rel:
                raise _Failure(f"conclusion relation must be {want_rel}")
            if not (alpha_eq(claim.lhs, p1.lhs) and alpha_eq(claim.rhs, p2.rhs)):
                raise _Failure("conclusion does not match the chain")
        elif rule == "cong":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if claim.rel != "eq" or p.rel != "eq":
                raise _Failure("cong applies to equations")
            ctx = self.sub_expr(step, "context")
            hole = self.sub_name(step, "hole")
            if _hole_count(ctx, hole) != 1:
                raise _Failure("cong needs a one-hole context")
            if not (alpha_eq(claim.lhs, substitute(ctx, hole, p.lhs))
                    and alpha_eq(claim.rhs, substitute(ctx, hole, p.rhs))):
                raise _Failure("claim is not the context applied to the premise")
        elif rule == "mono":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if claim.rel != "leq" or p.rel not in ("leq", "eq"):
                raise _Failure("mono concludes an inequation from one")
            ctx = self.sub_expr(step, "context")
            hole = self.sub_name(step, "hole")
            if not (alpha_eq(claim.lhs, substitute(ctx, hole, p.lhs))
                    and alpha_eq(claim.rhs, substitute(ctx, hole, p.rhs))):
                raise _Failure("claim is not the context applied to the premise")
        elif rule == "eq_weaken":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if p.rel != "eq" or claim.rel != "leq":
                raise _Failure("eq_weaken turns an equation into an inequation")
            if not (alpha_eq(claim.lhs, p.lhs) and alpha_eq(claim.rhs, p.rhs)):
                raise _Failure("sides must match the premise")
        elif rule == "leq_def_intro":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if p.rel != "eq" or claim.rel != "leq":
                raise _Failure("leq_def_intro reads e+f = f as e <= f")
            if not (alpha_eq(p.lhs, Sum(claim.lhs, claim.rhs))
                    and alpha_eq(p.rhs, claim.rhs)):
                raise _Failure("premise is not the defining equation")
        elif rule == "leq_def_elim":
            _want(1, prems, rule)
            p = _eclaim(prems[0])
            if p.rel != "leq" or claim.rel != "eq":
                raise _Failure("leq_def_elim unfolds e <= f into e+f = f")
            if not (alpha_eq(claim.lhs, Sum(p.lhs, p.rhs))
                    and alpha_eq(claim.rhs, p.rhs)):
                raise _Failure("claim is not the defining equation")
        elif rule == "induction":
            _want(1, prems, rule)
            x = self.sub_name(step, "X")
            body = self.sub_expr(step, "e")
            f = self.sub_expr(step, "f")
            wanted = Claim("leq", substitute(body, x, f), f)
            if not claims_match(_eclaim(prems[0]), wanted):
                raise _Failure("premise must be e(f) <= f")
            if not claims_match(claim, Claim("leq", Mu(x, body), f)):
                raise _Failure("conclusion must be mu X. e <= f")
        elif rule == "coinduction":
            _want(1, prems, rule)
            x = self.sub_name(step, "X")
            body = self.sub_expr(step, "e")
            f = self.sub_expr(step, "f")
            wanted = Claim("leq", f, substitute(body, x, f))
            if not claims_match(_eclaim(prems[0]), wanted):
                raise _Failure("premise must be f <= e(f)")
            if not claims_match(claim, Claim("leq", f, Nu(x, body))):
                raise _Failure("conclusion must be f <= nu X. e")
        elif rule == "hyp":
            _want(0, prems, rule)
            for depth in range(len(self.frames) - 1, -1, -1):
                hypo = self.frames[depth].hypothesis
                if hypo is not None and claims_match(claim, _eclaim(hypo)):
                    self._check_escape(hypo, depth)
                    return
            raise _Failure("claim matches no hypothesis in scope")
        elif rule in ("duality_plus", "duality_meet"):
            _want(0, prems, rule)
            self._check_duality(step, claim, plus=(rule == "duality_plus"))
        elif rule == "bool_taut":
            if self.tier != "extended":
                raise _Failure("bool_taut needs the extended tier")
            atoms = None
            if "atoms" in step.subst:
                raw = step.subst["atoms"]
                if not isinstance(raw, list):
                    raise _Failure("atoms must be a list of expressions")
                try:
                    atoms = [parse_expr(a, self.alphabet) for a in raw]
                except RllError as err:
                    raise _Failure(f"bad atom: {err}")
            eprems = [_eclaim(p) for p in prems]
            try:
                valid = bool_taut(claim, eprems, atoms, self.alphabet)
            except CalculusError as err:
                raise _Failure(str(err))
            if not valid:
                raise _Failure("not valid in the two-element lattice")
        else:
            raise _Failure(f"unknown rule {rule!r}")

    def _check_duality(self, step: Step, claim: Claim, plus: bool):
        if step.hyp is None:
            raise _Failure("duality needs a hypothetical sub-derivation")
        x = self.sub_name(step, "X")
        y = self.sub_name(step, "Y")
        e = self.sub_expr(step, "e")
        f = self.sub_expr(step, "f")
        if step.hyp.fresh != [x, y]:
            raise _Failure("hyp.fresh must declare exactly the rule's X, Y")
        if x == y:
            raise _Failure("the fresh variables must be distinct")
        concl_fv = free_vars(claim.lhs) | free_vars(claim.rhs)
        if x in concl_fv or y in concl_fv:
            raise _Failure("hypothetical variable occurs free in the conclusion")
        if plus:
            hypo = Claim("leq", TOP, Sum(Var(x), Var(y)))
            sub_goal = Claim("leq", TOP, Sum(e, f))
            concl = Claim("leq", TOP, Sum(Mu(x, e), Nu(y, f)))
        else:
            hypo = Claim("leq", Meet(Var(x), Var(y)), ZERO)
            sub_goal = Claim("leq", Meet(e, f), ZERO)
            concl = Claim("leq", Meet(Mu(x, e), Nu(y, f)), ZERO)
        if not claims_match(claim, concl):
            raise _Failure("claim is not the duality conclusion for this e, f")
        self.frames.append(_Frame(fresh=frozenset({x, y}), hypothesis=hypo))
        try:
            last = self.check_steps(step.hyp.steps)
        finally:
            self.frames.pop()
        if not claims_match(_eclaim(last), sub_goal):
            raise _Failure("sub-derivation does not end with top <= e(X)+f(Y)"
                           if plus else
                           "sub-derivation does not end with e(X)&f(Y) <= 0")


def _hole_count(ctx: Expr, hole: str) -> int:
    if isinstance(ctx, Var):
        return 1 if ctx.name == hole else 0
    if isinstance(ctx, Act):
        return _hole_count(ctx.body, hole)
    if isinstance(ctx, (Sum, Meet)):
        return _hole_count(ctx.left, hole) + _hole_count(ctx.right, hole)
    if isinstance(ctx, (Mu, Nu)):
        return 0 if ctx.var == hole else _hole_count(ctx.body, hole)
    return 0


def check_rll(d: Derivation, tier: Optional[str] = None) -> Verdict:
    """Check an equational derivation: accepted, or rejected at a named step."""
    if d.system != "rll":
        return Verdict.rejected("-", "not an equational derivation")
    use = tier or d.tier
    if use not in ("strict", "extended"):
        return Verdict.rejected("-", f"unknown tier {use!r}")
    return _RllChecker(d, use).run()


# ---------------------------------------------------------------------------
# The muLTL Hilbert checker
# ---------------------------------------------------------------------------

def _skeleton_atoms(phis: list[MuLtlFormula]) -> tuple[list, dict]:
    """Boolean variables for tautology checking: propositions, and maximal
    non-propositional subformulas grouped with their negations."""
    var_of: dict[str, tuple[int, bool]] = {}
    order: list[str] = []

    def intern(key: str, neg_key: str):
        if key in var_of:
            return
        if neg_key in var_of:
            idx, sign = var_of[neg_key]
            var_of[key] = (idx, not sign)
        else:
            var_of[key] = (len(order), True)
            order.append(key)

    def walk(t: MuLtlFormula):
        if isinstance(t, (Or, And)):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, (Bot, TopF)):
            pass
        elif isinstance(t, Prop):
            intern("p:" + t.name, "~p:" + t.name)
        elif isinstance(t, NegProp):
            intern("~p:" + t.name, "p:" + t.name)
        else:
            intern(alpha_key_formula(t),
                   alpha_key_formula(negate_formula(t)))

    for phi in phis:
        walk(phi)
    return order, var_of


def propositional_valid(claim: MuLtlFormula,
                        premises: list[MuLtlFormula] = ()) -> bool:
    """Truth-table validity treating maximal non-propositional subformulas as
    opaque atoms, a formula and its negation complementary."""
    order, var_of = _skeleton_atoms([claim, *premises])
    if len(order) > 16:
        raise CalculusError("too many propositional atoms")

    def value(t: MuLtlFormula, assign) -> bool:
        if isinstance(t, Or):
            return value(t.left, assign) or value(t.right, assign)
        if isinstance(t, And):
            return value(t.left, assign) and value(t.right, assign)
        if isinstance(t, Bot):
            return False
        if isinstance(t, TopF):
            return True
        if isinstance(t, Prop):
            idx, sign = var_of["p:" + t.name]
        elif isinstance(t, NegProp):
            idx, sign = var_of["~p:" + t.name]
        else:
            idx, sign = var_of[alpha_key_formula(t)]
        return assign[idx] if sign else not assign[idx]

    for assign in itertools.product((False, True), repeat=len(order)):
        if all(value(p, assign) for p in premises) and not value(claim, assign):
            return False
    return True


def _fclaim(c: AnyClaim) -> MuLtlFormula:
    if not isinstance(c, FormulaClaim):
        raise _Failure("expected a formula claim")
    return c.formula


class _MultlChecker(_Checker):
    def sub_formula(self, step: Step, key: str) -> MuLtlFormula:
        try:
            return parse_formula(self.sub_raw(step, key), self.alphabet)
        except RllError as err:
            raise _Failure(f"bad formula in subst[{key!r}]: {err}")

    def check_step(self, step: Step, prems: list[AnyClaim]):
        phi = _fclaim(step.claim)
        rule = step.rule
        if rule == "taut":
            _want(0, prems, rule)
            try:
                ok = propositional_valid(phi)
            except CalculusError as err:
                raise _Failure(str(err))
            if not ok:
                raise _Failure("not a propositional tautology")
        elif rule in ("next_or", "next_and"):
            _want(0, prems, rule)
            a = self.sub_formula(step, "phi")
            b = self.sub_formula(step, "psi")
            pair = Or(a, b) if rule == "next_or" else And(a, b)
            comb = (Or if rule == "next_or" else And)(Next(a), Next(b))
            if not alpha_eq_formula(phi, iff(Next(pair), comb)):
                raise _Failure(f"claim is not the {rule} axiom instance")
        elif rule in ("mu_axiom", "nu_axiom"):
            _want(0, prems, rule)
            x = self.sub_name(step, "X")
            body = self.sub_formula(step, "phi")
            if rule == "mu_axiom":
                fix = MuF(x, body)
                want = implies(substitute_formula(body, x, fix), fix)
            else:
                fix = NuF(x, body)
                want = implies(fix, substitute_formula(body, x, fix))
            if not alpha_eq_formula(phi, want):
                raise _Failure(f"claim is not the {rule} instance")
        elif rule == "mp":
            _want(2, prems, rule)
            minor, major = _fclaim(prems[0]), _fclaim(prems[1])
            if not alpha_eq_formula(major, implies(minor, phi)):
                raise _Failure("second premise is not (first -> claim)")
        elif rule == "nec":
            _want(1, prems, rule)
            if not alpha_eq_formula(phi, Next(_fclaim(prems[0]))):
                raise _Failure("claim must be O applied to the premise")
        elif rule in ("mu_rule", "nu_rule"):
            _want(1, prems, rule)
            x = self.sub_name(step, "X")
            body = self.sub_formula(step, "phi")
            psi = self.sub_formula(step, "psi")
            unfolded = substitute_formula(body, x, psi)
            if rule == "mu_rule":
                want_prem = implies(unfolded, psi)
                want_concl = implies(MuF(x, body), psi)
            else:
                want_prem = implies(psi, unfolded)
                want_concl = implies(psi, NuF(x, body))
            if not alpha_eq_formula(_fclaim(prems[0]), want_prem):
                raise _Failure("premise does not match the rule")
            if not alpha_eq_formula(phi, want_concl):
                raise _Failure("conclusion does not match the rule")
        else:
            raise _Failure(f"unknown rule {rule!r}")


def check_multl(d: Derivation, tier: Optional[str] = None) -> Verdict:
    """Check a Hilbert-style muLTL derivation."""
    if d.system != "multl":
        return Verdict.rejected("-", "not a muLTL derivation")
    return _MultlChecker(d, tier or d.tier).run()


def check_derivation(d: Derivation) -> Verdict:
    return check_rll(d) if d.system == "rll" else check_multl(d)


# ---------------------------------------------------------------------------
# Complement-derivation generator
# ---------------------------------------------------------------------------

class _Builder:
    """Emits steps into nested contexts, returning step ids; claims for axiom
    steps come from the shared schema table so they match the checker."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.counter = itertools.count(1)
        self.stack: list[list[Step]] = [[]]

    def _sid(self) -> str:
        return f"s{next(self.counter)}"

    def emit(self, rule: str, claim: Claim, premises: list[str] = (),
             subst: Optional[dict] = None, hyp: Optional[HypContext] = None) -> str:
        sid = self._sid()
        self.stack[-1].append(Step(sid, claim, rule, dict(subst or {}),
                                   list(premises), hyp))
        return sid

    def last_sid(self) -> Optional[str]:
        return self.stack[-1][-1].sid if self.stack[-1] else None

    def ax(self, name: str, **params) -> str:
        claim = _schema_claim(name, params, self.alphabet)
        subst = {}
        for key, val in params.items():
            if key in ("a", "b", "X"):
                subst[key] = val
            else:
                subst[key] = print_expr(val)
        return self.emit(name, claim, subst=subst)

    def refl(self, e: Expr) -> str:
        return self.emit("refl", Claim("eq", e, e))

    def sym(self, sid: str, lhs: Expr, rhs: Expr) -> str:
        # premise proves rhs = lhs
        return self.emit("sym", Claim("eq", lhs, rhs), [sid])

    def trans(self, s1: str, c1: Claim, s2: str, c2: Claim) -> str:
        rel = "eq" if c1.rel == c2.rel == "eq" else "leq"
        return self.emit("trans", Claim(rel, c1.lhs, c2.rhs), [s1, s2])

    def cong(self, sid: str, prem: Claim, ctx_builder) -> str:
        hole = fresh_name("H", free_vars(prem.lhs) | free_vars(prem.rhs))
        ctx = ctx_builder(Var(hole))
        claim = Claim("eq", substitute(ctx, hole, prem.lhs),
                      substitute(ctx, hole, prem.rhs))
        return self.emit("cong", claim, [sid],
                         {"context": print_expr(ctx), "hole": hole})

    def mono(self, sid: str, prem: Claim, ctx_builder) -> str:
        hole = fresh_name("H", free_vars(prem.lhs) | free_vars(prem.rhs))
        ctx = ctx_builder(Var(hole))
        claim = Claim("leq", substitute(ctx, hole, prem.lhs),
                      substitute(ctx, hole, prem.rhs))
        return self.emit("mono", claim, [sid],
                         {"context": print_expr(ctx), "hole": hole})

    def eq_weaken(self, sid: str, prem: Claim) -> str:
        return self.emit("eq_weaken", Claim("leq", prem.lhs, prem.rhs), [sid])

    def leq_def_intro(self, sid: str, lhs: Expr, rhs: Expr) -> str:
        return self.emit("leq_def_intro", Claim("leq", lhs, rhs), [sid])

    def push(self):
        self.stack.append([])

    def pop(self) -> list[Step]:
        return self.stack.pop()


@dataclass
class _St:
    """A proved claim: its step id plus the claim itself."""
    sid: str
    claim: Claim


class _ComplementGen:
    def __init__(self, alphabet: Alphabet, root: Expr):
        self.ab = alphabet
        self.pair_counter = itertools.count()
        self.avoid = frozenset(
            s.name for s in subexpressions(root) if isinstance(s, Var)
        ) | frozenset(s.var for s in subexpressions(root)
                      if isinstance(s, (Mu, Nu)))

    def fresh_pair(self) -> tuple[str, str]:
        while True:
            n = next(self.pair_counter)
            p, q = f"V{2 * n}", f"V{2 * n + 1}"
            if p not in self.avoid and q not in self.avoid:
                return p, q

    # -- small lattice lemmas -------------------------------------------
    def tr(self, b: _Builder, s1: _St, s2: _St) -> _St:
        sid = b.trans(s1.sid, s1.claim, s2.sid, s2.claim)
        rel = "eq" if s1.claim.rel == s2.claim.rel == "eq" else "leq"
        return _St(sid, Claim(rel, s1.claim.lhs, s2.claim.rhs))

    def chain(self, b: _Builder, *steps: _St) -> _St:
        acc = steps[0]
        for s in steps[1:]:
            acc = self.tr(b, acc, s)
        return acc

    def ax(self, bld: _Builder, name: str, **params) -> _St:
        sid = bld.ax(name, **params)
        return _St(sid, _schema_claim(name, params, self.ab))

    def sym(self, b: _Builder, s: _St) -> _St:
        sid = b.sym(s.sid, s.claim.rhs, s.claim.lhs)
        return _St(sid, Claim("eq", s.claim.rhs, s.claim.lhs))

    def cong(self, b: _Builder, s: _St, ctx) -> _St:
        sid = b.cong(s.sid, s.claim, ctx)
        return _St(sid, Claim("eq", ctx(s.claim.lhs), ctx(s.claim.rhs)))

    def mono(self, b: _Builder, s: _St, ctx) -> _St:
        sid = b.mono(s.sid, s.claim, ctx)
        return _St(sid, Claim("leq", ctx(s.claim.lhs), ctx(s.claim.rhs)))

    def weaken(self, b: _Builder, s: _St) -> _St:
        sid = b.eq_weaken(s.sid, s.claim)
        return _St(sid, Claim("leq", s.claim.lhs, s.claim.rhs))

    def by_def(self, b: _Builder, s: _St, lhs: Expr, rhs: Expr) -> _St:
        sid = b.leq_def_intro(s.sid, lhs, rhs)
        return _St(sid, Claim("leq", lhs, rhs))

    def leq_plus_left(self, b: _Builder, f: Expr, g: Expr) -> _St:
        # f <= f + g
        d1 = self.ax(b, "plus_assoc", e=f, f=f, g=g)
        d2 = self.ax(b, "plus_idem", e=f)
        d3 = self.cong(b, d2, lambda z: Sum(z, g))
        d4 = self.tr(b, d1, d3)
        return self.by_def(b, d4, f, Sum(f, g))

    def leq_plus_right(self, b: _Builder, g: Expr, f: Expr) -> _St:
        # g <= f + g
        e1 = self.ax(b, "plus_comm", e=g, f=Sum(f, g))
        e2 = self.sym(b, self.ax(b, "plus_assoc", e=f, f=g, g=g))
        e3 = self.cong(b, self.ax(b, "plus_idem", e=g), lambda z: Sum(f, z))
        e4 = self.chain(b, e1, e2, e3)
        return self.by_def(b, e4, g, Sum(f, g))

    def meet_left(self, b: _Builder, f: Expr, g: Expr) -> _St:
        # f & g <= f
        f1 = self.ax(b, "plus_comm", e=Meet(f, g), f=f)
        f2 = self.ax(b, "plus_absorb", e=f, f=g)
        f3 = self.tr(b, f1, f2)
        return self.by_def(b, f3, Meet(f, g), f)

    def meet_right(self, b: _Builder, f: Expr, g: Expr) -> _St:
        # f & g <= g
        g1 = self.cong(b, self.ax(b, "meet_comm", e=f, f=g),
                       lambda z: Sum(z, g))
        g2 = self.ax(b, "plus_comm", e=Meet(g, f), f=g)
        g3 = self.ax(b, "plus_absorb", e=g, f=f)
        g4 = self.chain(b, g1, g2, g3)
        return self.by_def(b, g4, Meet(f, g), g)

    def glb(self, b: _Builder, su: _St, sv: _St) -> _St:
        # from top <= u and top <= v: top <= u & v
        u, v = su.claim.rhs, sv.claim.rhs
        c1 = self.ax(b, "meet_comm", e=TOP, f=v)
        c2 = self.ax(b, "meet_top", e=v)
        c3 = self.sym(b, self.tr(b, c1, c2))
        c5 = self.mono(b, su, lambda z: Meet(z, v))
        return self.chain(b, sv, c3, c5)

    def sum_zero(self, b: _Builder, su: _St, sv: _St) -> _St:
        # from u <= 0 and v <= 0: u + v <= 0
        u, v = su.claim.lhs, sv.claim.lhs
        m1 = self.mono(b, su, lambda z: Sum(z, v))
        m2 = self.ax(b, "plus_comm", e=ZERO, f=v)
        m3 = self.ax(b, "plus_zero", e=v)
        return self.chain(b, m1, m2, m3, sv)

    def pull_front(self, b: _Builder, terms: list[Expr], idx: int) -> _St:
        """sum(terms) = terms[idx] + sum(terms without idx), len(terms) >= 2."""
        whole = sum_of(terms)
        if idx == 0:
            sid = b.refl(whole)  # whole is already terms[0] + sum(rest)
            return _St(sid, Claim("eq", whole, whole))
        if len(terms) == 2:
            return self.ax(b, "plus_comm", e=terms[0], f=terms[1])
        t0, rest = terms[0], terms[1:]
        ti = terms[idx]
        rest_minus = rest[:idx - 1] + rest[idx:]
        sprime = sum_of(rest_minus)
        r1 = self.pull_front(b, rest, idx - 1)
        r2 = self.cong(b, r1, lambda z: Sum(t0, z))
        r3 = self.ax(b, "plus_assoc", e=t0, f=ti, g=sprime)
        r5 = self.cong(b, self.ax(b, "plus_comm", e=t0, f=ti),
                       lambda z: Sum(z, sprime))
        r7 = self.sym(b, self.ax(b, "plus_assoc", e=ti, f=t0, g=sprime))
        return self.chain(b, r2, r3, r5, r7)

    def restate(self, b: _Builder, s: _St, goal: Claim) -> _St:
        """Re-emit an alpha-variant claim as a stated step (via trans with a
        refl), so sub-conclusions sit last in their context with the intended
        binder names."""
        r = _St(b.refl(goal.rhs), Claim("eq", goal.rhs, goal.rhs))
        sid = b.emit("trans", goal, [s.sid, r.sid])
        return _St(sid, goal)

    # -- the two inductive families ---------------------------------------
    def psub(self, t: Expr, pairs: dict) -> Expr:
        for v, (p, _q, _s) in pairs.items():
            t = substitute(t, v, Var(p))
        return t

    def qsub(self, t: Expr, pairs: dict) -> Expr:
        for v, (_p, q, _s) in pairs.items():
            t = substitute(t, v, Var(q))
        return t

    def ensure_local_last(self, b: _Builder, s: _St) -> _St:
        if b.last_sid() == s.sid:
            return s
        return self.restate(b, s, s.claim)

    def gen_plus(self, b: _Builder, t: Expr, pairs: dict) -> _St:
        """top <= E + Ec where E, Ec substitute the P-, Q-sides of the pairs
        into t and its complement."""
        if isinstance(t, Var):
            _p, _q, st = pairs[t.name]
            return st
        if isinstance(t, Zero):
            h1 = self.ax(b, "plus_comm", e=ZERO, f=TOP)
            h2 = self.ax(b, "plus_zero", e=TOP)
            return self.weaken(b, self.sym(b, self.tr(b, h1, h2)))
        if isinstance(t, Top):
            return self.weaken(b, self.sym(b, self.ax(b, "plus_zero", e=TOP)))
        if isinstance(t, Sum):
            s1 = self.gen_plus(b, t.left, pairs)
            s2 = self.gen_plus(b, t.right, pairs)
            return self.glue_plus_sum(b, s1, s2)
        if isinstance(t, Meet):
            s1 = self.gen_plus(b, t.left, pairs)
            s2 = self.gen_plus(b, t.right, pairs)
            return self.glue_plus_meet(b, s1, s2)
        if isinstance(t, Act):
            s1 = self.gen_plus(b, t.body, pairs)
            return self.glue_plus_act(b, s1, t.letter)
        if isinstance(t, (Mu, Nu)):
            return self.gen_plus_fix(b, t, pairs)
        raise CalculusError(f"unexpected expression {t!r}")

    def glue_plus_sum(self, b: _Builder, s1: _St, s2: _St) -> _St:
        (f, fc) = _split_sum(s1.claim.rhs)
        (g, gc) = _split_sum(s2.claim.rhs)
        a2 = self.mono(b, self.leq_plus_left(b, f, g), lambda z: Sum(z, fc))
        a3 = self.tr(b, s1, a2)
        a5 = self.mono(b, self.leq_plus_right(b, g, f), lambda z: Sum(z, gc))
        a6 = self.tr(b, s2, a5)
        a7 = self.glb(b, a3, a6)
        a9 = self.sym(b, self.ax(b, "plus_dist", e=Sum(f, g), f=fc, g=gc))
        return self.tr(b, a7, a9)

    def glue_plus_meet(self, b: _Builder, s1: _St, s2: _St) -> _St:
        (f, fc) = _split_sum(s1.claim.rhs)
        (g, gc) = _split_sum(s2.claim.rhs)
        b2 = self.tr(b, s1, self.ax(b, "plus_comm", e=f, f=fc))
        b4 = self.mono(b, self.leq_plus_left(b, fc, gc), lambda z: Sum(z, f))
        b5 = self.tr(b, b2, b4)
        b7 = self.tr(b, s2, self.ax(b, "plus_comm", e=g, f=gc))
        b9 = self.mono(b, self.leq_plus_right(b, gc, fc), lambda z: Sum(z, g))
        b10 = self.tr(b, b7, b9)
        b11 = self.glb(b, b5, b10)
        b13 = self.sym(b, self.ax(b, "plus_dist", e=Sum(fc, gc), f=f, g=g))
        b14 = self.tr(b, b11, b13)
        b15 = self.ax(b, "plus_comm", e=Sum(fc, gc), f=Meet(f, g))
        return self.tr(b, b14, b15)

    def glue_plus_act(self, b: _Builder, s1: _St, a: str) -> _St:
        (f, fc) = _split_sum(s1.claim.rhs)
        af, afc = Act(a, f), Act(a, fc)
        c1 = self.mono(b, s1, lambda z: Act(a, z))
        c2 = self.ax(b, "act_plus", a=a, e=f, f=fc)
        c3 = self.tr(b, c1, c2)
        c4 = self.ax(b, "top_partition")
        letters = self.ab.letters
        rest = [Act(c, TOP) for c in letters if c != a]
        if not rest:
            c5 = self.tr(b, c4, c3)
            c6 = self.sym(b, self.ax(b, "plus_zero", e=afc))
            c8 = self.cong(b, c6, lambda z: Sum(af, z))
            return self.tr(b, c5, c8)
        terms = [Act(c, TOP) for c in letters]
        c5 = self.pull_front(b, terms, letters.index(a))
        c6 = self.tr(b, c4, c5)
        r = sum_of(rest)
        c7 = self.mono(b, c3, lambda z: Sum(z, r))
        c8 = self.tr(b, c6, c7)
        c10 = self.sym(b, self.ax(b, "plus_assoc", e=af, f=afc, g=r))
        return self.tr(b, c8, c10)

    def gen_plus_fix(self, b: _Builder, t: Expr, pairs: dict) -> _St:
        v = t.var
        p, q = self.fresh_pair()
        outer_pairs = {k: w for k, w in pairs.items() if k != v}
        e_full = self.psub(t, pairs)
        ec_full = self.qsub(algebra.complement(t, self.ab), pairs)
        e_body = self.psub(substitute(t.body, v, Var(p)), outer_pairs)
        ec_body = self.qsub(
            substitute(algebra.complement(t.body, self.ab), v, Var(q)),
            outer_pairs)
        is_mu = isinstance(t, Mu)
        # the rule's mu comes first: for nu-expressions the complement side
        # takes the mu slot and the sum is commuted afterwards
        x, y = (p, q) if is_mu else (q, p)
        b.push()
        hyp_claim = Claim("leq", TOP, Sum(Var(x), Var(y)))
        hyp_st = _St(b.emit("hyp", hyp_claim), hyp_claim)
        if is_mu:
            oriented = hyp_st
        else:
            cm = self.ax(b, "plus_comm", e=Var(q), f=Var(p))
            oriented = self.tr(b, hyp_st, cm)
        sub_pairs = dict(pairs)
        sub_pairs[v] = (p, q, oriented)
        inner = self.gen_plus(b, t.body, sub_pairs)
        if is_mu:
            e_slot, f_slot = e_body, ec_body
            self.ensure_local_last(b, inner)
        else:
            cm2 = self.ax(b, "plus_comm", e=e_body, f=ec_body)
            self.tr(b, inner, cm2)
            e_slot, f_slot = ec_body, e_body
        steps = b.pop()
        concl = Claim("leq", TOP, Sum(Mu(x, e_slot), Nu(y, f_slot)))
        sid = b.emit("duality_plus", concl,
                     subst={"X": x, "Y": y, "e": print_expr(e_slot),
                            "f": print_expr(f_slot)},
                     hyp=HypContext([x, y], steps))
        st = _St(sid, concl)
        goal = Claim("leq", TOP, Sum(e_full, ec_full))
        if not is_mu:
            cm3 = self.ax(b, "plus_comm", e=Mu(x, e_slot), f=Nu(y, f_slot))
            st = self.tr(b, st, cm3)
        return self.restate(b, st, goal)

    # -- meet family ------------------------------------------------------
    def gen_meet(self, b: _Builder, t: Expr, pairs: dict) -> _St:
        if isinstance(t, Var):
            _p, _q, st = pairs[t.name]
            return st
        if isinstance(t, Zero):
            return self.weaken(b, self.ax(b, "meet_top", e=ZERO))
        if isinstance(t, Top):
            k1 = self.ax(b, "meet_comm", e=TOP, f=ZERO)
            k2 = self.ax(b, "meet_top", e=ZERO)
            return self.weaken(b, self.tr(b, k1, k2))
        if isinstance(t, Sum):
            s1 = self.gen_meet(b, t.left, pairs)
            s2 = self.gen_meet(b, t.right, pairs)
            return self.glue_meet_sum(b, s1, s2)
        if isinstance(t, Meet):
            s1 = self.gen_meet(b, t.left, pairs)
            s2 = self.gen_meet(b, t.right, pairs)
            return self.glue_meet_meet(b, s1, s2)
        if isinstance(t, Act):
            s1 = self.gen_meet(b, t.body, pairs)
            return self.glue_meet_act(b, s1, t.letter)
        if isinstance(t, (Mu, Nu)):
            return self.gen_meet_fix(b, t, pairs)
        raise CalculusError(f"unexpected expression {t!r}")

    def glue_meet_sum(self, b: _Builder, s1: _St, s2: _St) -> _St:
        f, fc = _split_meet(s1.claim.lhs)
        g, gc = _split_meet(s2.claim.lhs)
        fcgc = Meet(fc, gc)
        d2 = self.mono(b, self.meet_left(b, fc, gc), lambda z: Meet(z, f))
        d3 = self.ax(b, "meet_comm", e=fc, f=f)
        d5 = self.chain(b, d2, d3, s1)
        d7 = self.mono(b, self.meet_right(b, fc, gc), lambda z: Meet(z, g))
        d8 = self.ax(b, "meet_comm", e=gc, f=g)
        d10 = self.chain(b, d7, d8, s2)
        d11 = self.sum_zero(b, d5, d10)
        d12 = self.ax(b, "meet_dist", e=fcgc, f=f, g=g)
        d13 = self.tr(b, d12, d11)
        d14 = self.ax(b, "meet_comm", e=Sum(f, g), f=fcgc)
        return self.tr(b, d14, d13)

    def glue_meet_meet(self, b: _Builder, s1: _St, s2: _St) -> _St:
        f, fc = _split_meet(s1.claim.lhs)
        g, gc = _split_meet(s2.claim.lhs)
        fg = Meet(f, g)
        e2 = self.mono(b, self.meet_left(b, f, g), lambda z: Meet(z, fc))
        e3 = self.tr(b, e2, s1)
        e5 = self.mono(b, self.meet_right(b, f, g), lambda z: Meet(z, gc))
        e6 = self.tr(b, e5, s2)
        e7 = self.sum_zero(b, e3, e6)
        e8 = self.ax(b, "meet_dist", e=fg, f=fc, g=gc)
        return self.tr(b, e8, e7)

    def glue_meet_act(self, b: _Builder, s1: _St, a: str) -> _St:
        f, fc = _split_meet(s1.claim.lhs)
        af, afc = Act(a, f), Act(a, fc)
        f1 = self.mono(b, s1, lambda z: Act(a, z))
        f3 = self.sym(b, self.ax(b, "act_meet", a=a, e=f, f=fc))
        f4 = self.tr(b, f3, f1)
        f5 = self.ax(b, "act_zero", a=a)
        f6 = self.tr(b, f4, f5)
        letters = self.ab.letters
        rest = [Act(c, TOP) for c in letters if c != a]
        if not rest:
            f7 = self.ax(b, "plus_zero", e=afc)
            f8 = self.cong(b, f7, lambda z: Meet(af, z))
            return self.tr(b, f8, f6)
        r = sum_of(rest)
        f7 = self.ax(b, "meet_dist", e=af, f=afc, g=r)
        f8 = self.rest_zero(b, af, a, rest)
        f9 = self.cong(b, f8, lambda z: Sum(Meet(af, afc), z))
        f10 = self.ax(b, "plus_zero", e=Meet(af, afc))
        f12 = self.chain(b, f7, f9, f10)
        return self.tr(b, f12, f6)

    def rest_zero(self, b: _Builder, af: Expr, a: str,
                  rest: list[Expr]) -> _St:
        """af & sum(rest) = 0, where rest are b.top actions with b != a."""
        head = rest[0]
        if len(rest) == 1:
            return self.ax(b, "act_disjoint", a=a, b=head.letter,
                           e=af.body, f=TOP)
        tail = sum_of(rest[1:])
        g1 = self.ax(b, "meet_dist", e=af, f=head, g=tail)
        g2 = self.ax(b, "act_disjoint", a=a, b=head.letter, e=af.body, f=TOP)
        g3 = self.cong(b, g2, lambda z: Sum(z, Meet(af, tail)))
        g4 = self.rest_zero(b, af, a, rest[1:])
        g5 = self.cong(b, g4, lambda z: Sum(ZERO, z))
        g6 = self.ax(b, "plus_zero", e=ZERO)
        return self.chain(b, g1, g3, g5, g6)

    def gen_meet_fix(self, b: _Builder, t: Expr, pairs: dict) -> _St:
        v = t.var
        p, q = self.fresh_pair()
        outer_pairs = {k: w for k, w in pairs.items() if k != v}
        e_full = self.psub(t, pairs)
        ec_full = self.qsub(algebra.complement(t, self.ab), pairs)
        e_body = self.psub(substitute(t.body, v, Var(p)), outer_pairs)
        ec_body = self.qsub(
            substitute(algebra.complement(t.body, self.ab), v, Var(q)),
            outer_pairs)
        is_mu = isinstance(t, Mu)
        x, y = (p, q) if is_mu else (q, p)
        b.push()
        hyp_claim = Claim("leq", Meet(Var(x), Var(y)), ZERO)
        hyp_st = _St(b.emit("hyp", hyp_claim), hyp_claim)
        if is_mu:
            oriented = hyp_st
        else:
            cm = self.ax(b, "meet_comm", e=Var(p), f=Var(q))
            oriented = self.tr(b, cm, hyp_st)
        sub_pairs = dict(pairs)
        sub_pairs[v] = (p, q, oriented)
        inner = self.gen_meet(b, t.body, sub_pairs)
        if is_mu:
            e_slot, f_slot = e_body, ec_body
            self.ensure_local_last(b, inner)
        else:
            cm2 = self.ax(b, "meet_comm", e=ec_body, f=e_body)
            self.tr(b, cm2, inner)
            e_slot, f_slot = ec_body, e_body
        steps = b.pop()
        concl = Claim("leq", Meet(Mu(x, e_slot), Nu(y, f_slot)), ZERO)
        sid = b.emit("duality_meet", concl,
                     subst={"X": x, "Y": y, "e": print_expr(e_slot),
                            "f": print_expr(f_slot)},
                     hyp=HypContext([x, y], steps))
        st = _St(sid, concl)
        goal = Claim("leq", Meet(e_full, ec_full), ZERO)
        if not is_mu:
            cm3 = self.ax(b, "meet_comm", e=Nu(y, f_slot), f=Mu(x, e_slot))
            st = self.tr(b, cm3, st)
        return self.restate(b, st, goal)


def _split_sum(t: Expr) -> tuple[Expr, Expr]:
    assert isinstance(t, Sum)
    return t.left, t.right


def _split_meet(t: Expr) -> tuple[Expr, Expr]:
    assert isinstance(t, Meet)
    return t.left, t.right


def derive_complement(e: Expr, alphabet: Alphabet) -> tuple[Derivation, Derivation]:
    """Machine-checkable derivations of top <= e + e^c and e & e^c <= 0 for a
    closed expression, by induction on e: lattice glue for sums and meets, the
    homomorphism/partition/distributivity chain for letters, and the
    quantifier-free duality rules wrapping the inductive step at fixpoints."""
    if free_vars(e):
        raise CalculusError("complement derivations need a closed expression")
    b1 = _Builder(alphabet)
    _ComplementGen(alphabet, e).gen_plus(b1, e, {})
    plus = Derivation("rll", "extended", alphabet, b1.stack[0])
    b2 = _Builder(alphabet)
    _ComplementGen(alphabet, e).gen_meet(b2, e, {})
    meet = Derivation("rll", "extended", alphabet, b2.stack[0])
    return plus, meet
