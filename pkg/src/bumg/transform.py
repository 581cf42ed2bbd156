"""Clause-set transformations: range-restriction, shifting, blocking.

Pipelines apply left to right: shifting first, then one of the two
range-restricting transformations, then a blocking transformation.  Every
transformation is a pure function from Problem to Problem and is
deterministic, so repeated runs print byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import (
    EQ,
    RESERVED_VAR_PREFIX,
    App,
    Atom,
    Clause,
    Term,
    Var,
    contains_proper_functional,
    is_proper_functional,
    is_range_restricted,
    subst_atom,
    term_abstraction,
    vars_of,
)
from .tptp import Problem, print_clauses

RR_VARIANTS = ("new", "classical", "none")
BLOCKINGS = ("none", "sd", "sp", "ud", "up")
CONST_POLICIES = ("reuse_first", "always_fresh")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    rr_variant: str = "new"
    shift: bool = False
    blocking: str = "none"
    step1_constant_policy: str = "reuse_first"

    def __post_init__(self):
        if self.rr_variant not in RR_VARIANTS:
            raise ConfigError(f"unknown rr variant {self.rr_variant!r}")
        if self.blocking not in BLOCKINGS:
            raise ConfigError(f"unknown blocking {self.blocking!r}")
        if self.step1_constant_policy not in CONST_POLICIES:
            raise ConfigError(
                f"unknown constant policy {self.step1_constant_policy!r}")
        if self.blocking != "none" and self.rr_variant == "none":
            raise ConfigError("blocking requires a range-restriction variant")

    @property
    def label(self) -> str:
        parts = []
        if self.shift:
            parts.append("sh")
        parts.append({"new": "rr", "classical": "crr", "none": "id"}[self.rr_variant])
        if self.blocking != "none":
            parts.append("bl" + self.blocking)
        return ".".join(parts)


def config_from_label(label: str) -> PipelineConfig:
    """Parse a pipeline label such as ``sh.rr.blud`` or ``crr``."""
    parts = label.split(".")
    shift = False
    if parts and parts[0] == "sh":
        shift = True
        parts = parts[1:]
    if not parts or parts[0] not in ("rr", "crr", "id"):
        raise ConfigError(f"bad pipeline label {label!r}")
    rr_variant = {"rr": "new", "crr": "classical", "id": "none"}[parts[0]]
    parts = parts[1:]
    blocking = "none"
    if parts:
        if len(parts) != 1 or not parts[0].startswith("bl") \
                or parts[0][2:] not in BLOCKINGS:
            raise ConfigError(f"bad pipeline label {label!r}")
        blocking = parts[0][2:]
    return PipelineConfig(rr_variant=rr_variant, shift=shift, blocking=blocking)


ALL_LABELS = [
    f"{sh}{rr}{bl}"
    for rr in ("rr", "crr")
    for sh in ("", "sh.")
    for bl in ("", ".blsd", ".blud", ".blsp", ".blup")
]


@dataclass
class TransformReport:
    input_clauses: int = 0
    output_clauses: int = 0
    input_bytes: int = 0
    output_bytes: int = 0
    shift_added: int = 0
    rr_added: int = 0
    blocking_added: int = 0
    fresh_symbols: list[str] = field(default_factory=list)

    CSV_HEADER = ("input_clauses,output_clauses,input_bytes,output_bytes,"
                  "shift_added,rr_added,blocking_added,fresh_symbols")

    def csv_row(self) -> str:
        return (f"{self.input_clauses},{self.output_clauses},"
                f"{self.input_bytes},{self.output_bytes},"
                f"{self.shift_added},{self.rr_added},{self.blocking_added},"
                f"{';'.join(self.fresh_symbols)}")


def _dedup_clauses(clauses: Iterable[Clause]) -> list[Clause]:
    out: dict[Clause, None] = {}
    for c in clauses:
        out.setdefault(c, None)
    return list(out)


def _fresh_vars(n: int, prefix: str = "x") -> list[Var]:
    return [Var(f"{RESERVED_VAR_PREFIX}{prefix}{i}") for i in range(1, n + 1)]


def _range_restrict_clause(c: Clause, dom: str) -> Clause:
    missing = [v for v in _head_var_order(c) if v not in _body_vars(c)]
    if not missing:
        return c
    extra = [Atom(dom, (Var(v),)) for v in missing]
    return Clause(c.head, list(c.body) + extra, c.label)


def _body_vars(c: Clause) -> set[str]:
    out: set[str] = set()
    for a in c.body:
        out |= vars_of(a)
    return out


def _head_var_order(c: Clause) -> list[str]:
    seen: list[str] = []

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in seen:
                seen.append(t.name)
        else:
            for a in t.args:
                walk(a)

    for atom in c.head:
        for t in atom.args:
            walk(t)
    return seen


def _step1_constant(problem: Problem, sig, policy: str) -> str:
    if policy == "reuse_first":
        for name, arity in sig.functions.items():
            if arity == 0:
                return name
    name = sig.fresh_symbol("c0", "const")
    sig.functions[name] = 0
    return name


# ---------------------------------------------------------------------------
# Classical range-restriction
# ---------------------------------------------------------------------------

def crr(problem: Problem, constant_policy: str = "reuse_first") -> Problem:
    """Classical transformation: shield head variables with dom and
    enumerate the Herbrand universe bottom-up."""
    sig = problem.signature.copy()
    dom = sig.fresh_symbol("dom", "dom")
    sig.add_predicate(dom, 1)
    c = _step1_constant(problem, sig, constant_policy)

    clauses: list[Clause] = [Clause([Atom(dom, (App(c, ()),))], [])]
    clauses += [_range_restrict_clause(cl, dom) for cl in problem.clauses]
    # constants count as 0-ary functions here, yielding dom(c') <- true
    for f, n in problem.signature.functions.items():
        xs = _fresh_vars(n)
        clauses.append(Clause([Atom(dom, (App(f, tuple(xs)),))],
                              [Atom(dom, (x,)) for x in xs]))
    return Problem(_dedup_clauses(clauses), sig, problem.name, dom_const=c)


# ---------------------------------------------------------------------------
# New range-restriction
# ---------------------------------------------------------------------------

def myequal_rewrite(clauses: list[Clause], sig) -> tuple[list[Clause], Optional[str]]:
    """Replace positive equality occurrences by a fresh proxy predicate.

    Returns the rewritten clauses plus the proxy definition clause; the two
    dom clauses for the proxy come out of Step 4 like for any predicate.
    Identity when no positive equality occurs.
    """
    if not any(a.pred == EQ for c in clauses for a in c.head):
        return clauses, None
    myequal = sig.fresh_symbol("myequal", "myequal")
    sig.add_predicate(myequal, 2)
    out = []
    for c in clauses:
        head = [Atom(myequal, a.args) if a.pred == EQ else a for a in c.head]
        out.append(Clause(head, c.body, c.label))
    x, y = Var("X"), Var("Y")
    out.append(Clause([Atom(EQ, (x, y))], [Atom(myequal, (x, y))]))
    return out, myequal


def rr(problem: Problem, constant_policy: str = "reuse_first") -> Problem:
    """Range-restriction that adds domain terms only by need.

    Step 2 inserts the non-variable top-level body terms via term
    abstraction, Step 4 covers positively occurring terms per predicate,
    Step 5 closes the domain under subterms per function symbol.
    """
    sig = problem.signature.copy()
    dom = sig.fresh_symbol("dom", "dom")
    sig.add_predicate(dom, 1)
    c = _step1_constant(problem, sig, constant_policy)

    step1 = [Clause([Atom(dom, (App(c, ()),))], [])]

    step2: list[Clause] = []
    for cl in problem.clauses:
        clause_vars = vars_of(cl)
        for atom in cl.body:
            abstraction, alpha = term_abstraction(atom, avoid=clause_vars)
            for v in abstraction.args:
                if isinstance(v, Var) and v.name in alpha:
                    step2.append(Clause([Atom(dom, (alpha[v.name],))],
                                        [abstraction]))

    restricted = [_range_restrict_clause(cl, dom) for cl in problem.clauses]
    step2 = [_range_restrict_clause(cl, dom) for cl in step2]

    rewritten, myequal = myequal_rewrite(restricted, sig)

    step4: list[Clause] = []
    skip_roles = {"dom", "sub"}
    for p, n in sig.predicates.items():
        if p == EQ or sig.specials.get(p) in skip_roles:
            continue
        xs = _fresh_vars(n)
        for i in range(n):
            step4.append(Clause([Atom(dom, (xs[i],))], [Atom(p, tuple(xs))]))

    step5: list[Clause] = []
    for f, n in sig.functions.items():
        if n == 0:
            continue
        xs = _fresh_vars(n)
        inner = Atom(dom, (App(f, tuple(xs)),))
        for i in range(n):
            step5.append(Clause([Atom(dom, (xs[i],))], [inner]))

    clauses = _dedup_clauses(step1 + rewritten + step2 + step4 + step5)
    return Problem(clauses, sig, problem.name, dom_const=c)


# ---------------------------------------------------------------------------
# Shifting
# ---------------------------------------------------------------------------

def _not_symbol(pred: str, sig) -> str:
    """The shifted partner of a predicate, created on first use."""
    if pred == EQ:
        existing = sig.special_named("neq")
        if existing:
            return existing
        name = sig.fresh_symbol("not_equal", "neq")
    else:
        existing = sig.special_named(f"shift:{pred}")
        if existing:
            return existing
        name = sig.fresh_symbol(f"not_{pred}", f"shift:{pred}")
    sig.add_predicate(name, sig.predicates.get(pred, 2))
    return name


def _consistency_clause(pred: str, not_pred: str, arity: int) -> Clause:
    xs = _fresh_vars(arity)
    return Clause([], [Atom(pred, tuple(xs)), Atom(not_pred, tuple(xs))])


def bs(problem: Problem) -> Problem:
    """Basic shifting: move body atoms containing proper functional terms
    into the head under their shifted predicate, with consistency clauses."""
    sig = problem.signature.copy()
    shifted_preds: dict[str, str] = {}
    clauses: list[Clause] = []
    for cl in problem.clauses:
        deep = [a for a in cl.body if contains_proper_functional(a)]
        if not deep:
            clauses.append(cl)
            continue
        rest = [a for a in cl.body if not contains_proper_functional(a)]
        new_head = list(cl.head)
        for a in deep:
            not_p = _not_symbol(a.pred, sig)
            shifted_preds.setdefault(a.pred, not_p)
            new_head.append(Atom(not_p, a.args))
        clauses.append(Clause(new_head, rest, cl.label))
    for pred, not_pred in shifted_preds.items():
        arity = 2 if pred == EQ else problem.signature.predicates[pred]
        clauses.append(_consistency_clause(pred, not_pred, arity))
    return Problem(_dedup_clauses(clauses), sig, problem.name, problem.dom_const)


def pf(problem: Problem) -> Problem:
    """Partial flattening: extract proper-functional top-level terms of
    non-equational body atoms into body equations.  The reflexivity unit is
    not added; the engine supplies reflexivity through congruence."""
    clauses: list[Clause] = []
    for cl in problem.clauses:
        targets: list[Term] = []
        for atom in cl.body:
            if atom.pred == EQ:
                continue
            for t in atom.args:
                if is_proper_functional(t) and t not in targets:
                    targets.append(t)
        if not targets:
            clauses.append(cl)
            continue
        avoid = vars_of(cl)
        fresh: list[Var] = []
        for i in range(1, len(targets) + 1):
            name = f"{RESERVED_VAR_PREFIX}F{i}"
            while name in avoid:
                name += "_"
            avoid.add(name)
            fresh.append(Var(name))
        replacement = dict(zip(targets, fresh))
        new_body: list[Atom] = []
        for atom in cl.body:
            if atom.pred == EQ:
                new_body.append(atom)
                continue
            new_body.append(Atom(atom.pred,
                                 tuple(replacement.get(t, t) for t in atom.args)))
        new_body += [Atom(EQ, (t, replacement[t])) for t in targets]
        clauses.append(Clause(cl.head, new_body, cl.label))
    return Problem(_dedup_clauses(clauses), problem.signature.copy(),
                   problem.name, problem.dom_const)


def sh(problem: Problem) -> Problem:
    """Shifting: partial flattening followed by basic shifting."""
    return bs(pf(problem))


# ---------------------------------------------------------------------------
# Blocking
# ---------------------------------------------------------------------------

def _require_dom(problem: Problem) -> str:
    dom = problem.signature.special_named("dom")
    if dom is None:
        raise ConfigError("blocking requires a dom predicate "
                          "(apply a range-restricting transformation first)")
    return dom


def _case_analysis_head(sig) -> tuple[list[Atom], str]:
    neq = _not_symbol(EQ, sig)
    x, y = _fresh_vars(2)
    return [Atom(EQ, (x, y)), Atom(neq, (x, y))], neq


def _sub_axioms(problem: Problem, sig, dom: str) -> tuple[str, list[Clause]]:
    sub = sig.fresh_symbol("sub", "sub")
    sig.add_predicate(sub, 2)
    x = Var(f"{RESERVED_VAR_PREFIX}x0")
    out = [Clause([Atom(sub, (x, x))], [Atom(dom, (x,))])]
    for f, n in problem.signature.functions.items():
        if n == 0:
            continue
        xs = _fresh_vars(n)
        fx = App(f, tuple(xs))
        for i in range(n):
            out.append(Clause([Atom(sub, (x, fx))],
                              [Atom(sub, (x, xs[i])), Atom(dom, (x,)),
                               Atom(dom, (fx,))]))
    return sub, out


def eligible_unary_predicates(problem: Problem,
                              original: Optional[Problem] = None) -> list[str]:
    """Unary input predicates a predicate-guarded blocking may merge on:
    original signature only, no generated symbols."""
    base = original.signature if original is not None else problem.signature
    out = []
    for p, n in base.predicates.items():
        if n != 1 or p == EQ:
            continue
        if base.specials.get(p) or problem.signature.specials.get(p):
            continue
        if p in problem.signature.predicates:
            out.append(p)
    return out


def bl_sd(problem: Problem) -> Problem:
    """Subterm domain blocking."""
    dom = _require_dom(problem)
    sig = problem.signature.copy()
    sub, sub_clauses = _sub_axioms(problem, sig, dom)
    head, neq = _case_analysis_head(sig)
    x, y = head[0].args
    added = sub_clauses + [
        Clause(head, [Atom(sub, (x, y))]),
        _consistency_clause(EQ, neq, 2),
    ]
    return Problem(_dedup_clauses(problem.clauses + added), sig,
                   problem.name, problem.dom_const)


def bl_sp(problem: Problem, original: Optional[Problem] = None) -> Problem:
    """Subterm predicate blocking: case analysis only under a shared unary
    input predicate."""
    dom = _require_dom(problem)
    sig = problem.signature.copy()
    sub, sub_clauses = _sub_axioms(problem, sig, dom)
    head, neq = _case_analysis_head(sig)
    x, y = head[0].args
    added = list(sub_clauses)
    for p in eligible_unary_predicates(problem, original):
        added.append(Clause(head, [Atom(sub, (x, y)), Atom(p, (x,)),
                                   Atom(p, (y,))]))
    added.append(_consistency_clause(EQ, neq, 2))
    return Problem(_dedup_clauses(problem.clauses + added), sig,
                   problem.name, problem.dom_const)


def bl_ud(problem: Problem) -> Problem:
    """Unrestricted domain blocking."""
    dom = _require_dom(problem)
    sig = problem.signature.copy()
    head, neq = _case_analysis_head(sig)
    x, y = head[0].args
    added = [
        Clause(head, [Atom(dom, (x,)), Atom(dom, (y,))]),
        _consistency_clause(EQ, neq, 2),
    ]
    return Problem(_dedup_clauses(problem.clauses + added), sig,
                   problem.name, problem.dom_const)


def bl_up(problem: Problem, original: Optional[Problem] = None) -> Problem:
    """Unrestricted predicate blocking."""
    sig = problem.signature.copy()
    head, neq = _case_analysis_head(sig)
    x, y = head[0].args
    added = []
    for p in eligible_unary_predicates(problem, original):
        added.append(Clause(head, [Atom(p, (x,)), Atom(p, (y,))]))
    added.append(_consistency_clause(EQ, neq, 2))
    return Problem(_dedup_clauses(problem.clauses + added), sig,
                   problem.name, problem.dom_const)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def apply_pipeline(problem: Problem,
                   cfg: PipelineConfig) -> tuple[Problem, TransformReport]:
    report = TransformReport()
    report.input_clauses = len(problem.clauses)
    input_text = print_clauses(problem)
    report.input_bytes = len(input_text.encode())

    current = problem
    if cfg.shift:
        before = len(current.clauses)
        current = sh(current)
        report.shift_added = len(current.clauses) - before
    if cfg.rr_variant == "new":
        before = len(current.clauses)
        current = rr(current, cfg.step1_constant_policy)
        report.rr_added = len(current.clauses) - before
    elif cfg.rr_variant == "classical":
        before = len(current.clauses)
        current = crr(current, cfg.step1_constant_policy)
        report.rr_added = len(current.clauses) - before
    if cfg.blocking != "none":
        before = len(current.clauses)
        if cfg.blocking == "sd":
            current = bl_sd(current)
        elif cfg.blocking == "sp":
            current = bl_sp(current, original=problem)
        elif cfg.blocking == "ud":
            current = bl_ud(current)
        else:
            current = bl_up(current, original=problem)
        report.blocking_added = len(current.clauses) - before

    if cfg.rr_variant != "none":
        for c in current.clauses:
            assert is_range_restricted(c), f"not range-restricted: {c}"

    report.output_clauses = len(current.clauses)
    report.output_bytes = len(print_clauses(current).encode())
    report.fresh_symbols = list(current.signature.specials)
    return current, report
