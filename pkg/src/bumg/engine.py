"""Bottom-up model generation over range-restricted clause sets.

The engine keeps one Branch of ground facts at a time.  Rules fire by
matching their body atoms against branch facts modulo the branch's
congruence closure; derived ground disjunctions wait on a prioritized
agenda.  Splitting is eager (highest priority), equality literals are split
on first and their branch explored first, so blocking equations become
available for rewriting and redundancy as early as possible.  Backtracking
is chronological over cloned branch states.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .cc import CongruenceClosure, TermTable
from .terms import (
    EQ,
    App,
    Atom,
    Clause,
    Signature,
    Term,
    Var,
    is_ground,
    is_range_restricted,
    vars_of,
)
from .tptp import ModelDocument, Problem

Literal = tuple[str, tuple[int, ...]]
Instance = tuple[Literal, ...]
TraceFn = Callable[[str], None]

# agenda priority classes, highest first
CLS_CLOSURE = 0          # empty head: the branch closes
CLS_EQ_DISJUNCTION = 1   # >= 2 literals, contains an equality literal
CLS_DISJUNCTION = 2      # >= 2 literals, no equality literal
CLS_UNIT = 3             # single literal (Horn rule application)


class NotRangeRestrictedError(Exception):
    pass


class _ResourceOut(Exception):
    def __init__(self, status: str):
        super().__init__(status)
        self.status = status


@dataclass
class Strategy:
    """Search strategy: equality-first eager splitting plus resource limits."""

    max_rules: int = 100_000
    max_depth: int = 10_000
    timeout: float = 60.0
    verify_models: bool = True


@dataclass
class SolveStats:
    rules: int = 0
    splits: int = 0
    branches: int = 0
    merges: int = 0
    ms: float = 0.0


@dataclass
class SolveResult:
    status: str  # Satisfiable | Unsatisfiable | Timeout | GaveUp
    model: Optional[ModelDocument] = None
    stats: SolveStats = field(default_factory=SolveStats)


# ---------------------------------------------------------------------------
# Branch state
# ---------------------------------------------------------------------------

class Branch:
    """Ground facts plus congruence closure; the mutable search state."""

    def __init__(self, table: TermTable, neq_name: Optional[str]):
        self.cc = CongruenceClosure(table)
        self.neq = neq_name
        # pred -> ordered set of argument tuples (term ids, roots at write time)
        self.facts: dict[str, dict[tuple[int, ...], None]] = {}
        self.agenda: list[deque[Instance]] = [deque(), deque(), deque(), deque()]
        self.pending: deque[tuple[str, tuple[int, ...]]] = deque()
        self.seen: set[frozenset] = set()
        self.depth = 0
        self.closed = False
        self.close_reason = ""

    def clone(self) -> "Branch":
        out = Branch.__new__(Branch)
        out.cc = self.cc.clone()
        out.neq = self.neq
        out.facts = {p: dict(t) for p, t in self.facts.items()}
        out.agenda = [deque(q) for q in self.agenda]
        out.pending = deque(self.pending)
        out.seen = set(self.seen)
        out.depth = self.depth
        out.closed = self.closed
        out.close_reason = self.close_reason
        return out

    # -- terms ---------------------------------------------------------------

    def intern(self, t: App) -> int:
        return self.cc.add(t)

    def term_str(self, tid: int) -> str:
        return self.cc.str_of(tid)

    def literal_str(self, lit: Literal) -> str:
        pred, args = lit
        if pred == EQ:
            return f"{self.term_str(args[0])} = {self.term_str(args[1])}"
        if self.neq is not None and pred == self.neq:
            return f"{self.term_str(args[0])} != {self.term_str(args[1])}"
        if not args:
            return pred
        return f"{pred}({','.join(self.term_str(a) for a in args)})"

    def instance_str(self, inst: Instance) -> str:
        if not inst:
            return "$false"
        return " | ".join(self.literal_str(l) for l in inst)

    # -- fact store ----------------------------------------------------------

    def holds(self, lit: Literal) -> bool:
        pred, args = lit
        find = self.cc.find
        key = tuple(find(a) for a in args)
        if pred == EQ:
            return key[0] == key[1]
        return key in self.facts.get(pred, ())

    def _add_fact(self, pred: str, args: tuple[int, ...]) -> None:
        key = tuple(self.cc.find(a) for a in args)
        store = self.facts.setdefault(pred, {})
        if key in store:
            return
        store[key] = None
        self.pending.append((pred, key))

    def assert_literal(self, lit: Literal) -> bool:
        """Apply a ground literal; returns True while the branch stays open."""
        pred, args = lit
        if pred == EQ:
            return self.assert_equation_ids(args[0], args[1])
        if self.neq is not None and pred == self.neq:
            return self.assert_disequation_ids(args[0], args[1])
        self._add_fact(pred, args)
        return True

    def assert_equation_ids(self, s: int, t: int) -> bool:
        if self.cc.congruent_ids(s, t):
            return not self.closed
        self.cc.merge(s, t)
        self._renormalize()
        return not self.closed

    def assert_disequation_ids(self, s: int, t: int) -> bool:
        if self.cc.congruent_ids(s, t):
            self.closed = True
            self.close_reason = "disequation with congruent sides"
            return False
        self._add_fact(self.neq, (s, t))
        self._add_fact(self.neq, (t, s))
        return True

    def assert_equation(self, s: App, t: App) -> str:
        """Public form: returns 'open' or 'closed'."""
        ok = self.assert_equation_ids(self.intern(s), self.intern(t))
        return "open" if ok else "closed"

    def assert_disequation(self, s: App, t: App) -> str:
        if self.neq is None:
            self.neq = "$neq"
        ok = self.assert_disequation_ids(self.intern(s), self.intern(t))
        return "open" if ok else "closed"

    def _renormalize(self) -> None:
        """Collapse facts after a merge and re-trigger rule evaluation."""
        find = self.cc.find
        new_facts: dict[str, dict[tuple[int, ...], None]] = {}
        for pred, store in self.facts.items():
            out: dict[tuple[int, ...], None] = {}
            for key in store:
                out.setdefault(tuple(find(a) for a in key), None)
            new_facts[pred] = out
        self.facts = new_facts
        if self.neq is not None:
            for a, b in self.facts.get(self.neq, ()):
                if find(a) == find(b):
                    self.closed = True
                    self.close_reason = "merge made a disequation reflexive"
                    return
        # merged classes can enable any rule anywhere: re-trigger everything
        self.pending.clear()
        for pred, store in self.facts.items():
            for key in store:
                self.pending.append((pred, key))

    # -- agenda ----------------------------------------------------------------

    def canonical(self, inst: Instance) -> frozenset:
        find = self.cc.find
        return frozenset((p, tuple(find(a) for a in args)) for p, args in inst)

    def classify(self, inst: Instance) -> int:
        if not inst:
            return CLS_CLOSURE
        if len(inst) == 1:
            return CLS_UNIT
        if any(p == EQ for p, _ in inst):
            return CLS_EQ_DISJUNCTION
        return CLS_DISJUNCTION

    def enqueue(self, inst: Instance) -> bool:
        key = self.canonical(inst)
        if key in self.seen:
            return False
        self.seen.add(key)
        self.agenda[self.classify(inst)].append(inst)
        return True

    def pop_agenda(self) -> Optional[Instance]:
        for q in self.agenda:
            if q:
                return q.popleft()
        return None

    def agenda_empty(self) -> bool:
        return not any(self.agenda)

    # -- matching ----------------------------------------------------------------

    def match_args(self, patterns: tuple[Term, ...], key: tuple[int, ...],
                   binding: dict[str, int]) -> Iterator[dict[str, int]]:
        """All ways to match pattern terms against stored argument classes."""
        if len(patterns) != len(key):
            return
        yield from self._match_seq(list(zip(patterns, key)), binding)

    def _match_seq(self, pairs: list[tuple[Term, int]],
                   binding: dict[str, int]) -> Iterator[dict[str, int]]:
        if not pairs:
            yield binding
            return
        (pattern, tid), rest = pairs[0], pairs[1:]
        root = self.cc.find(tid)
        if isinstance(pattern, Var):
            bound = binding.get(pattern.name)
            if bound is None:
                b2 = dict(binding)
                b2[pattern.name] = root
                yield from self._match_seq(rest, b2)
            elif self.cc.find(bound) == root:
                yield from self._match_seq(rest, binding)
            return
        table = self.cc.table
        emitted: set[frozenset] = set()
        for member in self.cc.members[root]:
            if table.syms[member] != pattern.sym:
                continue
            arg_ids = table.args_of[member]
            if len(arg_ids) != len(pattern.args):
                continue
            for b in self._match_seq(list(zip(pattern.args, arg_ids)), binding):
                for out in self._match_seq(rest, b):
                    key = frozenset(out.items())
                    if key not in emitted:
                        emitted.add(key)
                        yield out

    def ground_id(self, term: Term, binding: dict[str, int]) -> int:
        if isinstance(term, Var):
            return binding[term.name]
        args = tuple(self.cc.min_id(self.ground_id(a, binding))
                     for a in term.args)
        return self.cc.add_parts(term.sym, args)


# ---------------------------------------------------------------------------
# Compiled rules
# ---------------------------------------------------------------------------

@dataclass
class CompiledRule:
    label: str
    head: tuple[Atom, ...]
    ordinary: tuple[Atom, ...]
    eqs: tuple[tuple[Term, Term], ...]
    eq_only_vars: tuple[str, ...]

    @classmethod
    def compile(cls, clause: Clause, index: int) -> "CompiledRule":
        ordinary = tuple(a for a in clause.body if a.pred != EQ)
        eqs = tuple((a.args[0], a.args[1]) for a in clause.body if a.pred == EQ)
        bound: set[str] = set()
        for a in ordinary:
            bound |= vars_of(a)
        eq_vars: set[str] = set()
        for s, t in eqs:
            eq_vars |= vars_of(s) | vars_of(t)
        label = clause.label or f"r{index}"
        return cls(label, clause.head, ordinary, eqs,
                   tuple(sorted(eq_vars - bound)))


# ---------------------------------------------------------------------------
# The solver
# ---------------------------------------------------------------------------

class Solver:
    def __init__(self, problem: Problem, strategy: Optional[Strategy] = None,
                 trace: Optional[TraceFn] = None):
        self.problem = problem
        self.strategy = strategy or Strategy()
        self.trace = trace
        self.stats = SolveStats()
        self.table = TermTable(
            {name: i for i, name in enumerate(problem.signature.functions)})
        self.neq = problem.signature.special_named("neq")
        self.dom = problem.signature.special_named("dom")
        self.rules: list[CompiledRule] = []
        self.initial_units: list[Instance] = []
        self.initial_disjunctions: list[Instance] = []
        self._started = 0.0
        bad = [c for c in problem.clauses if not is_range_restricted(c)]
        if bad:
            raise NotRangeRestrictedError(
                f"{len(bad)} clause(s) are not range-restricted, e.g.: {bad[0]}")
        self._prepare()

    # -- setup -----------------------------------------------------------------

    def _prepare(self) -> None:
        scratch = Branch(self.table, self.neq)
        for i, clause in enumerate(self.problem.clauses, start=1):
            if clause.body:
                self.rules.append(CompiledRule.compile(clause, i))
                continue
            assert is_ground(clause), "positive clauses must be ground here"
            inst = tuple(self._literal_of(scratch, a) for a in clause.head)
            if len(inst) <= 1:
                self.initial_units.append(inst)
            else:
                self.initial_disjunctions.append(inst)

    def _literal_of(self, branch: Branch, atom: Atom) -> Literal:
        args = tuple(branch.intern(t) for t in atom.args)  # type: ignore[arg-type]
        return self._orient(branch, (atom.pred, args))

    def _orient(self, branch: Branch, lit: Literal) -> Literal:
        pred, args = lit
        if pred == EQ or (self.neq is not None and pred == self.neq):
            a, b = args
            cc = branch.cc
            if self.table.less(cc.min_id(b), cc.min_id(a)):
                return (pred, (b, a))
        return lit

    # -- events ------------------------------------------------------------------

    def _emit(self, line: str) -> None:
        if self.trace is not None:
            self.trace(line)

    def _check_limits(self) -> None:
        if self.stats.rules > self.strategy.max_rules:
            raise _ResourceOut("GaveUp")
        if time.monotonic() - self._started > self.strategy.timeout:
            raise _ResourceOut("Timeout")

    # -- derivation ----------------------------------------------------------------

    def _instances_for_rule(self, branch: Branch, rule: CompiledRule,
                            trigger: Optional[tuple[str, tuple[int, ...]]] = None,
                            ) -> Iterator[tuple[dict[str, int], CompiledRule]]:
        """Bindings satisfying the rule body, optionally anchored at a trigger
        fact that must match at least one body position."""
        positions = list(range(len(rule.ordinary)))
        if trigger is None:
            anchor_positions = [None]
        else:
            anchor_positions = [i for i in positions
                                if rule.ordinary[i].pred == trigger[0]]
        for anchor in anchor_positions:
            if anchor is None:
                seed = [({}, positions)]
            else:
                seed = []
                for b in branch.match_args(rule.ordinary[anchor].args,
                                           trigger[1], {}):
                    seed.append((b, [i for i in positions if i != anchor]))
            for binding, rest in seed:
                yield from self._complete(branch, rule, rest, binding)

    def _complete(self, branch: Branch, rule: CompiledRule,
                  positions: list[int], binding: dict[str, int],
                  ) -> Iterator[tuple[dict[str, int], CompiledRule]]:
        if not positions:
            yield from self._finish(branch, rule, binding)
            return
        atom = rule.ordinary[positions[0]]
        for key in list(branch.facts.get(atom.pred, ())):
            for b in branch.match_args(atom.args, key, binding):
                yield from self._complete(branch, rule, positions[1:], b)

    def _finish(self, branch: Branch, rule: CompiledRule,
                binding: dict[str, int],
                ) -> Iterator[tuple[dict[str, int], CompiledRule]]:
        free = [v for v in rule.eq_only_vars if v not in binding]
        if free:
            roots = branch.cc.roots()
            for combo in itertools.product(roots, repeat=len(free)):
                b = dict(binding)
                b.update(zip(free, combo))
                if self._eqs_hold(branch, rule, b):
                    yield b, rule
            return
        if self._eqs_hold(branch, rule, binding):
            yield binding, rule

    def _eqs_hold(self, branch: Branch, rule: CompiledRule,
                  binding: dict[str, int]) -> bool:
        for s, t in rule.eqs:
            if not branch.cc.congruent_ids(branch.ground_id(s, binding),
                                           branch.ground_id(t, binding)):
                return False
        return True

    def _derive(self, branch: Branch, rule: CompiledRule,
                binding: dict[str, int]) -> None:
        lits: list[Literal] = []
        for atom in rule.head:
            args = tuple(branch.ground_id(t, binding) for t in atom.args)
            lit = self._orient(branch, (atom.pred, args))
            if branch.holds(lit):
                return  # head already satisfied: redundant instance
            if lit not in lits:
                lits.append(lit)
        inst = tuple(lits)
        if branch.enqueue(inst):
            self.stats.rules += 1
            if self.trace is not None:
                self._emit(f"EVENT kind=derive rule={rule.label} "
                           f"instance={branch.instance_str(inst)}")
            self._check_limits()

    def _process_trigger(self, branch: Branch,
                         trigger: tuple[str, tuple[int, ...]]) -> None:
        for rule in self.rules:
            if not rule.ordinary:
                continue
            for binding, r in self._instances_for_rule(branch, rule, trigger):
                self._derive(branch, r, binding)

    def _run_eq_only_rules(self, branch: Branch) -> None:
        for rule in self.rules:
            if rule.ordinary:
                continue
            for binding, r in self._instances_for_rule(branch, rule):
                self._derive(branch, r, binding)

    def _sweep(self, branch: Branch) -> bool:
        """Full completion check; returns True if new work appeared."""
        before = self.stats.rules
        for rule in self.rules:
            for binding, r in self._instances_for_rule(branch, rule):
                self._derive(branch, r, binding)
        return self.stats.rules != before

    # -- agenda / branch loop ----------------------------------------------------

    def _split_order(self, inst: Instance) -> list[Literal]:
        lits = list(inst)
        for i, (pred, _) in enumerate(lits):
            if pred == EQ:
                return [lits[i]] + lits[:i] + lits[i + 1:]
        return lits

    def _assert(self, branch: Branch, lit: Literal) -> bool:
        pred, args = lit
        if pred == EQ:
            before = branch.cc.merges
            if self.trace is not None:
                self._emit(f"EVENT kind=assert-eq "
                           f"lhs={branch.term_str(args[0])} "
                           f"rhs={branch.term_str(args[1])}")
            open_ = branch.assert_literal(lit)
            self.stats.merges += branch.cc.merges - before
            if open_:
                self._run_eq_only_rules(branch)
            return open_
        if self.neq is not None and pred == self.neq:
            if self.trace is not None:
                self._emit(f"EVENT kind=assert-neq "
                           f"lhs={branch.term_str(args[0])} "
                           f"rhs={branch.term_str(args[1])}")
            return branch.assert_literal(lit)
        return branch.assert_literal(lit)

    def _run_branch(self, branch: Branch):
        """Process one branch until it closes, completes, or splits."""
        while True:
            self._check_limits()
            if branch.closed:
                return ("closed", None)
            inst = branch.pop_agenda()
            if inst is not None:
                if not inst:
                    branch.closed = True
                    branch.close_reason = "empty disjunction derived"
                    self._emit("EVENT kind=close reason=empty-disjunction")
                    return ("closed", None)
                if any(branch.holds(lit) for lit in inst):
                    continue  # became redundant since it was derived
                if len(inst) == 1:
                    if not self._assert(branch, inst[0]):
                        self._emit("EVENT kind=close reason=conflict")
                        return ("closed", None)
                    continue
                return ("split", self._split_order(inst))
            if branch.pending:
                trigger = branch.pending.popleft()
                self._process_trigger(branch, trigger)
                continue
            if self._sweep(branch):
                continue
            self._emit(f"EVENT kind=complete facts="
                       f"{sum(len(v) for v in branch.facts.values())}")
            return ("complete", None)

    # -- public entry ---------------------------------------------------------------

    def _verifiable_clauses(self) -> list[Clause]:
        """Clauses the collapsed finite model is guaranteed to satisfy.

        The quasi-Herbrand construction satisfies everything except the
        subterm-generation axioms of the sd/sp blockings: their heads build
        new subterm facts for function applications that the finite model
        maps back into the domain, so they only hold in the branch's
        Herbrand reading.
        """
        sub_names = {name for name, role in
                     self.problem.signature.specials.items() if role == "sub"}
        if not sub_names:
            return self.problem.clauses

        def generates_sub(c: Clause) -> bool:
            return any(a.pred in sub_names
                       and any(isinstance(t, App) and t.args for t in a.args)
                       for a in c.head)

        return [c for c in self.problem.clauses if not generates_sub(c)]

    def solve(self) -> SolveResult:
        self._started = time.monotonic()
        try:
            result = self._solve_inner()
        except _ResourceOut as out:
            result = SolveResult(out.status, None, self.stats)
        self.stats.ms = (time.monotonic() - self._started) * 1000.0
        result.stats = self.stats
        return result

    def _solve_inner(self) -> SolveResult:
        root = Branch(self.table, self.neq)
        for inst in self.initial_units:
            if not inst:
                return SolveResult("Unsatisfiable", None, self.stats)
            if not self._assert(root, inst[0]):
                return SolveResult("Unsatisfiable", None, self.stats)
        for inst in self.initial_disjunctions:
            root.enqueue(inst)
        self._run_eq_only_rules(root)

        # stack entries: (branch, literal-to-assert or None, needs_clone)
        stack: list[tuple[Branch, Optional[Literal], bool]] = [(root, None, False)]
        while stack:
            branch, literal, needs_clone = stack.pop()
            self.stats.branches += 1
            if needs_clone:
                branch = branch.clone()
            if literal is not None:
                if not self._assert(branch, literal):
                    self._emit("EVENT kind=close reason=assert-conflict")
                    continue
            outcome, payload = self._run_branch(branch)
            if outcome == "closed":
                continue
            if outcome == "complete":
                model = extract_model(branch, self.problem.signature,
                                      self.problem.dom_const)
                if self.strategy.verify_models:
                    ok, cex = check_model(model, self._verifiable_clauses())
                    if not ok:
                        raise RuntimeError(
                            f"internal error: extracted model fails on {cex}")
                return SolveResult("Satisfiable", model, self.stats)
            literals = payload
            if branch.depth + 1 > self.strategy.max_depth:
                raise _ResourceOut("GaveUp")
            self.stats.splits += 1
            if self.trace is not None:
                self._emit(f"EVENT kind=split instance="
                           f"{branch.instance_str(tuple(literals))} "
                           f"children={len(literals)}")
            # children share the parent object; all but the last clone it
            # lazily when popped, and the parent stays untouched until then
            branch.depth += 1
            entries = [(branch, lit, i < len(literals) - 1)
                       for i, lit in enumerate(literals)]
            stack.extend(reversed(entries))
        return SolveResult("Unsatisfiable", None, self.stats)


def saturate(problem: Problem, strategy: Optional[Strategy] = None,
             trace: Optional[TraceFn] = None) -> SolveResult:
    """Saturate a range-restricted problem: Satisfiable with a verified
    model, Unsatisfiable, or a resource status."""
    return Solver(problem, strategy, trace).solve()


# ---------------------------------------------------------------------------
# Public single-step operations (used directly by tests)
# ---------------------------------------------------------------------------

def hyperresolve(rule: Clause, branch: Branch) -> list[tuple[Atom, ...]]:
    """All non-redundant ground head instances of one rule against a branch.

    Instances are returned with class-representative arguments.
    """
    compiled = CompiledRule.compile(rule, 0)
    solver_like = _MiniDeriver(branch)
    out: list[tuple[Atom, ...]] = []
    for binding in solver_like.bindings(compiled):
        atoms = []
        redundant = False
        for atom in compiled.head:
            args = tuple(branch.ground_id(t, binding) for t in atom.args)
            lit = (atom.pred, args)
            if branch.holds(lit):
                redundant = True
                break
            atoms.append(Atom(atom.pred,
                              tuple(branch.cc.representative(a) for a in args)))
        if redundant:
            continue
        inst = tuple(dict.fromkeys(atoms))
        if inst not in out:
            out.append(inst)
    return out


class _MiniDeriver:
    """Body matching reused by the standalone hyperresolve entry point."""

    def __init__(self, branch: Branch):
        self.branch = branch

    def bindings(self, rule: CompiledRule) -> Iterator[dict[str, int]]:
        yield from self._complete(rule, list(range(len(rule.ordinary))), {})

    def _complete(self, rule: CompiledRule, positions: list[int],
                  binding: dict[str, int]) -> Iterator[dict[str, int]]:
        branch = self.branch
        if not positions:
            free = [v for v in rule.eq_only_vars if v not in binding]
            combos = itertools.product(branch.cc.roots(), repeat=len(free)) \
                if free else [()]
            for combo in combos:
                b = dict(binding)
                b.update(zip(free, combo))
                if all(branch.cc.congruent_ids(branch.ground_id(s, b),
                                               branch.ground_id(t, b))
                       for s, t in rule.eqs):
                    yield b
            return
        atom = rule.ordinary[positions[0]]
        for key in list(branch.facts.get(atom.pred, ())):
            for b in branch.match_args(atom.args, key, binding):
                yield from self._complete(rule, positions[1:], b)


def split(disjunction: list[Atom], branch: Branch) -> list[Branch]:
    """One branch extension per literal; an equality literal's extension
    comes first.  Extensions that close immediately are still returned."""
    lits: list[Literal] = []
    for atom in disjunction:
        args = tuple(branch.intern(t) for t in atom.args)  # type: ignore[arg-type]
        lits.append((atom.pred, args))
    order = list(range(len(lits)))
    for i, (pred, _) in enumerate(lits):
        if pred == EQ:
            order = [i] + [j for j in order if j != i]
            break
    out = []
    for j in order:
        child = branch.clone()
        child.depth += 1
        child.assert_literal(lits[j])
        out.append(child)
    return out


# ---------------------------------------------------------------------------
# Model extraction and checking
# ---------------------------------------------------------------------------

def extract_model(branch: Branch, sig: Signature,
                  fallback_const: Optional[str] = None) -> ModelDocument:
    """Read a finite interpretation off a completed open branch.

    The domain is the set of classes holding a dom fact (first-derivation
    order); functions evaluate to the syntactic application when its class
    is in the domain and to the fallback constant's class otherwise.
    """
    cc = branch.cc
    dom_name = None
    for name, role in sig.specials.items():
        if role == "dom":
            dom_name = name
    domain_roots: list[int] = []
    if dom_name is not None and dom_name in branch.facts:
        seen: set[int] = set()
        for (arg,) in branch.facts[dom_name]:
            root = cc.find(arg)
            if root not in seen:
                seen.add(root)
                domain_roots.append(root)
    else:
        # no dom predicate: fall back to every known class
        domain_roots = sorted(cc.roots(), key=lambda r: cc.min_of[r])
    root_set = set(domain_roots)

    domain = [cc.representative(r) for r in domain_roots]
    classes = {cc.representative(r): cc.class_members(r) for r in domain_roots}

    if fallback_const is not None:
        fb_root = cc.lookup(App(fallback_const, ()))
    else:
        fb_root = None
    if fb_root is None or fb_root not in root_set:
        fb_root = domain_roots[0] if domain_roots else None
    fallback = cc.representative(fb_root) if fb_root is not None else None

    functions: dict[tuple[str, tuple[Term, ...]], Term] = {}
    for f, n in sig.functions.items():
        for combo in itertools.product(domain, repeat=n):
            t = App(f, tuple(combo))
            root = cc.lookup(t)
            if root is not None and cc.find(root) in root_set:
                value = cc.representative(root)
            else:
                value = fallback
            assert value is not None, "empty domain cannot interpret functions"
            functions[(f, tuple(combo))] = value

    predicates: dict[str, list[tuple[Term, ...]]] = {}
    for pred in sig.predicates:
        predicates.setdefault(pred, [])
    for pred, store in branch.facts.items():
        rows = predicates.setdefault(pred, [])
        for key in store:
            roots = [cc.find(a) for a in key]
            if all(r in root_set for r in roots):
                row = tuple(cc.representative(r) for r in roots)
                if row not in rows:
                    rows.append(row)
    specials = set(sig.specials)
    return ModelDocument(domain, classes, functions, predicates,
                         specials=specials,
                         neq_name=sig.special_named("neq"))


def check_model(model: ModelDocument,
                clauses: list[Clause]) -> tuple[bool, Optional[tuple]]:
    """Evaluate clauses over the model; equality is identity of domain
    elements and the shifted equality partner is its complement.  Returns
    (True, None) or (False, (clause, valuation))."""
    from .oracle import falsifying_instance

    try:
        cex = falsifying_instance(clauses, model)
    except KeyError as missing:
        return False, (f"model does not interpret {missing}", None)
    if cex is None:
        return True, None
    return False, cex
