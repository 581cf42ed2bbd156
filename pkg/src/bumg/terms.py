"""Terms, atoms, clauses, substitutions and the syntactic predicates on them.

Clauses are kept in implication form: a disjunction of head atoms and a
conjunction of body atoms, both possibly empty.  All values here are
immutable and hashable, so they can be shared freely between branches
and worker tasks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

# The distinguished equality predicate.  Its name cannot be produced by the
# TPTP front end (identifiers never contain '='), so it can never collide
# with an input predicate.
EQ = "="

# Variables generated internally carry this prefix; the parser rejects it,
# which guarantees freshness against all parsed input.
RESERVED_VAR_PREFIX = "_"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.sym
        return f"{self.sym}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]
Subst = dict[str, Term]


def const(name: str) -> App:
    return App(name, ())


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if self.pred == EQ:
            return f"{self.args[0]} = {self.args[1]}"
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


def _dedup(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    out: dict[Atom, None] = {}
    for a in atoms:
        out[a] = None
    return tuple(out)


@dataclass(frozen=True)
class Clause:
    """head1 | ... | headm <- body1 & ... & bodyk.

    Duplicate atoms are removed on construction (set semantics); on ground
    clauses this is exactly factoring.
    """

    head: tuple[Atom, ...] = ()
    body: tuple[Atom, ...] = ()
    label: Optional[str] = None

    def __init__(self, head: Iterable[Atom] = (), body: Iterable[Atom] = (),
                 label: Optional[str] = None):
        object.__setattr__(self, "head", _dedup(head))
        object.__setattr__(self, "body", _dedup(body))
        object.__setattr__(self, "label", label)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Clause)
                and self.head == other.head and self.body == other.body)

    def __hash__(self) -> int:
        return hash((self.head, self.body))

    def __str__(self) -> str:
        h = " | ".join(str(a) for a in self.head) if self.head else "$false"
        if not self.body:
            return h
        b = " & ".join(str(a) for a in self.body)
        return f"{h} <- {b}"


@dataclass
class Signature:
    """Function and predicate symbols with arities.

    The equality predicate is implicit and never appears in ``predicates``.
    ``specials`` maps generated symbols to their role; the roles in use are
    ``dom``, ``sub``, ``myequal``, ``neq``, ``const`` and ``shift:<pred>``.
    Dict insertion order is the parse order, which fixes symbol precedence.
    """

    functions: dict[str, int] = field(default_factory=dict)
    predicates: dict[str, int] = field(default_factory=dict)
    specials: dict[str, str] = field(default_factory=dict)

    def copy(self) -> "Signature":
        return Signature(dict(self.functions), dict(self.predicates),
                         dict(self.specials))

    def constants(self) -> list[str]:
        return [f for f, n in self.functions.items() if n == 0]

    def special_named(self, role: str) -> Optional[str]:
        for name, r in self.specials.items():
            if r == role:
                return name
        return None

    def fresh_symbol(self, base: str, role: str) -> str:
        """Pick ``base`` or the first free ``base<n>`` and register it."""
        used = set(self.functions) | set(self.predicates) | set(self.specials)
        name = base
        n = 0
        while name in used:
            name = f"{base}{n}"
            n += 1
        self.specials[name] = role
        return name

    def add_function(self, name: str, arity: int) -> None:
        if self.functions.setdefault(name, arity) != arity:
            raise ValueError(f"arity clash for function {name}")

    def add_predicate(self, name: str, arity: int) -> None:
        if name == EQ:
            return
        if self.predicates.setdefault(name, arity) != arity:
            raise ValueError(f"arity clash for predicate {name}")


def signature_of(clauses: Iterable[Clause]) -> Signature:
    sig = Signature()

    def walk(t: Term) -> None:
        if isinstance(t, App):
            sig.add_function(t.sym, len(t.args))
            for a in t.args:
                walk(a)

    for c in clauses:
        for atom in itertools.chain(c.head, c.body):
            sig.add_predicate(atom.pred, atom.arity)
            for t in atom.args:
                walk(t)
    return sig


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------

def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def vars_of(x: Union[Term, Atom, Clause]) -> set[str]:
    if isinstance(x, Var):
        return {x.name}
    if isinstance(x, App):
        out: set[str] = set()
        for a in x.args:
            out |= vars_of(a)
        return out
    if isinstance(x, Atom):
        out = set()
        for t in x.args:
            out |= vars_of(t)
        return out
    out = set()
    for atom in itertools.chain(x.head, x.body):
        out |= vars_of(atom)
    return out


def is_ground(x: Union[Term, Atom, Clause]) -> bool:
    return not vars_of(x)


def is_proper_functional(t: Term) -> bool:
    """A term that is neither a variable nor a constant."""
    return isinstance(t, App) and len(t.args) > 0


def top_level_terms(a: Atom) -> list[Term]:
    return list(a.args)


def proper_functional_subterms(a: Atom) -> list[Term]:
    out: list[Term] = []
    seen: set[Term] = set()
    for t in a.args:
        for s in subterms(t):
            if is_proper_functional(s) and s not in seen:
                seen.add(s)
                out.append(s)
    return out


def contains_proper_functional(a: Atom) -> bool:
    return any(is_proper_functional(s) for t in a.args for s in subterms(t))


def is_range_restricted(c: Clause) -> bool:
    """Every head variable also occurs in the body."""
    body_vars: set[str] = set()
    for atom in c.body:
        body_vars |= vars_of(atom)
    for atom in c.head:
        if not vars_of(atom) <= body_vars:
            return False
    return True


def is_horn(c: Clause) -> bool:
    return len(c.head) <= 1


def is_bs_clause(c: Clause) -> bool:
    """All functional terms occurring in the clause are constants."""
    for atom in itertools.chain(c.head, c.body):
        if contains_proper_functional(atom):
            return False
    return True


# ---------------------------------------------------------------------------
# Substitutions, matching and unification
# ---------------------------------------------------------------------------

def subst_term(t: Term, s: Subst) -> Term:
    if isinstance(t, Var):
        return s.get(t.name, t)
    if not t.args:
        return t
    return App(t.sym, tuple(subst_term(a, s) for a in t.args))


def subst_atom(a: Atom, s: Subst) -> Atom:
    return Atom(a.pred, tuple(subst_term(t, s) for t in a.args))


def subst_clause(c: Clause, s: Subst) -> Clause:
    return Clause([subst_atom(a, s) for a in c.head],
                  [subst_atom(a, s) for a in c.body], c.label)


def compose(s1: Subst, s2: Subst) -> Subst:
    """Apply s1 then s2 (as one substitution)."""
    out = {v: subst_term(t, s2) for v, t in s1.items()}
    for v, t in s2.items():
        out.setdefault(v, t)
    return out


def _occurs(v: str, t: Term, s: Subst) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t.name == v
    return any(_occurs(v, a, s) for a in t.args)


def _walk(t: Term, s: Subst) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def unify_terms(t1: Term, t2: Term, s: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier with occurs check, or None."""
    s = dict(s) if s else {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, s):
                return None
            s[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a, s):
                return None
            s[b.name] = a
        else:
            if a.sym != b.sym or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    # resolve chains so the result is idempotent
    return {v: subst_term_full(t, s) for v, t in s.items()}


def subst_term_full(t: Term, s: Subst) -> Term:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t
    if not t.args:
        return t
    return App(t.sym, tuple(subst_term_full(a, s) for a in t.args))


def mgu(a1: Atom, a2: Atom) -> Optional[Subst]:
    if a1.pred != a2.pred or a1.arity != a2.arity:
        return None
    s: Optional[Subst] = {}
    for t1, t2 in zip(a1.args, a2.args):
        s = unify_terms(t1, t2, s)
        if s is None:
            return None
    return {v: subst_term_full(t, s) for v, t in s.items()}


def match_term(pattern: Term, ground: Term, s: Optional[Subst] = None) -> Optional[Subst]:
    """One-sided unification: substitution s with pattern*s == ground."""
    s = dict(s) if s else {}
    stack = [(pattern, ground)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Var):
            bound = s.get(p.name)
            if bound is None:
                s[p.name] = g
            elif bound != g:
                return None
        else:
            if not isinstance(g, App) or p.sym != g.sym or len(p.args) != len(g.args):
                return None
            stack.extend(zip(p.args, g.args))
    return s


def match(pattern: Atom, ground: Atom) -> Optional[Subst]:
    if pattern.pred != ground.pred or pattern.arity != ground.arity:
        return None
    s: Optional[Subst] = {}
    for p, g in zip(pattern.args, ground.args):
        s = match_term(p, g, s)
        if s is None:
            return None
    return s


# ---------------------------------------------------------------------------
# Term abstraction
# ---------------------------------------------------------------------------

def term_abstraction(a: Atom, avoid: Optional[set[str]] = None) -> tuple[Atom, Subst]:
    """Replace each non-variable top-level argument by a fresh variable.

    Returns the abstracted atom and the substitution mapping the fresh
    variables back to the replaced terms.  Fresh names carry the reserved
    prefix and additionally avoid ``avoid``.
    """
    avoid = set(avoid) if avoid else set()
    avoid |= vars_of(a)
    new_args: list[Term] = []
    alpha: Subst = {}
    for i, t in enumerate(a.args, start=1):
        if isinstance(t, Var):
            new_args.append(t)
            continue
        name = f"{RESERVED_VAR_PREFIX}A{i}"
        n = 0
        while name in avoid:
            n += 1
            name = f"{RESERVED_VAR_PREFIX}A{i}_{n}"
        avoid.add(name)
        new_args.append(Var(name))
        alpha[name] = t
    return Atom(a.pred, tuple(new_args)), alpha


# ---------------------------------------------------------------------------
# Alpha equivalence (used by tests and golden comparisons)
# ---------------------------------------------------------------------------

def _match_atoms_bijective(a: Atom, b: Atom, fwd: dict[str, str],
                           bwd: dict[str, str]) -> Optional[tuple[dict, dict]]:
    if a.pred != b.pred or a.arity != b.arity:
        return None
    fwd, bwd = dict(fwd), dict(bwd)
    stack = list(zip(a.args, b.args))
    while stack:
        x, y = stack.pop()
        if isinstance(x, Var) != isinstance(y, Var):
            return None
        if isinstance(x, Var):
            if fwd.get(x.name, y.name) != y.name or bwd.get(y.name, x.name) != x.name:
                return None
            fwd[x.name] = y.name
            bwd[y.name] = x.name
        else:
            if x.sym != y.sym or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
    return fwd, bwd


def _match_atom_sets(xs: tuple[Atom, ...], ys: tuple[Atom, ...],
                     fwd: dict, bwd: dict) -> Iterator[tuple[dict, dict]]:
    if not xs:
        yield fwd, bwd
        return
    x, rest = xs[0], xs[1:]
    for i, y in enumerate(ys):
        m = _match_atoms_bijective(x, y, fwd, bwd)
        if m is not None:
            yield from _match_atom_sets(rest, ys[:i] + ys[i + 1:], m[0], m[1])


def alpha_equal(c1: Clause, c2: Clause) -> bool:
    """Clauses equal up to a variable renaming, with head/body as sets."""
    if len(c1.head) != len(c2.head) or len(c1.body) != len(c2.body):
        return False
    for fwd, bwd in _match_atom_sets(c1.head, c2.head, {}, {}):
        for _ in _match_atom_sets(c1.body, c2.body, fwd, bwd):
            return True
    return False


def clause_set_alpha_equal(s1: Iterable[Clause], s2: Iterable[Clause]) -> bool:
    left, right = list(s1), list(s2)
    if len(left) != len(right):
        return False

    def go(ls: list[Clause], rs: list[Clause]) -> bool:
        if not ls:
            return True
        c = ls[0]
        for i, d in enumerate(rs):
            if alpha_equal(c, d) and go(ls[1:], rs[:i] + rs[i + 1:]):
                return True
        return False

    return go(left, right)


def find_alpha(clauses: Iterable[Clause], wanted: Clause) -> Optional[Clause]:
    for c in clauses:
        if alpha_equal(c, wanted):
            return c
    return None
