"""Shared test helpers: clause shorthand and seeded problem generators."""

from __future__ import annotations

import random

from bumg import tptp
from bumg.terms import (
    EQ,
    App,
    Atom,
    Clause,
    Term,
    Var,
    clause_set_alpha_equal,
    find_alpha,
    signature_of,
)


def prob(text: str, name: str = "t") -> tptp.Problem:
    return tptp.parse(text, name)


def cl(text: str) -> Clause:
    """Parse a single clause written as a TPTP formula."""
    problem = tptp.parse(f"cnf(c, axiom, ({text})).", "cl")
    assert len(problem.clauses) == 1
    return problem.clauses[0]


def assert_alpha_in(clauses, wanted_text: str) -> Clause:
    wanted = cl(wanted_text)
    got = find_alpha(clauses, wanted)
    assert got is not None, (
        f"no clause alpha-equal to {wanted} among:\n  "
        + "\n  ".join(str(c) for c in clauses))
    return got


def assert_alpha_set(clauses, wanted_texts) -> None:
    wanted = [cl(t) for t in wanted_texts]
    assert clause_set_alpha_equal(clauses, wanted), (
        "clause sets differ.\ngot:\n  "
        + "\n  ".join(str(c) for c in clauses)
        + "\nwanted:\n  " + "\n  ".join(str(c) for c in wanted))


def make_problem(clauses, name="gen") -> tptp.Problem:
    return tptp.Problem(list(clauses), signature_of(clauses), name)


# ---------------------------------------------------------------------------
# Random generators (seeded by the caller for reproducibility)
# ---------------------------------------------------------------------------

VARS = ("X", "Y", "Z")


def _random_term(rng: random.Random, consts, funcs, vars_, depth: int) -> Term:
    roll = rng.random()
    if vars_ and roll < 0.35:
        return Var(rng.choice(vars_))
    if funcs and depth > 0 and roll < 0.55:
        f = rng.choice(funcs)
        return App(f, (_random_term(rng, consts, funcs, vars_, depth - 1),))
    return App(rng.choice(consts), ())


def _random_atom(rng, preds, consts, funcs, vars_, depth) -> Atom:
    p, n = rng.choice(preds)
    return Atom(p, tuple(_random_term(rng, consts, funcs, vars_, depth)
                         for _ in range(n)))


def random_bs_problem(rng: random.Random, with_eq: bool,
                      name: str = "bs") -> tptp.Problem:
    """Function-free clause set: <=3 constants, <=3 predicates of arity <=2,
    <=6 clauses.  Kept small enough for the exhaustive oracle."""
    consts = ["a", "b", "c"][: rng.randint(1, 3)]
    preds = [("p", 1), ("q", 1), ("e", 2)][: rng.randint(1, 3)]
    clauses = []
    for _ in range(rng.randint(1, 6)):
        n_lits = rng.randint(1, 3)
        head, body = [], []
        for _ in range(n_lits):
            if with_eq and rng.random() < 0.25:
                atom = Atom(EQ, (_random_term(rng, consts, [], VARS, 0),
                                 _random_term(rng, consts, [], VARS, 0)))
            else:
                atom = _random_atom(rng, preds, consts, [], VARS[:2], 0)
            (head if rng.random() < 0.5 else body).append(atom)
        clauses.append(Clause(head, body))
    # make sure at least one constant is registered even if no clause uses it
    clauses.append(Clause([Atom("p", (App(consts[0], ()),))], []))
    return make_problem(clauses, name)


def random_fn_problem(rng: random.Random, name: str = "fn") -> tptp.Problem:
    """Tiny set with one unary function; small enough for oracle size <=3."""
    consts = ["a", "b"][: rng.randint(1, 2)]
    preds = [("p", 1), ("q", 1)][: rng.randint(1, 2)]
    clauses = []
    for _ in range(rng.randint(1, 5)):
        n_lits = rng.randint(1, 2)
        head, body = [], []
        for _ in range(n_lits):
            if rng.random() < 0.2:
                atom = Atom(EQ, (_random_term(rng, consts, ["f"], VARS[:2], 1),
                                 _random_term(rng, consts, [], VARS[:2], 0)))
            else:
                atom = _random_atom(rng, preds, consts, ["f"], VARS[:2], 1)
            (head if rng.random() < 0.5 else body).append(atom)
        clauses.append(Clause(head, body))
    clauses.append(Clause([Atom("p", (App(consts[0], ()),))], []))
    return make_problem(clauses, name)


def random_mixed_problem(rng: random.Random, name: str = "mix") -> tptp.Problem:
    if rng.random() < 0.5:
        return random_bs_problem(rng, with_eq=rng.random() < 0.5, name=name)
    return random_fn_problem(rng, name=name)


def random_any_problem(rng: random.Random, name: str = "any") -> tptp.Problem:
    """Unconstrained shape for size-growth measurements."""
    consts = ["a", "b", "c"][: rng.randint(1, 3)]
    funcs = ["f", "g"][: rng.randint(0, 2)]
    preds = [("p", 1), ("q", 2), ("r", 2), ("s", 3)][: rng.randint(1, 4)]
    clauses = []
    for _ in range(rng.randint(1, 8)):
        head, body = [], []
        for _ in range(rng.randint(1, 4)):
            if rng.random() < 0.15:
                atom = Atom(EQ, (_random_term(rng, consts, funcs, VARS, 2),
                                 _random_term(rng, consts, funcs, VARS, 1)))
            else:
                atom = _random_atom(rng, preds, consts, funcs, VARS, 2)
            (head if rng.random() < 0.5 else body).append(atom)
        clauses.append(Clause(head, body))
    return make_problem(clauses, name)


def random_ground_term(rng: random.Random, depth: int) -> App:
    if depth == 0 or rng.random() < 0.4:
        return App(rng.choice(["a", "b", "c"]), ())
    f = rng.choice(["f", "g"])
    arity = 1 if f == "f" else 2
    return App(f, tuple(random_ground_term(rng, depth - 1)
                        for _ in range(arity)))
