"""Brute-force finite model finder and ground evaluator.

This is a cross-checking oracle, not a competitive model searcher: it
enumerates every interpretation of a fixed domain size and tests all of
them.  Enumeration order is fixed so results are reproducible: function
tables run as base-k counters (functions in signature order, input tuples
in lexicographic order, last cell fastest), then predicate tables as bit
counters (atom 0 is the least significant bit).  The predicate scan is
vectorized with numpy but remains a plain exhaustive sweep.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .terms import EQ, App, Atom, Clause, Term, Var, signature_of, vars_of

DEFAULT_BUDGET = 1 << 24


class BudgetExceededError(Exception):
    def __init__(self, required: int, budget: int):
        super().__init__(
            f"would need to enumerate {required} interpretations "
            f"(budget {budget})")
        self.required = required
        self.budget = budget


@dataclass
class FiniteInterpretation:
    """Tables over the integer domain {0..k-1}; equality is identity."""

    size: int
    funcs: dict[tuple[str, tuple[int, ...]], int] = field(default_factory=dict)
    preds: dict[str, set[tuple[int, ...]]] = field(default_factory=dict)
    neq_name: Optional[str] = None

    @property
    def domain(self) -> Sequence[int]:
        return range(self.size)

    def apply(self, sym: str, args: tuple[int, ...]) -> int:
        return self.funcs[(sym, args)]

    def holds(self, pred: str, args: tuple[int, ...]) -> bool:
        return args in self.preds.get(pred, ())


# ---------------------------------------------------------------------------
# Shared ground evaluator
# ---------------------------------------------------------------------------

def _eval_term(t: Term, interp, valuation: dict[str, object]):
    if isinstance(t, Var):
        return valuation[t.name]
    return interp.apply(t.sym, tuple(_eval_term(a, interp, valuation)
                                     for a in t.args))


def _eval_atom(a: Atom, interp, valuation: dict[str, object]) -> bool:
    args = tuple(_eval_term(t, interp, valuation) for t in a.args)
    if a.pred == EQ:
        return args[0] == args[1]
    neq = getattr(interp, "neq_name", None)
    if neq is not None and a.pred == neq:
        return args[0] != args[1]
    return interp.holds(a.pred, args)


def falsifying_instance(clauses: Iterable[Clause], interp,
                        ) -> Optional[tuple[Clause, dict[str, object]]]:
    """First clause+valuation the interpretation falsifies, else None.

    Clauses are checked in order, valuations in lexicographic order over
    the domain sequence.
    """
    domain = list(interp.domain)
    if not domain:
        # first-order semantics assumes a non-empty domain
        raise ValueError("empty domain")
    for clause in clauses:
        names = sorted(vars_of(clause))
        for combo in itertools.product(domain, repeat=len(names)):
            valuation = dict(zip(names, combo))
            if all(_eval_atom(b, interp, valuation) for b in clause.body) \
                    and not any(_eval_atom(h, interp, valuation)
                                for h in clause.head):
                return clause, valuation
    return None


def evaluate(clauses: Iterable[Clause], interp,
             ) -> tuple[bool, Optional[tuple[Clause, dict[str, object]]]]:
    cex = falsifying_instance(clauses, interp)
    return (cex is None), cex


# ---------------------------------------------------------------------------
# Exhaustive model search
# ---------------------------------------------------------------------------

def _ground_value(t: Term, funcs, valuation: dict[str, int]) -> int:
    if isinstance(t, Var):
        return valuation[t.name]
    return funcs[(t.sym, tuple(_ground_value(a, funcs, valuation)
                               for a in t.args))]


def find_model(clauses: list[Clause], k: int,
               budget: int = DEFAULT_BUDGET) -> Optional[FiniteInterpretation]:
    """First interpretation of domain size exactly k satisfying the clauses.

    Raises BudgetExceededError when the candidate count exceeds the budget.
    """
    if k < 1:
        raise ValueError("domain size must be at least 1")
    sig = signature_of(clauses)
    fn_cells: list[tuple[str, tuple[int, ...]]] = []
    for f, n in sig.functions.items():
        for combo in itertools.product(range(k), repeat=n):
            fn_cells.append((f, combo))
    atoms: list[tuple[str, tuple[int, ...]]] = []
    atom_index: dict[tuple[str, tuple[int, ...]], int] = {}
    for p, n in sig.predicates.items():
        for combo in itertools.product(range(k), repeat=n):
            atom_index[(p, combo)] = len(atoms)
            atoms.append((p, combo))

    n_atoms = len(atoms)
    required = (k ** len(fn_cells)) * (1 << n_atoms)
    if required > budget:
        raise BudgetExceededError(required, budget)

    for fn_choice in itertools.product(range(k), repeat=len(fn_cells)):
        funcs = {cell: v for cell, v in zip(fn_cells, fn_choice)}
        constraints = _ground_constraints(clauses, funcs, atom_index, k)
        if constraints is None:
            continue  # some instance is false regardless of predicate tables
        bits = _first_satisfying_bits(constraints, n_atoms)
        if bits is None:
            continue
        preds: dict[str, set[tuple[int, ...]]] = {}
        for j, (p, combo) in enumerate(atoms):
            if bits >> j & 1:
                preds.setdefault(p, set()).add(combo)
        for p in sig.predicates:
            preds.setdefault(p, set())
        return FiniteInterpretation(k, funcs, preds)
    return None


def _ground_constraints(clauses, funcs, atom_index, k):
    """Compile clauses to (body_mask, head_mask) pairs over atom bits.

    Returns None when some ground instance is unsatisfiable for any
    predicate table under this function assignment.
    """
    constraints: list[tuple[int, int]] = []
    for clause in clauses:
        names = sorted(vars_of(clause))
        for combo in itertools.product(range(k), repeat=len(names)):
            valuation = dict(zip(names, combo))
            body_mask = 0
            head_mask = 0
            skip = False
            for atom in clause.body:
                vals = tuple(_ground_value(t, funcs, valuation)
                             for t in atom.args)
                if atom.pred == EQ:
                    if vals[0] != vals[1]:
                        skip = True  # body false: instance trivially true
                        break
                    continue
                body_mask |= 1 << atom_index[(atom.pred, vals)]
            if skip:
                continue
            for atom in clause.head:
                vals = tuple(_ground_value(t, funcs, valuation)
                             for t in atom.args)
                if atom.pred == EQ:
                    if vals[0] == vals[1]:
                        skip = True  # head true: instance trivially true
                        break
                    continue
                head_mask |= 1 << atom_index[(atom.pred, vals)]
            if skip:
                continue
            if body_mask == 0 and head_mask == 0:
                return None
            constraints.append((body_mask, head_mask))
    return constraints


_CHUNK = 1 << 18


def _first_satisfying_bits(constraints: list[tuple[int, int]],
                           n_atoms: int) -> Optional[int]:
    total = 1 << n_atoms
    if not constraints:
        return 0
    if n_atoms > 62:  # guarded by the budget, but keep numpy dtypes safe
        raise BudgetExceededError(total, _CHUNK)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        cands = np.arange(start, stop, dtype=np.int64)
        ok = np.ones(stop - start, dtype=bool)
        for body_mask, head_mask in constraints:
            sat = (cands & body_mask) != body_mask
            if head_mask:
                sat |= (cands & head_mask) != 0
            ok &= sat
            if not ok.any():
                break
        idx = np.flatnonzero(ok)
        if idx.size:
            return start + int(idx[0])
    return None


def find_model_upto(clauses: list[Clause], kmax: int,
                    budget: int = DEFAULT_BUDGET,
                    ) -> Optional[tuple[int, FiniteInterpretation]]:
    """Search domain sizes 1..kmax in order; first hit wins."""
    for k in range(1, kmax + 1):
        interp = find_model(clauses, k, budget)
        if interp is not None:
            return k, interp
    return None
