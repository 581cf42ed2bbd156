"""Ground congruence closure over hash-consed terms.

Terms are interned once per solver run into a shared TermTable keyed by
(symbol, argument ids), so very deep terms stay cheap: no structural
hashing, printing is iterative, and Term objects are only materialized on
demand (model extraction, traces).  Each branch owns its own union-find,
signature table and use lists; cloning a branch copies only that state.
Class representatives are the minimum member under (term weight, symbol
precedence), with precedence fixed by signature order.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .terms import App, Term


class TermTable:
    """Append-only intern table shared by all branches of a run."""

    def __init__(self, precedence: Optional[dict[str, int]] = None):
        self.nodes: dict[tuple[str, tuple[int, ...]], int] = {}
        self.syms: list[str] = []
        self.args_of: list[tuple[int, ...]] = []
        self.weight: list[int] = []
        self.precedence: dict[str, int] = dict(precedence or {})

    def _prec(self, sym: str) -> int:
        if sym not in self.precedence:
            self.precedence[sym] = len(self.precedence)
        return self.precedence[sym]

    def intern_parts(self, sym: str, arg_ids: tuple[int, ...]) -> int:
        key = (sym, arg_ids)
        tid = self.nodes.get(key)
        if tid is not None:
            return tid
        tid = len(self.syms)
        self.nodes[key] = tid
        self.syms.append(sym)
        self.args_of.append(arg_ids)
        self.weight.append(1 + sum(self.weight[a] for a in arg_ids))
        self._prec(sym)
        return tid

    def intern(self, t: App) -> int:
        memo: dict[int, int] = {}
        stack: list[App] = [t]
        while stack:
            top = stack[-1]
            missing = [a for a in top.args if id(a) not in memo]
            if missing:
                stack.extend(missing)  # type: ignore[arg-type]
                continue
            memo[id(top)] = self.intern_parts(
                top.sym, tuple(memo[id(a)] for a in top.args))
            stack.pop()
        return memo[id(t)]

    def less(self, i: int, j: int) -> bool:
        """Total term order: weight, then preorder symbol precedence."""
        if i == j:
            return False
        wi, wj = self.weight[i], self.weight[j]
        if wi != wj:
            return wi < wj
        prec = self.precedence
        si, sj = [i], [j]
        while si:
            a, b = si.pop(), sj.pop()
            pa, pb = prec[self.syms[a]], prec[self.syms[b]]
            if pa != pb:
                return pa < pb
            si.extend(reversed(self.args_of[a]))
            sj.extend(reversed(self.args_of[b]))
        return False  # identical symbol streams of equal weight: same term

    def str_of(self, tid: int) -> str:
        parts: list[str] = []
        stack: list[object] = [tid]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                parts.append(item)
                continue
            args = self.args_of[item]  # type: ignore[index]
            if not args:
                parts.append(self.syms[item])  # type: ignore[index]
                continue
            parts.append(self.syms[item] + "(")  # type: ignore[index]
            stack.append(")")
            for k in range(len(args) - 1, -1, -1):
                stack.append(args[k])
                if k:
                    stack.append(",")
        return "".join(parts)

    def to_term(self, tid: int) -> App:
        """Materialize the App tree for a node (iterative)."""
        memo: dict[int, App] = {}
        stack = [tid]
        while stack:
            t = stack[-1]
            if t in memo:
                stack.pop()
                continue
            missing = [a for a in self.args_of[t] if a not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[t] = App(self.syms[t],
                          tuple(memo[a] for a in self.args_of[t]))
            stack.pop()
        return memo[tid]


class CongruenceClosure:
    """Union-find with congruence propagation for one branch."""

    def __init__(self, table: TermTable):
        self.table = table
        self.parent: dict[int, int] = {}
        self.members: dict[int, list[int]] = {}
        self.sig: dict[tuple[str, tuple[int, ...]], int] = {}
        self.use: dict[int, list[int]] = {}
        self.min_of: dict[int, int] = {}
        self.merges = 0

    def clone(self) -> "CongruenceClosure":
        out = CongruenceClosure(self.table)
        out.parent = dict(self.parent)
        out.members = {k: list(v) for k, v in self.members.items()}
        out.sig = dict(self.sig)
        out.use = {k: list(v) for k, v in self.use.items()}
        out.min_of = dict(self.min_of)
        out.merges = self.merges
        return out

    # -- union-find ---------------------------------------------------------

    def find(self, i: int) -> int:
        parent = self.parent
        if i not in parent:
            # interned through another branch of the shared table
            self._add_id(i)
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def known(self, i: int) -> bool:
        return i in self.parent

    def roots(self) -> list[int]:
        seen: dict[int, None] = {}
        for i in self.parent:
            seen.setdefault(self.find(i), None)
        return list(seen)

    # -- term entry -----------------------------------------------------------

    def add(self, t: App) -> int:
        """Intern a ground term into this branch, propagating congruence."""
        tid = self.table.intern(t)
        self._add_id(tid)
        return tid

    def add_parts(self, sym: str, arg_ids: tuple[int, ...]) -> int:
        tid = self.table.intern_parts(sym, arg_ids)
        self._add_id(tid)
        return tid

    def _add_id(self, tid: int) -> None:
        if tid in self.parent:
            return
        stack = [tid]
        while stack:
            top = stack[-1]
            missing = [a for a in self.table.args_of[top]
                       if a not in self.parent]
            if missing:
                stack.extend(missing)
                continue
            stack.pop()
            if top in self.parent:
                continue
            self.parent[top] = top
            self.members[top] = [top]
            self.min_of[top] = top
            arg_roots = tuple(self.find(a) for a in self.table.args_of[top])
            for r in arg_roots:
                self.use.setdefault(r, []).append(top)
            key = (self.table.syms[top], arg_roots)
            existing = self.sig.get(key)
            if existing is None:
                self.sig[key] = top
            else:
                self._merge_ids(top, existing)

    # -- merging --------------------------------------------------------------

    def merge_terms(self, s: App, t: App) -> None:
        self.merge(self.add(s), self.add(t))

    def merge(self, i: int, j: int) -> None:
        self.find(i)
        self.find(j)
        self._merge_ids(i, j)

    def _merge_ids(self, i: int, j: int) -> None:
        work = [(i, j)]
        while work:
            a, b = work.pop()
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            if len(self.members.get(ra, ())) < len(self.members.get(rb, ())):
                ra, rb = rb, ra
            # rb is absorbed into ra
            self.parent[rb] = ra
            self.members[ra].extend(self.members.pop(rb))
            if self.table.less(self.min_of[rb], self.min_of[ra]):
                self.min_of[ra] = self.min_of[rb]
            self.min_of.pop(rb, None)
            self.merges += 1
            for p in self.use.pop(rb, []):
                key = (self.table.syms[p],
                       tuple(self.find(x) for x in self.table.args_of[p]))
                existing = self.sig.get(key)
                if existing is not None and self.find(existing) != self.find(p):
                    work.append((p, existing))
                else:
                    self.sig[key] = p
                self.use.setdefault(ra, []).append(p)

    # -- queries ---------------------------------------------------------------

    def congruent(self, s: App, t: App) -> bool:
        i, j = self.add(s), self.add(t)
        return self.find(i) == self.find(j)

    def congruent_ids(self, i: int, j: int) -> bool:
        return self.find(i) == self.find(j)

    def min_id(self, i: int) -> int:
        return self.min_of[self.find(i)]

    def representative(self, i: int) -> App:
        return self.table.to_term(self.min_id(i))

    def class_members(self, i: int) -> list[App]:
        return [self.table.to_term(m) for m in self.members[self.find(i)]]

    def str_of(self, i: int) -> str:
        return self.table.str_of(self.min_id(i))

    def lookup(self, t: Term) -> Optional[int]:
        """Find the class of a term without interning it (None if the term
        is not congruent to any known term)."""
        if not isinstance(t, App):
            return None
        arg_roots = []
        for a in t.args:
            r = self.lookup(a)
            if r is None:
                return None
            arg_roots.append(r)
        node = self.sig.get((t.sym, tuple(arg_roots)))
        if node is None:
            return None
        return self.find(node)


def naive_closure_holds(equations: Iterable[tuple[App, App]],
                        query: tuple[App, App]) -> bool:
    """Slow fixpoint reference used by the tests: closes the subterm-closed
    universe of the equations and the query under reflexivity, symmetry,
    transitivity and congruence."""
    from .terms import subterms

    universe: list[App] = []
    seen = set()
    for s, t in list(equations) + [query]:
        for u in (s, t):
            for sub in subterms(u):
                if sub not in seen:
                    seen.add(sub)
                    universe.append(sub)  # type: ignore[arg-type]
    related = {(s, t) for s, t in equations}
    related |= {(t, s) for s, t in equations}
    related |= {(u, u) for u in universe}
    changed = True
    while changed:
        changed = False
        for a in universe:
            for b in universe:
                if (a, b) in related:
                    continue
                if any((a, c) in related and (c, b) in related for c in universe):
                    related.add((a, b))
                    changed = True
                    continue
                if (a.sym == b.sym and len(a.args) == len(b.args)
                        and all((x, y) in related
                                for x, y in zip(a.args, b.args))):
                    related.add((a, b))
                    changed = True
    return query in related
