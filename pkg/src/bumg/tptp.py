"""TPTP-CNF front end: parsing, clause printing, model files, SZS lines.

Supported input subset: ``cnf(name, role, formula).`` statements where the
formula is a disjunction of literals built from ``|``, ``~``, ``=``, ``!=``
and parentheses, plus ``%`` comments.  ``include`` directives are rejected.
Initial-uppercase identifiers are variables; identifiers starting with the
reserved ``_`` prefix are rejected so internally generated variables can
never collide with parsed ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import (
    EQ,
    App,
    Atom,
    Clause,
    Signature,
    Term,
    Var,
    signature_of,
)

SZS_STATUSES = ("Satisfiable", "Unsatisfiable", "Timeout", "GaveUp")


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Problem:
    clauses: list[Clause]
    signature: Signature
    name: str = "problem"
    # constant used by the range-restricting transformations for dom(c);
    # set by the transform module, None for freshly parsed problems
    dom_const: Optional[str] = None

    def copy(self) -> "Problem":
        return Problem(list(self.clauses), self.signature.copy(), self.name,
                       self.dom_const)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<dollar>\$[a-z]+)
  | (?P<quoted>'[^'\n]*')
  | (?P<neq>!=)
  | (?P<punct>[(),.|~=])
  | (?P<bad>\S)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        assert m is not None
        kind = m.lastgroup or "bad"
        value = m.group()
        if kind == "bad":
            if value == "_":
                raise ParseError("identifiers with reserved prefix '_' are not allowed",
                                 line, col)
            raise ParseError(f"unexpected character {value!r}", line, col)
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, name: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.name = name
        self.fn_arity: dict[str, int] = {}
        self.pred_arity: dict[str, int] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def fail(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # -- grammar ------------------------------------------------------------

    def parse_problem(self) -> Problem:
        clauses: list[Clause] = []
        while self.peek().kind != "eof":
            t = self.peek()
            if t.text == "include":
                raise self.fail("include directives are not supported")
            if t.text != "cnf":
                raise self.fail(f"expected 'cnf', found {t.text!r}")
            clauses.append(self.parse_cnf())
        return Problem(clauses, signature_of(clauses), self.name)

    def _check_arity(self, table: dict[str, int], name: str, arity: int,
                     tok: _Tok, kind: str) -> None:
        if table.setdefault(name, arity) != arity:
            raise ParseError(
                f"{kind} {name} used with arity {arity}, "
                f"previously {table[name]}", tok.line, tok.col)

    def parse_cnf(self) -> Clause:
        self.expect("cnf")
        self.expect("(")
        name_tok = self.next()
        if name_tok.kind not in ("lower", "upper"):
            raise ParseError("expected clause name", name_tok.line, name_tok.col)
        self.expect(",")
        role = self.next()
        if role.kind != "lower":
            raise ParseError("expected clause role", role.line, role.col)
        self.expect(",")
        parenthesized = self.peek().text == "("
        if parenthesized:
            self.next()
        head, body = self.parse_disjunction()
        if parenthesized:
            self.expect(")")
        self.expect(")")
        self.expect(".")
        return Clause(head, body, name_tok.text)

    def parse_disjunction(self) -> tuple[list[Atom], list[Atom]]:
        head: list[Atom] = []
        body: list[Atom] = []
        while True:
            self.parse_literal(head, body)
            if self.peek().text == "|":
                self.next()
                continue
            return head, body

    def parse_literal(self, head: list[Atom], body: list[Atom]) -> None:
        t = self.peek()
        if t.kind == "dollar":
            self.next()
            if t.text == "$false":
                return  # contributes nothing to the disjunction
            raise ParseError(f"unsupported token {t.text!r}", t.line, t.col)
        negated = False
        if t.text == "~":
            self.next()
            negated = True
        atom, neq_literal = self.parse_atom_or_equation()
        if neq_literal:
            # s != t is the negation of s = t
            negated = not negated
        (body if negated else head).append(atom)

    def parse_atom_or_equation(self) -> tuple[Atom, bool]:
        start = self.peek()
        first = self._parse_term_raw()
        nxt = self.peek()
        if nxt.text == "=" or nxt.kind == "neq":
            if isinstance(first, App):
                self._check_arity(self.fn_arity, first.sym, len(first.args),
                                  start, "function")
            self.next()
            second = self.parse_term()
            return Atom(EQ, (first, second)), nxt.kind == "neq"
        if isinstance(first, Var):
            raise ParseError("a variable is not an atom", nxt.line, nxt.col)
        self._check_arity(self.pred_arity, first.sym, len(first.args), start,
                          "predicate")
        return Atom(first.sym, first.args), False

    def parse_term(self) -> Term:
        start = self.peek()
        t = self._parse_term_raw()
        if isinstance(t, App):
            self._check_arity(self.fn_arity, t.sym, len(t.args), start, "function")
        return t

    def _parse_term_raw(self) -> Term:
        """Parse a term; the outermost symbol's arity is checked by callers,
        which know whether it plays a function or predicate role."""
        t = self.next()
        if t.kind == "upper":
            return Var(t.text)
        if t.kind != "lower":
            raise ParseError(f"expected a term, found {t.text!r}", t.line, t.col)
        if self.peek().text != "(":
            return App(t.text, ())
        self.next()
        args = [self.parse_term()]
        while self.peek().text == ",":
            self.next()
            args.append(self.parse_term())
        self.expect(")")
        return App(t.text, tuple(args))


def parse(text: str, name: str = "problem") -> Problem:
    """Parse TPTP-CNF text into a Problem.

    Raises ParseError for syntax errors, reserved-prefix identifiers,
    include directives and arity clashes.
    """
    parser = _Parser(text, name)
    problem = parser.parse_problem()
    try:
        problem.signature = signature_of(problem.clauses)
    except ValueError as exc:  # arity clash
        raise ParseError(str(exc), 0, 0) from exc
    return problem


def parse_file(path: str) -> Problem:
    from pathlib import Path

    p = Path(path)
    return parse(p.read_text(), p.stem)


# ---------------------------------------------------------------------------
# Clause printing
# ---------------------------------------------------------------------------

_VALID_VAR = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")


def _rename_map(clause: Clause) -> dict[str, str]:
    """Deterministic per-clause renaming of internal variables.

    Parsed variable names are kept; reserved-prefix names are renamed to the
    first free X1, X2, ... in first-occurrence order.
    """
    order: list[str] = []
    seen: set[str] = set()

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in seen:
                seen.add(t.name)
                order.append(t.name)
        else:
            for a in t.args:
                walk(a)

    for atom in list(clause.head) + list(clause.body):
        for t in atom.args:
            walk(t)
    keep = {n for n in order if _VALID_VAR.match(n)}
    out: dict[str, str] = {}
    counter = 1
    for n in order:
        if n in keep:
            out[n] = n
            continue
        while f"X{counter}" in keep:
            counter += 1
        out[n] = f"X{counter}"
        keep.add(f"X{counter}")
    return out


def _print_term(t: Term, ren: dict[str, str]) -> str:
    if isinstance(t, Var):
        return ren.get(t.name, t.name)
    if not t.args:
        return t.sym
    return f"{t.sym}({','.join(_print_term(a, ren) for a in t.args)})"


def _print_literal(a: Atom, ren: dict[str, str], negated: bool) -> str:
    if a.pred == EQ:
        op = " != " if negated else " = "
        return op.join(_print_term(t, ren) for t in a.args)
    text = a.pred if not a.args else \
        f"{a.pred}({','.join(_print_term(t, ren) for t in a.args)})"
    return f"~{text}" if negated else text


def print_clause(c: Clause, name: str) -> str:
    ren = _rename_map(c)
    lits = [_print_literal(a, ren, False) for a in c.head]
    lits += [_print_literal(a, ren, True) for a in c.body]
    formula = " | ".join(lits) if lits else "$false"
    return f"cnf({name}, axiom, ({formula}))."


def print_clauses(problem: Problem) -> str:
    lines = []
    for i, c in enumerate(problem.clauses, start=1):
        name = c.label if c.label else f"c{i}"
        lines.append(print_clause(c, name))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# SZS status lines
# ---------------------------------------------------------------------------

def print_szs(status: str, name: str) -> str:
    if status not in SZS_STATUSES:
        raise ValueError(f"unknown SZS status {status!r}")
    return f"% SZS status {status} for {name}"


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass
class ModelDocument:
    """A finite interpretation over representative ground terms.

    ``functions`` is total over domain tuples for every signature function
    symbol; ``predicates`` holds every predicate including the generated
    ones, which are excluded from printing but kept for checking transformed
    clause sets.
    """

    domain: list[Term]
    classes: dict[Term, list[Term]]
    functions: dict[tuple[str, tuple[Term, ...]], Term]
    predicates: dict[str, list[tuple[Term, ...]]]
    specials: set[str] = field(default_factory=set)
    neq_name: Optional[str] = None

    def holds(self, pred: str, args: tuple[Term, ...]) -> bool:
        return args in self.predicates.get(pred, [])

    def apply(self, sym: str, args: tuple[Term, ...]) -> Term:
        return self.functions[(sym, args)]

    def eval_term(self, t: Term, valuation: Optional[dict[str, Term]] = None) -> Term:
        if isinstance(t, Var):
            assert valuation is not None and t.name in valuation
            return valuation[t.name]
        return self.apply(t.sym, tuple(self.eval_term(a, valuation) for a in t.args))


def _term_str(t: Term) -> str:
    return _print_term(t, {})


def print_model(doc: ModelDocument) -> str:
    lines = ["model."]
    lines.append("domain: " + ", ".join(_term_str(t) for t in doc.domain) + ".")
    for rep in doc.domain:
        members = doc.classes.get(rep, [rep])
        if len(members) >= 2:
            lines.append(f"class: {_term_str(rep)} = "
                         + ", ".join(_term_str(m) for m in members) + ".")
    fn_lines = []
    for (sym, args), val in doc.functions.items():
        fn_lines.append(f"fn {sym}: ({','.join(_term_str(a) for a in args)})"
                        f" -> {_term_str(val)}.")
    lines.extend(sorted(fn_lines))
    pred_lines = []
    for pred, tuples in doc.predicates.items():
        if pred in doc.specials or pred == EQ:
            continue
        for args in tuples:
            pred_lines.append(
                f"pred {pred}: ({','.join(_term_str(a) for a in args)}).")
    lines.extend(sorted(pred_lines))
    return "\n".join(lines) + "\n"


class ModelParseError(Exception):
    pass


def _parse_ground_term(text: str) -> Term:
    text = text.strip()
    toks = _tokenize(text)

    def term(i: int) -> tuple[Term, int]:
        t = toks[i]
        if t.kind != "lower":
            raise ModelParseError(f"bad term {text!r}")
        i += 1
        if i < len(toks) and toks[i].text == "(":
            i += 1
            args = []
            while True:
                a, i = term(i)
                args.append(a)
                if toks[i].text == ",":
                    i += 1
                    continue
                break
            if toks[i].text != ")":
                raise ModelParseError(f"bad term {text!r}")
            return App(t.text, tuple(args)), i + 1
        return App(t.text, ()), i

    out, i = term(0)
    if toks[i].kind != "eof":
        raise ModelParseError(f"trailing input in term {text!r}")
    return out


def _split_terms(text: str) -> list[Term]:
    text = text.strip()
    if not text:
        return []
    parts: list[str] = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur += ch
    parts.append(cur)
    return [_parse_ground_term(p) for p in parts if p.strip()]


def parse_model(text: str) -> ModelDocument:
    """Inverse of print_model (specials information is not recoverable)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "model.":
        raise ModelParseError("missing 'model.' header")
    domain: list[Term] = []
    classes: dict[Term, list[Term]] = {}
    functions: dict[tuple[str, tuple[Term, ...]], Term] = {}
    predicates: dict[str, list[tuple[Term, ...]]] = {}
    for ln in lines[1:]:
        if not ln.endswith("."):
            raise ModelParseError(f"line does not end with '.': {ln!r}")
        ln = ln[:-1]
        if ln.startswith("domain:"):
            domain = _split_terms(ln[len("domain:"):])
        elif ln.startswith("class:"):
            rep_text, members_text = ln[len("class:"):].split("=", 1)
            rep = _parse_ground_term(rep_text)
            classes[rep] = _split_terms(members_text)
        elif ln.startswith("fn "):
            sig_part, val_text = ln[len("fn "):].split("->", 1)
            sym, args_text = sig_part.split(":", 1)
            args_text = args_text.strip()
            if not (args_text.startswith("(") and args_text.endswith(")")):
                raise ModelParseError(f"bad fn line: {ln!r}")
            args = _split_terms(args_text[1:-1])
            functions[(sym.strip(), tuple(args))] = _parse_ground_term(val_text)
        elif ln.startswith("pred "):
            sym, args_text = ln[len("pred "):].split(":", 1)
            args_text = args_text.strip()
            if not (args_text.startswith("(") and args_text.endswith(")")):
                raise ModelParseError(f"bad pred line: {ln!r}")
            args = tuple(_split_terms(args_text[1:-1]))
            predicates.setdefault(sym.strip(), []).append(args)
        else:
            raise ModelParseError(f"unrecognized model line: {ln!r}")
    for rep in domain:
        classes.setdefault(rep, [rep])
    return ModelDocument(domain, classes, functions, predicates)
