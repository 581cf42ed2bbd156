from pathlib import Path

import pytest

import bumg
from bumg import tptp
from bumg.terms import EQ, App, Atom, Clause, Var, clause_set_alpha_equal
from bumg.tptp import ModelDocument, ParseError, parse, parse_model, print_clauses, print_model, print_szs

from helpers import cl

CORPUS = bumg.corpus_dir()


class TestParsing:
    def test_polarity_split(self):
        p = parse("cnf(c1, axiom, (q(f(X)) | ~p(X))).")
        assert p.clauses[0] == cl("q(f(X)) | ~p(X)")
        assert p.clauses[0].head[0].pred == "q"
        assert p.clauses[0].body[0].pred == "p"

    def test_fact(self):
        p = parse("cnf(c2, axiom, (p(a))).")
        assert p.clauses[0].head == (Atom("p", (App("a"),)),)
        assert p.clauses[0].body == ()

    def test_positive_equality(self):
        p = parse("cnf(c3, axiom, (a = b | ~r(X))).")
        clause = p.clauses[0]
        assert clause.head == (Atom(EQ, (App("a"), App("b"))),)
        assert clause.body[0].pred == "r"

    def test_negative_equality_goes_to_body(self):
        p = parse("cnf(c, axiom, (p(X) | a != b)).")
        clause = p.clauses[0]
        assert clause.head == (Atom("p", (Var("X"),)),)
        assert clause.body == (Atom(EQ, (App("a"), App("b"))),)

    def test_negated_equation(self):
        p = parse("cnf(c, axiom, (~ a = b)).")
        assert p.clauses[0].body == (Atom(EQ, (App("a"), App("b"))),)
        # double negation: ~ applied to the != literal
        p2 = parse("cnf(c, axiom, (~ a != b)).")
        assert p2.clauses[0].head == (Atom(EQ, (App("a"), App("b"))),)

    def test_false_literal(self):
        p = parse("cnf(c, axiom, ($false | p(a))).")
        assert p.clauses[0] == cl("p(a)")
        p2 = parse("cnf(c, axiom, ($false)).")
        assert p2.clauses[0].head == () and p2.clauses[0].body == ()

    def test_unparenthesized_formula(self):
        p = parse("cnf(c, axiom, p(a) | q(b)).")
        assert len(p.clauses[0].head) == 2

    def test_comments_and_names(self):
        p = parse("% leading\ncnf(name1, hypothesis, (p(a))). % trailing\n")
        assert p.clauses[0].label == "name1"

    def test_signature_collection(self):
        p = parse("cnf(c, axiom, (q(f(X),a) | ~p(X))).")
        assert p.signature.functions == {"f": 1, "a": 0}
        assert p.signature.predicates == {"q": 2, "p": 1}

    def test_signature_order_is_parse_order(self):
        p = parse("cnf(c, axiom, (p(b) | q(a))).")
        assert list(p.signature.functions) == ["b", "a"]


class TestParseErrors:
    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as err:
            parse("cnf(c, axiom, (p(a)) .")
        assert err.value.line == 1 and err.value.col > 1

    def test_arity_clash_function(self):
        with pytest.raises(ParseError, match="arity"):
            parse("cnf(c, axiom, (p(f(a)) | q(f(a,b)))).")

    def test_arity_clash_predicate(self):
        with pytest.raises(ParseError, match="arity"):
            parse("cnf(c, axiom, (p(a))). cnf(d, axiom, (p(a,b))).")

    def test_reserved_prefix_rejected(self):
        with pytest.raises(ParseError, match="reserved"):
            parse("cnf(c, axiom, (p(_X))).")

    def test_include_rejected(self):
        with pytest.raises(ParseError, match="include"):
            parse("include('Axioms/EQ001-0.ax').")

    def test_variable_is_not_atom(self):
        with pytest.raises(ParseError):
            parse("cnf(c, axiom, (X)).")


class TestPrinting:
    def test_round_trip_idempotent_on_corpus(self):
        for path in sorted(CORPUS.glob("*.p")) + sorted((CORPUS / "mini").glob("*.p")):
            first = tptp.parse_file(str(path))
            second = parse(print_clauses(first), first.name)
            assert second.clauses == first.clauses, path
            third = parse(print_clauses(second), first.name)
            assert third.clauses == second.clauses

    def test_internal_variables_are_renamed(self):
        clause = Clause([Atom("dom", (App("f", (Var("_A1"),)),))],
                        [Atom("p", (Var("_A1"), Var("X")))])
        text = tptp.print_clause(clause, "c1")
        assert "_" not in text
        assert "X1" in text

    def test_table2_round_trip_has_eight_clauses(self):
        p = tptp.parse_file(str(CORPUS / "dl_example.p"))
        again = parse(print_clauses(p), "again")
        assert len(again.clauses) == 8
        assert clause_set_alpha_equal(again.clauses, p.clauses)

    def test_szs_lines(self):
        assert print_szs("Satisfiable", "x") == "% SZS status Satisfiable for x"
        assert print_szs("GaveUp", "y") == "% SZS status GaveUp for y"
        with pytest.raises(ValueError):
            print_szs("Maybe", "x")


def _one_element_model():
    a = App("a")
    return ModelDocument(domain=[a], classes={a: [a]},
                         functions={("a", ()): a},
                         predicates={"p": [(a,)]})


class TestModelDocument:
    def test_print_one_element_model(self):
        text = print_model(_one_element_model())
        assert text.splitlines() == [
            "model.",
            "domain: a.",
            "fn a: () -> a.",
            "pred p: (a).",
        ]

    def test_class_line_and_sorting(self):
        a, b, fa = App("a"), App("b"), App("f", (App("a"),))
        doc = ModelDocument(
            domain=[a, fa],
            classes={a: [a, b], fa: [fa]},
            functions={("a", ()): a, ("b", ()): a,
                       ("f", (a,)): fa, ("f", (fa,)): a},
            predicates={"q": [(fa,)], "p": [(a,)], "dom": [(a,), (fa,)]},
            specials={"dom"},
        )
        text = print_model(doc)
        lines = text.splitlines()
        assert lines[0] == "model."
        assert lines[1] == "domain: a, f(a)."
        assert lines[2] == "class: a = a, b."
        assert lines[3:7] == ["fn a: () -> a.", "fn b: () -> a.",
                              "fn f: (a) -> f(a).", "fn f: (f(a)) -> a."]
        # dom is the domain itself and is not printed as a predicate
        assert lines[7:] == ["pred p: (a).", "pred q: (f(a))."]

    def test_parse_model_inverse(self):
        a, b, fa = App("a"), App("b"), App("f", (App("a"),))
        doc = ModelDocument(
            domain=[a, fa],
            classes={a: [a, b], fa: [fa]},
            functions={("a", ()): a, ("b", ()): a,
                       ("f", (a,)): fa, ("f", (fa,)): a},
            predicates={"p": [(a,)], "q": [(fa,)]},
        )
        back = parse_model(print_model(doc))
        assert back.domain == doc.domain
        assert back.classes[a] == [a, b]
        assert back.functions == doc.functions
        assert {p: set(v) for p, v in back.predicates.items()} == \
            {p: set(v) for p, v in doc.predicates.items()}

    def test_parse_model_rejects_garbage(self):
        with pytest.raises(tptp.ModelParseError):
            parse_model("nope.")
        with pytest.raises(tptp.ModelParseError):
            parse_model("model.\nwhatever: x.")
