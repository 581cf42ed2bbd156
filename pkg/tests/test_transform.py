import random

import pytest

import bumg
from bumg import tptp, transform
from bumg.terms import (
    EQ,
    App,
    Atom,
    Clause,
    Var,
    contains_proper_functional,
    is_horn,
    is_proper_functional,
    is_range_restricted,
    subst_clause,
    vars_of,
)
from bumg.transform import (
    ALL_LABELS,
    ConfigError,
    PipelineConfig,
    apply_pipeline,
    bl_sd,
    bl_sp,
    bl_ud,
    bl_up,
    bs,
    config_from_label,
    crr,
    myequal_rewrite,
    pf,
    rr,
    sh,
)

from helpers import assert_alpha_in, assert_alpha_set, cl, make_problem, prob, random_any_problem

CORPUS = bumg.corpus_dir()


def empty_problem():
    return prob("", "empty")


class TestCrr:
    def test_empty_input(self):
        out = crr(empty_problem())
        assert_alpha_set(out.clauses, ["dom(c0)"])
        assert out.dom_const == "c0"

    def test_head_variable_shielded(self):
        out = crr(prob("cnf(c, axiom, (p(X)))."))
        assert_alpha_set(out.clauses, ["dom(c0)", "p(X) | ~dom(X)"])

    def test_herbrand_enumeration(self):
        out = crr(prob("cnf(c, axiom, (p(f(X)) | ~q(X)))."))
        assert_alpha_set(out.clauses, [
            "dom(c0)",
            "p(f(X)) | ~q(X)",
            "dom(f(X)) | ~dom(X)",
        ])

    def test_constants_enter_domain(self):
        out = crr(prob("cnf(c, axiom, (p(b) | ~q(a)))."))
        # reuse_first picks b (first in parse order); every constant still
        # lands in the domain through the 0-ary closure clauses
        assert out.dom_const == "b"
        assert_alpha_in(out.clauses, "dom(a)")
        assert_alpha_in(out.clauses, "dom(b)")

    def test_output_is_range_restricted(self):
        out = crr(tptp.parse_file(str(CORPUS / "running_example.p")))
        assert all(is_range_restricted(c) for c in out.clauses)


RUNNING_EXAMPLE_RR = [
    "dom(a)",
    "q(X,g(X,Y)) | r(Y,Z) | ~p(a,f(X,Y),X) | ~dom(Z)",
    "dom(a) | ~p(X1,X2,X)",
    "dom(f(X,Y)) | ~p(X1,X2,X) | ~dom(Y)",
    "dom(X1) | ~p(X1,X2,X3)",
    "dom(X2) | ~p(X1,X2,X3)",
    "dom(X3) | ~p(X1,X2,X3)",
    "dom(X1) | ~q(X1,X2)",
    "dom(X2) | ~q(X1,X2)",
    "dom(X1) | ~r(X1,X2)",
    "dom(X2) | ~r(X1,X2)",
    "dom(X1) | ~dom(f(X1,X2))",
    "dom(X2) | ~dom(f(X1,X2))",
    "dom(X1) | ~dom(g(X1,X2))",
    "dom(X2) | ~dom(g(X1,X2))",
]


class TestRr:
    def test_running_example_exact(self):
        out = rr(tptp.parse_file(str(CORPUS / "running_example.p")))
        assert_alpha_set(out.clauses, RUNNING_EXAMPLE_RR)

    def test_running_example_count_is_15(self):
        out = rr(tptp.parse_file(str(CORPUS / "running_example.p")))
        assert len(out.clauses) == 15

    def test_step2_abstraction_clauses(self):
        out = rr(tptp.parse_file(str(CORPUS / "running_example.p")))
        assert_alpha_in(out.clauses, "dom(a) | ~p(X1,X2,X)")
        assert_alpha_in(out.clauses, "dom(f(X,Y)) | ~p(X1,X2,X) | ~dom(Y)")

    def test_output_is_range_restricted(self):
        out = rr(tptp.parse_file(str(CORPUS / "running_example.p")))
        assert all(is_range_restricted(c) for c in out.clauses)

    def test_body_loop_shape(self):
        # Steps (2)+(3) on the §-style body atom give the loop clause
        out = rr(prob("cnf(c, axiom, (r(X) | ~q(X) | ~p(f(X))))."))
        assert_alpha_in(out.clauses, "dom(f(X)) | ~p(X1) | ~dom(X)")


class TestMyequal:
    def test_rewrite_positive_equality(self):
        problem = prob("cnf(c, axiom, (f(X) = X | ~p(X))).")
        out = rr(problem)
        my = out.signature.special_named("myequal")
        assert my == "myequal"
        assert_alpha_in(out.clauses, "myequal(f(X),X) | ~p(X)")
        assert_alpha_in(out.clauses, "X = Y | ~myequal(X,Y)")
        assert_alpha_in(out.clauses, "dom(X) | ~myequal(X,Y)")
        assert_alpha_in(out.clauses, "dom(Y) | ~myequal(X,Y)")
        # step 4 never mentions the equality predicate itself
        for clause in out.clauses:
            for atom in clause.body:
                if atom.pred == EQ:
                    raise AssertionError(f"equality left in a body: {clause}")

    def test_identity_without_positive_equality(self):
        clauses = prob("cnf(c, axiom, (p(X) | a != b)).").clauses
        rewritten, name = myequal_rewrite(list(clauses),
                                          prob("cnf(c, axiom, (p(X) | a != b)).").signature.copy())
        assert name is None
        assert rewritten == list(clauses)

    def test_blocking_heads_are_not_rewritten(self):
        problem = prob("cnf(c, axiom, (f(X) = X | ~p(X))). cnf(d, axiom, (p(a))).")
        out, _ = apply_pipeline(problem, PipelineConfig(blocking="ud"))
        # the case-analysis clause keeps its equality head
        neq = out.signature.special_named("neq")
        found = [c for c in out.clauses
                 if any(a.pred == EQ for a in c.head)
                 and any(a.pred == neq for a in c.head)]
        assert len(found) == 1

    def test_collision_with_input_name(self):
        problem = prob(
            "cnf(c, axiom, (f(X) = X | ~myequal(X,X))). cnf(d, axiom, (dom(a))).")
        out = rr(problem)
        assert out.signature.special_named("myequal") == "myequal0"
        assert out.signature.special_named("dom") == "dom0"


class TestShifting:
    def test_bs_replaces_deep_atom(self):
        out = bs(prob("cnf(c, axiom, (r(X) | ~q(X) | ~p(f(X))))."))
        assert_alpha_set(out.clauses, [
            "r(X) | not_p(f(X)) | ~q(X)",
            "$false | ~p(X) | ~not_p(X)",
        ])

    def test_bs_on_negative_unit(self):
        out = bs(prob("cnf(c, axiom, (~r(X,f(X))))."))
        assert_alpha_set(out.clauses, [
            "not_r(X,f(X))",
            "$false | ~r(X,Y) | ~not_r(X,Y)",
        ])

    def test_bs_identity_on_flat_bodies(self):
        problem = prob("cnf(c, axiom, (p(f(a)) | ~q(X) | ~r(X,b))).")
        out = bs(problem)
        assert out.clauses == problem.clauses

    def test_pf_extracts_functional_terms(self):
        out = pf(prob("cnf(c, axiom, (r(X) | ~q(X) | ~p(f(X))))."))
        assert_alpha_set(out.clauses, ["r(X) | ~q(X) | ~p(U) | f(X) != U"])

    def test_pf_skips_equational_atoms(self):
        problem = prob("cnf(c, axiom, (f(a) != b)).")
        assert pf(problem).clauses == problem.clauses

    def test_pf_no_reflexivity_unit(self):
        out = pf(prob("cnf(c, axiom, (r(X) | ~p(f(X))))."))
        for clause in out.clauses:
            assert not (len(clause.head) == 1 and clause.head[0].pred == EQ
                        and not clause.body)

    def test_pf_round_trip(self):
        problem = prob("cnf(c, axiom, (r(X) | ~q(g(X,a)) | ~p(f(X)))).")
        out = pf(problem).clauses[0]
        substitution = {}
        for atom in out.body:
            if atom.pred == EQ:
                term, var = atom.args
                substitution[var.name] = term
        restored = subst_clause(
            Clause(out.head, [a for a in out.body if a.pred != EQ]),
            substitution)
        assert restored == problem.clauses[0]

    def test_pf_shares_one_variable_per_distinct_term(self):
        out = pf(prob("cnf(c, axiom, (r(X) | ~q(f(X)) | ~p(f(X))))."))
        clause = out.clauses[0]
        eqs = [a for a in clause.body if a.pred == EQ]
        assert len(eqs) == 1

    def test_sh_composition_fragment(self):
        shifted = sh(tptp.parse_file(str(CORPUS / "shifting_example.p")))
        out = rr(shifted)
        assert_alpha_in(out.clauses, "r(X) | not_equal(f(X),U) | ~q(X) | ~p(U)")
        assert_alpha_in(out.clauses, "dom(X) | ~not_equal(X,Y)")
        assert_alpha_in(out.clauses, "dom(Y) | ~not_equal(X,Y)")
        assert_alpha_in(out.clauses, "$false | ~not_equal(X,Y) | X != Y")

    def test_sh_identity_on_flat_function_free(self):
        problem = prob("cnf(c, axiom, (p(a) | ~q(X))).")
        assert sh(problem).clauses == problem.clauses

    def test_sh_on_empty(self):
        assert sh(empty_problem()).clauses == []

    def test_after_bs_no_deep_body_atoms(self):
        rng = random.Random(31)
        for _ in range(60):
            problem = random_any_problem(rng)
            out = sh(problem)
            for clause in out.clauses:
                for atom in clause.body:
                    assert not contains_proper_functional(atom), clause


class TestBlocking:
    def _rr(self, text):
        return rr(prob(text))

    def test_sd_exact_clauses_for_unary_signature(self):
        base = self._rr("cnf(c, axiom, (p(f(a)))).")
        out = bl_sd(base)
        added = [c for c in out.clauses if c not in base.clauses]
        assert_alpha_set(added, [
            "sub(X,X) | ~dom(X)",
            "sub(X,f(X1)) | ~sub(X,X1) | ~dom(X) | ~dom(f(X1))",
            "X = Y | not_equal(X,Y) | ~sub(X,Y)",
            "$false | ~X = Y | ~not_equal(X,Y)",
        ])

    def test_ud_exact_clauses(self):
        base = self._rr("cnf(c, axiom, (p(f(a)))).")
        out = bl_ud(base)
        added = [c for c in out.clauses if c not in base.clauses]
        assert_alpha_set(added, [
            "X = Y | not_equal(X,Y) | ~dom(X) | ~dom(Y)",
            "$false | ~X = Y | ~not_equal(X,Y)",
        ])

    def test_sp_guards_per_unary_input_predicate(self):
        problem = prob("cnf(c, axiom, (p(a))). cnf(d, axiom, (q(f(X)) | ~p(X))).")
        out = bl_sp(rr(problem), original=problem)
        guarded = [c for c in out.clauses
                   if any(a.pred == EQ for a in c.head) and len(c.body) == 3]
        assert len(guarded) == 2
        for pred in ("p", "q"):
            assert_alpha_in(out.clauses,
                            f"X = Y | not_equal(X,Y) | ~sub(X,Y) | ~{pred}(X) | ~{pred}(Y)")

    def test_up_guards(self):
        problem = prob("cnf(c, axiom, (p(a))). cnf(d, axiom, (q(f(X)) | ~p(X))).")
        out = bl_up(rr(problem), original=problem)
        for pred in ("p", "q"):
            assert_alpha_in(out.clauses,
                            f"X = Y | not_equal(X,Y) | ~{pred}(X) | ~{pred}(Y)")

    def test_binary_predicates_are_not_blocking_guards(self):
        problem = prob("cnf(c, axiom, (e(a,b))). cnf(d, axiom, (q(f(X)) | ~e(X,X))).")
        out = bl_up(rr(problem), original=problem)
        guards = [c for c in out.clauses
                  if any(a.pred == EQ for a in c.head) and len(c.body) == 2]
        assert len(guards) == 1  # q only; e is binary

    def test_sd_requires_dom(self):
        with pytest.raises(ConfigError):
            bl_sd(prob("cnf(c, axiom, (p(a)))."))

    def test_generated_symbols_not_blocking_eligible(self):
        problem = prob("cnf(c, axiom, (p(a))). cnf(d, axiom, (q(f(X)) | ~p(X))).")
        transformed, _ = apply_pipeline(problem,
                                        PipelineConfig(shift=True, blocking="up"))
        neq = transformed.signature.special_named("neq")
        guards = [c for c in transformed.clauses
                  if any(a.pred == EQ for a in c.head)
                  and all(a.pred not in (neq, "sub") for a in c.body)
                  and c.body]
        for clause in guards:
            for atom in clause.body:
                assert atom.pred in ("p", "q"), clause


class TestPipeline:
    def test_identity_config(self):
        problem = tptp.parse_file(str(CORPUS / "dl_example.p"))
        out, report = apply_pipeline(problem, PipelineConfig(rr_variant="none"))
        assert out.clauses == problem.clauses
        assert report.shift_added == report.rr_added == report.blocking_added == 0
        assert report.input_clauses == report.output_clauses == 8

    def test_blocking_requires_rr(self):
        with pytest.raises(ConfigError):
            PipelineConfig(rr_variant="none", blocking="ud")

    def test_table2_with_ud(self):
        problem = tptp.parse_file(str(CORPUS / "dl_example.p"))
        out, report = apply_pipeline(problem, PipelineConfig(blocking="ud"))
        assert all(is_range_restricted(c) for c in out.clauses)
        for original in problem.clauses:
            assert_alpha_in(out.clauses, _restricted_text(original))
        assert_alpha_in(out.clauses, "X = Y | not_equal(X,Y) | ~dom(X) | ~dom(Y)")
        assert report.blocking_added == 2
        assert report.output_clauses == len(out.clauses)

    def test_all_twenty_labels(self):
        assert len(ALL_LABELS) == 20
        assert len(set(ALL_LABELS)) == 20
        for label in ALL_LABELS:
            cfg = config_from_label(label)
            assert cfg.label == label

    def test_range_restriction_across_configs(self):
        problems = [tptp.parse_file(str(p))
                    for p in sorted(CORPUS.glob("*.p"))]
        for label in ALL_LABELS:
            cfg = config_from_label(label)
            for problem in problems:
                out, _ = apply_pipeline(problem, cfg)
                for clause in out.clauses:
                    assert is_range_restricted(clause), (label, problem.name, clause)

    def test_horn_preservation(self):
        rng = random.Random(17)
        for _ in range(40):
            problem = random_any_problem(rng)
            horn_in = all(is_horn(c) for c in problem.clauses)
            if not horn_in:
                continue
            for fn in (crr, rr):
                out = fn(problem)
                assert all(is_horn(c) for c in out.clauses)

    def test_specials_fresh_against_input(self):
        rng = random.Random(23)
        for _ in range(40):
            problem = random_any_problem(rng)
            out, _ = apply_pipeline(problem,
                                    PipelineConfig(shift=True, blocking="sd"))
            input_symbols = (set(problem.signature.functions)
                             | set(problem.signature.predicates))
            assert not (set(out.signature.specials) - {"c0"}) & input_symbols

    def test_deterministic_output(self):
        problem = tptp.parse_file(str(CORPUS / "dl_example.p"))
        cfg = PipelineConfig(shift=True, blocking="sd")
        first, _ = apply_pipeline(problem, cfg)
        second, _ = apply_pipeline(problem, cfg)
        assert tptp.print_clauses(first) == tptp.print_clauses(second)

    def test_report_csv(self):
        problem = tptp.parse_file(str(CORPUS / "running_example.p"))
        _, report = apply_pipeline(problem, PipelineConfig())
        row = report.csv_row()
        assert row.startswith("1,15,")
        assert len(row.split(",")) == 8


def _restricted_text(clause: Clause) -> str:
    parts = [str(a) for a in clause.head]
    parts += [f"~{a}" for a in clause.body]
    missing = [v for a in clause.head for v in sorted(vars_of(a))
               if not any(v in vars_of(b) for b in clause.body)]
    for v in dict.fromkeys(missing):
        parts.append(f"~dom({v})")
    return " | ".join(parts) if parts else "$false"


def rr_clause_bound(problem) -> int:
    """|M| + #non-variable top-level body terms + sum of predicate arities
    + sum of function arities + 4."""
    body_terms = 0
    for clause in problem.clauses:
        for atom in clause.body:
            body_terms += sum(1 for t in atom.args
                              if not isinstance(t, Var))
    pred_arities = sum(problem.signature.predicates.values())
    fn_arities = sum(problem.signature.functions.values())
    return (len(problem.clauses) + body_terms + pred_arities + fn_arities + 4)


class TestSizeLinearity:
    def test_bound_on_running_example(self):
        problem = tptp.parse_file(str(CORPUS / "running_example.p"))
        out = rr(problem)
        assert len(out.clauses) <= rr_clause_bound(problem)

    def test_bound_on_random_inputs(self):
        rng = random.Random(41)
        for _ in range(60):
            problem = random_any_problem(rng)
            out = rr(problem)
            assert len(out.clauses) <= rr_clause_bound(problem), problem.name
