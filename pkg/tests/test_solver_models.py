"""Answer-set enumeration semantics, checked against hand-derived families."""

import pytest

from aspen.asp import parse_program
from aspen.solver import (
    KernelUnavailable,
    SolverError,
    UniverseTooLarge,
    answer_sets,
    default_backend,
    solve,
)
from aspen.solver.kernels import ENV_FLAG


def families(result):
    """Answer sets as a set of frozen atom-name sets, for order-free compares."""
    return {frozenset(str(a) for a in s.atoms) for s in result}


class TestBasics:
    def test_facts_only(self):
        res = solve(parse_program("p(1). q(a,b)."))
        assert families(res) == {frozenset({"p(1)", "q(a,b)"})}

    def test_empty_program_has_the_empty_answer_set(self):
        res = answer_sets([])
        assert families(res) == {frozenset()}

    def test_definite_chain(self):
        res = solve(parse_program("a.\nb :- a.\nc :- b."))
        assert families(res) == {frozenset({"a", "b", "c"})}

    def test_positive_loop_is_not_self_supporting(self):
        res = solve(parse_program("p :- q.\nq :- p."))
        assert families(res) == {frozenset()}

    def test_odd_negation_loop_has_no_answer_set(self):
        res = solve(parse_program("p :- not p."))
        assert families(res) == set()

    def test_even_negation_loop_has_two(self):
        res = solve(parse_program("p :- not q.\nq :- not p."))
        assert families(res) == {frozenset({"p"}), frozenset({"q"})}

    def test_constraint_prunes(self):
        res = solve(parse_program("p :- not q.\nq :- not p.\n:- p."))
        assert families(res) == {frozenset({"q"})}

    def test_negation_default(self):
        res = solve(parse_program("a.\nc :- a, not b."))
        assert families(res) == {frozenset({"a", "c"})}


class TestDisjunction:
    def test_plain_disjunction_splits(self):
        res = solve(parse_program("a | b."))
        assert families(res) == {frozenset({"a"}), frozenset({"b"})}

    def test_minimality_collapses_supported_disjunct(self):
        # {a,b} is a classical model but not minimal; {b} fails a :- b.
        res = solve(parse_program("a | b.\na :- b."))
        assert families(res) == {frozenset({"a"})}

    def test_head_cycle_free_shift(self):
        res = solve(parse_program("a | b :- c.\nc."))
        assert families(res) == {frozenset({"a", "c"}), frozenset({"b", "c"})}

    def test_answer_sets_form_an_antichain(self):
        res = solve(parse_program("a | b.\nb | c."))
        fams = families(res)
        for one in fams:
            for other in fams:
                assert not (one < other)


class TestColoring:
    PROGRAM = """
    col(X,red) | col(X,green) | col(X,yellow) :- node(X).
    :- C1 = C2, col(X,C1), col(Y,C2), edge(X,Y).
    node(1). node(2). node(3).
    edge(1,2). edge(1,3).
    """

    def test_twelve_colorings(self):
        # Node 1 takes any of 3 colors; nodes 2 and 3 each avoid it: 3*2*2.
        res = solve(parse_program(self.PROGRAM))
        assert len(res) == 12

    def test_contains_expected_coloring(self):
        res = solve(parse_program(self.PROGRAM))
        want = {"col(1,red)", "col(2,green)", "col(3,green)"}
        assert any(want <= {str(a) for a in s.atoms} for s in res)

    def test_projection(self):
        res = solve(parse_program(self.PROGRAM))
        projected = {s.project("col") for s in res}
        assert len(projected) == 12
        assert all(len(p) == 3 for p in projected)

    def test_simplification_shrinks_enumeration_space(self):
        res = solve(parse_program(self.PROGRAM))
        assert res.n_ground_atoms == 78
        assert res.n_enumeration_atoms == 14  # 9 col/2 + 3 node/1 + 2 edge/2
        assert res.n_free_atoms == 9

    def test_backends_agree(self):
        by_backend = {}
        for backend in ("numpy",) + (("numba",) if default_backend() == "numba" else ()):
            res = solve(parse_program(self.PROGRAM), backend=backend)
            by_backend[backend] = families(res)
        assert len(set(map(frozenset, by_backend.values()))) == 1


class TestChoices:
    def test_unbounded_choice_is_a_power_set(self):
        res = solve(parse_program("{p(X)} :- d(X).\nd(1). d(2)."))
        assert len(res) == 4

    def test_exactly_one(self):
        res = solve(parse_program("1 <= {assign(X,C) : color(C)} <= 1 :- node(X).\n"
                                  "color(red). color(blue). node(1). node(2)."))
        assert len(res) == 4
        for s in res:
            assert len(s.project("assign")) == 2

    def test_lower_bound_only(self):
        res = solve(parse_program("1 <= {pick(X) : item(X)}.\nitem(1). item(2)."))
        picks = {s.project("pick") for s in res}
        assert len(picks) == 3  # {1}, {2}, {1,2}

    def test_upper_bound_only(self):
        res = solve(parse_program("{pick(X) : item(X)} <= 1.\nitem(1). item(2)."))
        assert len(res) == 3  # {}, {1}, {2}

    def test_condition_gates_element(self):
        res = solve(parse_program("{pick(X) : avail(X)} :- slot(X).\n"
                                  "slot(1). slot(2). avail(1)."))
        picks = {s.project("pick") for s in res}
        assert {frozenset(str(a) for a in p) for p in picks} == {
            frozenset(),
            frozenset({"pick(1)"}),
        }

    def test_unsatisfiable_lower_bound(self):
        res = solve(parse_program("3 <= {pick(X) : item(X)}.\nitem(1). item(2)."))
        assert len(res) == 0

    def test_aux_atoms_are_projected_out(self):
        res = solve(parse_program("{p}."))
        assert families(res) == {frozenset(), frozenset({"p"})}


class TestWeakConstraints:
    def test_costs_per_level(self):
        res = solve(parse_program("{in(X)} :- item(X).\nitem(1). item(2).\n"
                                  ":~ not in(X), item(X). [1@1, X]"))
        by_cost = {}
        for s in res:
            by_cost.setdefault(s.costs, set()).add(frozenset(str(a) for a in s.atoms))
        assert set(by_cost) == {(), ((1, 1),), ((1, 2),)}
        assert len(by_cost[((1, 1),)]) == 2

    def test_optimal_only_keeps_minimum(self):
        res = solve(parse_program("{in(X)} :- item(X).\nitem(1). item(2).\n"
                                  ":~ not in(X), item(X). [1@1, X]"), optimal_only=True)
        assert len(res) == 1
        assert res.answer_sets[0].costs == ()

    def test_levels_are_lexicographic(self):
        # Level 2 dominates: b alone beats a alone even though a is cheaper
        # at level 1.
        prog = parse_program("a :- not b.\nb :- not a.\n"
                             ":~ a. [1@2]\n:~ b. [5@1]")
        res = solve(prog, optimal_only=True)
        assert families(res) == {frozenset({"b"})}

    def test_identical_annotations_count_once(self):
        # Both constraints violate with the same [1@1] tuple: cost is 1.
        prog = parse_program("a.\nb :- a.\n:~ a. [1@1]\n:~ b. [1@1]")
        res = solve(prog)
        assert res.answer_sets[0].costs == ((1, 1),)

    def test_distinct_terms_count_separately(self):
        prog = parse_program("a.\nb :- a.\n:~ a. [1@1, a]\n:~ b. [1@1, b]")
        res = solve(prog)
        assert res.answer_sets[0].costs == ((1, 2),)

    def test_variable_weight_from_body(self):
        prog = parse_program("route(a,b).\ncost(a,b,7).\n"
                             ":~ route(X,Y), cost(X,Y,C). [C@1, X, Y]")
        res = solve(prog)
        assert res.answer_sets[0].costs == ((1, 7),)

    def test_symbolic_weight_raises(self):
        prog = parse_program("edge(a,b).\n:~ edge(X,Y). [X@1]")
        with pytest.raises(SolverError):
            solve(prog)


class TestGuards:
    def test_universe_bound(self):
        facts = " ".join(f"p({i})." for i in range(23))
        with pytest.raises(UniverseTooLarge) as exc:
            solve(parse_program(facts))
        assert exc.value.n_atoms == 23

    def test_bound_applies_after_simplification(self):
        # 15 raw atoms, but p(X) needs the underivable r(X): only the five
        # q-facts survive into the enumeration space.
        prog = parse_program("p(X) :- q(X), r(X).\nq(1). q(2). q(3). q(4). q(5).")
        res = solve(prog)
        assert res.n_ground_atoms == 15
        assert res.n_enumeration_atoms == 5
        assert families(res) == {
            frozenset({"q(1)", "q(2)", "q(3)", "q(4)", "q(5)"})
        }

    def test_non_ground_rule_rejected(self):
        with pytest.raises(SolverError):
            answer_sets(list(parse_program("p(X) :- q(X).").rules))

    def test_env_flag_selects_backend(self, monkeypatch):
        monkeypatch.setenv(ENV_FLAG, "numpy")
        assert default_backend() == "numpy"
        res = solve(parse_program("a | b."))
        assert res.backend == "numpy"

    def test_env_flag_rejects_unknown(self, monkeypatch):
        monkeypatch.setenv(ENV_FLAG, "fortran")
        with pytest.raises(KernelUnavailable):
            default_backend()
