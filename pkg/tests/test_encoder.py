import random

import pytest

from hypersat import fol
from hypersat import formula as F
from hypersat.automaton import ltl_to_nba, to_safety_automaton
from hypersat.bench import gen_gni_ni, gen_random
from hypersat.encoder import (EncodingKind, KindMismatchError, LcmOverflowError,
                              NotAModelError, build_finite_interpretation,
                              encode_func, encode_lia, encode_pred, escape_ap)
from hypersat.formula import parse
from hypersat.oracle import LassoTrace, LassoTraceSet, bounded_find_model, Found
from hypersat.pipeline import body_automaton, build_problem, choose_encoding


def nsa_for(phi):
    return body_automaton(phi, EncodingKind.FUNC_SAFETY)


def nba_for(phi):
    return body_automaton(phi, EncodingKind.LIA)


def lasso(stem, loop):
    return LassoTrace(tuple(frozenset(p) for p in stem),
                      tuple(frozenset(p) for p in loop))


PHI_G = parse('exists p. G "a"_p')


class TestFuncEncoding:
    def test_structure_for_exists_globally(self):
        nsa = nsa_for(PHI_G)
        problem = encode_func(PHI_G, nsa)
        assert isinstance(problem.formula, fol.Exists)
        matrix = problem.formula.body
        assert isinstance(matrix, fol.And) and len(matrix.args) == 3
        init, trans, bad = matrix.args
        assert isinstance(init, fol.Or) and len(init.args) == 1
        assert isinstance(trans, fol.Forall)
        assert len(trans.body.args) == 2  # one implication per state
        assert all(isinstance(c, fol.Implies) for c in trans.body.args)
        assert isinstance(bad, fol.Forall)
        assert len(bad.body.args) == 1  # one bad state

    def test_prefix_mirrored_in_order(self):
        gni = gen_gni_ni(1)[0]
        problem = encode_func(gni, nsa_for(gni))
        f = problem.formula
        quants = []
        while isinstance(f, (fol.Forall, fol.Exists)) and f.sort == "Trace":
            quants.append((type(f), f.var))
            f = f.body
        assert quants == [(fol.Forall, "x1"), (fol.Forall, "x2"),
                          (fol.Exists, "x3")]

    def test_gni_signature_shapes(self):
        gni = gen_gni_ni(1)[0]
        nsa = nsa_for(gni)
        problem = encode_func(gni, nsa)
        preds = {p.name: p.arg_sorts for p in problem.signature.predicates}
        for ap in ("l", "o", "h"):
            assert preds[f"P_{ap}"] == ("Trace", "Time")
        state_preds = [n for n in preds if n.startswith("S_")]
        assert len(state_preds) == nsa.num_states
        for name in state_preds:
            assert preds[name] == ("Trace", "Trace", "Trace", "Time")

    def test_rejects_buchi_automaton(self):
        phi = parse('exists p. F "a"_p')
        nba = nba_for(phi)
        with pytest.raises(KindMismatchError):
            encode_func(phi, nba)

    def test_well_sorted_and_provenance_complete(self):
        rng = random.Random(500)
        for seed in range(200):
            nq = rng.randint(1, 3)
            prefix = [rng.choice(["forall", "exists"]) for _ in range(nq)]
            phi = gen_random(prefix, rng.randint(1, 9), rng.randint(1, 2),
                             rng.random() < 0.6, seed)
            kind = choose_encoding(phi, "auto")
            problem = build_problem(phi, kind)
            fol.check_sorts(problem.formula, problem.signature)
            declared = {s.name for s in problem.signature.sorts}
            declared |= {f.name for f in problem.signature.functions}
            declared |= {p.name for p in problem.signature.predicates}
            assert declared <= set(problem.provenance)


class TestPredEncoding:
    def test_single_seriality_axiom(self):
        problem = encode_pred(PHI_G, nsa_for(PHI_G))
        matrix = problem.formula.body
        seriality = [c for c in matrix.args
                     if isinstance(c, fol.Forall)
                     and isinstance(c.body, fol.Exists)
                     and isinstance(c.body.body, fol.PredApp)
                     and c.body.body.name == "succ"]
        assert len(seriality) == 1
        assert matrix.args[0] == seriality[0]

    def test_succ_is_a_predicate_not_a_function(self):
        problem = encode_pred(PHI_G, nsa_for(PHI_G))
        assert not problem.signature.has_function("succ")
        assert problem.signature.predicate("succ").arg_sorts == ("Time", "Time")
        fol.check_sorts(problem.formula, problem.signature)

    def test_every_step_existentially_quantified(self):
        func = encode_func(PHI_G, nsa_for(PHI_G))
        pred = encode_pred(PHI_G, nsa_for(PHI_G))
        assert _count_succ_funapps(func.formula) == 3  # one per edge
        assert _count_succ_funapps(pred.formula) == 0
        assert _count_succ_wrappers(pred.formula) == 3


def _count_succ_funapps(node) -> int:
    count = 0
    for child in _walk(node):
        if isinstance(child, fol.FunApp) and child.name == "succ":
            count += 1
    return count


def _count_succ_wrappers(node) -> int:
    # Exists i2. succ(i, i2) & S(..., i2), ignoring the seriality axiom
    count = 0
    for child in _walk(node):
        if (isinstance(child, fol.Exists)
                and isinstance(child.body, fol.And)
                and child.body.args
                and isinstance(child.body.args[0], fol.PredApp)
                and child.body.args[0].name == "succ"):
            count += 1
    return count


def _walk(node):
    yield node
    if isinstance(node, (fol.Forall, fol.Exists)):
        yield from _walk(node.body)
    elif isinstance(node, fol.Not):
        yield from _walk(node.arg)
    elif isinstance(node, (fol.And, fol.Or)):
        for child in node.args:
            yield from _walk(child)
    elif isinstance(node, fol.Implies):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, fol.PredApp):
        for term in node.args:
            yield from _walk_term(term)


def _walk_term(term):
    yield term
    if isinstance(term, fol.FunApp):
        for arg in term.args:
            yield from _walk_term(arg)
    elif isinstance(term, fol.IntAdd):
        yield from _walk_term(term.arg)


class TestLiaEncoding:
    def test_acceptance_clause_lists_rejecting_states(self):
        phi = parse('exists p. F "a"_p')
        nba = nba_for(phi)
        rejecting = [q for q in nba.states
                     if q not in nba.acceptance.accepting]
        problem = encode_lia(phi, nba)
        acceptance = problem.formula.body.args[-1]
        assert isinstance(acceptance, fol.Forall)
        inner = acceptance.body.body
        assert isinstance(inner.args[0], fol.IntLess)
        negated = {c.arg.name for c in inner.args[1:]}
        assert negated == {f"S_{q}" for q in rejecting}
        assert len(negated) == len(rejecting) > 0

    def test_initial_states_at_zero(self):
        phi = parse('exists p. F "a"_p')
        problem = encode_lia(phi, nba_for(phi))
        init = problem.formula.body.args[0]
        assert all(c.args[-1] == fol.IntConst(0) for c in init.args)

    def test_accepts_safety_automaton_by_conversion(self):
        nsa = nsa_for(PHI_G)
        problem = encode_lia(PHI_G, nsa)
        fol.check_sorts(problem.formula, problem.signature)
        bad = nsa.acceptance.bad
        names = {p.name for p in problem.signature.predicates}
        for q in bad:
            assert f"S_{q}" not in names

    def test_no_time_sort_declared(self):
        phi = parse('exists p. F "a"_p')
        problem = encode_lia(phi, nba_for(phi))
        sort_names = {s.name for s in problem.signature.sorts}
        assert sort_names == {"Trace", "Int"}
        assert problem.signature.sort("Int").builtin_int


class TestEscape:
    def test_alnum_preserved(self):
        assert escape_ap("out1") == "out1"

    def test_punctuation_escaped_injectively(self):
        assert escape_ap("out-1") == "out_x2d1"
        assert escape_ap("out_x2d1") == "out__x2d1"
        assert escape_ap("out-1") != escape_ap("out_x2d1")

    def test_underscore_doubled(self):
        assert escape_ap("a_b") == "a__b"


class TestFiniteInterpretation:
    def test_minimal_globally_model(self):
        nsa = nsa_for(PHI_G)
        model = LassoTraceSet((lasso([], [{"a"}]),), frozenset({"a"}))
        interp = build_finite_interpretation(PHI_G, nsa, model)
        assert interp.domains["Time"] == (0, 1)
        assert interp.functions["succ"] == {(0,): 1, (1,): 1}
        theta = encode_func(PHI_G, nsa)
        assert fol.eval_finite(theta.formula, interp)

    def test_loop_lengths_lcm(self):
        phi = parse('forall p. G ("a"_p | ! "a"_p)')
        nsa = nsa_for(phi)
        model = LassoTraceSet(
            (lasso([], [{"a"}, set()]), lasso([], [{"a"}, set(), set()])),
            frozenset({"a"}))
        interp = build_finite_interpretation(phi, nsa, model)
        assert len(interp.domains["Time"]) >= 1 + 6  # stem 1, lcm(2,3) = 6
        assert fol.eval_finite(encode_func(phi, nsa).formula, interp)

    def test_not_a_model_rejected(self):
        nsa = nsa_for(PHI_G)
        model = LassoTraceSet((lasso([], [set()]),), frozenset({"a"}))
        with pytest.raises(NotAModelError):
            build_finite_interpretation(PHI_G, nsa, model)

    def test_found_models_yield_satisfying_interpretations(self):
        rng = random.Random(321)
        hits = 0
        for seed in range(30):
            nq = rng.randint(1, 2)
            prefix = [rng.choice(["forall", "exists"]) for _ in range(nq)]
            phi = gen_random(prefix, rng.randint(1, 8), 2, True, seed)
            result = bounded_find_model(phi, 2, 1, 2)
            if not isinstance(result, Found):
                continue
            hits += 1
            nsa = nsa_for(phi)
            interp = build_finite_interpretation(phi, nsa, result.model)
            theta = encode_func(phi, nsa)
            assert fol.eval_finite(theta.formula, interp)
        assert hits >= 10
