import random

import pytest
from hypothesis import given, settings, strategies as st

from hypersat import formula as F
from hypersat.bench import gen_random
from hypersat.formula import (And, Atom, DuplicateVariableError, FalseConst,
                              Globally, Iff, Next, Not, Or, ParseError,
                              Quantifier, Release, TrueConst, Until,
                              UnboundVariableError, WeakUntil,
                              bounded_eventually, expand_sugar, parse, pretty,
                              to_nnf)
from hypersat.kernel import eval_body_on_lasso

from helpers import random_lasso


class TestParse:
    def test_basic_iff_globally(self):
        phi = parse('forall p1. exists p2. G ("a"_p1 <-> "a"_p2)')
        assert phi.prefix == ((Quantifier.FORALL, "p1"),
                              (Quantifier.EXISTS, "p2"))
        assert phi.body == Globally(Iff(Atom("a", "p1"), Atom("a", "p2")))

    def test_noninterference_formula(self):
        text = ('forall p1. exists p2. (G (("l"_p1 <-> "l"_p2) & '
                '("o"_p1 <-> "o"_p2))) & (G (! "h"_p2))')
        phi = parse(text)
        assert phi.prefix == ((Quantifier.FORALL, "p1"),
                              (Quantifier.EXISTS, "p2"))
        expected = And(
            Globally(And(Iff(Atom("l", "p1"), Atom("l", "p2")),
                         Iff(Atom("o", "p1"), Atom("o", "p2")))),
            Globally(Not(Atom("h", "p2"))))
        assert phi.body == expected

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError) as err:
            parse('forall p. "a"_q')
        assert err.value.name == "q"

    def test_duplicate_variable(self):
        with pytest.raises(DuplicateVariableError):
            parse('forall p. exists p. "a"_p')

    def test_syntax_error_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse('forall p. "a"_p &')
        assert err.value.line == 1
        assert err.value.column >= 17

    def test_missing_prefix_rejected(self):
        with pytest.raises(ParseError):
            parse('"a"_p')

    def test_unary_binds_tighter_than_until(self):
        phi = parse('exists p. ! "a"_p U "b"_p')
        assert phi.body == Until(Not(Atom("a", "p")), Atom("b", "p"))

    def test_until_binds_tighter_than_and(self):
        phi = parse('exists p. "a"_p & "b"_p U "c"_p')
        assert phi.body == And(Atom("a", "p"),
                               Until(Atom("b", "p"), Atom("c", "p")))

    def test_and_binds_tighter_than_or(self):
        phi = parse('exists p. "a"_p | "b"_p & "c"_p')
        assert phi.body == Or(Atom("a", "p"),
                              And(Atom("b", "p"), Atom("c", "p")))

    def test_implies_right_associative(self):
        phi = parse('exists p. "a"_p -> "b"_p -> "c"_p')
        assert phi.body == F.Implies(Atom("a", "p"),
                                     F.Implies(Atom("b", "p"), Atom("c", "p")))

    def test_temporal_right_associative(self):
        phi = parse('exists p. "a"_p U "b"_p U "c"_p')
        assert phi.body == Until(Atom("a", "p"),
                                 Until(Atom("b", "p"), Atom("c", "p")))

    def test_comments_and_constants(self):
        phi = parse('exists p. // a comment\n 1 & X 0')
        assert phi.body == And(TrueConst(), Next(FalseConst()))

    def test_quoted_ap_with_punctuation(self):
        phi = parse('exists p. G "out-1!x"_p')
        assert phi.body == Globally(Atom("out-1!x", "p"))

    def test_reserved_words_rejected_as_variables(self):
        with pytest.raises(ParseError):
            parse('forall X. "a"_X')


class TestRoundTrip:
    def test_roundtrip_generated_corpus(self):
        rng = random.Random(5)
        for seed in range(150):
            nq = rng.randint(1, 4)
            prefix = [rng.choice(["forall", "exists"]) for _ in range(nq)]
            phi = gen_random(prefix, rng.randint(1, 15), rng.randint(1, 3),
                             rng.random() < 0.5, seed=seed)
            assert parse(pretty(phi)) == phi

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 12), st.integers(1, 3),
           st.booleans())
    def test_roundtrip_hypothesis(self, seed, size, atoms, safe):
        phi = gen_random(["forall", "exists"], size, atoms, safe, seed=seed)
        assert parse(pretty(phi)) == phi


class TestNnf:
    def test_until_release_duality(self):
        body = Not(Until(Atom("a", "p"), Atom("b", "p")))
        assert to_nnf(body) == Release(Not(Atom("a", "p")), Not(Atom("b", "p")))

    def test_globally_eventually_duality(self):
        assert to_nnf(Not(Globally(Atom("a", "p")))) == \
            F.Eventually(Not(Atom("a", "p")))

    def test_double_negation(self):
        assert to_nnf(Not(Not(Atom("a", "p")))) == Atom("a", "p")

    def test_negations_only_on_atoms(self):
        rng = random.Random(11)
        for seed in range(80):
            phi = gen_random(["exists"], rng.randint(1, 12), 2, False, seed)
            result = to_nnf(Not(phi.body))
            assert _nnf_shape_ok(result)


def _nnf_shape_ok(node):
    if isinstance(node, Not):
        return isinstance(node.arg, Atom)
    if isinstance(node, (Atom, TrueConst, FalseConst)):
        return True
    if isinstance(node, (Next, F.Eventually, Globally)):
        return _nnf_shape_ok(node.arg)
    if isinstance(node, (And, Or, Until, WeakUntil, Release)):
        return _nnf_shape_ok(node.left) and _nnf_shape_ok(node.right)
    return False  # Implies/Iff must be gone


class TestExpandSugar:
    def test_globally(self):
        body = Globally(Atom("a", "p"))
        assert expand_sugar(body) == Not(Until(TrueConst(),
                                               Not(Atom("a", "p"))))

    def test_weak_until_matches_its_definition(self):
        a, b = Atom("a", "p"), Atom("b", "p")
        assert expand_sugar(WeakUntil(a, b)) == \
            expand_sugar(Or(Until(a, b), Globally(a)))

    def test_or_de_morgan(self):
        a, b = Atom("a", "p"), Atom("b", "p")
        assert expand_sugar(Or(a, b)) == Not(And(Not(a), Not(b)))

    def test_core_operators_only(self):
        rng = random.Random(13)
        for seed in range(80):
            phi = gen_random(["exists", "forall"], rng.randint(1, 12), 2,
                             False, seed)
            assert _core_only(expand_sugar(Not(phi.body)))


def _core_only(node):
    if isinstance(node, (Atom, TrueConst)):
        return True
    if isinstance(node, Not):
        return _core_only(node.arg)
    if isinstance(node, Next):
        return _core_only(node.arg)
    if isinstance(node, (And, Until)):
        return _core_only(node.left) and _core_only(node.right)
    return False


class TestRewriteEquivalence:
    def test_rewrites_preserve_semantics(self):
        # 200 random bodies x 50 random lasso assignments each
        rng = random.Random(99)
        for seed in range(200):
            phi = gen_random(["forall", "exists"], rng.randint(1, 10),
                             rng.randint(1, 2), rng.random() < 0.3, seed)
            body = phi.body if seed % 2 else Not(phi.body)
            atoms = sorted(F.atoms_of(body)) or [("a", "p1")]
            nnf = to_nnf(body)
            core = expand_sugar(body)
            for _ in range(50):
                word, s, l = random_lasso(rng, atoms, 2, 3)
                reference = eval_body_on_lasso(body, word[:s], word[s:], atoms)
                assert eval_body_on_lasso(nnf, word[:s], word[s:], atoms) == reference
                assert eval_body_on_lasso(core, word[:s], word[s:], atoms) == reference

    def test_rewrites_preserve_atoms(self):
        rng = random.Random(17)
        for seed in range(100):
            phi = gen_random(["forall", "exists"], rng.randint(1, 12), 3,
                             False, seed)
            body = Not(phi.body)
            assert F.atoms_of(to_nnf(body)) == F.atoms_of(body)
            assert F.atoms_of(expand_sugar(body)) == F.atoms_of(body)


class TestBoundedOperators:
    def test_one_position_is_identity(self):
        a = Atom("a", "p")
        assert bounded_eventually(1, a) == a

    def test_two_positions(self):
        a = Atom("a", "p")
        assert bounded_eventually(2, a) == Or(a, Next(a))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            bounded_eventually(0, Atom("a", "p"))

    def test_covers_exactly_first_b_positions(self):
        a = Atom("a", "p")
        body = bounded_eventually(3, a)
        atoms = [("a", "p")]
        # a true only at position 2: inside the window
        word = [frozenset(), frozenset(), frozenset({("a", "p")}), frozenset()]
        assert eval_body_on_lasso(body, word[:3], word[3:], atoms)
        # a true only at position 3: outside the window
        word = [frozenset(), frozenset(), frozenset(), frozenset({("a", "p")})]
        assert not eval_body_on_lasso(body, word[:3], word[3:], atoms)
