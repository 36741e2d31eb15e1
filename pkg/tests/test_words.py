"""Symbolic word layer: displacement bookkeeping, rules, reduction.

Every rewrite rule is checked as an operator identity in the weight
representation at two c values; a coefficient ratio that is wrong for
any single rule fails here in isolation, before the full reducer runs.
"""

import math
import random

import pytest

from pcqg.dynsu2 import DynParams, build_pi_c, reduce_and_check, terms_residual
from pcqg.words import (
    CoeffFn,
    RuleSet,
    Term,
    dirac_projection,
    letter_displacement,
    monomial_signature,
    parse_word,
    reduce_word,
)

Q = 0.5


@pytest.fixture(scope="module")
def oracle_pair():
    return tuple(
        build_pi_c(DynParams(q=Q, x=1.0, c=c)) for c in (0.0, 1.5)
    )


def test_letter_displacements():
    assert letter_displacement("a") == (1, 1)
    assert letter_displacement("b") == (1, -1)
    assert letter_displacement("g") == (-1, 1)
    assert letter_displacement("d") == (-1, -1)
    for ch in "abgd":
        dl, dr = letter_displacement(ch)
        assert letter_displacement(ch + "*") == (-dl, -dr)


def test_coefffn_shift_and_swap():
    f = CoeffFn(lambda l, r: l + 2 * r, "l+2r")
    g = f.shifted(1, -1, Q)
    assert g(2.0, 2.0) == pytest.approx(0.5 * 2.0 + 2 * (2.0 / 0.5))
    # shifts compose additively
    h = g.shifted(-1, 1, Q)
    assert h(3.0, 0.7) == pytest.approx(f(3.0, 0.7))
    assert f.swapped()(1.0, 3.0) == pytest.approx(f(3.0, 1.0))


def test_normal_form_recognition():
    one = CoeffFn.one()
    assert Term(("a", "a", "b", "g"), one).is_normal()
    assert Term(("d", "b"), one).is_normal()
    assert Term((), one).is_normal()
    assert not Term(("a", "d"), one).is_normal()
    assert not Term(("b", "a"), one).is_normal()
    assert not Term(("a*",), one).is_normal()
    assert not Term(("g", "b"), one).is_normal()


def test_monomial_signature():
    one = CoeffFn.one()
    assert monomial_signature(Term(("a", "a", "b", "g", "g"), one)) == ("a", 2, 1, 2)
    assert monomial_signature(Term(("d",), one)) == ("d", 1, 0, 0)
    assert monomial_signature(Term((), one)) == ("", 0, 0, 0)


def test_parse_word_projection_placement():
    letters, coeff = parse_word("a b' P(0,1) g", Q, 1.0)
    assert letters == ("a", "b*", "g")
    # the projection written before g acts after g: indicator lands on the
    # g-shifted point
    assert coeff(Q, 1.0) == pytest.approx(1.0)
    assert coeff(1.0, 1.0) == 0.0


def test_parse_word_rejects_garbage():
    with pytest.raises(ValueError):
        parse_word("a q b", Q, 1.0)


# -- rule-by-rule oracle ----------------------------------------------------


def _rule_residual(lhs_letters, rhs_terms, bundles):
    """max over the two bundles of || lhs - sum(rhs) || on the interior."""
    worst = 0.0
    for b in bundles:
        terms = [(1.0, Term(tuple(lhs_letters), CoeffFn.one()))]
        terms += [(-z, t) for z, t in rhs_terms]
        r = terms_residual(terms, b, label="rule")
        worst = max(worst, r.residual)
    return worst


@pytest.mark.parametrize("star", ["a*", "b*", "g*", "d*"])
def test_star_rules_against_oracle(star, oracle_pair):
    rules = RuleSet(Q)
    sign, rep, fn = rules.star_rules[star]
    res = _rule_residual([star], [(sign, Term((rep,), fn))], oracle_pair)
    assert res < 1e-12


@pytest.mark.parametrize("pair", ["ba", "ga", "bd", "gd"])
def test_swap_rules_against_oracle(pair, oracle_pair):
    rules = RuleSet(Q)
    swapped, fn = rules.swap_rules[pair]
    res = _rule_residual(
        list(pair), [(1.0, Term(tuple(swapped), fn))], oracle_pair
    )
    assert res < 1e-12


def test_gb_rule_against_oracle(oracle_pair):
    rules = RuleSet(Q)
    res = _rule_residual(
        ["g", "b"],
        [(1.0, Term(("b", "g"), rules.gb_swap)), (1.0, Term((), rules.gb_unit))],
        oracle_pair,
    )
    assert res < 1e-12


def test_head_rules_against_oracle(oracle_pair):
    rules = RuleSet(Q)
    res_ad = _rule_residual(
        ["a", "d"],
        [(1.0, Term((), rules.ad_unit)), (1.0, Term(("b", "g"), rules.ad_bg))],
        oracle_pair,
    )
    res_da = _rule_residual(
        ["d", "a"],
        [(1.0, Term((), rules.da_unit)), (1.0, Term(("b", "g"), rules.da_bg))],
        oracle_pair,
    )
    assert res_ad < 1e-12
    assert res_da < 1e-12


# -- reducer ----------------------------------------------------------------


def test_reduce_simple_swap():
    rules = RuleSet(Q)
    rep = reduce_word(("b", "a"), rules)
    assert not rep.budget_hit
    assert [t.letters for t in rep.terms] == [("a", "b")]


def test_reduce_head_pair():
    rules = RuleSet(Q)
    rep = reduce_word(("a", "d"), rules)
    shapes = sorted("".join(t.letters) for t in rep.terms)
    assert shapes == ["", "bg"]
    assert all(t.is_normal() for t in rep.terms)


def test_reduce_idempotent_on_normal_words():
    rules = RuleSet(Q)
    for word in [("a", "a", "b"), ("d", "b", "g"), ("g", "g"), ()]:
        rep = reduce_word(word, rules)
        assert [t.letters for t in rep.terms] == [word]


def test_reduce_length_guard():
    rules = RuleSet(Q)
    with pytest.raises(ValueError):
        reduce_word(tuple("abgdabgda"), rules, max_len=8)


def test_reduce_all_two_letter_words(oracle_pair):
    """Every length-2 word over the 8 letters reduces soundly."""
    alphabet = ["a", "b", "g", "d", "a*", "b*", "g*", "d*"]
    for u in alphabet:
        for v in alphabet:
            out = reduce_and_check((u, v), oracle_pair)
            assert out["ok"], (u, v)
            assert max(out["oracle_residuals"]) < 1e-9, (u, v)
            assert out["idempotent"], (u, v)


def test_reduce_random_words(oracle_pair):
    rng = random.Random(20240817)
    alphabet = ["a", "b", "g", "d", "a*", "b*", "g*", "d*"]
    for _ in range(40):
        n = rng.randint(1, 5)
        word = tuple(rng.choice(alphabet) for _ in range(n))
        out = reduce_and_check(word, oracle_pair)
        assert out["ok"], word
        assert max(out["oracle_residuals"]) < 1e-9, word
        heads = {t["monomial"][0] for t in out["terms"]}
        assert heads <= {"", "a", "d"}, word
