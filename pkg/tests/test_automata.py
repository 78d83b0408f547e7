import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from slidewin.automata import (Alphabet, AutomatonFormatError, Language, Nfa, Rdfa,
                               RegexSyntaxError, StateBudgetExceeded, complement, determinize,
                               dfa_state_distance, dump_automaton, equivalent, is_empty,
                               is_universal, minimize, parse_automaton, parse_regex, product,
                               random_regex, regex_to_nfa, reverse, suffix_testable_degree,
                               to_rdfa)

from conftest import py_pattern, words_upto

AB = Alphabet.of("ab")


def nfa_of(rx, alphabet=AB):
    return regex_to_nfa(parse_regex(rx, alphabet), alphabet)


def test_parse_shapes():
    assert str(parse_regex("a(a|b)*", AB)) == "(a((a|b))*)"
    assert parse_regex("ε", AB).kind == "eps"
    node = parse_regex("a**", AB)
    assert node.kind == "star" and node.children[0].kind == "star"
    assert parse_regex("", AB).kind == "eps"
    assert parse_regex("null", AB).kind == "empty"


@pytest.mark.parametrize("bad", ["a(b", "*a", "a|c", "(a))"])
def test_parse_errors(bad):
    with pytest.raises(RegexSyntaxError):
        parse_regex(bad, AB)


def test_small_nfas():
    assert nfa_of("ε").accepts("") and not nfa_of("ε").accepts("a")
    assert nfa_of("a").accepts("a") and not nfa_of("a").accepts("b")
    n = nfa_of("a|b")
    assert n.accepts("a") and n.accepts("b")
    assert not n.accepts("") and not n.accepts("aa")


def test_determinize_examples():
    d = determinize(nfa_of("a"))
    assert d.state_count == 3
    assert not determinize(nfa_of("∅")).finals
    m = minimize(determinize(nfa_of("(a|b)*")))
    assert m.state_count == 1 and m.finals == {0}
    e = minimize(determinize(nfa_of("∅")))
    assert e.state_count == 1 and not e.finals
    assert minimize(determinize(nfa_of("(a|b)*a"))).state_count == 2


def test_state_budget():
    # the k-th symbol from the end needs 2^k DFA states
    with pytest.raises(StateBudgetExceeded):
        determinize(nfa_of("(a|b)*a(a|b)(a|b)(a|b)(a|b)(a|b)"), budget=16)


def test_reverse():
    r = reverse(nfa_of("ab"))
    assert r.accepts("ba") and not r.accepts("ab")
    even = nfa_of("((a|b)(a|b))*")
    for w in words_upto("ab", 6):
        assert reverse(even).accepts(w) == even.accepts(w)


def test_rdfa_run_semantics():
    rd = Language.from_regex("(a|b)*a", alphabet="ab").rdfa
    assert rd.accepts("a") and rd.accepts("ba") and not rd.accepts("ab")
    for w in words_upto("ab", 3):
        assert rd.accepts(w) == w.endswith("a")
    # the a-transition out of the initial state enters the accepting component
    q = rd.step("a", rd.initial)
    assert q in rd.finals
    empty = Language.from_regex("∅", alphabet="ab").rdfa
    assert empty.state_count == 1 and not empty.finals


def test_boolean_ops():
    d = Language.from_regex("a(a|b)*|b", alphabet="ab").dfa
    assert equivalent(complement(complement(d)), d)
    assert is_empty(product(d, complement(d), "and"))
    x = Language.from_regex("(a|b)*a", alphabet="ab").dfa
    y = Language.from_regex("a(a|b)*", alphabet="ab").dfa
    both = product(x, y, "and")
    assert both.accepts("a") and both.accepts("aba") and not both.accepts("ba")
    assert is_universal(Language.from_regex("(a|b)*", alphabet="ab").dfa)
    assert equivalent(minimize(d), d)


def test_state_distance():
    d = Language.from_regex("(a|b)*a", alphabet="ab").dfa
    assert dfa_state_distance(d, 0, 0) == 0
    assert dfa_state_distance(d, 0, 1) == dfa_state_distance(d, 1, 0) == 1
    assert suffix_testable_degree(d) == 1
    assert suffix_testable_degree(Language.from_regex("(a|b)*a(a|b)*", alphabet="ab").dfa) is None
    assert suffix_testable_degree(Language.from_regex("(a|b)*", alphabet="ab").dfa) == 0


def _merge_depth(dfa, p, q, k):
    """Brute force: do p and q reach the same state on every word of length k?"""
    for z in words_upto(dfa.alphabet.symbols, k):
        if len(z) == k and dfa.run(z, p) != dfa.run(z, q):
            return False
    return True


def test_state_distance_against_brute_force():
    rng = random.Random(3)
    for _ in range(40):
        d = Language.from_regex(random_regex(rng, "ab", 4), alphabet="ab").dfa
        for p in range(d.state_count):
            for q in range(d.state_count):
                dist = dfa_state_distance(d, p, q)
                assert dist == dfa_state_distance(d, q, p)
                if dist != math.inf:
                    assert dist <= d.state_count
                for k in range(5):
                    assert (dist <= k) == _merge_depth(d, p, q, k)


def test_automaton_format_round_trip():
    rd = Language.from_regex("ab*|ba", alphabet="ab").rdfa
    back = parse_automaton(dump_automaton(rd))
    assert isinstance(back, Rdfa) and back == rd
    nfa = nfa_of("a*b")
    back = parse_automaton(dump_automaton(nfa))
    assert isinstance(back, Nfa)
    for w in words_upto("ab", 5):
        assert back.accepts(w) == nfa.accepts(w)
    with pytest.raises(AutomatonFormatError):
        parse_automaton("kind: dfa\nbogus: 1\n")
    with pytest.raises(AutomatonFormatError):
        parse_automaton("kind: dfa\ntrans: 0 a\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(["ab", "abc"]))
def test_round_trip_forms(seed, symbols):
    rx = random_regex(random.Random(seed), symbols, 5)
    alphabet = Alphabet.of(symbols)
    nfa = nfa_of(rx, alphabet)
    det = determinize(nfa)
    mini = minimize(det)
    rd = to_rdfa(nfa)
    pat = py_pattern(rx)
    assert minimize(mini) == mini
    assert equivalent(mini, det)
    rr = reverse(reverse(nfa))
    for w in words_upto(symbols, 6 if symbols == "ab" else 4):
        truth = pat.fullmatch(w) is not None
        assert nfa.accepts(w) == truth
        assert det.accepts(w) == truth
        assert mini.accepts(w) == truth
        assert rd.accepts(w) == truth
        assert rr.accepts(w) == truth
