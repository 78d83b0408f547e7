import itertools
import math
import random

import pytest

from slidewin.automata import Alphabet, Language, Rdfa, parse_automaton, to_rdfa
from slidewin.analysis import (SpaceClassReport, acc_table, alon_partition, classify,
                               cut_language, decompose, is_length_language,
                               is_suffix_free, is_trivial, is_well_behaved_all,
                               synchronized_consistent, synchronized_pairs, triviality_witness,
                               unbounded_states, uniformize_period)
from slidewin.testers import dist_to_lang

from conftest import random_languages, words_upto

THREE_STATE = """kind: rdfa
alphabet: ab
states: 3
initial: 0
finals: 2
trans: 0 a 0
trans: 0 b 1
trans: 1 b 0
trans: 1 a 2
trans: 2 a 2
trans: 2 b 2
"""


def rd(rx):
    return Language.from_regex(rx, alphabet="ab").rdfa


def two_cycle():
    return Rdfa(Alphabet.of("ab"), 2, 0, [[1, 1], [0, 0]], [0])


def reach_closure(rdfa):
    n = rdfa.state_count
    reach = [[False] * n for _ in range(n)]
    for q in range(n):
        for p in rdfa.delta[q]:
            reach[q][p] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def cycle_lengths(rdfa, q, limit):
    """Lengths <= limit of closed walks at q."""
    out = set()
    cur = {q}
    for length in range(1, limit + 1):
        cur = {p for s in cur for p in rdfa.delta[s]}
        if q in cur:
            out.add(length)
    return out


def test_scc_and_period_examples():
    loop = Rdfa(Alphabet.of("a"), 1, 0, [[0]], [])
    dec = decompose(loop)
    assert not dec.transient[0] and dec.period[dec.scc_of[0]] == 1
    dec = decompose(two_cycle())
    assert dec.period[dec.scc_of[0]] == 2
    fig = parse_automaton(THREE_STATE)
    dec = decompose(fig)
    assert sorted(map(sorted, dec.members)) == [[0, 1], [2]]
    # the a-loop on p gives a cycle of length 1
    assert dec.period[dec.scc_of[0]] == 1
    assert dec.period[dec.scc_of[2]] == 1


def test_scc_against_closure():
    for lang in random_languages(11, 40, "abc", max_states=10):
        r = lang.rdfa
        dec = decompose(r)
        reach = reach_closure(r)
        for p in range(r.state_count):
            assert dec.transient[p] == (not reach[p][p])
            for q in range(r.state_count):
                mutual = p == q or (reach[p][q] and reach[q][p])
                assert dec.same(p, q) == mutual
            if not dec.transient[p]:
                g = dec.period[dec.scc_of[p]]
                lens = cycle_lengths(r, p, 4 * r.state_count)
                assert all(x % g == 0 for x in lens)
                assert math.gcd(*lens) == g


def test_uniformize():
    same = rd("(a|b)*a")
    out, g = uniformize_period(same)
    assert g == 1 and out is same
    # (aa)* has period 2, the b-loop after it period 1
    mixed = rd("b*(aa)*")
    out, g = uniformize_period(mixed)
    dec = decompose(out)
    assert g == 2
    assert all(dec.period[c] == 2 for c in dec.nontransient_sccs()
               if any(dec.reachable[q] for q in dec.members[c]))
    for w in words_upto("ab", 6):
        assert out.accepts(w) == mixed.accepts(w)


def test_shift_partition():
    loop = Rdfa(Alphabet.of("a"), 1, 0, [[0]], [])
    part = alon_partition(loop, [0], 1)
    assert part.m == 1 and part.shift(0, 0) == 0
    part = alon_partition(two_cycle(), [0, 1], 2)
    assert part.shift(0, 1) == 1 and part.shift(1, 0) == 1
    for lang in random_languages(5, 30, "ab"):
        r = lang.rdfa
        dec = decompose(r)
        for c in dec.nontransient_sccs():
            g = dec.period[c]
            part = alon_partition(r, dec.members[c], g)
            for u in part.members:
                for v in part.members:
                    assert (part.shift(u, v) + part.shift(v, u)) % g == 0


def test_well_behaved_examples():
    assert not is_well_behaved_all(rd("a(a|b)*"))[0]
    assert is_well_behaved_all(rd("(a|b)*a(a|b)*"))[0]
    allfinal = rd("(a|b)*")
    assert is_well_behaved_all(allfinal)[0]


def test_unbounded_states():
    # read right to left, the first symbol decides, so only the start state is transient
    r = rd("(a|b)*a")
    assert unbounded_states(r) == r.reachable() - {r.initial}
    finite = rd("ab|ba|a")
    live = [q for q in unbounded_states(finite) if q in finite.finals]
    assert not live  # only the dead sink is unbounded
    acyclic = Rdfa(Alphabet.of("a"), 2, 0, [[1], [1]], [0])
    assert unbounded_states(acyclic) == {1}


def test_synchronized_examples():
    empty = Rdfa(Alphabet.of("ab"), 1, 0, [[0, 0]], [])
    assert synchronized_consistent(empty)[0]
    assert synchronized_consistent(rd("ab*"))[0]
    ok, witness = synchronized_consistent(rd("(a|b)*a(a|b)*"))
    assert not ok
    u, x, y, z = witness
    assert len(x) == len(y) == len(z)


def test_synchronized_modulus_agrees():
    for lang in random_languages(17, 30, "ab", max_states=6):
        r = lang.rdfa
        base = synchronized_pairs(r)
        assert base == synchronized_pairs(r, modulus="lcm")
        assert base == synchronized_pairs(r, modulus="factorial")


def test_suffix_free():
    assert is_suffix_free(rd("∅"))
    assert is_suffix_free(rd("ab*"))
    assert not is_suffix_free(rd("(a|b)*a"))


def suffix_free_brute(lang, k):
    words = [w for w in words_upto("ab", k) if lang.contains(w)]
    inl = set(words)
    return not any(w[i:] in inl for w in words for i in range(1, len(w) + 1))


def test_suffix_free_against_definition():
    for lang in random_languages(23, 60, "ab"):
        assert is_suffix_free(lang.rdfa) == suffix_free_brute(lang, 8)


def test_cut_and_length_languages():
    d = Language.from_regex("(a|b)*a", alphabet="ab").dfa
    c00 = cut_language(d, 0, 0)
    c10 = cut_language(d, 1, 0)
    for w in words_upto("ab", 5):
        assert c00.accepts(w) == d.accepts(w)
        assert c10.accepts(w) == (w == "" or w.endswith("a"))
    c22 = cut_language(d, 2, 2)
    assert c22.accepts("") and c22.accepts("b")
    assert is_length_language(Language.from_regex("((a|b)(a|b))*", alphabet="ab").nfa)
    assert not is_length_language(Language.from_regex("(a|b)*a", alphabet="ab").nfa)
    assert is_length_language(Language.from_regex("∅", alphabet="ab").nfa)
    assert is_length_language(Language.from_regex("(a|b)*", alphabet="ab").nfa)


def test_triviality_examples():
    assert is_trivial(Language.from_regex("(b*ab*a)*b*", alphabet="ab").dfa)
    assert not is_trivial(Language.from_regex("a*", alphabet="ab").dfa)
    assert is_trivial(Language.from_regex("(a|b)*a", alphabet="ab").dfa)


def test_triviality_against_distances():
    for lang in random_languages(29, 40, "ab", max_states=6):
        cut = triviality_witness(lang.dfa)
        worst = 0
        for n in range(0, 10):
            for t in itertools.product("ab", repeat=n):
                d = dist_to_lang("".join(t), lang.dfa)
                if d != math.inf:
                    worst = max(worst, d)
        if cut is not None:
            assert worst <= sum(cut)
        else:
            assert worst >= 2


def test_acc_examples():
    r = rd("(a|b)*a")
    acc = acc_table(r)
    for q in r.finals:
        assert acc.contains(q, 0)
    none = Rdfa(Alphabet.of("ab"), 2, 0, [[1, 1], [0, 0]], [])
    acc = acc_table(none)
    assert acc.t == 0 and not acc.values(0, 50)
    ra = Language.from_regex("a*", alphabet="a").rdfa
    acc = acc_table(ra)
    assert acc.g == 1 and acc.t == 0 and acc.values(ra.initial, 30) == list(range(30))


def test_acc_against_brute_force():
    for lang in random_languages(31, 40, "ab"):
        uni, g = uniformize_period(lang.rdfa)
        dec = decompose(uni)
        acc = acc_table(uni, dec, g)
        for q in range(uni.state_count):
            cur = {q}
            for x in range(acc.horizon + 3 * g):
                assert acc.contains(q, x) == bool(cur & uni.finals)
                cur = {p for s in cur for p in uni.delta[s]}
        for m in acc.acc + acc.acc_int:
            for x in range(acc.t, acc.horizon - g):
                assert (m >> x & 1) == (m >> (x + g) & 1)


EXPECTED = {
    "(a|b)*a": ("constant", "log", "constant"),
    "(a|b)*a(a|b)*": ("log", "log", "log"),
    "a(a|b)*": ("linear", "linear", "linear"),
    "a*": ("log", "log", "log"),
    "ab*": ("log", "log", "loglog"),
    "∅": ("constant", "constant", "constant"),
    "(a|b)*": ("constant", "constant", "constant"),
}


@pytest.mark.parametrize("rx", sorted(EXPECTED))
def test_classify_table(rx):
    rep = classify(rd(rx))
    assert (rep.det_fixed, rep.det_variable, rep.randomized) == EXPECTED[rx]


def test_report_formats():
    rep = classify(rd("(b*ab*a)*b*"))
    assert rep.trivial and rep.triviality_cut is not None
    back = SpaceClassReport.from_line(rep.to_line())
    assert back.verdicts() == rep.verdicts()
    assert "det_fixed: linear" in rep.to_text()


def test_linear_witness_sound():
    rng = random.Random(41)
    checked = 0
    fixed = [Language.from_regex(rx, alphabet="ab") for rx in ("a(a|b)*", "ab(a|b)*", "(a|b)a*")]
    for lang in fixed + random_languages(37, 60, "ab"):
        rep = classify(lang.rdfa)
        if "linear" not in rep.witnesses:
            continue
        checked += 1
        u1, u2, v1, v2, z = rep.witnesses["linear"]
        assert len(u1) == len(v1) and len(u2) == len(v2)
        for _ in range(10):
            s = "".join(rng.choice([u1 + u2, v1 + v2]) for _ in range(rng.randrange(5)))
            assert lang.contains(u2 + s + z) != lang.contains(v2 + s + z)
    assert checked >= 5


def test_log_witness_separates():
    checked = 0
    for lang in random_languages(43, 60, "ab"):
        rep = classify(lang.rdfa)
        if "log" not in rep.witnesses:
            continue
        checked += 1
        x, y, z = rep.witnesses["log"]
        assert y
        for i in range(1, 5):
            w = y * i + z
            assert lang.contains(x + w) != lang.contains(w)
    assert checked >= 5


def test_classification_is_automaton_independent():
    for lang in random_languages(47, 40, "ab", max_states=6):
        base = classify(lang.rdfa, with_witnesses=False).verdicts()
        uni, _ = uniformize_period(lang.rdfa)
        assert classify(uni, with_witnesses=False).verdicts() == base
        raw = to_rdfa(lang.nfa, minimal=False)
        assert classify(raw, with_witnesses=False).verdicts() == base


def test_boolean_closure():
    order = {"constant": 0, "log": 1, "linear": 2}
    langs = random_languages(53, 40, "ab", max_states=6)
    rng = random.Random(59)
    for _ in range(40):
        x, y = rng.sample(langs, 2)
        cx = classify(x.rdfa, with_witnesses=False).det_fixed
        cy = classify(y.rdfa, with_witnesses=False).det_fixed
        assert classify(x.complement().rdfa, with_witnesses=False).det_fixed == cx
        cu = classify(x.union(y).rdfa, with_witnesses=False).det_fixed
        assert order[cu] <= max(order[cx], order[cy])
