"""Sliding-window property testers and the distances they are judged by."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automata import Rdfa
from .analysis import AccTable, AnalysisError, Prepared, acc_table, alon_partition, decompose, \
    triviality_witness
from .det_engines import ConfigurationError, Engine, ExplicitEngine, FixedWindow, \
    PathSummaryEngine, as_event, index_bits, path_summary
from .rand_engines import AllOf, AnyOf, ConstantVerdict, ExactCounter, HlCounter, \
    ModuloEngine, SuffixFreeForm, as_source

PATH_DESCRIPTION_CAP = 10_000


# ---------------------------------------------------------------- distances

def hamming(u, v):
    if len(u) != len(v):
        return math.inf
    return sum(a != b for a, b in zip(u, v))


def pdist(u, v):
    """Least i such that u and v agree after their first i symbols."""
    if len(u) != len(v):
        return math.inf
    for i in range(len(u) - 1, -1, -1):
        if u[i] != v[i]:
            return i + 1
    return 0


def dist_to_lang(w, dfa):
    """Hamming distance from w to the closest word of the same length in L(dfa)."""
    cost = {dfa.initial: 0}
    k = len(dfa.alphabet)
    for a in w:
        ai = dfa.alphabet.index(a)
        nxt = {}
        for q, c in cost.items():
            for b in range(k):
                t = dfa.delta[q][b]
                v = c + (b != ai)
                if v < nxt.get(t, math.inf):
                    nxt[t] = v
        cost = nxt
    return min((c for q, c in cost.items() if q in dfa.finals), default=math.inf)


def pdist_to_lang(w, rdfa, acc: AccTable):
    """Least i such that replacing the first i symbols of w can reach L(rdfa)."""
    n = len(w)
    q = rdfa.initial
    best = math.inf
    # walk from the right; q is the state after reading w[i:]
    states = [q]
    for a in reversed(w):
        q = rdfa.step(a, q)
        states.append(q)
    for i in range(n + 1):
        if acc.contains(states[n - i], i):
            best = i
            break
    return best


# ---------------------------------------------------------------- deterministic tester

class DetTester(FixedWindow):
    """Accepts every window in L and rejects every window at prefix distance > gap."""

    def __init__(self, prepared: Prepared, n):
        super().__init__(PathSummaryEngine(prepared, acceptance="any"), n)
        self.gap = prepared.acc.t
        self.mode = "deterministic"


def det_tester(prepared, n):
    return DetTester(prepared, n)


# ---------------------------------------------------------------- two-sided tester

def compact_summary(rdfa, dec, word, start, g, cap):
    """Compact summary of the run on `word` from `start`, recomputed from its path summary.

    One (entry state, length to its right mod g, min(length to its right, cap)) triple
    per block, leftmost first.
    """
    blocks = path_summary(rdfa, dec, word, start)
    out = []
    right = 0
    for length, entry in reversed(blocks):
        out.append((entry, right % g, min(right, cap)))
        right += length
    return list(reversed(out))


class TwoSidedTester(Engine):
    """Accepts windows in L and rejects windows at prefix distance > eps*n, each w.p. >= 2/3.

    Keeps one compact summary per start state over the whole stream: a list of
    (entry state, length to the right mod g, counter) triples, leftmost first.
    """

    def __init__(self, prepared: Prepared, n, eps, rng=None, exact_counters=False):
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        self.prep = prepared
        self.rdfa = prepared.rdfa
        self.n = n
        self.eps = eps
        self.gap = eps * n
        self.mode = "two_sided"
        t = prepared.acc.t
        self.t = t
        self.fallback = eps * n / 4 < t + 1
        if self.fallback:
            self.inner = ExplicitEngine(self.rdfa, n)
            return
        self.rng = as_source(rng)
        size = self.rdfa.state_count
        self.h = n - t
        self.ell = (1 - eps) * n + t + 1
        if exact_counters:
            self.law = ExactCounter(self.h)
        else:
            self.law = HlCounter(self.h, self.ell, 1 / (3 * size))
        self.g = prepared.g
        self._scc = prepared.dec.scc_of
        self._idx = self.rdfa.alphabet._index
        self.acc_mod = [prepared.acc.acc_mod(q) for q in range(size)]
        self.kappa = [[(q, 0, 0)] for q in range(size)]
        pad = self.rdfa.alphabet.padding
        for _ in range(n):
            self._push(pad)

    def _push(self, a):
        ai = self._idx[a]
        g = self.g
        scc = self._scc
        shapes = []
        counts = []
        for p, row in enumerate(self.rdfa.delta):
            q = row[ai]
            old = self.kappa[q]
            body = old[:-1] if scc[p] == scc[q] else old
            shapes.append(body)
            counts.extend(c for _, _, c in body)
        bumped = self.law.advance(np.array(counts, dtype=np.int64), self.rng) if counts else []
        new = []
        pos = 0
        for p, body in enumerate(shapes):
            triples = []
            for state, r, _ in body:
                triples.append((state, (r + 1) % g, int(bumped[pos])))
                pos += 1
            triples.append((p, 0, 0))
            new.append(triples)
        self.kappa = new

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        if self.fallback:
            self.inner.step(e)
        else:
            self._push(e.symbol)

    def query(self):
        if self.fallback:
            return self.inner.query()
        summary = self.kappa[self.rdfa.initial]
        for state, r, c in summary:
            if not self.law.is_high(c):
                return (self.n - r) % self.g in self.acc_mod[state]
        raise AnalysisError("compact summary without a low counter")

    def state_size_bits(self):
        if self.fallback:
            return self.inner.state_size_bits()
        size = self.rdfa.state_count
        triple = index_bits(size) + index_bits(self.g) + self.law.state_bits()
        return sum(index_bits(size + 1) + len(s) * triple for s in self.kappa)


def two_sided_tester(prepared, n, eps, rng=None, exact_counters=False):
    return TwoSidedTester(prepared, n, eps, rng, exact_counters)


# ---------------------------------------------------------------- path descriptions

@dataclass
class PathDescription:
    """Chain of SCCs C_0 (holding the initial state) ... C_{k-1} joined by bridges,
    ending in a transient final state."""
    sccs: tuple  # C_0 .. C_{k-1} as sorted tuples
    entries: tuple  # q_0 .. q_k; q_k is the final state
    bridges: tuple  # (p_i, symbol, q_{i+1}) for i < k
    automaton: Rdfa = None  # completed partial automaton, extra last state is a sink
    states: tuple = ()  # original states of Q_P, index i of the automaton is states[i]
    r: tuple = ()
    s_list: tuple = ()
    s: int = 0
    acc: AccTable = None
    t: int = 0
    form: SuffixFreeForm = None

    @property
    def k(self):
        return len(self.bridges)

    @property
    def gap(self):
        if all(len(c) == 1 and not self._loops[i] for i, c in enumerate(self.sccs)):
            return self.k
        return 1 + self.s + self.k + self.t

    _loops: tuple = ()


def _build_partial(prep: Prepared, desc: PathDescription):
    rdfa = prep.rdfa
    dec = prep.dec
    states = []
    for comp in desc.sccs:
        states.extend(comp)
    if desc.entries[-1] not in states:
        states.append(desc.entries[-1])
    index = {q: i for i, q in enumerate(states)}
    sink = len(states)
    k = len(rdfa.alphabet)
    delta = [[sink] * k for _ in range(sink + 1)]
    inside = set()
    for comp in desc.sccs:
        inside.update(comp)
    for q in inside:
        for a in range(k):
            p = rdfa.delta[q][a]
            if dec.same(p, q):
                delta[index[q]][a] = index[p]
    for p, sym, q in desc.bridges:
        delta[index[p]][rdfa.alphabet.index(sym)] = index[q]
    return Rdfa(rdfa.alphabet, sink + 1, index[desc.entries[0]], delta,
                [index[desc.entries[-1]]]), tuple(states)


def _annotate(prep: Prepared, desc: PathDescription):
    g = prep.g
    dec = prep.dec
    desc.automaton, desc.states = _build_partial(prep, desc)
    loops = []
    r = []
    for i, comp in enumerate(desc.sccs):
        transient = dec.transient[comp[0]]
        loops.append(not transient)
        if transient:
            r.append(1)
        else:
            part = alon_partition(prep.rdfa, comp, g)
            r.append(part.shift(desc.entries[i], desc.bridges[i][0]) + 1)
    desc._loops = tuple(loops)
    desc.r = tuple(r)
    pdec = decompose(desc.automaton)
    desc.acc = acc_table(desc.automaton, pdec, g)
    desc.t = max(desc.acc.t, prep.acc.t)
    horizon = desc.acc.horizon
    index = {q: i for i, q in enumerate(desc.states)}
    s_list = []
    for i in range(len(desc.sccs)):
        if not loops[i]:
            continue
        total = sum(r[i:])
        target = 0
        for x in range(total, horizon, g):
            target |= 1 << x
        mask = desc.acc.acc[index[desc.entries[i]]]
        diff = (mask ^ target) & ((1 << horizon) - 1)
        s_i = diff.bit_length()
        if s_i >= horizon - 2 * g:
            raise AnalysisError("Acc_P shows no periodic tail within the horizon")
        s_list.append(s_i)
    desc.s_list = tuple(s_list)
    desc.s = max([len(desc.bridges), sum(r)] + s_list)
    return desc


def _chains(prep: Prepared, visit, cap):
    """Calls visit(sccs, entries, bridges, entry) for every SCC chain from the initial state."""
    rdfa = prep.rdfa
    dec = prep.dec
    k = len(rdfa.alphabet)
    count = 0

    def walk(entry, sccs, entries, bridges):
        nonlocal count
        count += 1
        if count > cap:
            raise AnalysisError(f"more than {cap} SCC chains")
        visit(sccs, entries, bridges, entry)
        comp = tuple(dec.scc(entry))
        for p in comp:
            for a in range(k):
                q = rdfa.delta[p][a]
                if dec.same(p, q):
                    continue
                walk(q, sccs + [comp], entries + [entry],
                     bridges + [(p, rdfa.alphabet.symbols[a], q)])

    walk(rdfa.initial, [], [], [])


def enumerate_path_descriptions(prep: Prepared, cap=PATH_DESCRIPTION_CAP):
    """All path descriptions from the initial state to a transient final state."""
    dec = prep.dec
    finals = {q for q in prep.rdfa.finals if dec.transient[q]}
    out = []

    def visit(sccs, entries, bridges, entry):
        if entry in finals:
            out.append(_annotate(prep, PathDescription(tuple(sccs), tuple(entries) + (entry,),
                                                       tuple(bridges))))

    _chains(prep, visit, cap)
    return out


def path_automata(prep: Prepared, cap=PATH_DESCRIPTION_CAP):
    """Partial automata whose languages cover L: the transient descriptions plus, for each
    final state inside a nontransient SCC, the chain ending in that SCC."""
    dec = prep.dec
    out = []

    def visit(sccs, entries, bridges, entry):
        comp = tuple(dec.scc(entry))
        if dec.transient[entry]:
            if entry in prep.rdfa.finals:
                desc = PathDescription(tuple(sccs), tuple(entries) + (entry,), tuple(bridges))
                out.append(_build_partial(prep, desc)[0])
            return
        for f in comp:
            if f in prep.rdfa.finals:
                desc = PathDescription(tuple(sccs) + (comp,), tuple(entries) + (entry, f),
                                       tuple(bridges))
                out.append(_build_partial(prep, desc)[0])

    _chains(prep, visit, cap)
    return out


# ---------------------------------------------------------------- false-biased tester

class PathTester(Engine):
    """One-sided tester for L(B_P): never rejects a window of L(B_P)."""

    def __init__(self, desc: PathDescription, n, rng=None, prime=None):
        self.desc = desc
        self.rdfa = desc.automaton
        self.n = n
        q0 = self.rdfa.initial
        self.gap = desc.gap
        if not desc.acc.contains(q0, n):
            self.kind = "empty"
            self.inner = ConstantVerdict(False, self.rdfa)
        elif not any(desc._loops):
            # L(B_P) is a single word and n is its length
            self.kind = "singleton"
            self.inner = ConstantVerdict(True, self.rdfa)
        elif n <= desc.s + self.rdfa.state_count - 1:
            self.kind = "explicit"
            self.inner = ExplicitEngine(self.rdfa, n)
            self.gap = 0
        else:
            self.kind = "modulo"
            if desc.form is None:
                desc.form = SuffixFreeForm(self.rdfa)
            self.inner = ModuloEngine(desc.form, n, rng, prime)

    def step(self, event):
        self.inner.step(event)

    def query(self):
        return self.inner.query()

    def state_size_bits(self):
        return self.inner.state_size_bits()


class TrivialTester(Engine):
    """Constant verdict: accept iff L has a word of length n."""

    def __init__(self, rdfa: Rdfa, n, acc: AccTable = None, cut=None):
        self.rdfa = rdfa
        acc = acc or acc_table(rdfa)
        self.verdict = acc.contains(rdfa.initial, n)
        cut = cut or triviality_witness(rdfa.reversed_dfa())
        if cut is None:
            raise ConfigurationError("language is not trivial")
        self.gap = cut[0] + cut[1]
        self.mode = "deterministic"

    def step(self, event):
        pass

    def query(self):
        return self.verdict

    def state_size_bits(self):
        return 0


def trivial_tester(rdfa, n):
    return TrivialTester(rdfa, n)


def union_tree(factories, rng):
    """Union of one-sided testers: two copies per side, a side rejects if either copy does."""
    rng = as_source(rng)
    if len(factories) == 1:
        return factories[0](rng)
    half = len(factories) // 2
    left, right = factories[:half], factories[half:]
    r = rng.spawn(4)
    return AnyOf([AllOf([union_tree(left, r[0]), union_tree(left, r[1])]),
                  AllOf([union_tree(right, r[2]), union_tree(right, r[3])])])


class FalseBiasedPlan:
    """Per-language part of the false-biased tester, shared by every n and seed."""

    def __init__(self, prepared: Prepared):
        rdfa = prepared.rdfa
        dec = prepared.dec
        self.prep = prepared
        self.rest = Rdfa(rdfa.alphabet, rdfa.state_count, rdfa.initial, rdfa.delta,
                         [q for q in rdfa.finals if not dec.transient[q]])
        self.rest_acc = acc_table(self.rest, decompose(self.rest), prepared.g)
        self.rest_cut = triviality_witness(self.rest.reversed_dfa())
        if self.rest_cut is None:
            raise ConfigurationError("nontransient part of the language is not trivial")
        self.descriptions = enumerate_path_descriptions(prepared)

    def tester(self, n, rng=None):
        return FalseBiasedTester(self.prep, n, rng, plan=self)


class FalseBiasedTester(Engine):
    """Accepts every window of L with probability 1; rejects windows at prefix
    distance > gap with probability >= 2/3."""

    def __init__(self, prepared: Prepared, n, rng=None, plan=None):
        plan = plan or FalseBiasedPlan(prepared)
        self.rdfa = prepared.rdfa
        self.n = n
        self.mode = "false_biased"
        trivial = TrivialTester(plan.rest, n, plan.rest_acc, plan.rest_cut)
        self.descriptions = plan.descriptions
        probes = [PathTester(d, n) for d in self.descriptions]
        self.gap = max([trivial.gap] + [p.gap for p in probes])
        factories = [lambda r: trivial]
        for d in self.descriptions:
            # every copy needs its own state, so build afresh even for deterministic parts
            factories.append(lambda r, d=d: PathTester(d, n, r))
        self.inner = union_tree(factories, rng)

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        self.inner.step(e)

    def query(self):
        return self.inner.query()

    def state_size_bits(self):
        return self.inner.state_size_bits()


def false_biased_tester(prepared, n, rng=None, plan=None):
    return FalseBiasedTester(prepared, n, rng, plan)
