"""Static analysis of rDFAs: SCCs, periods, Acc tables and the space-class verdicts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .automata import Dfa, Nfa, Rdfa, StateBudgetExceeded, DEFAULT_STATE_BUDGET, \
    determinize, is_empty, is_universal

TRIVIALITY_PAIR_CAP = 1 << 12


class AnalysisError(RuntimeError):
    pass


# ---------------------------------------------------------------- SCCs

@dataclass
class SccDecomposition:
    scc_of: list
    members: list
    order: list  # scc ids, sources first
    transient: list
    period: list  # per scc, None when transient
    reachable: list

    def same(self, p, q):
        return self.scc_of[p] == self.scc_of[q]

    def scc(self, q):
        return self.members[self.scc_of[q]]

    def nontransient_sccs(self):
        return [c for c in range(len(self.members)) if self.period[c] is not None]


def _tarjan(n, succ):
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    # Tarjan emits sinks first
    return comps[::-1]


def decompose(rdfa: Rdfa) -> SccDecomposition:
    n = rdfa.state_count
    succ = [sorted(set(row)) for row in rdfa.delta]
    comps = _tarjan(n, succ)
    scc_of = [0] * n
    for c, comp in enumerate(comps):
        for q in comp:
            scc_of[q] = c
    transient = [False] * n
    period = [None] * len(comps)
    for c, comp in enumerate(comps):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            transient[comp[0]] = True
            continue
        anchor = comp[0]
        depth = {anchor: 0}
        frontier = [anchor]
        while frontier:
            nxt = []
            for u in frontier:
                for v in succ[u]:
                    if scc_of[v] == c and v not in depth:
                        depth[v] = depth[u] + 1
                        nxt.append(v)
            frontier = nxt
        g = 0
        for u in comp:
            for v in succ[u]:
                if scc_of[v] == c:
                    g = math.gcd(g, abs(depth[u] + 1 - depth[v]))
        period[c] = g
    reach = rdfa.reachable()
    return SccDecomposition(scc_of, comps, list(range(len(comps))), transient, period,
                            [q in reach for q in range(n)])


def uniformize_period(rdfa: Rdfa, budget=DEFAULT_STATE_BUDGET):
    """Product with a cyclic counter so that every nontransient SCC has the same period."""
    dec = decompose(rdfa)
    g = 1
    for c in dec.nontransient_sccs():
        if any(dec.reachable[q] for q in dec.members[c]):
            g *= dec.period[c]
    if g == 1:
        return rdfa, 1
    start = (rdfa.initial, 0)
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        q, k = order[i]
        row = []
        for p in rdfa.delta[q]:
            t = (p, (k + 1) % g) if dec.same(p, q) else (p, 0)
            if t not in index:
                if len(order) >= budget:
                    raise StateBudgetExceeded(f"uniformization exceeded {budget} states")
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta.append(row)
        i += 1
    finals = [j for j, (q, _) in enumerate(order) if q in rdfa.finals]
    return Rdfa(rdfa.alphabet, len(order), 0, delta, finals), g


@dataclass
class ShiftPartition:
    members: tuple
    g: int
    cls: dict
    m: int

    def shift(self, u, v):
        """Every path from u to v inside the SCC has length congruent to this mod g."""
        return (self.cls[v] - self.cls[u]) % self.g


def alon_partition(rdfa: Rdfa, members, g) -> ShiftPartition:
    members = tuple(sorted(members))
    inside = set(members)
    anchor = members[0]
    depth = {anchor: 0}
    frontier = [anchor]
    while frontier:
        nxt = []
        for u in frontier:
            for v in rdfa.delta[u]:
                if v in inside and v not in depth:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
        frontier = nxt
    if len(depth) != len(members):
        raise AnalysisError("states are not strongly connected")
    cls = {q: depth[q] % g for q in members}
    for u in members:
        for v in rdfa.delta[u]:
            if v in inside and (cls[u] + 1 - cls[v]) % g:
                raise AnalysisError(f"period {g} violated on edge {u}->{v}")
    k = len(members)
    pos = {q: i for i, q in enumerate(members)}
    adj = np.zeros((k, k), dtype=np.int64)
    for u in members:
        for v in rdfa.delta[u]:
            if v in inside:
                adj[pos[u], pos[v]] = 1
    shifts = np.array([[(cls[v] - cls[u]) % g for v in members] for u in members])
    bound = 3 * k * k
    reach = np.eye(k, dtype=np.int64)
    good = []
    for r in range(1, bound + 1):
        reach = ((reach @ adj) > 0).astype(np.int64)
        need = shifts == (r % g)
        good.append(bool(np.all(reach[need] > 0)))
    m = bound + 1
    for r in range(bound, 0, -1):
        if not good[r - 1]:
            break
        m = r
    if m > bound:
        raise AnalysisError("reachability constant exceeds 3|C|^2")
    return ShiftPartition(members, g, cls, m)


# ---------------------------------------------------------------- words

def shortest_word(rdfa: Rdfa, src, dst, allowed=None, nonempty=False):
    """Shortest word w with w·src = dst, all visited states in `allowed`."""
    k = len(rdfa.alphabet)
    parent = {}
    frontier = []
    if not nonempty:
        if src == dst:
            return ""
        parent[src] = None
        frontier = [src]
    else:
        for a in range(k):
            t = rdfa.delta[src][a]
            if (allowed is None or t in allowed) and t not in parent:
                parent[t] = (None, a)
                frontier.append(t)
        if dst in parent:
            return rdfa.alphabet.symbols[parent[dst][1]]
    while frontier:
        nxt = []
        for u in frontier:
            for a in range(k):
                t = rdfa.delta[u][a]
                if (allowed is not None and t not in allowed) or t in parent:
                    continue
                parent[t] = (u, a)
                if t == dst:
                    applied = []
                    x = t
                    while parent[x] is not None:
                        prev, sym = parent[x]
                        applied.append(rdfa.alphabet.symbols[sym])
                        if prev is None:
                            break
                        x = prev
                    # applied is last-to-first; the first applied symbol is rightmost
                    return "".join(applied)
                nxt.append(t)
        frontier = nxt
    return None


def word_of_length(rdfa: Rdfa, src, dst, length, allowed=None):
    """Some word w of exactly the given length with w·src = dst, or None."""
    k = len(rdfa.alphabet)
    layers = [{src: None}]
    for _ in range(length):
        nxt = {}
        for u in layers[-1]:
            for a in range(k):
                t = rdfa.delta[u][a]
                if (allowed is None or t in allowed) and t not in nxt:
                    nxt[t] = (u, a)
        layers.append(nxt)
    if dst not in layers[-1]:
        return None
    applied = []
    x = dst
    for i in range(length, 0, -1):
        u, a = layers[i][x]
        applied.append(rdfa.alphabet.symbols[a])
        x = u
    return "".join(applied)


# ---------------------------------------------------------------- well-behavedness

def find_disagreement(rdfa: Rdfa, states):
    """Equal-length runs inside `states` from a common start, one accepting and one not.

    Returns None or (start, u, v) with |u| = |v|, u·start final and v·start nonfinal.
    """
    states = set(states)
    k = len(rdfa.alphabet)
    parent = {}
    frontier = []
    for q in sorted(states):
        parent[(q, q)] = None
        frontier.append((q, q))
    while frontier:
        nxt = []
        for pair in frontier:
            x, y = pair
            if (x in rdfa.finals) != (y in rdfa.finals):
                us, vs = [], []
                cur = pair
                while parent[cur] is not None:
                    prev, a, b = parent[cur]
                    us.append(rdfa.alphabet.symbols[a])
                    vs.append(rdfa.alphabet.symbols[b])
                    cur = prev
                u, v = "".join(us), "".join(vs)
                if x in rdfa.finals:
                    return cur[0], u, v
                return cur[0], v, u
            for a in range(k):
                xa = rdfa.delta[x][a]
                if xa not in states:
                    continue
                for b in range(k):
                    yb = rdfa.delta[y][b]
                    if yb in states and (xa, yb) not in parent:
                        parent[(xa, yb)] = (pair, a, b)
                        nxt.append((xa, yb))
        frontier = nxt
    return None


def is_well_behaved(rdfa: Rdfa, scc):
    """(verdict, counterexample) for internal runs of one SCC."""
    cex = find_disagreement(rdfa, scc)
    return cex is None, cex


def is_well_behaved_all(rdfa: Rdfa, dec: SccDecomposition = None):
    dec = dec or decompose(rdfa)
    for comp in dec.members:
        if not dec.reachable[comp[0]]:
            continue
        ok, cex = is_well_behaved(rdfa, comp)
        if not ok:
            return False, cex
    return True, None


def unbounded_states(rdfa: Rdfa, dec: SccDecomposition = None):
    dec = dec or decompose(rdfa)
    seeds = [q for q in range(rdfa.state_count) if dec.reachable[q] and not dec.transient[q]]
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        for r in rdfa.delta[todo.pop()]:
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def is_suffix_free(rdfa: Rdfa) -> bool:
    reach = rdfa.reachable()
    for f in rdfa.finals & reach:
        after = set()
        for r in rdfa.delta[f]:
            after |= rdfa.reachable(r)
        if after & rdfa.finals:
            return False
    return True


# ---------------------------------------------------------------- synchronized pairs

def _lcm(values):
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _residue_reach(rdfa, p, modulus):
    """States q with a nonempty run from p to q whose length is 0 mod `modulus`."""
    start = [(t, 1 % modulus) for t in set(rdfa.delta[p])]
    seen = set(start)
    todo = list(start)
    while todo:
        q, r = todo.pop()
        for t in rdfa.delta[q]:
            nxt = (t, (r + 1) % modulus)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return {q for q, r in seen if r == 0}


def synchronized_pairs(rdfa: Rdfa, dec: SccDecomposition = None, modulus="pair"):
    """All reachable synchronized pairs (p, q).

    modulus "pair" uses lcm of the two SCC periods, which is exact and small;
    "lcm" uses lcm(1..|Q|) and "factorial" uses |Q|!, both for cross-checking.
    """
    dec = dec or decompose(rdfa)
    n = rdfa.state_count
    live = [q for q in range(n) if dec.reachable[q] and not dec.transient[q]]
    pairs = set()
    if modulus == "lcm":
        fixed = _lcm(range(1, n + 1))
    elif modulus == "factorial":
        fixed = math.factorial(n)
    elif modulus == "pair":
        fixed = None
    else:
        raise ValueError(f"unknown modulus {modulus!r}")
    for p in live:
        gp = dec.period[dec.scc_of[p]]
        if fixed is not None:
            hits = _residue_reach(rdfa, p, fixed)
            pairs.update((p, q) for q in live if q in hits)
            continue
        by_mod = {}
        for q in live:
            m = _lcm([gp, dec.period[dec.scc_of[q]]])
            by_mod.setdefault(m, []).append(q)
        for m, targets in by_mod.items():
            hits = _residue_reach(rdfa, p, m)
            pairs.update((p, q) for q in targets if q in hits)
    return pairs


def _sync_witness(rdfa, dec, p, q):
    """Words (u, x, y, z) of a synchronized pair: z loops at p, y leads p to q, x loops at q."""
    m = _lcm([dec.period[dec.scc_of[p]], dec.period[dec.scc_of[q]]])
    cp, cq = set(dec.scc(p)), set(dec.scc(q))
    n = rdfa.state_count
    limit = m * (4 * n * n + 4)
    for length in range(m, limit + 1, m):
        z = word_of_length(rdfa, p, p, length, cp)
        if z is None:
            continue
        x = word_of_length(rdfa, q, q, length, cq)
        if x is None:
            continue
        y = word_of_length(rdfa, p, q, length)
        if y is None:
            continue
        u = shortest_word(rdfa, rdfa.initial, p)
        return u, x, y, z
    raise AnalysisError("no equal-length words for a synchronized pair")


def synchronized_consistent(rdfa: Rdfa, dec: SccDecomposition = None, modulus="pair"):
    """(verdict, witness): every reachable synchronized pair agrees on finality."""
    dec = dec or decompose(rdfa)
    for p, q in sorted(synchronized_pairs(rdfa, dec, modulus)):
        if (p in rdfa.finals) != (q in rdfa.finals):
            return False, _sync_witness(rdfa, dec, p, q)
    return True, None


# ---------------------------------------------------------------- triviality

def _image(dfa, states):
    return frozenset(dfa.delta[q][a] for q in states for a in range(len(dfa.alphabet)))


def _preimage(dfa, states):
    return frozenset(q for q in range(dfa.state_count)
                     if any(dfa.delta[q][a] in states for a in range(len(dfa.alphabet))))


def _distinct_prefix(start, step):
    """Elements of an eventually periodic sequence up to its first repetition."""
    seen = {}
    out = []
    cur = start
    while cur not in seen:
        seen[cur] = len(out)
        out.append(cur)
        cur = step(cur)
    return out


def initial_sets(dfa: Dfa):
    return _distinct_prefix(frozenset([dfa.initial]), lambda s: _image(dfa, s))


def final_sets(dfa: Dfa):
    return _distinct_prefix(frozenset(dfa.finals), lambda s: _preimage(dfa, s))


def cut_language(dfa: Dfa, i, j) -> Nfa:
    """Words y with xyz in L for some |x| = i, |z| = j."""
    init = frozenset([dfa.initial])
    for _ in range(i):
        init = _image(dfa, init)
    fin = frozenset(dfa.finals)
    for _ in range(j):
        fin = _preimage(dfa, fin)
    trans = tuple(tuple(frozenset([q]) for q in row) for row in dfa.delta)
    return Nfa(dfa.alphabet, dfa.state_count, init, trans, fin)


def is_length_language(nfa: Nfa, budget=DEFAULT_STATE_BUDGET) -> bool:
    """Membership depends only on the length of the word."""
    dfa = determinize(nfa, budget)
    for layer in _distinct_prefix(frozenset([dfa.initial]), lambda s: _image(dfa, s)):
        hit = layer & dfa.finals
        if hit and hit != layer:
            return False
    return True


def triviality_witness(dfa: Dfa, cap=TRIVIALITY_PAIR_CAP):
    """Some (i, j) minimizing i + j whose cut language is a length language, or None."""
    inits = initial_sets(dfa)
    fins = final_sets(dfa)
    if len(inits) * len(fins) > cap:
        raise AnalysisError(f"triviality check needs more than {cap} cut languages")
    trans = tuple(tuple(frozenset([q]) for q in row) for row in dfa.delta)
    combos = sorted(((i, j) for i in range(len(inits)) for j in range(len(fins))),
                    key=lambda ij: (ij[0] + ij[1], ij))
    for i, j in combos:
        if is_length_language(Nfa(dfa.alphabet, dfa.state_count, inits[i], trans, fins[j])):
            return i, j
    return None


def is_trivial(dfa: Dfa) -> bool:
    return triviality_witness(dfa) is not None


# ---------------------------------------------------------------- Acc tables

@dataclass
class AccTable:
    g: int
    t: int
    horizon: int
    acc: list  # per state: int bitmask over lengths below the horizon
    acc_int: list

    @staticmethod
    def _bit(mask, x, t, g, horizon):
        if x < 0:
            return False
        if x >= horizon:
            x = t + (x - t) % g
        return bool(mask >> x & 1)

    def contains(self, q, x):
        """x in Acc(q): some word of length x leads q into a final state."""
        return self._bit(self.acc[q], x, self.t, self.g, self.horizon)

    def contains_int(self, q, x):
        """Same, restricted to runs staying in the SCC of q."""
        return self._bit(self.acc_int[q], x, self.t, self.g, self.horizon)

    def acc_mod(self, q):
        return frozenset(x % self.g for x in range(self.t, self.t + self.g) if self.contains(q, x))

    def values(self, q, upto, internal=False):
        f = self.contains_int if internal else self.contains
        return [x for x in range(upto) if f(q, x)]


def _length_masks(rdfa, horizon, keep):
    """Bitmask of accepted lengths per state; `keep(q, p)` filters transitions q -> p."""
    n = rdfa.state_count
    pre = [0] * n
    for q in range(n):
        for p in rdfa.delta[q]:
            if keep(q, p):
                pre[p] |= 1 << q
    masks = [0] * n
    cur = 0
    for q in rdfa.finals:
        cur |= 1 << q
    for x in range(horizon):
        m = cur
        while m:
            low = m & -m
            masks[low.bit_length() - 1] |= 1 << x
            m ^= low
        nxt = 0
        m = cur
        while m:
            low = m & -m
            nxt |= pre[low.bit_length() - 1]
            m ^= low
        cur = nxt
    return masks


def _last_violation(mask, horizon):
    return (mask & ((1 << horizon) - 1)).bit_length() - 1


def acc_table(rdfa: Rdfa, dec: SccDecomposition = None, g=None) -> AccTable:
    """Acc and AccInt up to the horizon, plus one threshold t after which both are g-periodic.

    t also makes Acc(p) agree with Acc(q) + shift(p, q) beyond t inside each nontransient SCC.
    """
    dec = dec or decompose(rdfa)
    periods = [dec.period[c] for c in dec.nontransient_sccs()]
    if g is None:
        g = _lcm(periods) if periods else 1
    n = rdfa.state_count
    horizon = n + g * (3 * n * n + 2 * n + 2)
    acc = _length_masks(rdfa, horizon, lambda q, p: True)
    acc_int = _length_masks(rdfa, horizon, lambda q, p: dec.same(q, p))
    worst = -1
    for masks in (acc, acc_int):
        for m in masks:
            worst = max(worst, _last_violation(m ^ (m >> g), horizon - g))
    for c in dec.nontransient_sccs():
        if dec.period[c] != g:
            # only SCCs carrying the uniform period take part in the shift condition
            continue
        part = alon_partition(rdfa, dec.members[c], g)
        for p in part.members:
            for q in part.members:
                s = part.shift(p, q)
                worst = max(worst, _last_violation(acc[p] ^ (acc[q] << s), horizon))
    t = worst + 1
    if t >= horizon - 2 * g:
        raise AnalysisError("Acc sets show no periodicity within the horizon")
    return AccTable(g, t, horizon, acc, acc_int)


# ---------------------------------------------------------------- classification

CLASS_ORDER = {"constant": 0, "loglog": 1, "log": 2, "linear": 3}


@dataclass
class SpaceClassReport:
    det_fixed: str
    det_variable: str
    randomized: str
    false_biased_tester_loglog: bool
    trivial: bool
    suffix_free: bool
    triviality_cut: tuple = None
    witnesses: dict = field(default_factory=dict)

    def verdicts(self):
        return {"det_fixed": self.det_fixed, "det_variable": self.det_variable,
                "randomized": self.randomized,
                "false_biased_tester_loglog": self.false_biased_tester_loglog,
                "trivial": self.trivial, "suffix_free": self.suffix_free}

    def to_line(self):
        parts = []
        for k, v in self.verdicts().items():
            parts.append(f"{k}={str(v).lower()}")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line):
        kv = dict(item.split("=", 1) for item in line.split())
        flag = {"true": True, "false": False}
        return cls(kv["det_fixed"], kv["det_variable"], kv["randomized"],
                   flag[kv["false_biased_tester_loglog"]], flag[kv["trivial"]],
                   flag[kv["suffix_free"]])

    def to_text(self):
        lines = [f"{k}: {str(v).lower()}" for k, v in self.verdicts().items()]
        if self.triviality_cut is not None:
            lines.append(f"triviality_cut: {self.triviality_cut[0]} {self.triviality_cut[1]}")
        for name, words in self.witnesses.items():
            shown = " ".join(repr(w) for w in words)
            lines.append(f"witness_{name}: {shown}")
        return "\n".join(lines) + "\n"


def _linear_witness(rdfa, dec, cex):
    start, u2, v2 = cex
    p = start
    comp = set(dec.scc(p))
    q = rdfa.run(u2, p)
    r = rdfa.run(v2, p)
    u1 = shortest_word(rdfa, q, p, comp)
    v1 = shortest_word(rdfa, r, p, comp)
    z = shortest_word(rdfa, rdfa.initial, p)
    u, v = u1 + u2, v1 + v2
    u1 = u * (len(v) - 1) + u1
    v1 = v * (len(u) - 1) + v1
    return u1, u2, v1, v2, z


def _log_witness(rdfa, dec, cex):
    s, v, w = cex
    for p in range(rdfa.state_count):
        if dec.reachable[p] and not dec.transient[p] and s in rdfa.reachable(p):
            break
    else:
        raise AnalysisError("no nontransient state leads to the disagreement")
    sigma = shortest_word(rdfa, p, s)
    z0 = shortest_word(rdfa, rdfa.initial, p)
    v, w = v + sigma, w + sigma
    c = shortest_word(rdfa, p, p, set(dec.scc(p)), nonempty=True)
    u = c * -(-len(v) // len(c))
    u1, u2 = u[:len(u) - len(v)], u[len(u) - len(v):]
    mid = rdfa.run(u2, p) in rdfa.finals
    other = w if mid else v
    return other + u1, u2 + u1, u2 + z0


def classify(rdfa: Rdfa, modulus="pair", with_witnesses=True) -> SpaceClassReport:
    """Space-class verdicts for the language of any rDFA."""
    dec = decompose(rdfa)
    wb, wb_cex = is_well_behaved_all(rdfa, dec)
    unbounded = unbounded_states(rdfa, dec)
    u_cex = find_disagreement(rdfa, unbounded)
    if u_cex is None:
        det_fixed = "constant"
    elif wb:
        det_fixed = "log"
    else:
        det_fixed = "linear"
    if is_empty(rdfa) or is_universal(rdfa):
        det_variable = "constant"
    else:
        det_variable = "log" if wb else "linear"
    sync, sync_w = synchronized_consistent(rdfa, dec, modulus)
    if det_fixed == "constant":
        randomized = "constant"
    elif sync:
        randomized = "loglog"
    elif wb:
        randomized = "log"
    else:
        randomized = "linear"
    # reading the tables left to right gives the reversed language, which has the
    # same distances to every window and hence the same triviality
    cut = triviality_witness(rdfa.reversed_dfa())
    restricted = Rdfa(rdfa.alphabet, rdfa.state_count, rdfa.initial, rdfa.delta,
                      [q for q in rdfa.finals if not dec.transient[q]])
    fb = is_trivial(restricted.reversed_dfa())
    report = SpaceClassReport(det_fixed, det_variable, randomized, fb, cut is not None,
                              is_suffix_free(rdfa), None if cut is None else (cut[1], cut[0]))
    if with_witnesses:
        if wb_cex is not None:
            report.witnesses["linear"] = _linear_witness(rdfa, dec, wb_cex)
        if u_cex is not None:
            report.witnesses["log"] = _log_witness(rdfa, dec, u_cex)
        if sync_w is not None:
            report.witnesses["synchronized"] = sync_w
    return report


# ---------------------------------------------------------------- prepared automata

@dataclass
class Prepared:
    """Uniform-period rDFA with its decomposition and Acc table, as used by engines."""
    rdfa: Rdfa
    g: int
    dec: SccDecomposition
    acc: AccTable

    @property
    def alphabet(self):
        return self.rdfa.alphabet


def prepare(rdfa: Rdfa, budget=DEFAULT_STATE_BUDGET) -> Prepared:
    uni, g = uniformize_period(rdfa, budget)
    dec = decompose(uni)
    return Prepared(uni, g, dec, acc_table(uni, dec, g))
