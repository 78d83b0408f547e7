"""Regular-language front end: regexes, NFAs, DFAs and right-to-left DFAs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_STATE_BUDGET = 1 << 16


class StateBudgetExceeded(RuntimeError):
    pass


class RegexSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AutomatonFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    padding: str = None

    def __post_init__(self):
        syms = tuple(self.symbols)
        if not syms:
            raise ValueError("alphabet must not be empty")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        for s in syms:
            if len(s) != 1 or ord(s) > 255:
                raise ValueError(f"symbol {s!r} is not a single byte")
        object.__setattr__(self, "symbols", syms)
        if self.padding is None:
            object.__setattr__(self, "padding", syms[0])
        elif self.padding not in syms:
            raise ValueError("padding symbol must belong to the alphabet")

    @classmethod
    def of(cls, symbols: Iterable[str], padding=None):
        return cls(tuple(symbols), padding)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, s):
        return s in self._index

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, s):
        try:
            return self._index[s]
        except KeyError:
            raise ValueError(f"symbol {s!r} not in alphabet") from None

    @property
    def pad_index(self):
        return self._index[self.padding]

    def words(self, length):
        """All words of the given length, in lexicographic symbol order."""
        if length == 0:
            yield ""
            return
        for w in self.words(length - 1):
            for s in self.symbols:
                yield w + s


# ---------------------------------------------------------------- regexes

@dataclass(frozen=True)
class Regex:
    kind: str  # empty | eps | lit | union | concat | star
    children: tuple = ()
    symbol: str = None

    def __str__(self):
        if self.kind == "empty":
            return "∅"
        if self.kind == "eps":
            return "ε"
        if self.kind == "lit":
            return self.symbol
        if self.kind == "star":
            return f"({self.children[0]})*"
        sep = "|" if self.kind == "union" else ""
        return "(" + sep.join(str(c) for c in self.children) + ")"


EMPTY = Regex("empty")
EPS = Regex("eps")


def lit(a):
    return Regex("lit", symbol=a)


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    """Parse with precedence star > concatenation > union."""
    pos = 0

    def peek():
        nonlocal pos
        while pos < len(text) and text[pos].isspace() and text[pos] not in alphabet:
            pos += 1
        return text[pos] if pos < len(text) else None

    def alias_at(word):
        return text.startswith(word, pos) and word[0] not in alphabet

    def union():
        nonlocal pos
        parts = [concat()]
        while peek() == "|":
            pos += 1
            parts.append(concat())
        return parts[0] if len(parts) == 1 else Regex("union", tuple(parts))

    def concat():
        parts = []
        while True:
            c = peek()
            if c is None or c in "|)":
                break
            parts.append(starred())
        if not parts:
            return EPS
        return parts[0] if len(parts) == 1 else Regex("concat", tuple(parts))

    def starred():
        nonlocal pos
        node = atom()
        while peek() == "*":
            pos += 1
            node = Regex("star", (node,))
        return node

    def atom():
        nonlocal pos
        c = peek()
        start = pos
        if c == "(":
            pos += 1
            node = union()
            if peek() != ")":
                raise RegexSyntaxError("expected ')'", pos)
            pos += 1
            return node
        if c == "ε":
            pos += 1
            return EPS
        if c == "∅":
            pos += 1
            return EMPTY
        if alias_at("eps"):
            pos += 3
            return EPS
        if alias_at("null"):
            pos += 4
            return EMPTY
        if c == "*":
            raise RegexSyntaxError("dangling '*'", start)
        if c in alphabet:
            pos += 1
            return lit(c)
        raise RegexSyntaxError(f"symbol {c!r} not in alphabet", start)

    node = union()
    if peek() is not None:
        raise RegexSyntaxError(f"unexpected {text[pos]!r}", pos)
    return node


def regex_symbols(text: str):
    """Literal symbols appearing in a regex string, for alphabet inference."""
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if text.startswith("eps", i):
            i += 3
            continue
        if text.startswith("null", i):
            i += 4
            continue
        if c not in "|*()ε∅" and not c.isspace() and c not in out:
            out.append(c)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------- automata

@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    state_count: int
    initial: frozenset
    transitions: tuple  # transitions[q][a] -> frozenset of targets
    finals: frozenset

    @classmethod
    def from_edges(cls, alphabet, state_count, initial, edges, finals):
        table = [[set() for _ in alphabet.symbols] for _ in range(state_count)]
        for p, a, q in edges:
            table[p][alphabet.index(a)].add(q)
        trans = tuple(tuple(frozenset(s) for s in row) for row in table)
        return cls(alphabet, state_count, frozenset(initial), trans, frozenset(finals))

    def edges(self):
        for p, row in enumerate(self.transitions):
            for i, targets in enumerate(row):
                for q in targets:
                    yield p, self.alphabet.symbols[i], q

    def step(self, states, a):
        i = a if isinstance(a, int) else self.alphabet.index(a)
        out = set()
        for q in states:
            out |= self.transitions[q][i]
        return frozenset(out)

    def accepts(self, word):
        cur = self.initial
        for a in word:
            cur = self.step(cur, a)
            if not cur:
                return False
        return bool(cur & self.finals)


class _Deterministic:
    """Shared machinery for total deterministic tables delta[q][a]."""

    def __init__(self, alphabet: Alphabet, state_count, initial, delta, finals):
        self.alphabet = alphabet
        self.state_count = state_count
        self.initial = initial
        self.delta = tuple(tuple(row) for row in delta)
        self.finals = frozenset(finals)
        if len(self.delta) != state_count:
            raise ValueError("delta must have one row per state")
        for row in self.delta:
            if len(row) != len(alphabet):
                raise ValueError("delta must be total")
            for q in row:
                if not 0 <= q < state_count:
                    raise ValueError("transition target out of range")
        if not 0 <= initial < state_count:
            raise ValueError("initial state out of range")

    def __repr__(self):
        return (f"{type(self).__name__}(states={self.state_count}, initial={self.initial}, "
                f"finals={sorted(self.finals)})")

    def __eq__(self, other):
        return (type(self) is type(other) and self.alphabet == other.alphabet
                and self.initial == other.initial and self.delta == other.delta
                and self.finals == other.finals)

    def __hash__(self):
        return hash((self.initial, self.delta, self.finals))

    def _with(self, state_count=None, initial=None, delta=None, finals=None):
        return type(self)(self.alphabet,
                          self.state_count if state_count is None else state_count,
                          self.initial if initial is None else initial,
                          self.delta if delta is None else delta,
                          self.finals if finals is None else finals)

    def successors(self, q):
        return set(self.delta[q])

    def reachable(self, start=None):
        start = self.initial if start is None else start
        seen = {start}
        todo = [start]
        while todo:
            q = todo.pop()
            for r in self.delta[q]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    def is_final(self, q):
        return q in self.finals


class Dfa(_Deterministic):
    """Left-to-right DFA: delta[q][a] is the state after reading a in q."""

    def step(self, q, a):
        return self.delta[q][self.alphabet.index(a)]

    def run(self, word, start=None):
        q = self.initial if start is None else start
        idx = self.alphabet.index
        for a in word:
            q = self.delta[q][idx(a)]
        return q

    def accepts(self, word):
        return self.run(word) in self.finals

    def to_nfa(self):
        trans = tuple(tuple(frozenset([q]) for q in row) for row in self.delta)
        return Nfa(self.alphabet, self.state_count, frozenset([self.initial]), trans, self.finals)

    def reversed_rdfa(self):
        """The same tables read right to left: an rDFA for the reversed language."""
        return Rdfa(self.alphabet, self.state_count, self.initial, self.delta, self.finals)


class Rdfa(_Deterministic):
    """Right-to-left DFA.

    delta[q][a] is delta(a, q); a word is read from its last symbol to its
    first, and w is accepted iff w·q0 is final.
    """

    def step(self, a, q):
        return self.delta[q][self.alphabet.index(a)]

    def run(self, word, start=None):
        q = self.initial if start is None else start
        idx = self.alphabet.index
        for a in reversed(word):
            q = self.delta[q][idx(a)]
        return q

    def accepts(self, word):
        return self.run(word) in self.finals

    def reversed_dfa(self):
        """The same tables read left to right: a DFA for the reversed language."""
        return Dfa(self.alphabet, self.state_count, self.initial, self.delta, self.finals)

    def to_dfa(self, budget=DEFAULT_STATE_BUDGET):
        """Minimal left-to-right DFA for the same language."""
        return minimize(determinize(reverse(self.reversed_dfa().to_nfa()), budget))


# ---------------------------------------------------------------- constructions

def regex_to_nfa(ast: Regex, alphabet: Alphabet) -> Nfa:
    """Thompson construction followed by epsilon elimination."""
    eps = []
    moves = []

    def new():
        eps.append(set())
        moves.append({})
        return len(eps) - 1

    def build(node):
        s, f = new(), new()
        k = node.kind
        if k == "eps":
            eps[s].add(f)
        elif k == "lit":
            moves[s].setdefault(alphabet.index(node.symbol), set()).add(f)
        elif k == "union":
            for c in node.children:
                cs, cf = build(c)
                eps[s].add(cs)
                eps[cf].add(f)
        elif k == "concat":
            prev = s
            for c in node.children:
                cs, cf = build(c)
                eps[prev].add(cs)
                prev = cf
            eps[prev].add(f)
        elif k == "star":
            cs, cf = build(node.children[0])
            eps[s].update((cs, f))
            eps[cf].update((cs, f))
        return s, f

    start, final = build(ast)
    n = len(eps)

    closures = []
    for q in range(n):
        seen = {q}
        todo = [q]
        while todo:
            for r in eps[todo.pop()]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        closures.append(frozenset(seen))

    # keep Thompson states; every transition lands on a closed set
    table = []
    for q in range(n):
        row = []
        for a in range(len(alphabet)):
            tgt = set()
            for r in moves[q].get(a, ()):
                tgt |= closures[r]
            row.append(frozenset(tgt))
        table.append(tuple(row))
    return Nfa(alphabet, n, closures[start], tuple(table), frozenset([final]))


def determinize(nfa: Nfa, budget=DEFAULT_STATE_BUDGET) -> Dfa:
    """Subset construction; the empty subset becomes an explicit dead state."""
    k = len(nfa.alphabet)
    start = nfa.initial
    index = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for a in range(k):
            tgt = set()
            for q in cur:
                tgt |= nfa.transitions[q][a]
            tgt = frozenset(tgt)
            if tgt not in index:
                if len(order) >= budget:
                    raise StateBudgetExceeded(f"determinization exceeded {budget} states")
                index[tgt] = len(order)
                order.append(tgt)
            row.append(index[tgt])
        delta.append(row)
        i += 1
    finals = [j for j, s in enumerate(order) if s & nfa.finals]
    return Dfa(nfa.alphabet, len(order), 0, delta, finals)


def _trim(det):
    """Restrict to states reachable from the initial state, renumbered in BFS order."""
    order = [det.initial]
    index = {det.initial: 0}
    i = 0
    while i < len(order):
        for r in det.delta[order[i]]:
            if r not in index:
                index[r] = len(order)
                order.append(r)
        i += 1
    delta = [[index[r] for r in det.delta[q]] for q in order]
    finals = [index[q] for q in order if q in det.finals]
    return det._with(state_count=len(order), initial=0, delta=delta, finals=finals)


def minimize(det):
    """Moore partition refinement on the reachable part. Works for Dfa and Rdfa."""
    det = _trim(det)
    n = det.state_count
    labels = {}
    block = [labels.setdefault(q in det.finals, len(labels)) for q in range(n)]
    count = len(labels)
    while True:
        sigs = {}
        new = []
        for q in range(n):
            sig = (block[q],) + tuple(block[r] for r in det.delta[q])
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    # renumber blocks in BFS order from the initial state
    rep = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    delta = [None] * count
    finals = set()
    for b, q in rep.items():
        delta[b] = [block[r] for r in det.delta[q]]
        if q in det.finals:
            finals.add(b)
    return _trim(det._with(state_count=count, initial=block[det.initial], delta=delta, finals=finals))


def reverse(nfa: Nfa) -> Nfa:
    table = [[set() for _ in nfa.alphabet.symbols] for _ in range(nfa.state_count)]
    for p, row in enumerate(nfa.transitions):
        for a, targets in enumerate(row):
            for q in targets:
                table[q][a].add(p)
    trans = tuple(tuple(frozenset(s) for s in row) for row in table)
    return Nfa(nfa.alphabet, nfa.state_count, nfa.finals, trans, nfa.initial)


def to_rdfa(nfa: Nfa, budget=DEFAULT_STATE_BUDGET, minimal=True) -> Rdfa:
    """Canonical rDFA: determinize the reversal, then read its runs right to left."""
    dfa = determinize(reverse(nfa), budget)
    dfa = minimize(dfa) if minimal else _trim(dfa)
    return dfa.reversed_rdfa()


def complement(det):
    return det._with(finals=set(range(det.state_count)) - det.finals)


def product(x, y, mode="and"):
    """Synchronous product of two total automata of the same kind and alphabet."""
    if type(x) is not type(y) or x.alphabet != y.alphabet:
        raise ValueError("product needs automata of the same kind over the same alphabet")
    k = len(x.alphabet)
    index = {(x.initial, y.initial): 0}
    order = [(x.initial, y.initial)]
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for a in range(k):
            t = (x.delta[p][a], y.delta[q][a])
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta.append(row)
        i += 1
    if mode == "and":
        finals = [j for j, (p, q) in enumerate(order) if p in x.finals and q in y.finals]
    elif mode == "or":
        finals = [j for j, (p, q) in enumerate(order) if p in x.finals or q in y.finals]
    elif mode == "xor":
        finals = [j for j, (p, q) in enumerate(order) if (p in x.finals) != (q in y.finals)]
    else:
        raise ValueError(f"unknown product mode {mode!r}")
    return x._with(state_count=len(order), initial=0, delta=delta, finals=finals)


def is_empty(det) -> bool:
    return not (det.reachable() & det.finals)


def is_universal(det) -> bool:
    return det.reachable() <= det.finals


def equivalent(x, y) -> bool:
    return is_empty(product(x, y, "xor"))


def dfa_state_distance(dfa: Dfa, p, q):
    """Sup of |u|+1 over words u on which p and q disagree; 0 if they never do."""
    start = (p, q)
    succ = {}
    todo = [start]
    succ[start] = None
    while todo:
        x, y = pair = todo.pop()
        nxt = {(dfa.delta[x][a], dfa.delta[y][a]) for a in range(len(dfa.alphabet))}
        succ[pair] = nxt
        for t in nxt:
            if t not in succ:
                succ[t] = None
                todo.append(t)
    bad = {(x, y) for (x, y) in succ if (x in dfa.finals) != (y in dfa.finals)}
    pred = {v: [] for v in succ}
    for v, nxt in succ.items():
        for t in nxt:
            pred[t].append(v)
    useful = set(bad)
    todo = list(bad)
    while todo:
        for u in pred[todo.pop()]:
            if u not in useful:
                useful.add(u)
                todo.append(u)
    if start not in useful:
        return 0
    # longest path to a bad pair inside the useful subgraph; a cycle means infinity
    longest = {}
    state = {}
    stack = [(start, iter(t for t in succ[start] if t in useful))]
    state[start] = 1
    while stack:
        v, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            state[v] = 2
            best = 0 if v in bad else -1
            for t in succ[v]:
                if t in useful:
                    best = max(best, longest[t] + 1)
            longest[v] = best
            continue
        st = state.get(nxt)
        if st == 1:
            return math.inf
        if st is None:
            state[nxt] = 1
            stack.append((nxt, iter(t for t in succ[nxt] if t in useful)))
    return longest[start] + 1


def suffix_testable_degree(dfa: Dfa):
    """Smallest k such that membership depends only on the last k symbols, or None."""
    best = 0
    for p in range(dfa.state_count):
        for q in range(p + 1, dfa.state_count):
            d = dfa_state_distance(dfa, p, q)
            if d == math.inf:
                return None
            best = max(best, d)
    return best


# ---------------------------------------------------------------- text format

def parse_automaton(text: str):
    """Parse the line-oriented automaton format into an Nfa, Dfa or Rdfa."""
    fields = {}
    trans = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise AutomatonFormatError(f"line {lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "trans":
            parts = value.split()
            if len(parts) != 3:
                raise AutomatonFormatError(f"line {lineno}: trans needs 'state symbol state'")
            try:
                trans.append((int(parts[0]), parts[1], int(parts[2])))
            except ValueError:
                raise AutomatonFormatError(f"line {lineno}: bad state index") from None
        elif key in ("kind", "alphabet", "padding", "states", "initial", "finals"):
            fields[key] = value
        else:
            raise AutomatonFormatError(f"line {lineno}: unknown key {key!r}")
    kind = fields.get("kind", "dfa")
    if kind not in ("dfa", "rdfa", "nfa"):
        raise AutomatonFormatError(f"unknown kind {kind!r}")
    try:
        alphabet = Alphabet.of(fields["alphabet"].replace(" ", ""), fields.get("padding") or None)
        n = int(fields["states"])
        initial = [int(x) for x in fields.get("initial", "0").split()]
        finals = [int(x) for x in fields.get("finals", "").split()]
    except KeyError as e:
        raise AutomatonFormatError(f"missing field {e.args[0]!r}") from None
    except ValueError as e:
        raise AutomatonFormatError(str(e)) from None
    for p, a, q in trans:
        if a not in alphabet or not (0 <= p < n and 0 <= q < n):
            raise AutomatonFormatError(f"bad transition {p} {a} {q}")
    if kind == "nfa":
        return Nfa.from_edges(alphabet, n, initial, trans, finals)
    if len(initial) != 1:
        raise AutomatonFormatError("deterministic automata need exactly one initial state")
    delta = [[None] * len(alphabet) for _ in range(n)]
    for p, a, q in trans:
        i = alphabet.index(a)
        if delta[p][i] is not None and delta[p][i] != q:
            raise AutomatonFormatError(f"nondeterministic transition from {p} on {a}")
        delta[p][i] = q
    if any(t is None for row in delta for t in row):
        raise AutomatonFormatError("transition function is not total")
    cls = Rdfa if kind == "rdfa" else Dfa
    try:
        return cls(alphabet, n, initial[0], delta, finals)
    except ValueError as e:
        raise AutomatonFormatError(str(e)) from None


def dump_automaton(aut) -> str:
    kind = {Nfa: "nfa", Dfa: "dfa", Rdfa: "rdfa"}[type(aut)]
    a = aut.alphabet
    lines = [f"kind: {kind}", f"alphabet: {''.join(a.symbols)}", f"padding: {a.padding}",
             f"states: {aut.state_count}"]
    if kind == "nfa":
        lines.append("initial: " + " ".join(map(str, sorted(aut.initial))))
        lines.append("finals: " + " ".join(map(str, sorted(aut.finals))))
        lines += [f"trans: {p} {s} {q}" for p, s, q in aut.edges()]
    else:
        lines.append(f"initial: {aut.initial}")
        lines.append("finals: " + " ".join(map(str, sorted(aut.finals))))
        for p, row in enumerate(aut.delta):
            for i, q in enumerate(row):
                lines.append(f"trans: {p} {a.symbols[i]} {q}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- languages

class Language:
    """A regular language with lazily built canonical DFA and rDFA."""

    def __init__(self, nfa: Nfa, name=None, budget=DEFAULT_STATE_BUDGET):
        self.nfa = nfa
        self.alphabet = nfa.alphabet
        self.name = name
        self.budget = budget

    @classmethod
    def from_regex(cls, text, alphabet=None, padding=None, budget=DEFAULT_STATE_BUDGET):
        if alphabet is None:
            syms = regex_symbols(text)
            if not syms:
                raise ValueError("cannot infer an alphabet from a regex without literals")
            alphabet = Alphabet.of(syms, padding)
        elif not isinstance(alphabet, Alphabet):
            alphabet = Alphabet.of(alphabet, padding)
        return cls(regex_to_nfa(parse_regex(text, alphabet), alphabet), text, budget)

    @classmethod
    def from_automaton(cls, aut, name=None, budget=DEFAULT_STATE_BUDGET):
        if isinstance(aut, Nfa):
            return cls(aut, name, budget)
        if isinstance(aut, Dfa):
            return cls(aut.to_nfa(), name, budget)
        return cls(reverse(aut.reversed_dfa().to_nfa()), name, budget)

    @cached_property
    def dfa(self) -> Dfa:
        return minimize(determinize(self.nfa, self.budget))

    @cached_property
    def rdfa(self) -> Rdfa:
        return to_rdfa(self.nfa, self.budget)

    def contains(self, word) -> bool:
        return self.dfa.accepts(word)

    __contains__ = contains

    def complement(self):
        return Language(complement(self.dfa).to_nfa(), f"~({self.name})", self.budget)

    def union(self, other):
        return Language(product(self.dfa, other.dfa, "or").to_nfa(),
                        f"({self.name})|({other.name})", self.budget)

    def intersection(self, other):
        return Language(product(self.dfa, other.dfa, "and").to_nfa(),
                        f"({self.name})&({other.name})", self.budget)

    def __repr__(self):
        return f"Language({self.name!r}, alphabet={''.join(self.alphabet.symbols)!r})"


def random_regex(rng, symbols: Sequence[str], depth: int) -> str:
    """Random regex string over the given symbols, nesting at most `depth` operators."""
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.05:
            return "ε"
        return rng.choice(list(symbols))
    op = rng.choice(["union", "concat", "concat", "star"])
    if op == "star":
        return "(" + random_regex(rng, symbols, depth - 1) + ")*"
    left = random_regex(rng, symbols, depth - 1)
    right = random_regex(rng, symbols, depth - 1)
    if op == "union":
        return f"({left}|{right})"
    return f"({left})({right})"
