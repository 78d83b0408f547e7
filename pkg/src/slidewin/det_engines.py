"""Deterministic sliding-window engines: explicit window, path summaries, constant space."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .analysis import Prepared, find_disagreement, unbounded_states, is_well_behaved_all


class ConfigurationError(RuntimeError):
    pass


@dataclass(frozen=True)
class StreamEvent:
    kind: str  # "push" or "pop"
    symbol: str = None

    @classmethod
    def push(cls, symbol):
        return cls("push", symbol)


POP = StreamEvent("pop")


def as_event(event):
    if isinstance(event, StreamEvent):
        return event
    return StreamEvent("push", event)


def events_from_bytes(data: bytes, pop_byte=None):
    out = []
    for b in data:
        ch = chr(b)
        out.append(POP if pop_byte is not None and b == pop_byte else StreamEvent("push", ch))
    return out


def index_bits(count):
    """Bits needed to write one of `count` values."""
    return max(0, (count - 1).bit_length())


class Engine:
    """Common interface: step(event), query(), state_size_bits()."""

    def step(self, event):
        raise NotImplementedError

    def query(self) -> bool:
        raise NotImplementedError

    def state_size_bits(self) -> int:
        raise NotImplementedError

    def run(self, events):
        verdicts = []
        for e in events:
            self.step(e)
            verdicts.append(self.query())
        return verdicts


# ---------------------------------------------------------------- explicit window

class ExplicitEngine(Engine):
    """Stores the whole window. With n=None it is a variable-size window."""

    def __init__(self, rdfa, n=None):
        self.rdfa = rdfa
        self.n = n
        pad = rdfa.alphabet.padding
        self.window = deque([pad] * n, maxlen=n) if n is not None else deque()
        self._memo = None

    def step(self, event):
        e = as_event(event)
        self._memo = None
        if e.kind == "pop":
            if self.n is None and self.window:
                self.window.popleft()
            return
        if self.n == 0:
            return
        self.window.append(e.symbol)

    def query(self):
        if self._memo is None:
            rdfa = self.rdfa
            q = rdfa.initial
            idx = rdfa.alphabet._index
            delta = rdfa.delta
            for a in reversed(self.window):
                q = delta[q][idx[a]]
            self._memo = q in rdfa.finals
        return self._memo

    def word(self):
        return "".join(self.window)

    def state_size_bits(self):
        return 8 * len(self.window)


# ---------------------------------------------------------------- path summaries

def path_summary(rdfa, dec, word, start):
    """Path summary of the run on `word` from `start`, recomputed from scratch.

    Pairs are (length, entry state), leftmost first. A bridging transition is
    counted in the block to its right.
    """
    idx = rdfa.alphabet._index
    blocks = []
    entry, length = start, 0
    q = start
    for a in reversed(word):
        p = rdfa.delta[q][idx[a]]
        length += 1
        if not dec.same(p, q):
            blocks.append((length, entry))
            entry, length = p, 0
        q = p
    blocks.append((length, entry))
    return tuple(reversed(blocks))


def path_summaries(rdfa, dec, word):
    return [path_summary(rdfa, dec, word, q) for q in range(rdfa.state_count)]


class PathSummaryEngine(Engine):
    """Variable-size window engine maintaining one path summary per start state.

    acceptance="internal" decides membership exactly for well-behaved automata;
    acceptance="any" checks the leftmost block against Acc instead of AccInt,
    which is the one-sided deterministic tester.
    """

    def __init__(self, prepared: Prepared, acceptance="internal"):
        if acceptance not in ("internal", "any"):
            raise ValueError(f"unknown acceptance mode {acceptance!r}")
        self.prep = prepared
        self.rdfa = prepared.rdfa
        self.acceptance = acceptance
        n = self.rdfa.state_count
        self.summaries = [((0, q),) for q in range(n)]
        self.length = 0
        self.max_length = 0
        self.k = n
        self.buffer = deque(maxlen=n)
        self._idx = self.rdfa.alphabet._index
        self._scc = prepared.dec.scc_of
        self._exact_ok = None

    def push(self, a):
        ai = self._idx[a]
        old = self.summaries
        scc = self._scc
        new = []
        for p0, row in enumerate(self.rdfa.delta):
            p1 = row[ai]
            s = old[p1]
            if scc[p0] == scc[p1]:
                new.append(s[:-1] + ((s[-1][0] + 1, p0),))
            else:
                new.append(s + ((1, p0),))
        self.summaries = new
        self.length += 1
        self.max_length = max(self.max_length, self.length)
        self.buffer.append(a)

    def pop(self):
        if self.length == 0:
            return
        new = []
        for s in self.summaries:
            first = s[0][0]
            if first >= 1:
                new.append(((first - 1, s[0][1]),) + s[1:])
            else:
                # the leftmost symbol was the bridge into the leftmost block
                nxt = s[1]
                new.append(((nxt[0] - 1, nxt[1]),) + s[2:])
        self.summaries = new
        self.length -= 1
        if self.length < len(self.buffer):
            self.buffer.popleft()

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            self.pop()
        else:
            self.push(e.symbol)

    def _check_exact(self):
        if self._exact_ok is None:
            self._exact_ok = is_well_behaved_all(self.rdfa, self.prep.dec)[0]
        if not self._exact_ok:
            raise ConfigurationError("exact membership needs a well-behaved automaton")

    def query(self):
        if self.acceptance == "internal":
            self._check_exact()
        if self.length <= self.k:
            return self.rdfa.accepts("".join(self.buffer))
        length, q = self.summaries[self.rdfa.initial][0]
        if self.acceptance == "internal":
            return self.prep.acc.contains_int(q, length)
        return self.prep.acc.contains(q, length)

    def summary_set(self):
        return list(self.summaries)

    def state_size_bits(self, width=None):
        """Bits of the canonical serialization.

        A 6-bit width header, the window length, the buffered suffix and, for
        windows longer than |Q|, every summary as a pair count followed by
        (length, state) pairs.
        """
        if width is None:
            width = max(1, self.max_length.bit_length())
        sym = index_bits(len(self.rdfa.alphabet))
        bits = 6 + width + len(self.buffer) * sym
        if self.length > self.k:
            nq = self.rdfa.state_count
            count_bits = index_bits(nq + 1)
            pair_bits = width + index_bits(nq)
            for s in self.summaries:
                bits += count_bits + len(s) * pair_bits
        return bits


class FixedWindow(Engine):
    """Fixed-size window on top of a variable-size engine: start from the padded
    window and answer every push with a pop followed by the push."""

    def __init__(self, engine, n):
        self.inner = engine
        self.n = n
        pad = engine.rdfa.alphabet.padding
        for _ in range(n):
            engine.step(pad)

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        if self.n == 0:
            return
        self.inner.step(POP)
        self.inner.step(e.symbol)

    def query(self):
        return self.inner.query()

    def state_size_bits(self):
        inner = self.inner
        if isinstance(inner, PathSummaryEngine):
            return inner.state_size_bits(width=max(1, self.n.bit_length()))
        return inner.state_size_bits()


def path_summary_engine(prepared, n=None, acceptance="internal"):
    engine = PathSummaryEngine(prepared, acceptance)
    return engine if n is None else FixedWindow(engine, n)


def explicit_engine(rdfa, n=None):
    return ExplicitEngine(rdfa, n)


class ConstantSpaceEngine(Engine):
    """Keeps only the last |Q| symbols; valid when U(B) is well-behaved."""

    def __init__(self, prepared: Prepared, n):
        rdfa = prepared.rdfa
        if find_disagreement(rdfa, unbounded_states(rdfa, prepared.dec)) is not None:
            raise ConfigurationError("constant space needs U(B) to be well-behaved")
        self.prep = prepared
        self.rdfa = rdfa
        self.n = n
        self.k = rdfa.state_count
        self.buffer = deque([rdfa.alphabet.padding] * self.k, maxlen=self.k)
        # one bit per state for this n
        self.table = [prepared.acc.contains(q, n - self.k) for q in range(self.k)] \
            if n > self.k else None

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        self.buffer.append(e.symbol)

    def query(self):
        word = "".join(self.buffer)
        if self.n <= self.k:
            return self.rdfa.accepts(word[self.k - self.n:])
        return self.table[self.rdfa.run(word)]

    def state_size_bits(self):
        return self.k * index_bits(len(self.rdfa.alphabet))


def constant_space_engine(prepared, n):
    return ConstantSpaceEngine(prepared, n)
