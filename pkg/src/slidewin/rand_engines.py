"""Randomized engines: probabilistic counters, threshold and modulo counting, amplification."""
from __future__ import annotations

import math

import numpy as np

from .automata import Rdfa, minimize
from .analysis import AnalysisError, is_suffix_free
from .det_engines import ConfigurationError, Engine, as_event, index_bits


class RandomSource:
    """Seeded generator; the same seed always gives the same draws."""

    def __init__(self, seed=None):
        if isinstance(seed, np.random.SeedSequence):
            self.seq = seed
        else:
            self.seq = np.random.SeedSequence(seed)
        self.gen = np.random.default_rng(self.seq)

    def bit(self, p):
        return bool(self.gen.random() < p)

    def index(self, size):
        return int(self.gen.integers(size))

    def choice(self, items):
        return items[self.index(len(items))]

    def binomial(self, n, p):
        return self.gen.binomial(n, p)

    def spawn(self, count):
        return [RandomSource(s) for s in self.seq.spawn(count)]


def as_source(rng):
    return rng if isinstance(rng, RandomSource) else RandomSource(rng)


def majority_copies(base_error, target_error):
    """Odd number of copies whose majority vote has error at most target_error."""
    if base_error <= target_error:
        return 1
    k = math.ceil(2 * math.log(1 / target_error) * (0.5 - base_error) ** -2)
    return k if k % 2 else k + 1


# ---------------------------------------------------------------- counters

class BernoulliCounter:
    """Starts low; every increment turns it high with probability p, and it stays high."""

    def __init__(self, p):
        self.p = p
        self.high = False

    def increment(self, rng):
        if not self.high and rng.bit(self.p):
            self.high = True


class HlCounter:
    """Majority vote over k Bernoulli counters, separating <= ell from >= h increments.

    Only the number of high sub-counters is stored. An increment turns each
    low sub-counter high independently with probability p, so the number of
    new highs is binomial.
    """

    def __init__(self, h, ell, error):
        if not 0 < ell < h:
            raise ValueError("need 0 < ell < h")
        if not 0 < error < 0.5:
            raise ValueError("error must lie in (0, 1/2)")
        self.h = h
        self.ell = ell
        self.error = error
        self.xi = 1 - ell / h
        self.p = 1 - (0.5 - self.xi / 8) ** (1 / h)
        self.k = majority_copies(0.5 - self.xi / 8, error)
        self.high_count = 0

    def fork(self):
        c = object.__new__(HlCounter)
        c.__dict__.update(self.__dict__)
        return c

    def increment(self, rng, times=1):
        self.high_count = int(self.advance(self.high_count, rng, times))

    def advance(self, highs, rng, times=1):
        """New high counts after `times` increments; works elementwise on arrays."""
        if times == 0:
            return highs
        flip = self.p if times == 1 else 1 - (1 - self.p) ** times
        return highs + rng.binomial(self.k - highs, flip)

    def is_high(self, highs):
        return 2 * highs > self.k

    @property
    def high(self):
        return self.is_high(self.high_count)

    def state_bits(self):
        return index_bits(self.k + 1)


class ExactCounter:
    """Deterministic stand-in: counts up to h exactly and is high from h on."""

    def __init__(self, h):
        self.h = h
        self.k = h

    def advance(self, values, rng=None, times=1):
        return np.minimum(values + times, self.h)

    def is_high(self, values):
        return values >= self.h

    def state_bits(self):
        return index_bits(self.h + 1)


# ---------------------------------------------------------------- primes

def first_primes(count):
    if count <= 0:
        return []
    limit = 16
    while True:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for i in range(2, int(limit ** 0.5) + 1):
            if sieve[i]:
                sieve[i * i::i] = False
        primes = np.flatnonzero(sieve)
        if len(primes) >= count:
            return [int(p) for p in primes[:count]]
        limit *= 2


def candidate_primes(n):
    """First 3k primes where k is least with the product of the first k primes >= n."""
    k = 1
    while math.prod(first_primes(k)) < n:
        k += 1
    return first_primes(3 * k)


# ---------------------------------------------------------------- suffix-free automata

class SuffixFreeForm:
    """Minimal rDFA of a suffix-free language: one final state whose moves all hit a sink."""

    def __init__(self, rdfa: Rdfa):
        if not is_suffix_free(rdfa):
            raise ConfigurationError("language is not suffix-free")
        rdfa = minimize(rdfa)
        self.rdfa = rdfa
        self.empty = not rdfa.finals
        self.final = None
        self.sink = None
        if self.empty:
            return
        if len(rdfa.finals) != 1:
            raise AnalysisError("minimal suffix-free rDFA must have one final state")
        (qf,) = rdfa.finals
        targets = set(rdfa.delta[qf])
        if len(targets) != 1:
            raise AnalysisError("final state must lead to a single sink")
        (sink,) = targets
        if sink in rdfa.finals or set(rdfa.delta[sink]) != {sink}:
            raise AnalysisError("final state must lead to a nonfinal sink")
        self.final = qf
        self.sink = sink

    def padding_distance(self):
        """Per state: least l with (pad^l)·q = q_F, or None."""
        rdfa = self.rdfa
        pad = rdfa.alphabet.pad_index
        out = []
        for q in range(rdfa.state_count):
            cur, dist = q, None
            for steps in range(rdfa.state_count + 1):
                if cur == self.final:
                    dist = steps
                    break
                cur = rdfa.delta[cur][pad]
            out.append(dist)
        return out

    def distance(self, word, q=None):
        """Least l with last_l(word padded) leading q into q_F, or None."""
        rdfa = self.rdfa
        q = rdfa.initial if q is None else q
        if self.empty:
            return None
        pad = rdfa.alphabet.padding
        cur = q
        for steps, a in enumerate(reversed(word)):
            if cur == self.final:
                return steps
            cur = rdfa.step(a, cur)
        base = len(word)
        for extra in range(rdfa.state_count + 1):
            if cur == self.final:
                return base + extra
            cur = rdfa.step(pad, cur)
        return None


class ThresholdEngine(Engine):
    """Accepts with probability >= 2/3 if the accepting suffix has length <= n and
    rejects with probability >= 2/3 if it is >= 2n or absent."""

    def __init__(self, form: SuffixFreeForm, n, rng, error=1 / 3):
        if n < 1:
            raise ValueError("n must be positive")
        self.form = form
        self.rdfa = form.rdfa
        self.n = n
        self.rng = as_source(rng)
        self.law = HlCounter(2 * n, n, error)
        size = self.rdfa.state_count
        self.delta = np.array(self.rdfa.delta, dtype=np.int64).T if size else None
        self.highs = np.zeros(size, dtype=np.int64)
        self.inf = np.ones(size, dtype=bool)
        if not form.empty:
            for q, dist in enumerate(form.padding_distance()):
                if dist is not None:
                    self.inf[q] = False
                    self.highs[q] = self.law.advance(0, self.rng, dist)

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        if self.form.empty:
            return
        tgt = self.delta[self.rdfa.alphabet.index(e.symbol)]
        highs = self.highs[tgt]
        inf = self.inf[tgt]
        highs = np.where(inf, highs, self.law.advance(highs, self.rng))
        qf = self.form.final
        highs[qf] = 0
        inf[qf] = False
        self.highs, self.inf = highs, inf

    def query(self):
        q0 = self.rdfa.initial
        return not self.inf[q0] and not self.law.is_high(self.highs[q0])

    def state_size_bits(self):
        # k + 1 counter values plus the saturated value for an absent suffix
        return self.rdfa.state_count * index_bits(self.law.k + 2)


class ModuloEngine(Engine):
    """Tracks the accepting-suffix length modulo a random prime; never rejects when it equals n."""

    def __init__(self, form: SuffixFreeForm, n, rng=None, prime=None):
        self.form = form
        self.rdfa = form.rdfa
        self.n = n
        self.candidates = candidate_primes(n)
        if prime is None:
            prime = as_source(rng).choice(self.candidates)
        self.p = prime
        dist = form.padding_distance() if not form.empty else [None] * self.rdfa.state_count
        self.res = [None if d is None else d % prime for d in dist]

    def step(self, event):
        e = as_event(event)
        if e.kind == "pop":
            raise ConfigurationError("fixed-size windows do not support pop")
        if self.form.empty:
            return
        ai = self.rdfa.alphabet.index(e.symbol)
        old = self.res
        p = self.p
        new = []
        for q, row in enumerate(self.rdfa.delta):
            r = old[row[ai]]
            new.append(None if r is None else (r + 1) % p)
        new[self.form.final] = 0
        self.res = new

    def query(self):
        r = self.res[self.rdfa.initial]
        return r is not None and r == self.n % self.p

    def state_size_bits(self):
        top = max(self.candidates)
        return top.bit_length() + self.rdfa.state_count * (1 + index_bits(top))


class ConstantVerdict(Engine):
    def __init__(self, verdict, rdfa=None):
        self.verdict = verdict
        self.rdfa = rdfa

    def step(self, event):
        pass

    def query(self):
        return self.verdict

    def state_size_bits(self):
        return 0


class AllOf(Engine):
    def __init__(self, engines):
        self.engines = list(engines)

    def step(self, event):
        for e in self.engines:
            e.step(event)

    def query(self):
        return all(e.query() for e in self.engines)

    def state_size_bits(self):
        return sum(e.state_size_bits() for e in self.engines)


class AnyOf(AllOf):
    def query(self):
        return any(e.query() for e in self.engines)


class Negated(Engine):
    def __init__(self, engine):
        self.inner = engine

    def step(self, event):
        self.inner.step(event)

    def query(self):
        return not self.inner.query()

    def state_size_bits(self):
        return self.inner.state_size_bits()


class Majority(AllOf):
    def query(self):
        votes = sum(e.query() for e in self.engines)
        return 2 * votes > len(self.engines)


def suffix_free_engine(rdfa: Rdfa, n, rng):
    """Conjunction of threshold and modulo counting for a suffix-free language."""
    form = rdfa if isinstance(rdfa, SuffixFreeForm) else SuffixFreeForm(rdfa)
    if form.empty:
        return ConstantVerdict(False, form.rdfa)
    if n == 0:
        return ConstantVerdict(form.rdfa.initial in form.rdfa.finals, form.rdfa)
    rng = as_source(rng)
    left, right = rng.spawn(2)
    return AllOf([ThresholdEngine(form, n, left), ModuloEngine(form, n, right)])


def threshold_engine(rdfa, n, rng):
    form = rdfa if isinstance(rdfa, SuffixFreeForm) else SuffixFreeForm(rdfa)
    return ThresholdEngine(form, n, rng)


def modulo_engine(rdfa, n, rng=None, prime=None):
    form = rdfa if isinstance(rdfa, SuffixFreeForm) else SuffixFreeForm(rdfa)
    return ModuloEngine(form, n, rng, prime)


def amplify(factory, copies, rng):
    """Majority vote over independent instances built by factory(rng)."""
    rng = as_source(rng)
    if copies == 1:
        return factory(rng)
    return Majority([factory(child) for child in rng.spawn(copies)])


def combine(factories, mode, rng, base_error=1 / 3):
    """Boolean combination of randomized engines with error at most 1/3.

    For "and"/"or" each of the m parts is first amplified to error 1/(3m), so
    the union bound gives 1/3 (1/6 each for two parts).
    """
    rng = as_source(rng)
    if mode == "not":
        (factory,) = factories
        return Negated(factory(rng))
    if mode not in ("and", "or"):
        raise ValueError(f"unknown mode {mode!r}")
    copies = majority_copies(base_error, 1 / (3 * len(factories)))
    parts = [amplify(f, copies, child) for f, child in zip(factories, rng.spawn(len(factories)))]
    return AllOf(parts) if mode == "and" else AnyOf(parts)
