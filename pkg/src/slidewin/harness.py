"""Engine selection, seeded Monte-Carlo trials and space benchmarks."""
from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .analysis import classify, prepare
from .det_engines import ConfigurationError, ExplicitEngine, constant_space_engine, \
    path_summary_engine
from .rand_engines import modulo_engine, suffix_free_engine, threshold_engine
from .testers import FalseBiasedPlan, det_tester, false_biased_tester, trivial_tester, \
    two_sided_tester

BENCH_HEADER = "# slidewin-bench v1"
TRIALS_HEADER = "# slidewin-trials v1"

ENGINES = ("explicit", "path-summary", "constant", "suffix-free", "threshold", "modulo",
           "det-tester", "two-sided", "false-biased", "trivial", "auto")
FIXED_ONLY = {"constant", "suffix-free", "threshold", "modulo", "det-tester", "two-sided",
              "false-biased", "trivial"}


class UsageError(ValueError):
    pass


def choose_engine(report, n):
    """Cheapest engine whose precondition the classification guarantees."""
    if n is None:
        return "path-summary" if report.det_variable != "linear" else "explicit"
    if report.det_fixed == "constant":
        return "constant"
    if report.suffix_free and n > 0:
        return "suffix-free"
    if report.det_fixed == "log":
        return "path-summary"
    return "explicit"


class EngineFactory:
    """Builds fresh engines of one kind for one language; call with a seed."""

    def __init__(self, language, name, n=None, epsilon=None):
        if name not in ENGINES:
            raise UsageError(f"unknown engine {name!r}")
        if name in FIXED_ONLY and n is None:
            raise UsageError(f"engine {name} needs --n")
        if name == "two-sided" and epsilon is None:
            raise UsageError("engine two-sided needs --epsilon")
        if n is not None and n < 0:
            raise UsageError("--n must be non-negative")
        self.language = language
        self.rdfa = language.rdfa
        self.n = n
        self.epsilon = epsilon
        self.report = None
        if name == "auto":
            self.report = classify(self.rdfa, with_witnesses=False)
            name = choose_engine(self.report, n)
        self.name = name
        self.prep = prepare(self.rdfa) if name in (
            "path-summary", "constant", "det-tester", "two-sided", "false-biased") else None
        self.plan = FalseBiasedPlan(self.prep) if name == "false-biased" else None
        # build once so precondition failures surface before any stream is read
        self(0)

    def __call__(self, seed=None):
        name, n, prep = self.name, self.n, self.prep
        if name == "explicit":
            return ExplicitEngine(self.rdfa, n)
        if name == "path-summary":
            return path_summary_engine(prep, n)
        if name == "constant":
            return constant_space_engine(prep, n)
        if name == "suffix-free":
            return suffix_free_engine(self.rdfa, n, seed)
        if name == "threshold":
            if n < 1:
                raise ConfigurationError("threshold engine needs n >= 1")
            return threshold_engine(self.rdfa, n, seed)
        if name == "modulo":
            return modulo_engine(self.rdfa, n, seed)
        if name == "det-tester":
            return det_tester(prep, n)
        if name == "two-sided":
            return two_sided_tester(prep, n, self.epsilon, seed)
        if name == "false-biased":
            return false_biased_tester(prep, n, seed, self.plan)
        if name == "trivial":
            return trivial_tester(self.rdfa, n)
        raise UsageError(f"unknown engine {name!r}")


# ---------------------------------------------------------------- trials

@dataclass
class TrialReport:
    trials: int
    accepts: int
    ground_truth: bool
    empirical_error: float
    seeds: range

    @property
    def accept_rate(self):
        return self.accepts / self.trials if self.trials else 0.0

    def to_text(self):
        return (f"trials={self.trials} accepts={self.accepts} truth={int(self.ground_truth)} "
                f"error={self.empirical_error:.4f} seeds={self.seeds.start}..{self.seeds.stop}")


def run_trials(factory, events, truth, trials, seed0=0, workers=1):
    """Final verdict of `trials` independently seeded engines on the same events."""
    seeds = range(seed0, seed0 + trials)

    def one(seed):
        engine = factory(seed)
        for e in events:
            engine.step(e)
        return engine.query()

    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(workers) as pool:
            verdicts = list(pool.map(one, seeds))
    else:
        verdicts = [one(s) for s in seeds]
    accepts = sum(verdicts)
    wrong = sum(v != truth for v in verdicts)
    report = TrialReport(trials, accepts, truth, wrong / trials if trials else 0.0, seeds)
    return report, verdicts


def trials_csv(report, verdicts):
    out = io.StringIO()
    out.write(TRIALS_HEADER + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["seed", "verdict", "truth"])
    for seed, v in zip(report.seeds, verdicts):
        w.writerow([seed, int(v), int(report.ground_truth)])
    return out.getvalue()


# ---------------------------------------------------------------- bench

@dataclass
class BenchRow:
    n: int
    bits: int
    engine: str
    language: str


def bench(make_factory, ns, steps=None, seed=0, language="", engine=""):
    """Peak state size over a seeded random stream of `steps` symbols (default 2n) per n."""
    rows = []
    for n in ns:
        factory = make_factory(n)
        eng = factory(seed)
        symbols = factory.rdfa.alphabet.symbols
        rng = random.Random(f"{seed}:{n}")
        peak = eng.state_size_bits()
        for _ in range(steps if steps is not None else 2 * n):
            eng.step(rng.choice(symbols))
            peak = max(peak, eng.state_size_bits())
        rows.append(BenchRow(n, peak, engine or factory.name, language))
    return rows


def bench_csv(rows):
    out = io.StringIO()
    out.write(BENCH_HEADER + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["engine", "language", "n", "bits"])
    for r in rows:
        w.writerow([r.engine, r.language, r.n, r.bits])
    return out.getvalue()
