"""Command line: classify, run, trials, bench."""
from __future__ import annotations

import argparse
import os
import sys

from .automata import AutomatonFormatError, Language, RegexSyntaxError, StateBudgetExceeded, \
    parse_automaton
from .analysis import AnalysisError, classify
from .det_engines import ConfigurationError, events_from_bytes
from .harness import ENGINES, EngineFactory, UsageError, bench, bench_csv, run_trials, \
    trials_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONFIG = 0, 1, 2, 3


def _language(args):
    if args.regex is not None:
        lang = Language.from_regex(args.regex, alphabet=args.alphabet, padding=args.padding)
        lang.rdfa  # force construction so parse and budget errors surface here
        return lang
    with open(args.automaton, encoding="utf-8") as fh:
        aut = parse_automaton(fh.read())
    lang = Language.from_automaton(aut, name=os.path.basename(args.automaton))
    lang.rdfa
    return lang


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SLIDEWIN_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError("SLIDEWIN_SEED must be an integer") from None


def _read_stream(args, alphabet):
    if args.stream in (None, "-"):
        data = sys.stdin.buffer.read()
    else:
        with open(args.stream, "rb") as fh:
            data = fh.read()
    allowed = set(alphabet.symbols)
    # line breaks are separators unless they are symbols
    data = bytes(b for b in data if chr(b) in allowed or b == args.pop_byte
                 or chr(b) not in "\r\n")
    events = events_from_bytes(data, args.pop_byte)
    for e in events:
        if e.kind == "push" and e.symbol not in allowed:
            raise UsageError(f"stream symbol {e.symbol!r} is not in the alphabet")
    return events


def cmd_classify(args, out):
    lang = _language(args)
    report = classify(lang.rdfa)
    out.write(report.to_line() + "\n" if args.machine else report.to_text() + "\n")
    return EXIT_OK


def cmd_run(args, out):
    lang = _language(args)
    factory = EngineFactory(lang, args.engine, args.n, args.epsilon)
    events = _read_stream(args, lang.alphabet)
    engine = factory(_seed(args))
    for e in events:
        engine.step(e)
        out.write("1\n" if engine.query() else "0\n")
    return EXIT_OK


def cmd_trials(args, out):
    lang = _language(args)
    factory = EngineFactory(lang, args.engine, args.n, args.epsilon)
    if args.window is not None:
        word = args.window
        bad = [a for a in word if a not in lang.alphabet.symbols]
        if bad:
            raise UsageError(f"window symbol {bad[0]!r} is not in the alphabet")
        events = list(word)
        if args.n is None:
            window = word
        else:
            padded = lang.alphabet.padding * args.n + word
            window = padded[len(padded) - args.n:]
    else:
        events = _read_stream(args, lang.alphabet)
        probe = EngineFactory(lang, "explicit", args.n)()
        for e in events:
            probe.step(e)
        window = probe.word()
    truth = lang.contains(window)
    report, verdicts = run_trials(factory, events, truth, args.trials, _seed(args), args.workers)
    if args.csv:
        out.write(trials_csv(report, verdicts))
    else:
        out.write(report.to_text() + "\n")
    if args.max_error is not None and report.empirical_error > args.max_error:
        return EXIT_FAIL
    return EXIT_OK


def cmd_bench(args, out):
    lang = _language(args)
    lo, hi = args.log_min, args.log_max
    if lo > hi or lo < 0:
        raise UsageError("need 0 <= --log-min <= --log-max")
    ns = [2 ** k for k in range(lo, hi + 1)]
    factories = {}

    def make(n):
        factories[n] = EngineFactory(lang, args.engine, n, args.epsilon)
        return factories[n]

    rows = bench(make, ns, args.steps, _seed(args), language=lang.name or "")
    out.write(bench_csv(rows))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="slidewin",
                                     description="Sliding-window membership for regular languages.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engine=True):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--regex", help="regular expression (| * + ? ( ) eps null)")
        src.add_argument("--automaton", help="automaton file (nfa, dfa or rdfa)")
        p.add_argument("--alphabet", help="alphabet symbols, e.g. ab (default: regex literals)")
        p.add_argument("--padding", help="padding symbol (default: first alphabet symbol)")
        if engine:
            p.add_argument("--engine", choices=ENGINES, default="auto")
            p.add_argument("--n", type=int, help="window size; omit for a variable-size window")
            p.add_argument("--epsilon", type=float, help="Hamming gap fraction for two-sided")
            p.add_argument("--seed", type=int, help="seed (default: $SLIDEWIN_SEED or 0)")

    p = sub.add_parser("classify", help="space classes of a language")
    common(p, engine=False)
    p.add_argument("--machine", action="store_true", help="one key=value line")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("run", help="one verdict per stream event")
    common(p)
    p.add_argument("--stream", default="-", help="input file or - for stdin")
    p.add_argument("--pop-byte", type=int, help="byte value meaning pop (variable-size)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("trials", help="seeded Monte-Carlo trials on one stream")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--window", help="stream given inline; the verdict after it is counted")
    p.add_argument("--stream", default="-", help="input file or - for stdin")
    p.add_argument("--pop-byte", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", action="store_true", help="per-seed CSV instead of a summary")
    p.add_argument("--max-error", type=float, help="exit 1 if the empirical error exceeds this")
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("bench", help="peak state bits over n = 2^min .. 2^max")
    common(p)
    p.add_argument("--log-min", type=int, default=4)
    p.add_argument("--log-max", type=int, default=16)
    p.add_argument("--steps", type=int, help="stream length per n (default 2n)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "trials", 0) is not None and getattr(args, "trials", 0) < 0:
        print("error: --trials must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, RegexSyntaxError, AutomatonFormatError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, AnalysisError, StateBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
