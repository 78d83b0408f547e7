import io
import subprocess
import sys

import pytest

from slidewin.automata import Language, dump_automaton
from slidewin.analysis import classify
from slidewin.cli import main
from slidewin.harness import EngineFactory, bench, choose_engine, run_trials


def call(args, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
    code = main(args, out=out)
    return code, out.getvalue()


def test_classify_outputs():
    code, text = call(["classify", "--regex", "(a|b)*a"])
    assert code == 0 and "det_fixed: constant" in text
    code, text = call(["classify", "--regex", "a(a|b)*", "--machine"])
    assert code == 0 and text.startswith("det_fixed=linear ")


def test_classify_bad_regex(capsys):
    code, _ = call(["classify", "--regex", "a(b"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_usage_errors():
    assert call(["run", "--regex", "ab*", "--engine", "constant"])[0] == 2
    assert call(["frobnicate"])[0] == 2
    assert call(["trials", "--regex", "ab*", "--engine", "two-sided", "--n", "8",
                 "--window", "ab"])[0] == 2


def test_precondition_error():
    code, _ = call(["run", "--regex", "a(a|b)*", "--engine", "constant", "--n", "4",
                    "--stream", "/dev/null"])
    assert code == 3


def test_run_verdicts(tmp_path):
    stream = tmp_path / "s.txt"
    stream.write_bytes(b"abbbab\n")
    code, text = call(["run", "--regex", "ab*", "--alphabet", "ab", "--engine", "explicit",
                       "--n", "3", "--stream", str(stream)])
    assert code == 0 and text.split() == ["0", "0", "1", "0", "0", "0"]


def test_run_stdin_and_pop(monkeypatch):
    code, text = call(["run", "--regex", "(a|b)*a(a|b)*", "--alphabet", "ab", "--engine",
                       "path-summary", "--pop-byte", "46"], stdin=b"bab..b", monkeypatch=monkeypatch)
    assert code == 0 and text.split() == ["0", "1", "1", "1", "0", "0"]


def test_run_explicit_matches_path_summary(tmp_path):
    stream = tmp_path / "s.txt"
    stream.write_bytes(b"abbabababbbbaaab" * 20)
    outs = []
    for engine in ("explicit", "path-summary"):
        outs.append(call(["run", "--regex", "(a|b)*a(a|b)*b", "--engine", engine, "--n", "9",
                          "--stream", str(stream)])[1])
    assert outs[0] == outs[1]


def test_auto_engine_choice():
    ab = Language.from_regex("ab*", alphabet="ab")
    assert EngineFactory(ab, "auto", 16).name == "suffix-free"
    assert EngineFactory(Language.from_regex("(a|b)*a", alphabet="ab"), "auto", 16).name == "constant"
    assert EngineFactory(Language.from_regex("a(a|b)*", alphabet="ab"), "auto", 16).name == "explicit"
    assert EngineFactory(Language.from_regex("(a|b)*a(a|b)*", alphabet="ab"), "auto", 16).name \
        == "path-summary"
    assert EngineFactory(Language.from_regex("a(a|b)*", alphabet="ab"), "auto").name == "explicit"


def test_auto_never_violates_preconditions():
    from conftest import random_languages
    for L in random_languages(83, 40, "ab"):
        for n in (None, 0, 7):
            f = EngineFactory(L, "auto", n)
            eng = f(1)
            eng.run("abba")
            assert choose_engine(classify(L.rdfa, with_witnesses=False), n) == f.name


def test_trials_reports():
    code, text = call(["trials", "--regex", "ab*", "--engine", "false-biased", "--n", "16",
                       "--window", "a" + "b" * 15, "--trials", "200"])
    assert code == 0 and "trials=200 accepts=200 truth=1" in text
    code, text = call(["trials", "--regex", "ab*", "--engine", "suffix-free", "--n", "16",
                       "--window", "ab", "--trials", "0"])
    assert code == 0 and "trials=0 accepts=0" in text


def test_trials_max_error():
    code, _ = call(["trials", "--regex", "ab*", "--engine", "explicit", "--n", "4",
                    "--window", "abbb", "--trials", "3", "--max-error", "0"])
    assert code == 0
    code, _ = call(["trials", "--regex", "ab*", "--engine", "modulo", "--n", "4",
                    "--window", "bbbbbbbbbbbbbbbbbbbbbbb", "--trials", "50", "--max-error", "0"])
    assert code == 1


def test_trials_csv_reproducible(monkeypatch):
    args = ["trials", "--regex", "ab*", "--engine", "suffix-free", "--n", "32",
            "--window", "a" + "b" * 20, "--trials", "40", "--csv", "--workers", "4"]
    first = call(args)[1]
    assert first == call(args)[1]
    assert first.splitlines()[0].startswith("# slidewin-trials")
    assert first.splitlines()[1] == "seed,verdict,truth"
    monkeypatch.setenv("SLIDEWIN_SEED", "100")
    shifted = call(args)[1]
    assert shifted.splitlines()[2].startswith("100,")


def test_trials_workers_do_not_change_counts():
    L = Language.from_regex("ab*", alphabet="ab")
    f = EngineFactory(L, "suffix-free", 16)
    events = list("a" + "b" * 30)
    one = run_trials(f, events, False, 60, 5, workers=1)
    many = run_trials(f, events, False, 60, 5, workers=6)
    assert one[1] == many[1] and one[0] == many[0]


def test_bench_csv():
    args = ["bench", "--regex", "(a|b)*a(a|b)*", "--engine", "path-summary", "--log-max", "7"]
    code, text = call(args)
    assert code == 0 and text == call(args)[1]
    lines = text.splitlines()
    assert lines[0] == "# slidewin-bench v1" and lines[1] == "engine,language,n,bits"
    assert [int(l.split(",")[2]) for l in lines[2:]] == [16, 32, 64, 128]


def test_bench_shapes():
    L = Language.from_regex("(a|b)*a", alphabet="ab")
    rows = bench(lambda n: EngineFactory(L, "explicit", n), [16, 32, 64])
    assert [r.bits for r in rows] == [128, 256, 512]
    rows = bench(lambda n: EngineFactory(L, "constant", n), [16, 256, 4096])
    assert len({r.bits for r in rows}) == 1


def test_automaton_file(tmp_path):
    rd = Language.from_regex("ab*", alphabet="ab").rdfa
    path = tmp_path / "ab.rdfa"
    path.write_text(dump_automaton(rd))
    code, text = call(["classify", "--automaton", str(path), "--machine"])
    assert code == 0 and "randomized=loglog" in text
    bad = tmp_path / "bad.txt"
    bad.write_text("kind: dfa\nnonsense\n")
    assert call(["classify", "--automaton", str(bad)])[0] == 2
    assert call(["classify", "--automaton", str(tmp_path / "missing")])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "slidewin", "classify", "--regex", "(a|b)*a"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "det_fixed: constant" in proc.stdout
