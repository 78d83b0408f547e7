"""Streaming membership and property testing for regular languages over sliding windows."""
from .automata import Alphabet, Dfa, Language, Nfa, Rdfa, parse_automaton, dump_automaton
from .analysis import SpaceClassReport, classify, prepare
from .det_engines import POP, StreamEvent, explicit_engine, path_summary_engine, \
    constant_space_engine
from .rand_engines import RandomSource, suffix_free_engine
from .testers import det_tester, false_biased_tester, two_sided_tester, trivial_tester

__all__ = [
    "Alphabet", "Dfa", "Language", "Nfa", "Rdfa", "parse_automaton", "dump_automaton",
    "SpaceClassReport", "classify", "prepare", "POP", "StreamEvent", "explicit_engine",
    "path_summary_engine", "constant_space_engine", "RandomSource", "suffix_free_engine",
    "det_tester", "false_biased_tester", "two_sided_tester", "trivial_tester",
]
