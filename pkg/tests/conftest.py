import itertools
import random
import re

import pytest

from slidewin.automata import Alphabet, Language, random_regex


def py_pattern(rx):
    """Same regex for Python's re module, used as an independent membership oracle."""
    return re.compile(rx.replace("ε", "(?:)").replace("∅", "(?!)"))


def words_upto(symbols, k):
    for n in range(k + 1):
        for t in itertools.product(symbols, repeat=n):
            yield "".join(t)


def random_languages(seed, count, symbols="ab", depth=4, max_states=8):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rx = random_regex(rng, symbols, depth)
        lang = Language.from_regex(rx, alphabet=Alphabet.of(symbols))
        if lang.rdfa.state_count <= max_states:
            out.append(lang)
    return out


CORPUS = {
    "ends_a": "(a|b)*a",
    "has_a": "(a|b)*a(a|b)*",
    "starts_a": "a(a|b)*",
    "a_star": "a*",
    "ab_star": "ab*",
    "parity": "(b*ab*a)*b*",
    "empty": "∅",
    "all": "(a|b)*",
    "even_len": "((a|b)(a|b))*",
    "mixed": "ab*|(b*ab*a)*b*",
}


@pytest.fixture(scope="session")
def corpus():
    return {k: Language.from_regex(v, alphabet="ab") for k, v in CORPUS.items()}
