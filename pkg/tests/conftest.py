import numpy as np
import pytest

from mlqfa.automata import KLetterMMQFA, KLetterQFA, ends_with_a_qfa, reachable_grams
from mlqfa.generate import with_accepting

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def corpus():
    return ends_with_a_qfa()


@pytest.fixture
def corpus_complement():
    return with_accepting(ends_with_a_qfa(), {0})


def identity_qfa(n=2, k=1, alphabet=("a", "b"), accepting=(0,), initial=None):
    initial = np.eye(n)[0] if initial is None else initial
    table = {g: np.eye(n) for g in reachable_grams("qfa", alphabet, k)}
    return KLetterQFA(k, alphabet, n, accepting, initial, table)


def identity_mmqfa(n=2, k=1, alphabet=("a", "b"), accepting=(0,), rejecting=(), initial=None):
    initial = np.eye(n)[0] if initial is None else initial
    table = {g: np.eye(n) for g in reachable_grams("mmqfa", alphabet, k)}
    return KLetterMMQFA(k, alphabet, n, accepting, initial, table, rejecting=rejecting)
