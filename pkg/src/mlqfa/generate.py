"""Seeded random machines and probability-preserving transforms of machines."""
from __future__ import annotations

import string
from dataclasses import replace

import numpy as np

from .automata import MMQFA, QFA, KLetterMMQFA, KLetterQFA, reachable_grams
from .linalg import random_state, random_unitary


def default_alphabet(size: int) -> tuple:
    if not 1 <= size <= 26:
        raise ValueError("alphabet size must be between 1 and 26")
    return tuple(string.ascii_lowercase[:size])


def _alphabet(alphabet):
    return default_alphabet(alphabet) if isinstance(alphabet, int) else tuple(alphabet)


def random_qfa(n: int, k: int, alphabet=2, seed=None) -> KLetterQFA:
    """Random k-letter QFA: Haar unitaries, random initial state, non-empty accepting set."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    alphabet = _alphabet(alphabet)
    rng = np.random.default_rng(seed)
    table = {g: random_unitary(n, rng) for g in reachable_grams(QFA, alphabet, k)}
    initial = random_state(n, rng)
    accepting = {int(q) for q in np.flatnonzero(rng.random(n) < 0.5)}
    if not accepting:
        accepting = {int(rng.integers(n))}
    return KLetterQFA(k, alphabet, n, accepting, initial, table)


def random_mmqfa(n: int, k: int, alphabet=2, seed=None) -> KLetterMMQFA:
    """
    Random k-letter MMQFA.  At least one neutral state is kept so that runs
    survive past the left end-marker, and at least one accepting state when
    ``n >= 2``.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    alphabet = _alphabet(alphabet)
    rng = np.random.default_rng(seed)
    table = {g: random_unitary(n, rng) for g in reachable_grams(MMQFA, alphabet, k)}
    initial = random_state(n, rng)
    order = rng.permutation(n)
    accepting, rejecting = set(), set()
    for pos, q in enumerate(order[1:], start=1):
        label = 0 if pos == 1 else int(rng.integers(3))
        if label == 0:
            accepting.add(int(q))
        elif label == 1:
            rejecting.add(int(q))
    return KLetterMMQFA(k, alphabet, n, accepting, initial, table, rejecting=rejecting)


def random_machine(kind: str, n: int, k: int, alphabet=2, seed=None):
    if kind == QFA:
        return random_qfa(n, k, alphabet, seed)
    if kind == MMQFA:
        return random_mmqfa(n, k, alphabet, seed)
    raise ValueError(f"unknown machine kind {kind!r}")


def relabel(machine, perm):
    """Rename state q to perm[q]; every acceptance probability is unchanged."""
    perm = np.asarray(perm, dtype=int)
    n = machine.n
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("perm must be a permutation of the states")
    P = np.zeros((n, n), dtype=complex)
    P[perm, np.arange(n)] = 1.0
    table = {g: P @ U @ P.T for g, U in machine.transitions.items()}
    changes = dict(initial=P @ machine.initial, transitions=table,
                   accepting={int(perm[q]) for q in machine.accepting})
    if machine.kind == MMQFA:
        changes["rejecting"] = {int(perm[q]) for q in machine.rejecting}
    return replace(machine, **changes)


def global_phase(machine, theta: float):
    """Multiply every transition by exp(i*theta)."""
    ph = np.exp(1j * theta)
    return replace(machine, transitions={g: ph * U for g, U in machine.transitions.items()})


def with_accepting(machine, accepting):
    return replace(machine, accepting=accepting)


def lift(machine, k: int):
    """Same machine with a longer memory that ignores all but its last letters."""
    if k < machine.k:
        raise ValueError("can only lift to a larger k")
    table = {g: machine.mu(g[k - machine.k:]) for g in reachable_grams(machine.kind, machine.alphabet, k)}
    return replace(machine, k=k, transitions=table)
