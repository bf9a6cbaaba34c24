"""
Length-lexicographic enumeration of acceptance probabilities.

All words of one length are simulated together: level ``L`` holds one state
row per word of length ``L`` in lexicographic order (alphabet order as given),
so the children of row ``j`` are rows ``j*s .. j*s + s - 1``.  Words sharing
their last ``k-1`` letters form the strided slice ``c::s**m`` and read the same
gram, which keeps every step a handful of batched matrix products.
"""
from __future__ import annotations

import numpy as np

from .automata import BLANK, LEFT, MMQFA, RIGHT, _check_alphabet


def word_at(index: int, length: int, alphabet) -> str:
    """The `index`-th word of the given length in lexicographic order."""
    s = len(alphabet)
    out = []
    for _ in range(length):
        index, r = divmod(index, s)
        out.append(alphabet[r])
    return "".join(reversed(out))


def word_index(word: str, alphabet) -> int:
    pos = {a: i for i, a in enumerate(alphabet)}
    idx = 0
    for x in word:
        idx = idx * len(alphabet) + pos[x]
    return idx


def _context(c: int, m: int, alphabet, k: int) -> str:
    return BLANK * (k - 1 - m) + word_at(c, m, alphabet)


def _sqnorm(states: np.ndarray, cols) -> np.ndarray:
    sub = states[:, cols]
    return np.einsum("ij,ij->i", sub.conj(), sub).real


def probability_levels(machine, max_len: int, alphabet=None):
    """
    Yield ``(length, probs)`` for ``length = 0 .. max_len``; ``probs[j]`` is the
    acceptance probability of ``word_at(j, length, alphabet)``.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    alphabet = tuple(machine.alphabet if alphabet is None else alphabet)
    _, problems = _check_alphabet(alphabet)
    if problems or set(alphabet) != set(machine.alphabet):
        raise ValueError(f"bad enumeration alphabet {alphabet!r}")
    if machine.kind == MMQFA:
        yield from _mm_levels(machine, max_len, alphabet)
    else:
        yield from _qfa_levels(machine, max_len, alphabet)


def _step(machine, states, length, alphabet):
    """Advance every word of `length` by every letter; returns the child states."""
    k, s = machine.k, len(alphabet)
    m = min(length, k - 1)
    period = s ** m
    P = states.shape[0]
    children = np.empty((P, s, machine.n), dtype=complex)
    for c in range(period):
        ctx = _context(c, m, alphabet, k)
        block = states[c::period]
        for xi, x in enumerate(alphabet):
            children[c::period, xi, :] = block @ machine.mu(ctx + x).T
    return children.reshape(P * s, machine.n)


def _qfa_levels(A, max_len, alphabet):
    acc = sorted(A.accepting)
    states = A.initial[None, :].astype(complex)
    for length in range(max_len + 1):
        yield length, np.clip(_sqnorm(states, acc), 0.0, 1.0)
        if length < max_len:
            states = _step(A, states, length, alphabet)


def _mm_levels(A, max_len, alphabet):
    k, s = A.k, len(alphabet)
    acc_cols = sorted(A.accepting)
    non = np.array(sorted(A.neutral), dtype=int)
    P_g = np.zeros(A.n)
    P_g[non] = 1.0

    states = (A.mu(BLANK * (k - 1) + LEFT) @ A.initial)[None, :]
    accepted = _sqnorm(states, acc_cols)
    states = states * P_g
    for length in range(max_len + 1):
        m = min(length, k - 1)
        period = s ** m
        # right end-marker step for every word of this length
        final = np.empty(states.shape[0])
        for c in range(period):
            ctx = _context(c, m, alphabet, k)
            out = states[c::period] @ A.mu(ctx + RIGHT).T
            final[c::period] = _sqnorm(out, acc_cols)
        yield length, np.clip(accepted + final, 0.0, 1.0)
        if length < max_len:
            states = _step(A, states, length, alphabet)
            accepted = np.repeat(accepted, s) + _sqnorm(states, acc_cols)
            states = states * P_g
