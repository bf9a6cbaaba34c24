"""
Equivalence of multi-letter QFAs and MMQFAs.

Two deciders are provided.  :func:`naive_equivalent` compares the machines on
every word up to a length bound, which by :func:`equivalence_bound` is enough
to settle full equivalence.  The span deciders build, for the diagonal sum of
the two machines, the span of the matrices whose quadratic form at the initial
vector gives a word's acceptance probability (or, for MMQFAs, its increment).
Those matrices are grouped in buckets by the first ``k-1`` letters of the word;
every bucket is closed under prepending a letter, which acts on a matrix by
conjugation with one transition.  The machines are equivalent iff the
difference of the two quadratic forms vanishes on every bucket generator.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .automata import (
    MMQFA,
    QFA,
    AlphabetError,
    accept_prob,
    gram_sequence,
    oplus_mmqfa,
    oplus_qfa,
    pi_vector,
    rho_vector,
    word_unitary,
)
from .linalg import EPS_PROB, EPS_SPAN, MatrixSpanBasis, dagger, span_add
from .scan import probability_levels, word_at


def equivalence_bound(n1: int, n2: int, sigma_size: int, k1: int, k2: int) -> int:
    """Word length up to which agreement implies agreement everywhere."""
    if min(n1, n2, sigma_size, k1, k2) < 1:
        raise ValueError("all arguments must be positive")
    k = max(k1, k2)
    return (n1 * n1 + n2 * n2 - 1) * sigma_size ** (k - 1) + k


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    method: str
    witness: str | None = None
    p1: float | None = None
    p2: float | None = None
    stats: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return "equivalent" if self.equivalent else "not-equivalent"

    @property
    def difference(self) -> float | None:
        if self.p1 is None:
            return None
        return abs(self.p1 - self.p2)

    def to_dict(self):
        out = {"outcome": self.outcome, "method": self.method}
        if not self.equivalent:
            out.update(witness=self.witness, p1=self.p1, p2=self.p2, difference=self.difference)
        out["stats"] = self.stats
        return out


def _check_pair(A1, A2):
    if A1.kind != A2.kind:
        raise TypeError(f"cannot compare a {A1.kind} with a {A2.kind}")
    if set(A1.alphabet) != set(A2.alphabet):
        raise AlphabetError("machines have different alphabets")


def naive_equivalent(A1, A2, t: int | None = None, eps_prob: float = EPS_PROB) -> EquivalenceVerdict:
    """
    Compare the machines on every word of length at most `t` (default: the
    equivalence bound).  The first disagreeing word in length-lexicographic
    order is the witness.
    """
    _check_pair(A1, A2)
    if t is None:
        t = equivalence_bound(A1.n, A2.n, len(A1.alphabet), A1.k, A2.k)
    alphabet = A1.alphabet
    examined = 0
    levels = zip(probability_levels(A1, t, alphabet), probability_levels(A2, t, alphabet))
    for (length, p1), (_, p2) in levels:
        bad = np.flatnonzero(np.abs(p1 - p2) > eps_prob)
        if bad.size:
            j = int(bad[0])
            stats = {"t": t, "words_examined": examined + j + 1}
            return EquivalenceVerdict(False, "naive", word_at(j, length, alphabet),
                                      float(p1[j]), float(p2[j]), stats)
        examined += p1.size
    return EquivalenceVerdict(True, "naive", stats={"t": t, "words_examined": examined})


# ---------------------------------------------------------------------------
# bucket closure


@dataclass
class BucketFamily:
    """
    One matrix span per (k-1)-letter prefix.  ``generators[nu]`` lists the
    ``(word, matrix)`` pairs whose matrices were accepted into ``buckets[nu]``,
    in insertion order.
    """

    k: int
    alphabet: tuple
    order: int
    buckets: dict
    generators: dict
    rounds: int = 0
    closed: dict = field(default_factory=dict)

    @property
    def dims(self) -> dict:
        return {nu: b.dim for nu, b in self.buckets.items()}

    @property
    def total_dim(self) -> int:
        return sum(b.dim for b in self.buckets.values())

    def to_dict(self):
        return {"rounds": self.rounds, "total_dim": self.total_dim,
                "bucket_dims": {nu or "": d for nu, d in self.dims.items()}}


def _prefixes(alphabet, k):
    return ["".join(p) for p in itertools.product(alphabet, repeat=k - 1)]


def _close(k, alphabet, order, seeds, step, eps_span):
    """
    Seed the buckets with ``(word, matrix)`` pairs and close them: a generator
    G of word w in bucket nu yields M^dagger G M for the word y+w in bucket
    (y+nu)[:k-1], with ``M = step(y + nu)``.  Each round only expands the
    generators added by the previous round.
    """
    buckets = {nu: MatrixSpanBasis(order) for nu in _prefixes(alphabet, k)}
    gens = {nu: [] for nu in buckets}
    frontier = []

    def offer(word, G):
        nu = word[:k - 1]
        buckets[nu], added = span_add(buckets[nu], G, word, eps_span)
        if added:
            gens[nu].append((word, G))
            frontier.append((word, G))

    for word, G in seeds:
        offer(word, G)
    steps = {}
    rounds = 0
    while True:
        rounds += 1
        current, frontier = frontier, []
        for word, G in current:
            nu = word[:k - 1]
            for y in alphabet:
                gram = y + nu
                if gram not in steps:
                    steps[gram] = step(gram)
                M = steps[gram]
                offer(y + word, dagger(M) @ G @ M)
        if not frontier:
            break
    family = BucketFamily(k, tuple(alphabet), order, buckets, gens, rounds)
    family.closed = {nu: True for nu in buckets}
    return family


def qfa_bucket_closure(A, eps_span: float = EPS_SPAN) -> BucketFamily:
    """
    Buckets of ``eta(w)^dagger P_acc eta(w)`` for words ``|w| >= k``, where
    ``eta(w)`` is the product of the full-window transitions of ``w``.
    """
    P = A.P_acc
    seeds = []
    for w in itertools.product(A.alphabet, repeat=A.k):
        w = "".join(w)
        U = A.mu(w)
        seeds.append((w, dagger(U) @ P @ U))
    return _close(A.k, A.alphabet, A.n, seeds, A.mu, eps_span)


def _padded_prefix_qfa(A, nu):
    """Product of the blank-padded transitions read on the first k-1 letters."""
    return word_unitary(A, nu)


def _quadratic_gap(M, rho, pi) -> float:
    return float((np.vdot(rho, M @ rho) - np.vdot(pi, M @ pi)).real)


def _span_decide(A1, A2, A, short_matrix, family, lift, first_witness, eps_prob, method):
    rho, pi = rho_vector(A1, A2), pi_vector(A1, A2)
    candidates = []
    for length in range(A.k):
        for w in itertools.product(A.alphabet, repeat=length):
            w = "".join(w)
            if abs(_quadratic_gap(short_matrix(w), rho, pi)) > eps_prob:
                candidates.append(w)
    for nu, gens in family.generators.items():
        L = lift(nu)
        for w, G in gens:
            if abs(_quadratic_gap(dagger(L) @ G @ L, rho, pi)) > eps_prob:
                candidates.append(w)
    stats = family.to_dict()
    stats["alphabet_order"] = list(A.alphabet)
    pos = {a: i for i, a in enumerate(A1.alphabet)}
    candidates.sort(key=lambda w: (len(w), [pos[x] for x in w]))
    for w in candidates:
        found = first_witness(w)
        if found is not None:
            w, p1, p2 = found
            return EquivalenceVerdict(False, method, w, p1, p2, stats), family
    return EquivalenceVerdict(True, method, stats=stats), family


def _recheck(A1, A2, eps_prob):
    def check(w):
        p1, p2 = accept_prob(A1, w), accept_prob(A2, w)
        if abs(p1 - p2) > eps_prob:
            return w, p1, p2
        return None
    return check


def span_equivalent_qfa(A1, A2, eps_prob: float = EPS_PROB, eps_span: float = EPS_SPAN,
                        return_family: bool = False):
    """Decide equivalence of two k-letter QFAs by bucket closure on their diagonal sum."""
    _check_pair(A1, A2)
    if A1.kind != QFA:
        raise TypeError("span_equivalent_qfa needs QFAs")
    A = oplus_qfa(A1, A2, "rho")
    P = A.P_acc

    def short_matrix(w):
        U = word_unitary(A, w)
        return dagger(U) @ P @ U

    family = qfa_bucket_closure(A, eps_span)
    verdict, family = _span_decide(A1, A2, A, short_matrix, family,
                                   lambda nu: _padded_prefix_qfa(A, nu),
                                   _recheck(A1, A2, eps_prob), eps_prob, "span")
    return (verdict, family) if return_family else verdict


# ---------------------------------------------------------------------------
# measure-many machines


def _mm_steps(A, w):
    """Transition matrices along the measure-many run of `w` (end-markers included)."""
    return [A.mu(g) for g, _ in gram_sequence(w, MMQFA, A.k, A.alphabet)]


def _right_marker(A, w):
    return A.mu(gram_sequence(w, MMQFA, A.k, A.alphabet)[-1][0])


def _xi(A, w):
    """
    Matrix giving the probability increment of the last letter of non-empty
    `w`, evaluated on the state reached just before that letter.
    """
    P_a, P_g = A.P_a, A.P_g
    U = A.mu(gram_sequence(w, MMQFA, A.k, A.alphabet)[-2][0])
    G = P_g @ U
    R = _right_marker(A, w)
    R_prev = _right_marker(A, w[:-1])
    return (dagger(U) @ P_a @ U
            + dagger(G) @ dagger(R) @ P_a @ R @ G
            - dagger(R_prev) @ P_a @ R_prev)


def mmqfa_theta(A, w: str) -> np.ndarray:
    """Matrix whose quadratic form at the initial state is the increment of `w`."""
    P_a, P_g = A.P_a, A.P_g
    steps = _mm_steps(A, w)
    if not w:
        L, R = steps
        G = P_g @ L
        return dagger(L) @ P_a @ L + dagger(G) @ dagger(R) @ P_a @ R @ G
    prefix = np.eye(A.n, dtype=complex)
    for U in steps[:-2]:
        prefix = P_g @ U @ prefix
    return dagger(prefix) @ _xi(A, w) @ prefix


def _mm_prefix(A, nu):
    """Continue-projected run over the left end-marker and the first k-1 letters."""
    P_g = A.P_g
    out = np.eye(A.n, dtype=complex)
    for U in _mm_steps(A, nu)[:-1]:
        out = P_g @ U @ out
    return out


def mmqfa_bucket_closure(A, eps_span: float = EPS_SPAN) -> BucketFamily:
    P_g = A.P_g
    seeds = [("".join(w), _xi(A, "".join(w))) for w in itertools.product(A.alphabet, repeat=A.k)]
    return _close(A.k, A.alphabet, A.n, seeds, lambda gram: P_g @ A.mu(gram), eps_span)


def span_equivalent_mmqfa(A1, A2, eps_prob: float = EPS_PROB, eps_span: float = EPS_SPAN,
                          return_family: bool = False):
    """
    Decide equivalence of two k-letter MMQFAs by comparing their per-letter
    probability increments over the closed bucket family of the diagonal sum.
    """
    _check_pair(A1, A2)
    if A1.kind != MMQFA:
        raise TypeError("span_equivalent_mmqfa needs MMQFAs")
    A = oplus_mmqfa(A1, A2, "rho")
    family = mmqfa_bucket_closure(A, eps_span)
    recheck = _recheck(A1, A2, eps_prob)

    def first_witness(w):
        # an increment gap at w means some prefix of w (w included) is a witness
        for i in range(len(w) + 1):
            found = recheck(w[:i])
            if found is not None:
                return found
        return None

    verdict, family = _span_decide(A1, A2, A, lambda w: mmqfa_theta(A, w), family,
                                   lambda nu: _mm_prefix(A, nu), first_witness, eps_prob, "span")
    return (verdict, family) if return_family else verdict


def span_equivalent(A1, A2, eps_prob: float = EPS_PROB, eps_span: float = EPS_SPAN,
                    return_family: bool = False):
    _check_pair(A1, A2)
    decide = span_equivalent_mmqfa if A1.kind == MMQFA else span_equivalent_qfa
    return decide(A1, A2, eps_prob, eps_span, return_family)


def equivalent(A1, A2, method: str = "span", t: int | None = None,
               eps_prob: float = EPS_PROB, eps_span: float = EPS_SPAN) -> EquivalenceVerdict:
    if method == "naive":
        return naive_equivalent(A1, A2, t, eps_prob)
    if method == "span":
        return span_equivalent(A1, A2, eps_prob, eps_span)
    raise ValueError(f"unknown method {method!r}")
