"""
Multi-letter quantum finite automata.

Two machine kinds are supported:

* :class:`KLetterQFA` -- unitary evolution driven by the last ``k`` input
  letters, measured once after the whole word.
* :class:`KLetterMMQFA` -- the same evolution framed by end-markers, measured
  after every step with the accept / continue / reject observable.

Words are Python strings over single-character alphabets.  The blank and the
two end-markers are the reserved characters ``_``, ``<`` and ``>``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import EPS_PROB, EPS_UNITARY, check_unitary, diagonal_sum, projector

BLANK = "_"
LEFT = "<"
RIGHT = ">"
RESERVED = frozenset((BLANK, LEFT, RIGHT))

QFA = "qfa"
MMQFA = "mmqfa"


class AlphabetError(ValueError):
    pass


class MissingGramError(KeyError):
    pass


class ProbabilityError(ArithmeticError):
    """A simulated probability left [0, 1] by more than the tolerance."""


class GramRole(enum.Enum):
    LEFT_MARKER = "left-marker"
    PADDED = "padded"
    INTERIOR = "interior"
    RIGHT_MARKER = "right-marker"


def _check_alphabet(alphabet) -> tuple:
    alphabet = tuple(alphabet)
    problems = []
    if not alphabet:
        problems.append("alphabet is empty")
    if len(set(alphabet)) != len(alphabet):
        problems.append("alphabet has duplicate symbols")
    for a in alphabet:
        if not isinstance(a, str) or len(a) != 1:
            problems.append(f"symbol {a!r} is not a single character")
        elif a in RESERVED:
            problems.append(f"symbol {a!r} is reserved")
    return alphabet, problems


@dataclass(frozen=True, eq=False)
class KLetterQFA:
    """
    k-letter QFA with ``n`` basis states.

    ``transitions`` maps gram strings of length ``k`` (over the alphabet plus
    the blank ``_``) to unitary matrices of order ``n``.
    """

    k: int
    alphabet: tuple
    n: int
    accepting: frozenset
    initial: np.ndarray = field(repr=False)
    transitions: dict = field(repr=False)

    kind = QFA

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(int(q) for q in self.accepting))
        init = np.array(self.initial, dtype=complex).reshape(-1)
        init.setflags(write=False)
        object.__setattr__(self, "initial", init)
        table = {}
        for g, U in self.transitions.items():
            U = np.array(U, dtype=complex)
            U.setflags(write=False)
            table[g] = U
        object.__setattr__(self, "transitions", table)

    @property
    def P_acc(self) -> np.ndarray:
        return projector(self.accepting, self.n)

    def mu(self, gram: str) -> np.ndarray:
        try:
            return self.transitions[gram]
        except KeyError:
            raise MissingGramError(gram) from None

    def accept_prob(self, word: str) -> float:
        return accept_prob_qfa(self, word)


@dataclass(frozen=True, eq=False)
class KLetterMMQFA(KLetterQFA):
    """k-letter measure-many QFA; states outside accepting and rejecting are neutral."""

    rejecting: frozenset = frozenset()

    kind = MMQFA

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "rejecting", frozenset(int(q) for q in self.rejecting))

    @property
    def neutral(self) -> frozenset:
        return frozenset(range(self.n)) - self.accepting - self.rejecting

    @property
    def P_a(self) -> np.ndarray:
        return projector(self.accepting, self.n)

    @property
    def P_g(self) -> np.ndarray:
        return projector(self.neutral, self.n)

    @property
    def P_r(self) -> np.ndarray:
        return projector(self.rejecting, self.n)

    def accept_prob(self, word: str) -> float:
        return accept_prob_mmqfa(self, word).accept


# ---------------------------------------------------------------------------
# gram semantics


def _check_word(word: str, alphabet) -> None:
    bad = set(word) - set(alphabet)
    if bad:
        raise AlphabetError(f"symbols {sorted(bad)} are not in the alphabet {list(alphabet)}")


def gram_sequence(word: str, kind: str, k: int, alphabet=None):
    """
    Grams read while processing `word`, with their roles.

    Every gram is the last ``k`` characters of the blank-padded input seen so
    far; for MMQFAs the run is framed by ``_``*(k-1) + ``<`` and a final gram
    ending in ``>``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if kind not in (QFA, MMQFA):
        raise ValueError(f"unknown machine kind {kind!r}")
    if alphabet is not None:
        _check_word(word, alphabet)
    elif RESERVED & set(word):
        raise AlphabetError("word contains reserved symbols")
    padded = BLANK * (k - 1) + word
    seq = [
        (padded[i - 1:i - 1 + k], GramRole.PADDED if i < k else GramRole.INTERIOR)
        for i in range(1, len(word) + 1)
    ]
    if kind == MMQFA:
        seq.insert(0, (BLANK * (k - 1) + LEFT, GramRole.LEFT_MARKER))
        seq.append((padded[len(padded) - (k - 1):] + RIGHT, GramRole.RIGHT_MARKER))
    return seq


def reachable_grams(kind: str, alphabet, k: int) -> list:
    """All grams that some input word can produce, in a fixed order."""
    alphabet = tuple(alphabet)
    grams = []
    for i in range(1, k + 1):
        for w in itertools.product(alphabet, repeat=i):
            grams.append(BLANK * (k - i) + "".join(w))
    if kind == MMQFA:
        grams.append(BLANK * (k - 1) + LEFT)
        for j in range(k):
            for w in itertools.product(alphabet, repeat=j):
                grams.append(BLANK * (k - 1 - j) + "".join(w) + RIGHT)
    return grams


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"valid": self.ok, "issues": list(self.issues)}


def validate(machine, eps_unitary: float = EPS_UNITARY) -> ValidationReport:
    """Collect every violated structural invariant of `machine`."""
    report = ValidationReport()
    issues = report.issues
    _, problems = _check_alphabet(machine.alphabet)
    issues.extend(problems)
    if machine.k < 1:
        issues.append("k must be positive")
    if machine.n < 1:
        issues.append("state count must be positive")
    if problems or machine.k < 1 or machine.n < 1:
        return report

    n = machine.n
    for name, states in [("accepting", machine.accepting),
                         ("rejecting", getattr(machine, "rejecting", ()))]:
        out = sorted(q for q in states if not 0 <= q < n)
        if out:
            issues.append(f"{name} states {out} are out of range 0..{n - 1}")
    if machine.kind == MMQFA:
        overlap = sorted(machine.accepting & machine.rejecting)
        if overlap:
            issues.append(f"observable overlap: states {overlap} are both accepting and rejecting")

    init = machine.initial
    if init.shape != (n,):
        issues.append(f"initial vector has dimension {init.size}, expected {n}")
    elif abs(np.vdot(init, init).real - 1.0) > eps_unitary:
        issues.append(f"initial vector is not normalized (norm^2 = {np.vdot(init, init).real:.12g})")

    legal = set(machine.alphabet) | ({BLANK, LEFT, RIGHT} if machine.kind == MMQFA else {BLANK})
    for g in sorted(machine.transitions):
        if len(g) != machine.k or not set(g) <= legal:
            issues.append(f"gram {g!r} is not a length-{machine.k} gram over the machine's symbols")
    for g in reachable_grams(machine.kind, machine.alphabet, machine.k):
        U = machine.transitions.get(g)
        if U is None:
            issues.append(f"missing transition for gram {g!r}")
        elif U.shape != (n, n):
            issues.append(f"transition for gram {g!r} has shape {U.shape}, expected {(n, n)}")
        elif not np.all(np.isfinite(U)) or not check_unitary(U, eps_unitary):
            issues.append(f"transition for gram {g!r} is not unitary")
    return report


# ---------------------------------------------------------------------------
# simulation


def _clamp(p: float, eps: float) -> float:
    if p < -eps or p > 1 + eps:
        raise ProbabilityError(f"probability {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def word_unitary(A, word: str) -> np.ndarray:
    """Product of the transition matrices read on `word`, latest on the left."""
    U = np.eye(A.n, dtype=complex)
    for g, _ in gram_sequence(word, QFA, A.k, A.alphabet):
        U = A.mu(g) @ U
    return U


def accept_prob_qfa(A: KLetterQFA, word: str, eps_prob: float = EPS_PROB) -> float:
    psi = word_unitary(A, word) @ A.initial
    amp = psi[sorted(A.accepting)]
    return _clamp(float(np.vdot(amp, amp).real), eps_prob)


class MMResult(NamedTuple):
    accept: float
    reject: float
    residual: float


def accept_prob_mmqfa(A: KLetterMMQFA, word: str, eps_prob: float = EPS_PROB) -> MMResult:
    """Run the measure-many semantics; returns accept, reject and leftover mass."""
    P_a, P_g, P_r = A.P_a, A.P_g, A.P_r
    psi = A.initial
    acc = rej = 0.0
    for g, _ in gram_sequence(word, MMQFA, A.k, A.alphabet):
        psi = A.mu(g) @ psi
        a = P_a @ psi
        r = P_r @ psi
        acc += np.vdot(a, a).real
        rej += np.vdot(r, r).real
        psi = P_g @ psi
    res = np.vdot(psi, psi).real
    total = acc + rej + res
    if abs(total - np.vdot(A.initial, A.initial).real) > eps_prob:
        raise ProbabilityError(f"measurement outcomes sum to {total!r}")
    return MMResult(_clamp(acc, eps_prob), _clamp(rej, eps_prob), _clamp(res, eps_prob))


def accept_prob(A, word: str, eps_prob: float = EPS_PROB) -> float:
    if A.kind == MMQFA:
        return accept_prob_mmqfa(A, word, eps_prob).accept
    return accept_prob_qfa(A, word, eps_prob)


def delta_prob(A: KLetterMMQFA, word: str, eps_prob: float = EPS_PROB) -> float:
    """Increment of the accept probability caused by the last letter of `word`."""
    p = accept_prob_mmqfa(A, word, eps_prob).accept
    if not word:
        return p
    return p - accept_prob_mmqfa(A, word[:-1], eps_prob).accept


# ---------------------------------------------------------------------------
# constructions


def rho_vector(A1, A2) -> np.ndarray:
    return np.concatenate([A1.initial, np.zeros(A2.n, dtype=complex)])


def pi_vector(A1, A2) -> np.ndarray:
    return np.concatenate([np.zeros(A1.n, dtype=complex), A2.initial])


def _oplus_initial(A1, A2, initial):
    if isinstance(initial, str):
        if initial == "rho":
            return rho_vector(A1, A2)
        if initial == "pi":
            return pi_vector(A1, A2)
        raise ValueError(f"initial must be 'rho', 'pi' or a vector, got {initial!r}")
    initial = np.asarray(initial, dtype=complex).reshape(-1)
    if initial.size != A1.n + A2.n:
        raise ValueError(f"initial vector must have dimension {A1.n + A2.n}")
    return initial


def _oplus_table(A1, A2, kind):
    if set(A1.alphabet) != set(A2.alphabet):
        raise AlphabetError("diagonal sum needs machines over the same alphabet")
    k = max(A1.k, A2.k)
    table = {}
    # each component reads the suffix of the gram matching its own memory
    for g in reachable_grams(kind, A1.alphabet, k):
        table[g] = diagonal_sum(A1.mu(g[k - A1.k:]), A2.mu(g[k - A2.k:]))
    return k, table


def oplus_qfa(A1: KLetterQFA, A2: KLetterQFA, initial="rho") -> KLetterQFA:
    """Diagonal sum of two QFAs; `initial` is a vector or ``'rho'``/``'pi'``."""
    k, table = _oplus_table(A1, A2, QFA)
    acc = set(A1.accepting) | {q + A1.n for q in A2.accepting}
    return KLetterQFA(k, A1.alphabet, A1.n + A2.n, acc, _oplus_initial(A1, A2, initial), table)


def oplus_mmqfa(A1: KLetterMMQFA, A2: KLetterMMQFA, initial="rho") -> KLetterMMQFA:
    k, table = _oplus_table(A1, A2, MMQFA)
    acc = set(A1.accepting) | {q + A1.n for q in A2.accepting}
    rej = set(A1.rejecting) | {q + A1.n for q in A2.rejecting}
    return KLetterMMQFA(k, A1.alphabet, A1.n + A2.n, acc, _oplus_initial(A1, A2, initial),
                        table, rejecting=rej)


def oplus(A1, A2, initial="rho"):
    if A1.kind != A2.kind:
        raise TypeError("cannot form the diagonal sum of a QFA and an MMQFA")
    return oplus_mmqfa(A1, A2, initial) if A1.kind == MMQFA else oplus_qfa(A1, A2, initial)


def mo_to_kletter(unitaries: dict, accepting, initial, alphabet=None) -> KLetterQFA:
    """Measure-once QFA given by one unitary per letter, as a 1-letter QFA."""
    alphabet = tuple(alphabet) if alphabet is not None else tuple(unitaries)
    initial = np.asarray(initial, dtype=complex)
    return KLetterQFA(1, alphabet, initial.size, accepting, initial,
                      {a: unitaries[a] for a in alphabet})


def embed_qfa_to_mmqfa(A: KLetterQFA) -> KLetterMMQFA:
    """
    Measure-many machine on 3n states with the same acceptance probabilities.

    The input state is parked in the middle (neutral) block by the left
    end-marker, evolves there untouched by measurement, and is swapped back to
    the first block by the right end-marker, where the accepting projector of
    `A` reads it out.
    """
    n = A.n
    I = np.eye(n, dtype=complex)
    Z = np.zeros((n, n), dtype=complex)
    swap = np.block([[Z, I, Z], [I, Z, Z], [Z, Z, I]])
    table = {}
    for g in reachable_grams(MMQFA, A.alphabet, A.k):
        if g.endswith(LEFT) or g.endswith(RIGHT):
            table[g] = swap
        else:
            table[g] = diagonal_sum(diagonal_sum(I, A.mu(g)), I)
    initial = np.concatenate([A.initial, np.zeros(2 * n, dtype=complex)])
    accepting = set(A.accepting)
    rejecting = (set(range(n)) - accepting) | set(range(2 * n, 3 * n))
    return KLetterMMQFA(A.k, A.alphabet, 3 * n, accepting, initial, table, rejecting=rejecting)


def empty_language_moqfa(lam: float, c: float, alphabet=("a", "b")) -> KLetterQFA:
    """
    Two-state 1-letter QFA accepting every word with probability ``lam - c``,
    so its non-strict cut-point language at ``lam`` is empty.
    """
    if not 0 < c < lam <= 1:
        raise ValueError("need 0 < c < lam <= 1")
    init = np.array([np.sqrt(lam - c), np.sqrt(1 - lam + c)], dtype=complex)
    I = np.eye(2, dtype=complex)
    return KLetterQFA(1, alphabet, 2, {0}, init, {a: I for a in alphabet})


def ends_with_a_qfa() -> KLetterQFA:
    """2-letter reversible QFA over {a, b} accepting exactly the words ending in 'a'."""
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    I = np.eye(2, dtype=complex)
    table = {"_a": X, "_b": I, "aa": I, "ab": X, "ba": X, "bb": I}
    return KLetterQFA(2, ("a", "b"), 2, {1}, [1, 0], table)
