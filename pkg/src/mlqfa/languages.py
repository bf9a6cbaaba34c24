"""
Cut-point languages and bounded searches over them.

Emptiness, equality and containment of cut-point languages are undecidable
for these machines, so everything here is a bounded scan: a search can find a
witness or a refuting word, but an exhausted search proves nothing about longer
words.  Strict emptiness for (measure-once) k-letter QFAs is an open problem;
it is searched the same way.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automata import AlphabetError, accept_prob
from .linalg import EPS_PROB
from .scan import probability_levels, word_at

RELATIONS = ("equal", "subset", "proper-subset")


@dataclass(frozen=True)
class CutpointQuery:
    lam: float
    strict: bool = False

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("cut-point must lie in [0, 1]")

    @property
    def symbol(self) -> str:
        return ">" if self.strict else ">="

    def member(self, p, eps_prob: float = EPS_PROB):
        """Membership of probability (or array of probabilities) `p`."""
        if self.strict:
            return np.asarray(p) > self.lam + eps_prob
        return np.asarray(p) >= self.lam - eps_prob

    def ambiguous(self, p, eps_prob: float = EPS_PROB):
        return np.abs(np.asarray(p) - self.lam) <= eps_prob

    def to_dict(self):
        return {"lambda": self.lam, "strict": self.strict}


def cutpoint_member(A, word: str, q: CutpointQuery, eps_prob: float = EPS_PROB) -> bool:
    return bool(q.member(accept_prob(A, word), eps_prob))


@dataclass
class WitnessSearchResult:
    found: bool
    max_len: int
    examined: int
    word: str | None = None
    probability: float | None = None
    ambiguous: int = 0

    @property
    def outcome(self) -> str:
        return "witness" if self.found else "exhausted"

    def to_dict(self):
        out = {"outcome": self.outcome, "max_len": self.max_len, "words_examined": self.examined,
               "boundary_ambiguous_words": self.ambiguous}
        if self.found:
            out.update(word=self.word, probability=self.probability)
        else:
            out["note"] = f"no word of length <= {self.max_len} meets the cut-point; longer words were not examined"
        return out


def find_witness(A, q: CutpointQuery, max_len: int, eps_prob: float = EPS_PROB) -> WitnessSearchResult:
    """First word (length-lexicographic) of length <= `max_len` in the cut-point language."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    examined = ambiguous = 0
    for length, p in probability_levels(A, max_len):
        hit = np.flatnonzero(q.member(p, eps_prob))
        if hit.size:
            j = int(hit[0])
            ambiguous += int(np.count_nonzero(q.ambiguous(p[:j + 1], eps_prob)))
            return WitnessSearchResult(True, max_len, examined + j + 1, word_at(j, length, A.alphabet),
                                       float(p[j]), ambiguous)
        examined += p.size
        ambiguous += int(np.count_nonzero(q.ambiguous(p, eps_prob)))
    return WitnessSearchResult(False, max_len, examined, ambiguous=ambiguous)


@dataclass
class RelationReport:
    relation: str
    consistent: bool
    max_len: int
    examined: int
    word: str | None = None
    member1: bool | None = None
    member2: bool | None = None
    strictness_witness: str | None = None

    def to_dict(self):
        out = {"relation": self.relation,
               "outcome": "consistent" if self.consistent else "refuted",
               "max_len": self.max_len, "words_examined": self.examined}
        if self.consistent:
            out["note"] = f"holds on all words of length <= {self.max_len}; this is not a proof"
        else:
            out.update(word=self.word, member1=self.member1, member2=self.member2)
        if self.relation == "proper-subset":
            out["strictness_witness"] = self.strictness_witness
        return out


def bounded_language_relation(A1, A2, q: CutpointQuery, relation: str, max_len: int,
                              eps_prob: float = EPS_PROB) -> RelationReport:
    """
    Look for a word of length <= `max_len` refuting ``L(A1) relation L(A2)``.

    For ``proper-subset`` a refutation is a word of L(A1) missing from L(A2);
    a word of L(A2) missing from L(A1) is reported as ``strictness_witness``
    when one is seen, but its absence refutes nothing.
    """
    if relation not in RELATIONS:
        raise ValueError(f"relation must be one of {RELATIONS}")
    if set(A1.alphabet) != set(A2.alphabet):
        raise AlphabetError("machines have different alphabets")
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    alphabet = A1.alphabet
    examined = 0
    strict_word = None
    levels = zip(probability_levels(A1, max_len, alphabet), probability_levels(A2, max_len, alphabet))
    for (length, p1), (_, p2) in levels:
        m1, m2 = q.member(p1, eps_prob), q.member(p2, eps_prob)
        bad = (m1 != m2) if relation == "equal" else (m1 & ~m2)
        if strict_word is None and relation == "proper-subset":
            extra = np.flatnonzero(m2 & ~m1)
            if extra.size:
                strict_word = word_at(int(extra[0]), length, alphabet)
        idx = np.flatnonzero(bad)
        if idx.size:
            j = int(idx[0])
            return RelationReport(relation, False, max_len, examined + j + 1,
                                  word_at(j, length, alphabet), bool(m1[j]), bool(m2[j]), strict_word)
        examined += p1.size
    return RelationReport(relation, True, max_len, examined, strictness_witness=strict_word)
