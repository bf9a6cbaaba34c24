"""
JSON machine files.

Layout::

    {"kind": "qfa" | "mmqfa", "k": 2, "alphabet": ["a", "b"], "states": 2,
     "accepting": [1], "rejecting": [...],            # rejecting: mmqfa only
     "initial": [[re, im], ...],
     "transitions": {"_a": [[[re, im], ...], ...], ...}}

Gram keys use ``_`` for the blank and ``<`` / ``>`` for the end-markers.
"""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .automata import MMQFA, QFA, KLetterMMQFA, KLetterQFA


class MachineFormatError(ValueError):
    pass


def _pairs(a) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _complex(x, what, ndim):
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as e:
        raise MachineFormatError(f"{what}: expected nested [re, im] pairs") from e
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise MachineFormatError(f"{what}: expected nested [re, im] pairs of depth {ndim}")
    return arr[..., 0] + 1j * arr[..., 1]


def machine_to_dict(machine) -> dict:
    d = {
        "kind": machine.kind,
        "k": machine.k,
        "alphabet": list(machine.alphabet),
        "states": machine.n,
        "accepting": sorted(machine.accepting),
    }
    if machine.kind == MMQFA:
        d["rejecting"] = sorted(machine.rejecting)
    d["initial"] = _pairs(machine.initial)
    d["transitions"] = {g: _pairs(machine.transitions[g]) for g in sorted(machine.transitions)}
    return d


def machine_from_dict(d):
    if not isinstance(d, dict):
        raise MachineFormatError("machine file must hold a JSON object")
    try:
        kind = d["kind"]
        k = d["k"]
        alphabet = d["alphabet"]
        n = d["states"]
        accepting = d["accepting"]
        initial = d["initial"]
        transitions = d["transitions"]
    except KeyError as e:
        raise MachineFormatError(f"missing field {e.args[0]!r}") from None
    if kind not in (QFA, MMQFA):
        raise MachineFormatError(f"kind must be 'qfa' or 'mmqfa', got {kind!r}")
    if not isinstance(k, int) or not isinstance(n, int) or isinstance(k, bool) or isinstance(n, bool):
        raise MachineFormatError("'k' and 'states' must be integers")
    if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
        raise MachineFormatError("'alphabet' must be a list of strings")
    if not isinstance(transitions, dict):
        raise MachineFormatError("'transitions' must be an object keyed by gram")

    def indices(xs, name):
        if not isinstance(xs, list) or not all(isinstance(q, int) and not isinstance(q, bool) for q in xs):
            raise MachineFormatError(f"'{name}' must be a list of state indices")
        return xs

    table = {g: _complex(M, f"transition {g!r}", 2) for g, M in transitions.items()}
    init = _complex(initial, "initial", 1)
    args = (k, alphabet, n, indices(accepting, "accepting"), init, table)
    if kind == QFA:
        if "rejecting" in d:
            raise MachineFormatError("'rejecting' is only allowed for mmqfa machines")
        return KLetterQFA(*args)
    return KLetterMMQFA(*args, rejecting=indices(d.get("rejecting", []), "rejecting"))


def dumps(machine) -> str:
    return json.dumps(machine_to_dict(machine), indent=1) + "\n"


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise MachineFormatError(f"malformed JSON: {e}") from e
    return machine_from_dict(d)


def load(path):
    with open(path, encoding="utf-8") as f:
        return loads(f.read())


def save(machine, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(machine))


def corpus_path(name: str):
    """Path of a machine file shipped with the package, e.g. ``'ends_with_a'``."""
    return resources.files("mlqfa") / "data" / f"{name}.json"


def load_corpus(name: str):
    return loads(corpus_path(name).read_text(encoding="utf-8"))
