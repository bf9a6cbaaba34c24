"""
``qfa`` command-line front end.

Every command prints one JSON report on stdout.  Exit codes: 0 success /
equivalent / valid / witness found, 1 not-equivalent / invalid / exhausted /
refuted, 2 usage, parse or argument errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import automata, generate, io, languages, linalg
from .automata import AlphabetError, MissingGramError, ProbabilityError
from .equivalence import equivalence_bound, equivalent

log = logging.getLogger("mlqfa")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tolerances(args):
    return {"eps_unitary": args.eps_unitary, "eps_span": args.eps_span, "eps_prob": args.eps_prob}


def _load_valid(path, args):
    machine = io.load(path)
    report = automata.validate(machine, args.eps_unitary)
    if not report.ok:
        raise UsageError(f"{path}: invalid machine: " + "; ".join(report.issues))
    return machine


def _emit_machine(machine, args, result):
    if args.output:
        io.save(machine, args.output)
        result["written"] = args.output
    else:
        result["machine"] = io.machine_to_dict(machine)
    result["states"] = machine.n
    result["kind"] = machine.kind
    return result


def cmd_validate(args):
    machine = io.load(args.file)
    report = automata.validate(machine, args.eps_unitary)
    return report.to_dict(), 0 if report.ok else 1


def cmd_prob(args):
    A = _load_valid(args.file, args)
    if A.kind == automata.MMQFA:
        r = automata.accept_prob_mmqfa(A, args.word, args.eps_prob)
        return {"word": args.word, "accept": r.accept, "reject": r.reject, "residual": r.residual}, 0
    return {"word": args.word, "accept": automata.accept_prob_qfa(A, args.word, args.eps_prob)}, 0


def cmd_equiv(args):
    A1 = _load_valid(args.file1, args)
    A2 = _load_valid(args.file2, args)
    try:
        verdict = equivalent(A1, A2, args.method, args.t, args.eps_prob, args.eps_span)
    except (TypeError, AlphabetError) as e:
        raise UsageError(str(e)) from e
    log.debug("equivalence stats: %s", verdict.stats)
    result = verdict.to_dict()
    result["bound"] = equivalence_bound(A1.n, A2.n, len(A1.alphabet), A1.k, A2.k)
    return result, 0 if verdict.equivalent else 1


def cmd_bound(args):
    try:
        b = equivalence_bound(args.n1, args.n2, args.sigma, args.k1, args.k2)
    except ValueError as e:
        raise UsageError(str(e)) from e
    return {"bound": b}, 0


def cmd_witness(args):
    A = _load_valid(args.file, args)
    try:
        q = languages.CutpointQuery(args.lam, args.strict)
        res = languages.find_witness(A, q, args.max_len, args.eps_prob)
    except ValueError as e:
        raise UsageError(str(e)) from e
    out = {"query": q.to_dict()}
    out.update(res.to_dict())
    return out, 0 if res.found else 1


def cmd_relation(args):
    A1 = _load_valid(args.file1, args)
    A2 = _load_valid(args.file2, args)
    try:
        q = languages.CutpointQuery(args.lam, args.strict)
        res = languages.bounded_language_relation(A1, A2, q, args.relation, args.max_len, args.eps_prob)
    except ValueError as e:
        raise UsageError(str(e)) from e
    out = {"query": q.to_dict()}
    out.update(res.to_dict())
    return out, 0 if res.consistent else 1


def cmd_embed(args):
    A = _load_valid(args.file, args)
    if A.kind != automata.QFA:
        raise UsageError("embed needs a qfa machine")
    return _emit_machine(automata.embed_qfa_to_mmqfa(A), args, {}), 0


def cmd_oplus(args):
    A1 = _load_valid(args.file1, args)
    A2 = _load_valid(args.file2, args)
    try:
        machine = automata.oplus(A1, A2, args.initial)
    except (TypeError, AlphabetError) as e:
        raise UsageError(str(e)) from e
    return _emit_machine(machine, args, {"initial": args.initial}), 0


def cmd_random(args):
    try:
        machine = generate.random_machine(args.kind, args.n, args.k, args.sigma, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    return _emit_machine(machine, args, {"seed": args.seed}), 0


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--eps-unitary", type=float, default=linalg.EPS_UNITARY)
    common.add_argument("--eps-span", type=float, default=linalg.EPS_SPAN)
    common.add_argument("--eps-prob", type=float, default=linalg.EPS_PROB)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="qfa", description="Multi-letter quantum finite automata toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a machine file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("prob", parents=[common], help="acceptance probability of a word")
    s.add_argument("file")
    s.add_argument("word", nargs="?", default="")
    s.set_defaults(func=cmd_prob)

    s = sub.add_parser("equiv", parents=[common], help="decide equivalence of two machines")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--method", choices=("naive", "span"), default="span")
    s.add_argument("-t", type=int, default=None, help="length bound for --method naive")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("bound", parents=[common], help="equivalence length bound")
    for name in ("n1", "n2", "sigma", "k1", "k2"):
        s.add_argument(name, type=int)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("witness", parents=[common], help="search the cut-point language")
    s.add_argument("file")
    s.add_argument("lam", type=float, metavar="lambda")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("relation", parents=[common], help="bounded check of a cut-point language relation")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("lam", type=float, metavar="lambda")
    s.add_argument("--relation", choices=languages.RELATIONS, default="equal")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(func=cmd_relation)

    s = sub.add_parser("embed", parents=[common], help="QFA to equivalent MMQFA")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("oplus", parents=[common], help="diagonal sum of two machines")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--initial", choices=("rho", "pi"), default="rho")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_oplus)

    s = sub.add_parser("random", parents=[common], help="seeded random machine")
    s.add_argument("kind", choices=(automata.QFA, automata.MMQFA))
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.add_argument("sigma", type=int)
    s.add_argument("seed", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    report = {"command": argv[:1][0] if argv else None, "argv": argv}
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(message)s")
        report["tolerances"] = _tolerances(args)
        result, code = args.func(args)
        report["result"] = result
    except (UsageError, io.MachineFormatError, AlphabetError, MissingGramError,
            ProbabilityError, OSError) as e:
        msg = str(e) if not isinstance(e, KeyError) else f"missing transition for gram {e.args[0]!r}"
        print(f"qfa: error: {msg}", file=sys.stderr)
        report["error"] = msg
        code = 2
    report["exit_code"] = code
    print(json.dumps(report, indent=1))
    return code


if __name__ == "__main__":
    sys.exit(main())
