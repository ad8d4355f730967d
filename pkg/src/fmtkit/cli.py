"""Command line entry point.

Every command writes one JSON report (to ``--out``, or to standard output
when no path is given) and prints a short summary.  Exit codes: 0 pass,
1 property violation, 2 input error, 3 resource budget exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from fmtkit.errors import FmtkitError, FormulaSyntaxError, InvalidCodeError, ResourceError
from fmtkit.reports import EXIT_INPUT, EXIT_PASS, EXIT_RESOURCE, EXIT_VIOLATION, dumps, make_report

DEFAULT_CAPS = {"m": 5, "n": 8}
DEFAULT_SIG = "pred edge/2"


class InputError(FmtkitError):
    """Bad command line input (unreadable file, bound over the cap, ...)."""


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    out: str | None = None
    seed: int = 0
    unsafe_bounds: bool = False

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def caps() -> dict:
    return {
        "m": int(os.environ.get("FMTKIT_MAX_M", DEFAULT_CAPS["m"])),
        "n": int(os.environ.get("FMTKIT_MAX_N", DEFAULT_CAPS["n"])),
    }


def check_caps(cfg: RunConfig) -> None:
    if cfg.unsafe_bounds:
        return
    limit = caps()
    for key, cap in limit.items():
        value = cfg.bounds.get(key)
        if value is not None and value > cap:
            raise InputError(f"bound {key} = {value} exceeds the cap of {cap}; pass --unsafe-bounds to override")


# -- input helpers -------------------------------------------------------------------------------


def _text_or_file(value: str) -> str:
    p = Path(value)
    if "\n" not in value and len(value) < 4096 and p.is_file():
        return p.read_text(encoding="utf-8")
    return value


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def load_theory(value: str):
    from fmtkit.structures.theory import graph_theory, parse_theory

    if value == "graphs":
        return graph_theory()
    return parse_theory(_read_file(value))


def load_lines(path: str) -> list[str]:
    lines = []
    for raw in _read_file(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


# -- commands ------------------------------------------------------------------------------------
# each returns (exit code, result dict, one-line summary)


def cmd_normalize(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.fol import classify, free_variables, parse_formula, parse_signature, relativize, render_formula, to_prenex

    sig = parse_signature(args.sig)
    f = parse_formula(args.formula, sig)
    prenex, cls = to_prenex(f)
    result = {
        "input": render_formula(f),
        "prenex": render_formula(prenex),
        "class": str(classify(f)),
        "prefix_class": str(cls),
        "free_variables": list(free_variables(f)),
    }
    if args.relativize:
        result["relativized"] = render_formula(relativize(f, args.relativize))
    return EXIT_PASS, result, f"{result['class']}: {result['prenex']}"


def cmd_morleyize(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.fol import parse_formula, parse_signature, render_formula
    from fmtkit.morleyize import build_expansion, expand_structure
    from fmtkit.structures import evaluate, extension, parse_structure, render_structure

    sig = parse_signature(args.sig)
    texts = list(args.formula or []) + (load_lines(args.corpus) if args.corpus else [])
    corpus = [parse_formula(t, sig) for t in texts]
    exp, axioms = build_expansion(sig, corpus, args.mode)
    result = {"manifest": exp.manifest(), "axioms": [render_formula(a) for a in axioms]}
    code = EXIT_PASS
    if args.structure:
        M = parse_structure(_text_or_file(args.structure), sig)
        E = expand_structure(M, exp)
        failed = [render_formula(a) for a in axioms if not evaluate(E, a)]
        mismatched = [
            p.name for p in exp.added
            if extension(E, p.atom(), p.variables) != extension(M, p.formula, p.variables)
        ]
        result["expansion"] = render_structure(E)
        result["failed_axioms"] = failed
        result["mismatched_predicates"] = mismatched
        if failed or mismatched:
            code = EXIT_VIOLATION
    return code, result, f"{len(exp.added)} predicates, {len(axioms)} axioms"


def cmd_encode(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.hf import encode, parse_hf, render_code

    try:
        a = parse_hf(args.set)
    except ValueError as e:
        raise InputError(str(e)) from e
    c = encode(a)
    return EXIT_PASS, {"set": str(a), "code": render_code(c), "tc_size": a.tc_size}, render_code(c)


def cmd_decode(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.hf import decode, parse_code, render_code

    try:
        c = parse_code(args.code)
    except ValueError as e:
        raise InputError(str(e)) from e
    a = decode(c)
    return EXIT_PASS, {"code": render_code(c), "set": str(a)}, str(a)


def cmd_verify_coding(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.hf import verify_coding_isomorphism

    rep = verify_coding_isomorphism(args.m, cap=args.m if cfg.unsafe_bounds else None)
    code = EXIT_PASS if rep.isomorphic else EXIT_VIOLATION
    summary = f"m={rep.bound}: {rep.code_count} codes, {rep.class_count} classes, {rep.hf_count} sets, isomorphic={rep.isomorphic}"
    return code, rep.to_json(), summary


def cmd_verify_transfer(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.fol import parse_formula
    from fmtkit.hf import SET_SIG, default_corpus, verify_truth_transfer

    corpus = [parse_formula(t, SET_SIG) for t in load_lines(args.corpus)] if args.corpus else default_corpus()
    rep = verify_truth_transfer(corpus, args.m, args.margin, cap=args.m if cfg.unsafe_bounds else None)
    code = EXIT_PASS if not rep.mismatches and rep.agreements == rep.checks else EXIT_VIOLATION
    return code, rep.to_json(), f"{rep.agreements}/{rep.checks} agreements over {len(corpus)} formulas"


def cmd_ec_search(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.companion import ec_chain, is_ec
    from fmtkit.structures import parse_structure

    T = load_theory(args.theory)
    M = parse_structure(_text_or_file(args.structure), T.sig)
    if args.chain:
        res = ec_chain(M, T, budget=args.budget, rank=args.rank)
        code = EXIT_PASS if res.ec else EXIT_VIOLATION
        return code, res.to_json(), f"chain of {len(res.stages)} stages, ec={res.ec}, partial={res.partial}"
    v = is_ec(M, T, n=args.n, r=args.rank)
    code = EXIT_PASS if v.verdict else EXIT_VIOLATION
    summary = f"ec={v.verdict}" + ("" if v.witness is None else f", witness {v.to_json()['witness']['formula']}")
    return code, v.to_json(), summary


def cmd_robinson(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.companion import robinson_check

    T = load_theory(args.theory)
    rep = robinson_check(T, args.n, args.rank)
    code = EXIT_PASS if rep.model_complete else EXIT_VIOLATION
    return code, rep.to_json(), f"model complete within bounds: {rep.model_complete} ({len(rep.verdicts)} models)"


def cmd_kaiser_hull(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.companion import kaiser_hull_enumerate
    from fmtkit.structures import evaluate

    T = load_theory(args.theory)
    rep = kaiser_hull_enumerate(T, size=args.size, n=args.n, r=args.rank)
    ok = all(evaluate(M, s) for s in rep.sentences for M in rep.ec_structures)
    code = EXIT_PASS if ok else EXIT_VIOLATION
    return code, rep.to_json(), f"{len(rep.sentences)} sentences over {len(rep.ec_structures)} ec structures"


def cmd_companion_check(cfg: RunConfig, args) -> tuple[int, dict, str]:
    from fmtkit.companion import model_companion_check

    T = load_theory(args.theory)
    S = load_theory(args.tstar)
    rep = model_companion_check(T, S, n=args.n, r=args.rank, variables=args.variables, size=args.size, slack=args.slack)
    code = EXIT_PASS if rep.passed else EXIT_VIOLATION
    summary = ", ".join(f"{c.name}={'pass' if c.passed else 'fail'}" for c in rep.checks)
    return code, rep.to_json(), summary


COMMANDS: dict[str, Callable] = {
    "normalize": cmd_normalize,
    "morleyize": cmd_morleyize,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "verify-coding": cmd_verify_coding,
    "verify-transfer": cmd_verify_transfer,
    "ec-search": cmd_ec_search,
    "robinson": cmd_robinson,
    "kaiser-hull": cmd_kaiser_hull,
    "companion-check": cmd_companion_check,
}

INPUT_KEYS = ("formula", "sig", "corpus", "structure", "theory", "tstar", "set", "code", "mode", "relativize")
BOUND_KEYS = ("m", "n", "rank", "size", "variables", "margin", "budget", "slack", "chain")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="report path (default: standard output)")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report")
    common.add_argument("--unsafe-bounds", action="store_true", help="lift the hard caps on m and n")

    p = argparse.ArgumentParser(prog="fmtkit", description="Bounded finite model theory checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="prenex form and complexity class")
    s.add_argument("--formula", required=True)
    s.add_argument("--sig", default=DEFAULT_SIG)
    s.add_argument("--relativize", metavar="GUARD")

    s = sub.add_parser("morleyize", parents=[common], help="definitional expansion of a corpus")
    s.add_argument("--formula", action="append")
    s.add_argument("--corpus", help="file with one formula per line")
    s.add_argument("--sig", default=DEFAULT_SIG)
    s.add_argument("--mode", choices=("full", "delta0"), default="full")
    s.add_argument("--structure", help="structure text or file to expand")

    s = sub.add_parser("encode", parents=[common], help="canonical code of a set")
    s.add_argument("--set", required=True)

    s = sub.add_parser("decode", parents=[common], help="set coded by a code")
    s.add_argument("--code", required=True)

    s = sub.add_parser("verify-coding", parents=[common], help="codes modulo equality against sets")
    s.add_argument("--m", type=int, required=True)

    s = sub.add_parser("verify-transfer", parents=[common], help="truth of formulas on sets and on codes")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--margin", type=int, default=1)
    s.add_argument("--corpus", help="file with one membership formula per line")

    s = sub.add_parser("ec-search", parents=[common], help="existential closedness of a structure")
    s.add_argument("--theory", default="graphs", help="theory file, or 'graphs'")
    s.add_argument("--structure", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--rank", type=int, default=1)
    s.add_argument("--chain", action="store_true", help="grow the structure until it is ec")
    s.add_argument("--budget", type=int, default=20, help="size budget of the chain")

    s = sub.add_parser("robinson", parents=[common], help="is every bounded model ec")
    s.add_argument("--theory", default="graphs")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--rank", type=int, default=1)

    s = sub.add_parser("kaiser-hull", parents=[common], help="forall-exists sentences true in the ec structures")
    s.add_argument("--theory", default="graphs")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--rank", type=int, default=1)
    s.add_argument("--size", type=int, default=2)

    s = sub.add_parser("companion-check", parents=[common], help="bounded model companion checks")
    s.add_argument("--theory", default="graphs")
    s.add_argument("--tstar", required=True)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--rank", type=int, default=1)
    s.add_argument("--size", type=int, default=2)
    s.add_argument("--variables", type=int, default=2)
    s.add_argument("--slack", type=int, default=1)
    return p


def _error(e: BaseException) -> dict:
    out = {"type": type(e).__name__, "message": str(e)}
    if isinstance(e, InvalidCodeError):
        out["clauses"] = list(e.clauses)
    if isinstance(e, FormulaSyntaxError):
        out["position"] = e.position
    return out


def run(cfg: RunConfig, args) -> tuple[int, dict, str]:
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    result = error = None
    try:
        check_caps(cfg)
        code, result, summary = COMMANDS[cfg.command](cfg, args)
    except ResourceError as e:
        code, error, summary = EXIT_RESOURCE, _error(e), f"resource budget exhausted: {e}"
    except (FmtkitError, ValueError) as e:
        code, error, summary = EXIT_INPUT, _error(e), f"input error: {e}"
    report = make_report(cfg.command, cfg.to_json(), code, result, error, started, time.perf_counter() - t0)
    return code, report, summary


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    vals = vars(args)
    cfg = RunConfig(
        command=args.command,
        inputs={k: vals[k] for k in INPUT_KEYS if vals.get(k) is not None},
        bounds={k: vals[k] for k in BOUND_KEYS if vals.get(k) is not None},
        out=args.out,
        seed=args.seed,
        unsafe_bounds=args.unsafe_bounds,
    )
    code, report, summary = run(cfg, args)
    text = dumps(report)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"cannot write report: {e}", file=sys.stderr)
            return EXIT_INPUT
        print(f"{cfg.command}: {report['status']}: {summary}")
    else:
        sys.stdout.write(text)
        print(f"{cfg.command}: {report['status']}: {summary}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
