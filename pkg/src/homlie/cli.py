"""Command-line front end.

Exit codes: 0 when every verdict passes, 1 when a mathematical check fails,
2 when the input cannot be used (bad JSON, wrong schema, unmet precondition).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import algebra, cohom, deraut, fhg, matgrp
from .errors import ConsistencyError, HomLieError
from .exactnum import APPROX, EXACT, Matrix, matrix_from_json, matrix_to_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunReport:
    command: str
    verdicts: list[tuple[str, bool, str]] = field(default_factory=list)
    result: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return all(v[1] for v in self.verdicts)

    def to_json(self) -> dict:
        # elapsed_ms is left out so that identical inputs give identical bytes
        return {
            "command": self.command,
            "ok": self.ok,
            "verdicts": [{"name": n, "pass": p, "detail": d} for n, p, d in self.verdicts],
            "result": self.result,
        }

    def render(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'}"]
        width = max((len(n) for n, _, _ in self.verdicts), default=0)
        for name, passed, detail in self.verdicts:
            line = f"  {name.ljust(width)}  {'pass' if passed else 'FAIL'}"
            lines.append(f"{line}  {detail}" if detail else line)
        for key, value in self.result.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            lines.append(f"  {key}: {value}")
        lines.append(f"  ({self.elapsed_ms:.1f} ms)")
        return "\n".join(lines)


class InputError(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def _load_matrix(path: str, mode=None) -> Matrix:
    doc = _load(path)
    if isinstance(doc, dict) and mode is None:
        mode = doc.get("mode", EXACT)
    return matrix_from_json(doc, mode)


def _load_float_matrix(path: str) -> np.ndarray:
    return _load_matrix(path, APPROX).to_array()


def _exact_algebra(path: str) -> algebra.HomLieAlgebra:
    alg = algebra.algebra_from_json(_load(path))
    if alg.mode != EXACT:
        raise InputError("this command needs exact (rational) input")
    return alg


# -- commands --------------------------------------------------------------------


def cmd_check(args) -> RunReport:
    doc = _load(args.path)
    if isinstance(doc, dict) and "order" in doc:
        rep = fhg.check_axioms(fhg.group_from_json(doc))
        return RunReport("check", rep.verdicts(), {"kind": "group"})
    if isinstance(doc, dict) and "dim" in doc:
        alg = algebra.algebra_from_json(doc)
        rep = algebra.check_axioms(alg)
        result = {"kind": "algebra", "dim": alg.dim, "mode": alg.mode}
        result["witnesses"] = {k: w.to_json() for k, w in rep.witnesses.items()}
        return RunReport("check", rep.verdicts(), result)
    raise InputError("file is neither an algebra (needs 'dim') nor a group (needs 'order')")


def cmd_cohomology(args) -> RunReport:
    if args.rep_file:
        rep = cohom.representation_from_json(_load(args.rep_file))
        if rep.alg.mode != EXACT:
            raise InputError("cohomology needs exact (rational) input")
        kind = "file"
    else:
        alg = _exact_algebra(args.path)
        rep = cohom.adjoint_rep(alg) if args.rep == "adjoint" else cohom.trivial_rep(alg)
        kind = args.rep
    n = rep.alg.dim
    kmax = min(2, n) if args.max_degree is None else args.max_degree
    valid = cohom.check_representation(rep)
    verdicts = list(valid.verdicts())
    result = {"representation": kind, "max_degree": kmax}
    if not valid.ok:
        return RunReport("cohomology", verdicts, result)
    for k in range(max(kmax, 1)):
        sq = cohom.d_squared_check(rep, k)
        verdicts.append((f"d_squared_zero_k{k}", sq.ok, "" if sq.ok else f"max entry {sq.residual:.3e}"))
    if all(v[1] for v in verdicts):
        dims = cohom.cohomology_dims(rep, kmax)
        result["cohomology"] = [d.to_json() for d in dims]
    return RunReport("cohomology", verdicts, result)


def cmd_derivations(args) -> RunReport:
    alg = _exact_algebra(args.path)
    space = deraut.derivation_space(alg)
    ok = all(deraut.is_derivation(alg, D).ok for D in space.basis)
    return RunReport("derivations", [("basis_are_derivations", ok, "")], space.to_json())


def cmd_hexp(args) -> RunReport:
    S = matgrp.TwistedMatrixSpace(_load_float_matrix(args.beta))
    A = _load_float_matrix(args.matrix)
    out = matgrp.hexp(S, A, args.t)
    finite = bool(np.all(np.isfinite(out)))
    return RunReport("hexp", [("finite", finite, "")], {"t": args.t, "hexp": matrix_to_json(Matrix.from_array(out))})


def cmd_verify_commutator(args) -> RunReport:
    S = matgrp.TwistedMatrixSpace(_load_float_matrix(args.beta))
    A, B = _load_float_matrix(args.A), _load_float_matrix(args.B)
    try:
        chk = matgrp.commutator_fd_verify(S, A, B, args.step)
    except ConsistencyError as exc:
        return RunReport("verify-commutator", [("omega_forms_agree", False, str(exc))])
    bound = max(1e-5, 100 * args.step**2)
    verdicts = [
        ("omega_forms_agree", True, f"max gap {chk.form_gap:.3e}"),
        ("bracket_matches", chk.residual <= bound, f"residual {chk.residual:.3e} (bound {bound:.1e})"),
    ]
    return RunReport("verify-commutator", verdicts, chk.to_json())


def cmd_group_check(args) -> RunReport:
    rep = fhg.check_axioms(fhg.group_from_json(_load(args.path)))
    return RunReport("group check", rep.verdicts())


def cmd_group_weakhom(args) -> RunReport:
    G = fhg.group_from_json(_load(args.src))
    H = fhg.group_from_json(_load(args.dst))
    f = fhg.map_from_json(_load(args.map))
    rep = fhg.check_weak_hom(f, G, H)
    # only the weak-homomorphism verdict decides the exit code
    verdicts = [v for v in rep.verdicts() if v[0] in ("unit_preserved", "weak_homomorphism")]
    info = {k: rep[k] for k in ("homomorphism", "twist_commutes")}
    return RunReport("group weakhom", verdicts, info)


def cmd_group_adaction(args) -> RunReport:
    H = fhg.group_from_json(_load(args.path))
    axioms = fhg.check_axioms(H)
    if not axioms.ok:
        return RunReport("group adaction", axioms.verdicts())
    return RunReport("group adaction", fhg.tilde_ad_check(H).verdicts())


# -- wiring ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = argparse.ArgumentParser(prog="homlie", description="Checks for Hom-Lie algebras, matrix Hom-groups and finite Hom-groups.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="verify the axioms of an algebra or group file")
    c.add_argument("path")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions of a representation")
    c.add_argument("path", nargs="?")
    c.add_argument("--rep", choices=("adjoint", "trivial"), default="adjoint")
    c.add_argument("--rep-file", help="representation JSON (overrides PATH and --rep)")
    c.add_argument("--max-degree", type=int)
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("derivations", parents=[common], help="derivation space of an algebra")
    c.add_argument("path")
    c.set_defaults(func=cmd_derivations)

    c = sub.add_parser("hexp", parents=[common], help="Hom-exponential beta exp(t A beta^-1)")
    c.add_argument("--beta", required=True)
    c.add_argument("--matrix", required=True)
    c.add_argument("--t", type=float, default=1.0)
    c.set_defaults(func=cmd_hexp)

    c = sub.add_parser("verify-commutator", parents=[common], help="bracket from the group commutator")
    c.add_argument("--beta", required=True)
    c.add_argument("--A", required=True)
    c.add_argument("--B", required=True)
    c.add_argument("--step", type=float, default=1e-4)
    c.set_defaults(func=cmd_verify_commutator)

    g = sub.add_parser("group", help="finite Hom-group commands")
    gsub = g.add_subparsers(dest="group_command", required=True)
    c = gsub.add_parser("check", parents=[common])
    c.add_argument("path")
    c.set_defaults(func=cmd_group_check)
    c = gsub.add_parser("weakhom", parents=[common])
    c.add_argument("--src", required=True)
    c.add_argument("--dst", required=True)
    c.add_argument("--map", required=True)
    c.set_defaults(func=cmd_group_weakhom)
    c = gsub.add_parser("adaction", parents=[common])
    c.add_argument("path")
    c.set_defaults(func=cmd_group_adaction)
    return p


def _threads_setting() -> int | None:
    raw = os.environ.get("HOMLIE_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"HOMLIE_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise InputError(f"HOMLIE_THREADS must be a positive integer, got {raw!r}")
    return n


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "cohomology" and not (args.path or args.rep_file):
        parser.error("cohomology needs PATH or --rep-file")
    name = args.command if args.command != "group" else f"group {args.group_command}"
    start = time.perf_counter()
    try:
        _threads_setting()
        report = args.func(args)
    except (InputError, HomLieError) as exc:
        kind = type(exc).__name__ if isinstance(exc, HomLieError) else "InputError"
        if args.json:
            print(json.dumps({"command": name, "ok": False, "error": kind, "message": str(exc)}, indent=2))
        else:
            print(f"{name}: input error ({kind}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.render())
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
