"""Command-line front end.

    jacinv check FILE                 Jacobian determinant: M and violations
    jacinv invert FILE                inverse by homogeneous blocks (or oracle)
    jacinv verify FILE_F FILE_G       exact check of G∘F = id and F∘G = id
    jacinv blocks --n N --degree D    block matrix of a linear map
    jacinv detpattern --n N --max-degree D
    jacinv gen tame|bcw|sec42         sample maps with known inverses

Exit codes: 0 success, 1 domain error (non-constant Jacobian, singular linear
part, cap reached, failed verification), 2 usage or parse error.

Every command accepts ``--json``.  Rationals are always strings ``"p/q"`` (or
``"p"``); polynomials are lists of ``{"exponent": [...], "coefficient": "p/q"}``
in canonical order.  The README documents the per-command fields.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from .blocks import block_inverse, build_block, det_block, det_pattern, monomials
from .errors import JacinvError, MapSyntaxError, NonConstantJacobian
from .generators import (
    bcw_rank_one_pair,
    gen_bcw_rank_one,
    random_bcw_rank_one,
    random_section42,
    sample_tame,
)
from .inverter import (
    Status,
    invert_block_scheme,
    invert_oracle,
    invert_special_42,
)
from .jacobi import check_jacobi
from .matrix import RationalMatrix
from .poly import PolyMap, Polynomial
from .textformat import format_map, format_polynomial, format_rational, parse_map

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- helpers ----------------------------------------------------------------

def _q(x) -> str:
    return format_rational(x)


def _poly_json(p: Polynomial) -> list[dict]:
    return [{"exponent": list(e), "coefficient": _q(c)} for e, c in p.items()]


def _map_json(F: PolyMap) -> list[list[dict]]:
    return [_poly_json(c) for c in F]


def _matrix_json(A: RationalMatrix) -> list[list[str]]:
    return [[_q(x) for x in row] for row in A]


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    text = _read(path)
    try:
        return parse_map(text)
    except MapSyntaxError as exc:
        exc.path = path
        raise


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")


def _mono(e, var: str = "x") -> str:
    return format_polynomial(Polynomial.monomial(e), var)


# -- commands ---------------------------------------------------------------

def cmd_check(args) -> int:
    doc = _load(args.file)
    report = check_jacobi(doc.map)
    v = doc.input_letter
    lines = [f"M = {_q(report.principle_value)}"]
    if report.violations:
        lines.append(f"violations: {len(report.violations)}")
        lines += [f"  {_mono(e, v)}: {_q(c)}" for e, c in report.violations]
    else:
        lines.append("violations: none")
    ok = report.is_constant and report.principle_value != 0
    if report.principle_value == 0:
        lines.append("linear part is singular")
    payload = {
        "command": "check",
        "num_vars": doc.num_vars,
        "principle_value": _q(report.principle_value),
        "constant": report.is_constant,
        "violations": [{"exponent": list(e), "value": _q(c)} for e, c in report.violations],
        "determinant": _poly_json(report.determinant),
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_DOMAIN


def _residuum_json(result) -> dict:
    out = {}
    for d, table in sorted(result.residuum.items()):
        out[str(d)] = [
            {"component": i + 1, "variable": j + 1,
             "monomials": [list(m) for m in vec.monomials],
             "values": [_q(x) for x in vec.values]}
            for (i, j), vec in sorted(table.items())
        ]
    return out


def _residuum_text(result, var: str) -> list[str]:
    lines = []
    for d, table in sorted(result.residuum.items()):
        lines.append(f"# residuum, degree {d} (feeds inverse degree {d + 1})")
        for (i, j), vec in sorted(table.items()):
            vals = "  ".join(f"{_mono(m, var)}:{_q(x)}" for m, x in zip(vec.monomials, vec.values))
            lines.append(f"#   i={i + 1} j={j + 1} {'zero' if vec.is_zero else vals}")
    return lines


def _result_payload(result, out_letter: str, in_letter: str, emit_residuum: bool) -> dict:
    payload = {
        "method": result.method,
        "status": result.status.value,
        "certificate": result.certificate,
        "degree": result.degree,
        "computed_degree": result.computed_degree,
        "cap": result.cap,
        "principle_value": _q(result.principle_value),
        "inverse": _map_json(result.inverse),
        "text": format_map(result.inverse, in_letter, out_letter),
        "detail": result.detail,
    }
    if emit_residuum and result.residuum:
        payload["residuum"] = _residuum_json(result)
    return payload


def _status_line(result) -> str:
    line = f"# status: {result.status.value}"
    if result.status is Status.CERTIFIED:
        line += f", degree {result.degree}"
    else:
        line += f", computed through degree {result.computed_degree} (cap {result.cap})"
    if result.detail:
        line += f"; {result.detail}"
    return line


def cmd_invert(args) -> int:
    doc = _load(args.file)
    F = doc.map
    out_l, in_l = doc.output_letter, doc.input_letter
    if args.cap is not None and args.cap < 1:
        raise UsageError("--cap must be at least 1")
    runs = []
    if args.method in ("block", "both"):
        runs.append(invert_block_scheme(F, args.cap, solver=args.solver, exhaust=args.exhaust))
    if args.method in ("oracle", "both"):
        runs.append(invert_oracle(F, args.cap))

    agree = True
    if len(runs) == 2:
        a, b = runs
        common = set(a.inverse_blocks) & set(b.inverse_blocks)
        agree = all(a.inverse_blocks[d] == b.inverse_blocks[d] for d in common)

    main_run = runs[0]
    lines = [format_map(main_run.inverse, in_l, out_l).rstrip("\n"), _status_line(main_run)]
    if len(runs) == 2:
        lines.append(f"# oracle {runs[1].status.value}; methods {'agree' if agree else 'DISAGREE'}")
    if args.emit_residuum and main_run.residuum:
        lines += _residuum_text(main_run, in_l)
    payload = {
        "command": "invert",
        "num_vars": F.num_vars,
        "runs": [_result_payload(r, out_l, in_l, args.emit_residuum) for r in runs],
        "agree": agree,
    }
    _emit(args, payload, "\n".join(lines))
    ok = agree and all(r.status is Status.CERTIFIED for r in runs)
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_verify(args) -> int:
    F = _load(args.file_f).map
    G = _load(args.file_g).map
    if F.num_vars != G.num_vars:
        raise UsageError("the two maps have different numbers of variables")
    left = G.compose(F).is_identity()
    right = F.compose(G).is_identity()
    payload = {"command": "verify", "g_after_f": left, "f_after_g": right, "inverse": left and right}
    text = f"G∘F = id: {left}\nF∘G = id: {right}\ninverse: {left and right}"
    _emit(args, payload, text)
    return EXIT_OK if left and right else EXIT_DOMAIN


def _linear_from_file(path: str, n: int) -> RationalMatrix:
    F = _load(path).map
    if F.num_vars != n:
        raise UsageError(f"--linear map has {F.num_vars} variables, expected {n}")
    if F.degree > 1:
        raise UsageError("--linear map must be linear")
    return F.linear_part()


def cmd_blocks(args) -> int:
    n, d = args.n, args.degree
    if n < 1 or d < 1:
        raise UsageError("--n and --degree must be positive")
    index = monomials(n, d)
    payload = {
        "command": "blocks", "num_vars": n, "degree": d,
        "size": len(index), "monomials": [list(m) for m in index],
    }
    lines = [f"degree {d} block in {n} variables: size {len(index)}",
             "monomials: " + ", ".join(_mono(m) for m in index)]
    if args.linear:
        L = _linear_from_file(args.linear, n)
        U = build_block(L, d)
        V = block_inverse(U, L)
        det = det_block(L, d)
        payload.update({
            "linear": _matrix_json(L), "U": _matrix_json(U.entries),
            "V": _matrix_json(V.entries), "det": _q(det), "det_linear": _q(L.det()),
            "uv_identity": True,
        })
        lines.append("U =")
        lines += ["  " + "  ".join(_q(x) for x in row) for row in U.entries]
        lines.append("V = U^-1 =")
        lines += ["  " + "  ".join(_q(x) for x in row) for row in V.entries]
        lines.append(f"det U = {_q(det)} = ({_q(L.det())})^{det_pattern(n, d)[-1][2]}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_detpattern(args) -> int:
    n, D = args.n, args.max_degree
    if n < 1 or D < 1:
        raise UsageError("--n and --max-degree must be positive")
    rows = det_pattern(n, D)
    rng = random.Random(args.seed)
    while True:
        L = RationalMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if L.det() != 0:
            break
    checked = [(d, size, power, det_block(L, d)) for d, size, power in rows]
    lines = ["degree  size  power"] + [f"{d:>6}  {s:>4}  {p:>5}" for d, s, p in rows]
    lines.append(f"# det U = (det L)^power confirmed for a random L with det L = {_q(L.det())}")
    payload = {
        "command": "detpattern", "num_vars": n,
        "rows": [{"degree": d, "size": s, "power": p, "det": _q(v)} for d, s, p, v in checked],
        "sample_linear": _matrix_json(L), "sample_det": _q(L.det()),
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = args.seed
    if args.family == "tame":
        n = args.n if args.n is not None else 2
        if n < 2:
            raise UsageError("tame maps need --n >= 2")
        _, F, G, _ = sample_tame(n, seed, scaled=args.scaled)
    elif args.family == "bcw":
        n = args.n if args.n is not None else 3
        if n < 2:
            raise UsageError("rank-one cubic maps need --n >= 2")
        ell, c = random_bcw_rank_one(n, seed)
        F = gen_bcw_rank_one(n, ell, c)
        _, G = bcw_rank_one_pair(n, ell, c)
    else:
        k = args.degree if args.degree is not None else 3
        if k < 1:
            raise UsageError("--degree must be at least 1")
        F = random_section42(k, seed)
        G = invert_special_42(F[0], F[1])
    if args.inverse_out:
        try:
            with open(args.inverse_out, "w", encoding="utf-8") as fh:
                fh.write(format_map(G, "x", "u"))
        except OSError as exc:
            raise UsageError(f"cannot write {args.inverse_out}: {exc.strerror}") from exc
    header = f"# {args.family} map, seed {seed}\n"
    payload = {
        "command": "gen", "family": args.family, "seed": seed, "num_vars": F.num_vars,
        "map": _map_json(F), "inverse": _map_json(G), "text": format_map(F),
    }
    _emit(args, payload, header + format_map(F))
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacinv", description="Exact inversion of polynomial maps.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="Jacobian determinant conditions")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invert", parents=[common], help="compute the inverse map")
    p.add_argument("file")
    p.add_argument("--cap", type=int, help="largest inverse degree to compute (default deg^(n-1))")
    p.add_argument("--method", choices=("block", "oracle", "both"), default="block")
    p.add_argument("--solver", choices=("transpose", "elimination"), default="transpose")
    p.add_argument("--emit-residuum", action="store_true", help="print residuum vectors")
    p.add_argument("--exhaust", action="store_true", help="keep computing blocks up to the cap")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", parents=[common], help="check that two maps are inverse")
    p.add_argument("file_f")
    p.add_argument("file_g")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("blocks", parents=[common], help="homogeneous block of a linear map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--linear", help="map file holding a linear map")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("detpattern", parents=[common], help="block sizes and determinant powers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for the sample linear map")
    p.set_defaults(func=cmd_detpattern)

    p = sub.add_parser("gen", parents=[common], help="generate a map with known inverse")
    p.add_argument("family", choices=("tame", "bcw", "sec42"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, help="number of variables (tame, bcw)")
    p.add_argument("--degree", type=int, help="degree of f (sec42)")
    p.add_argument("--scaled", action="store_true", help="tame: allow det J != 1")
    p.add_argument("--inverse-out", help="write the known inverse to this file")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MapSyntaxError as exc:
        where = getattr(exc, "path", "<input>")
        print(f"jacinv: error: {where}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"jacinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConstantJacobian as exc:
        print(f"jacinv: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except JacinvError as exc:
        print(f"jacinv: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
