"""
Command-line front end: dioph reduce|structure|solve FILE.

Input is either plain text (a line "m n" followed by m rows of n integers)
or JSON ({"matrix": [[...], ...]}, with large entries allowed as decimal
strings). Reports go to stdout as tables, or as JSON with --json.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

try:
    import pandas as pd
    HAS_PANDAS = True
except ImportError:
    HAS_PANDAS = False

from .config import Settings, load_settings
from .exact_matrix import RingMatrix
from .exceptions import (
    DiophantineError,
    InputFormatError,
    InvalidArgument,
    NotPrimeError,
    RankOutOfScope,
    VerificationError,
)
from .lattice import LatticeBasis, QuotientStructure, analyze, m_basis, u_basis
from .lift import lift_by_elementary_divisors, lift_by_invariant_factors, lift_prime_at_a_time
from .reduce import reduce_matrix
from .ring import IntegerRing, ZZ
from .solve import nullspace_basis_direct, nullspace_basis_snf, prime_case_basis
from .verify import brute_force_kernel_structure, is_solution, quotient_invariants_oracle, same_lattice

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"
logger = logging.getLogger(__name__)

METHODS = ("direct", "snf", "lift-inv", "lift-elem", "lift-prime", "prime-d")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


def _parse_int(token: Any, where: str) -> int:
    if isinstance(token, bool):
        raise InputFormatError(f"{where}: expected an integer, got {token!r}")
    if isinstance(token, int):
        return token
    if isinstance(token, str):
        try:
            return int(token.strip())
        except ValueError:
            pass
    raise InputFormatError(f"{where}: expected an integer, got {token!r}")


def _parse_json(text: str) -> List[List[int]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from None
    rows = payload.get("matrix") if isinstance(payload, dict) else None
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise InputFormatError('JSON input needs a "matrix" field holding an array of arrays')
    return [[_parse_int(x, f"row {i + 1}") for x in row] for i, row in enumerate(rows)]


def _parse_text(text: str) -> List[List[int]]:
    lines = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise InputFormatError('first line must be "m n"')
    m, n = (_parse_int(x, "header") for x in lines[0])
    body = lines[1:]
    if len(body) != m:
        raise InputFormatError(f"header announces {m} rows, found {len(body)}")
    for i, row in enumerate(body):
        if len(row) != n:
            raise InputFormatError(f"row {i + 1} has {len(row)} entries, expected {n}")
    return [[_parse_int(x, f"row {i + 1}") for x in row] for i, row in enumerate(body)]


def parse_matrix(text: str) -> RingMatrix:
    """Parse either input format into an integer matrix.

    Raises:
        InputFormatError: On malformed, ragged or empty input
    """
    rows = _parse_json(text) if text.lstrip().startswith("{") else _parse_text(text)
    if not rows or not rows[0]:
        raise InputFormatError("matrix must have at least one row and one column")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise InputFormatError(f"row {i + 1} has {len(row)} entries, expected {width}")
    return RingMatrix(rows, ZZ)


def read_matrix(path: str) -> RingMatrix:
    """Read a matrix from a file, or from stdin when path is '-'."""
    if path == "-":
        return parse_matrix(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_matrix(handle.read())
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None


def _structure_fields(q: QuotientStructure) -> Dict[str, Any]:
    return {
        "invariant_factors": list(q.invariant_factors),
        "elementary_divisors": [[p, e] for p, e in q.prime_powers()],
        "index": q.index,
    }


def _trivial_report(exc: RankOutOfScope, A: RingMatrix) -> Dict[str, Any]:
    basis = exc.trivial_basis if exc.trivial_basis is not None else RingMatrix.zeros(A.ncols, 0)
    return {
        "n": A.ncols,
        "rank": exc.rank,
        "f": A.ncols - exc.rank,
        "trivial": True,
        "basis": basis.columns(),
    }


def cmd_reduce(A: RingMatrix) -> Dict[str, Any]:
    """Report r, f, d, K, sigma (1-based) and Z."""
    try:
        rs = reduce_matrix(A)
    except RankOutOfScope as exc:
        return _trivial_report(exc, A)
    return {
        "n": rs.n,
        "rank": rs.rank,
        "f": rs.f,
        "d": rs.d,
        "K": rs.K.tolist(),
        "sigma": [k + 1 for k in rs.sigma],
        "Z": rs.Z.tolist(),
    }


def cmd_structure(A: RingMatrix) -> Dict[str, Any]:
    """Report the structure of S/M and U/S with the equality flags."""
    try:
        report = analyze(A)
    except RankOutOfScope as exc:
        out = _trivial_report(exc, A)
        out.update({
            "inv_factors_S_over_M": [],
            "inv_factors_U_over_S": [],
            "elementary_divisors": {"S_over_M": [], "U_over_S": []},
            "flags": {"U_equals_S": True, "S_equals_M": True},
        })
        return out
    rs = report.system
    s_over_m = _structure_fields(report.s_over_m)
    u_over_s = _structure_fields(report.u_over_s)
    return {
        "n": rs.n,
        "rank": rs.rank,
        "f": rs.f,
        "d": rs.d,
        "K": rs.K.tolist(),
        "sigma": [k + 1 for k in rs.sigma],
        "snf_K": list(report.snf_k.diagonal),
        "inv_factors_S_over_M": s_over_m["invariant_factors"],
        "inv_factors_U_over_S": u_over_s["invariant_factors"],
        "elementary_divisors": {
            "S_over_M": s_over_m["elementary_divisors"],
            "U_over_S": u_over_s["elementary_divisors"],
        },
        "index_S_over_M": s_over_m["index"],
        "index_U_over_S": u_over_s["index"],
        "flags": {"U_equals_S": report.flags.u_equals_s, "S_equals_M": report.flags.s_equals_m},
    }


def _lift_basis(A: RingMatrix, method: str, settings: Settings) -> LatticeBasis:
    report = analyze(A)
    Mb = m_basis(report.system)
    q = report.s_over_m
    # the Smith-form basis lets each step recompute what is still missing
    target = nullspace_basis_snf(A)
    if method == "lift-inv":
        return lift_by_invariant_factors(Mb, q, settings=settings, target=target)
    if method == "lift-elem":
        return lift_by_elementary_divisors(Mb, q.prime_powers(), settings=settings, target=target)
    return lift_prime_at_a_time(Mb, q.index, settings=settings, target=target)


_SOLVERS: Dict[str, Callable[[RingMatrix, Settings], LatticeBasis]] = {
    "direct": lambda A, settings: nullspace_basis_direct(A)[0],
    "snf": lambda A, settings: nullspace_basis_snf(A),
    "lift-inv": lambda A, settings: _lift_basis(A, "lift-inv", settings),
    "lift-elem": lambda A, settings: _lift_basis(A, "lift-elem", settings),
    "lift-prime": lambda A, settings: _lift_basis(A, "lift-prime", settings),
    "prime-d": lambda A, settings: prime_case_basis(reduce_matrix(A)),
}


def verify_basis(A: RingMatrix, basis: LatticeBasis, settings: Optional[Settings] = None) -> Dict[str, bool]:
    """Run every independent check on a nullspace basis of A.

    Integer systems with d**f within the brute-force bound also get their
    S/M structure recounted by enumeration.
    """
    settings = settings or load_settings()
    checks = {"is_solution": all(is_solution(A, column) for column in basis.integral_columns().columns())}
    try:
        report = analyze(A)
    except RankOutOfScope:
        checks["same_lattice_snf"] = basis.f == 0 or basis.f == A.ncols
        return checks
    rs = report.system
    try:
        checks["same_lattice_snf"] = same_lattice(basis, nullspace_basis_snf(A))
        checks["S_over_M"] = quotient_invariants_oracle(m_basis(rs), basis) == report.s_over_m
        checks["U_over_S"] = quotient_invariants_oracle(basis, u_basis(rs)) == report.u_over_s
        if isinstance(rs.ring, IntegerRing) and abs(rs.d) ** rs.f <= settings.brute_force_bound:
            counted = brute_force_kernel_structure(rs.K, rs.d, bound=settings.brute_force_bound)
            checks["brute_force"] = counted.structure == report.s_over_m
    except DiophantineError as exc:
        logger.warning("verification raised %s: %s", type(exc).__name__, exc)
        checks["oracle_error"] = False
    return checks


def cmd_solve(A: RingMatrix, method: str = "direct", verify: bool = False,
              settings: Optional[Settings] = None) -> Dict[str, Any]:
    """Compute a basis of the integral nullspace of A with the chosen method.

    Raises:
        InvalidArgument: For an unknown method
        NotPrimeError: For prime-d when d is not prime
    """
    if method not in _SOLVERS:
        raise InvalidArgument(f"unknown method {method!r}, expected one of {', '.join(METHODS)}")
    settings = settings or load_settings()
    out = cmd_structure(A)
    out["method"] = method
    out["verified"] = None
    try:
        basis = _SOLVERS[method](A, settings)
    except RankOutOfScope:
        if verify:
            out["checks"] = {"is_solution": all(is_solution(A, c) for c in out["basis"])}
            out["verified"] = all(out["checks"].values())
        return out
    out["basis"] = basis.integral_columns().columns()
    if verify:
        out["checks"] = verify_basis(A, basis, settings)
        out["verified"] = all(out["checks"].values())
    return out


def require_verified(report: Dict[str, Any]) -> None:
    """Raise VerificationError if a verified report failed any check."""
    if report.get("verified") is False:
        failed = [name for name, ok in report["checks"].items() if not ok]
        raise VerificationError(f"basis failed: {', '.join(failed)}")


def basis_from_report(report: Dict[str, Any]) -> LatticeBasis:
    """Rebuild the basis emitted by cmd_solve (or its JSON form).

    Raises:
        InputFormatError: If the report has no usable basis
    """
    columns = report.get("basis")
    n = report.get("n")
    if not isinstance(columns, list) or not isinstance(n, int):
        raise InputFormatError('report needs an integer "n" and a "basis" list')
    parsed = [[_parse_int(x, f"basis column {j + 1}") for x in col] for j, col in enumerate(columns)]
    if any(len(col) != n for col in parsed):
        raise InputFormatError(f"basis columns must have {n} entries")
    return LatticeBasis(RingMatrix.from_columns(parsed, n, ZZ))


def _table(rows: Sequence[Sequence[Any]], columns: Sequence[str]) -> str:
    if HAS_PANDAS:
        return pd.DataFrame([list(r) for r in rows], columns=list(columns)).to_string(index=False)
    header = "  ".join(columns)
    return "\n".join([header] + ["  ".join(str(x) for x in row) for row in rows])


def render_report(command: str, report: Dict[str, Any]) -> str:
    """Human-readable form of a command report."""
    lines = [f"dioph {command}", "=" * 60]
    lines.append(f"rank r = {report['rank']}, nullspace rank f = {report['f']}")
    if report.get("trivial"):
        lines.append("nullspace is trivial (rank 0 or full rank)")
    if "d" in report:
        lines.append(f"d = {report['d']}")
        lines.append(f"sigma = {report['sigma']}")
        if report["K"] and report["K"][0]:
            lines.append("K =")
            lines.append(_table(report["K"], [f"c{j + 1}" for j in range(len(report["K"][0]))]))
    if "snf_K" in report:
        lines.append(f"Smith form of K: diag{tuple(report['snf_K'])}")
    if "inv_factors_S_over_M" in report:
        lines.append(f"S/M invariant factors: {report['inv_factors_S_over_M']}")
        lines.append(f"U/S invariant factors: {report['inv_factors_U_over_S']}")
        lines.append(f"elementary divisors: {report['elementary_divisors']}")
        lines.append(f"U = S: {report['flags']['U_equals_S']}, S = M: {report['flags']['S_equals_M']}")
    if "method" in report:
        lines.append(f"method: {report['method']}")
    if report.get("basis") and command == "solve":
        rows = list(zip(*report["basis"]))
        lines.append("basis (columns):")
        lines.append(_table(rows, [f"b{j + 1}" for j in range(len(report["basis"]))]))
    if report.get("verified") is not None:
        lines.append("=" * 60)
        for name, ok in report["checks"].items():
            lines.append(f"{name}: {'ok' if ok else 'FAILED'}")
        lines.append(f"verified: {report['verified']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dioph", description="Exact solver for homogeneous linear Diophantine systems")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="matrix file, plain text or JSON; '-' reads stdin")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=None, help="seed for randomised lift searches")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reduce", parents=[common], help="reduced system (d, K, sigma)")
    sub.add_parser("structure", parents=[common], help="structure of S/M and U/S")
    solve = sub.add_parser("solve", parents=[common], help="basis of the integral nullspace")
    solve.add_argument("--method", choices=METHODS, default="direct")
    solve.add_argument("--verify", action="store_true", help="check the basis against independent oracles")
    return parser


def _emit_error(args: argparse.Namespace, kind: str, message: str) -> None:
    if args.json:
        print(json.dumps({"error": kind, "message": message}))
    else:
        print(f"error: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        settings = load_settings().with_seed(args.seed)
        A = read_matrix(args.file)
    except (InputFormatError, InvalidArgument) as exc:
        _emit_error(args, "input", str(exc))
        return EXIT_INPUT_ERROR

    try:
        if args.command == "reduce":
            report = cmd_reduce(A)
        elif args.command == "structure":
            report = cmd_structure(A)
        else:
            report = cmd_solve(A, args.method, args.verify, settings)
    except NotPrimeError as exc:
        _emit_error(args, "not_prime", str(exc))
        return EXIT_INPUT_ERROR
    except DiophantineError as exc:
        logger.error("%s failed: %s", args.command, exc)
        _emit_error(args, type(exc).__name__, str(exc))
        return EXIT_VERIFICATION_FAILED

    print(json.dumps(report, indent=2) if args.json else render_report(args.command, report))
    try:
        require_verified(report)
    except VerificationError as exc:
        logger.error("%s", exc)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
