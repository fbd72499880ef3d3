"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from . import checks
from .cplane import F_direct, F_via_representation
from .exact import alternating_sequence, bk2_recurrence, certify_cm, difference_table
from .measure import DomainError, bk2_via_integral, density_grid
from .quadrature import DEFAULT_REL_TOL
from .records import VerificationRecord, fmt_exact, fmt_float

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_CHECK_REL_TOL = 1e-10

REPORT_SCHEMA = {
    "type": "object",
    "required": ["config", "records", "summary"],
    "properties": {
        "config": {"type": "object"},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check_name", "expected", "computed", "abs_error", "rel_error",
                             "tolerance", "passed", "anchor", "policy"],
                "properties": {
                    "check_name": {"type": "string"},
                    "expected": {"type": "string"},
                    "computed": {"type": "string"},
                    "abs_error": {"type": "string"},
                    "rel_error": {"type": "string"},
                    "tolerance": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "anchor": {"type": "string"},
                    "policy": {"enum": ["abs", "rel", "either"]},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed", "all_passed"],
            "properties": {
                "total": {"type": "integer"},
                "passed": {"type": "integer"},
                "failed": {"type": "integer"},
                "all_passed": {"type": "boolean"},
            },
        },
    },
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    max_n: int = 50
    max_k: int = 25
    rel_tol: float = DEFAULT_CHECK_REL_TOL
    abs_tol: float = 1e-14
    output_format: str | None = None
    output_path: str | None = None
    parallelism: int = 1

    @property
    def tol_scale(self) -> float:
        return max(1.0, self.rel_tol / DEFAULT_CHECK_REL_TOL)

    @property
    def quad_tol(self) -> float:
        return min(DEFAULT_REL_TOL, self.rel_tol)


def _record_row(r: VerificationRecord) -> dict:
    d = r.to_dict()
    for key in ("abs_error", "rel_error", "tolerance"):
        d[key] = fmt_float(d[key])
    return d


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([str(v) for v in row] for row in rows)
    return buf.getvalue()


def _records_document(config: RunConfig, records: list[VerificationRecord]) -> dict:
    passed = sum(r.passed for r in records)
    return {
        "config": {k: v for k, v in asdict(config).items() if k != "output_path"},
        "records": [_record_row(r) for r in records],
        "summary": {
            "total": len(records),
            "passed": passed,
            "failed": len(records) - passed,
            "all_passed": passed == len(records),
        },
    }


def _render_records(config: RunConfig, records: list[VerificationRecord], default: str) -> str:
    fmt = config.output_format or default
    if fmt == "json":
        return json.dumps(_records_document(config, records), indent=2) + "\n"
    fields = list(VerificationRecord.__dataclass_fields__)
    rows = ([_record_row(r)[f] for f in fields] for r in records)
    return _csv(fields, ([str(v).lower() if isinstance(v, bool) else v for v in row] for row in rows))


def _emit(text: str, config: RunConfig, stdout) -> None:
    if config.output_path:
        try:
            with open(config.output_path, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {config.output_path}: {exc}") from exc
    else:
        (stdout or sys.stdout).write(text)


def _bk2_row(n: int, b: Fraction, quad_tol: float):
    exact = float(b)
    if n == 0:
        return [n, fmt_exact(b), fmt_float(exact), "", ""], 0.0, 0.0
    sign = 1 if n % 2 else -1
    q = sign * bk2_via_integral(n, quad_tol).value
    diff = abs(q - exact)
    return [n, fmt_exact(b), fmt_float(exact), fmt_float(q), fmt_float(diff)], diff, diff / abs(exact)


def _map(config: RunConfig, fn, *iterables):
    if config.parallelism > 1:
        with concurrent.futures.ProcessPoolExecutor(config.parallelism) as pool:
            return list(pool.map(fn, *iterables))
    return list(map(fn, *iterables))


def cmd_bk2(config: RunConfig, stdout=None) -> int:
    if config.max_n < 0:
        raise UsageError("--max-n must be non-negative")
    table = bk2_recurrence(config.max_n).values
    n_range = range(config.max_n + 1)
    results = _map(config, _bk2_row, n_range, table, [config.quad_tol] * len(table))
    ok = all(d <= config.abs_tol or r <= config.rel_tol for _, d, r in results)
    rows = [row for row, _, _ in results]
    header = ["n", "exact", "decimal", "quadrature", "abs_diff"]
    if (config.output_format or "csv") == "json":
        text = json.dumps({"config": asdict(config), "rows": [dict(zip(header, r)) for r in rows]},
                          indent=2) + "\n"
    else:
        text = _csv(header, rows)
    _emit(text, config, stdout)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_cm(config: RunConfig, stdout=None, sequence: Sequence[Fraction] | None = None) -> int:
    """Certify complete monotonicity of ``a_n = (-1)^n b_(n+1)``, or of ``sequence`` if given."""
    if sequence is None:
        if config.max_k < 0 or config.max_k + 1 > config.max_n:
            raise UsageError("need 0 <= --max-k and --max-k + 1 <= --max-n")
        seq = alternating_sequence(bk2_recurrence(config.max_n + 1))
        max_k = config.max_k
    else:
        seq = [Fraction(v) for v in sequence]
        max_k = min(config.max_k, len(seq) - 1)
    cert = certify_cm(difference_table(seq, max_k))
    v = cert.first_violation
    fields = {
        "max_n": cert.max_index,
        "max_k": cert.max_order,
        "holds": cert.holds,
        "violation_k": "" if v is None else v[0],
        "violation_n": "" if v is None else v[1],
        "violation_value": "" if v is None else fmt_exact(v[2]),
    }
    if (config.output_format or "csv") == "json":
        text = json.dumps(fields, indent=2) + "\n"
    else:
        text = _csv(fields, [[str(x).lower() if isinstance(x, bool) else x for x in fields.values()]])
    _emit(text, config, stdout)
    return EXIT_OK if cert.holds else EXIT_FAIL


def cmd_eval_f(re: float, im: float, config: RunConfig, stdout=None) -> int:
    z = complex(re, im)
    direct = F_direct(z)
    rep = F_via_representation(z, config.quad_tol)
    residual = abs(rep - direct)
    tol = 1e-8 * config.tol_scale
    record = VerificationRecord(
        f"eval-f z={fmt_float(re)}{'+' if im >= 0 else '-'}{fmt_float(abs(im))}i",
        f"{fmt_float(direct.real)}{'+' if direct.imag >= 0 else '-'}{fmt_float(abs(direct.imag))}i",
        f"{fmt_float(rep.real)}{'+' if rep.imag >= 0 else '-'}{fmt_float(abs(rep.imag))}i",
        residual, residual / abs(direct), tol, residual <= tol,
        "z/((1+z)Log(1+z)) = int_1^inf rho(t)/(z+t) dt", "abs",
    )
    _emit(_render_records(config, [record], "csv"), config, stdout)
    return EXIT_OK if record.passed else EXIT_FAIL


def cmd_density(t_min: float, t_max: float, points: int, config: RunConfig, stdout=None) -> int:
    try:
        t, rho = density_grid(t_min, t_max, points)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if (config.output_format or "csv") == "json":
        text = json.dumps([{"t": fmt_float(a), "rho": fmt_float(b)} for a, b in zip(t, rho)],
                          indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write("t,rho\n")
        for a, b in zip(t.tolist(), rho.tolist()):
            buf.write(f"{fmt_float(a)},{fmt_float(b)}\n")
        text = buf.getvalue()
    _emit(text, config, stdout)
    return EXIT_OK


def _run_check(name: str, tol_scale: float) -> VerificationRecord:
    return checks.ALL_CHECKS[name](tol_scale)


def run_selftest(config: RunConfig) -> list[VerificationRecord]:
    """All checks, failures first, then by name."""
    names = sorted(checks.ALL_CHECKS)
    records = _map(config, _run_check, names, [config.tol_scale] * len(names))
    return sorted(records, key=lambda r: (r.passed, r.check_name))


def cmd_selftest(config: RunConfig, stdout=None, stderr=None) -> int:
    records = run_selftest(config)
    stderr = stderr or sys.stderr
    for r in records:
        stderr.write(f"{'PASS' if r.passed else 'FAIL'}  {r.check_name}  "
                     f"abs={fmt_float(r.abs_error)} rel={fmt_float(r.rel_error)} "
                     f"tol={fmt_float(r.tolerance)}\n")
    _emit(_render_records(config, records, "json"), config, stdout)
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-k", type=int, default=argparse.SUPPRESS)
    common.add_argument("--rel-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--abs-tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"), dest="output_format",
                        default=argparse.SUPPRESS)
    common.add_argument("--out", dest="output_path", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, dest="parallelism", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="bk2stieltjes", parents=[common],
        description="Bernoulli numbers of the second kind and the Stieltjes representation "
                    "of x/((1+x)log(1+x)).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bk2", parents=[common], help="exact and quadrature table of b_n")
    sub.add_parser("verify-cm", parents=[common], help="certify complete monotonicity of (-1)^n b_(n+1)")
    p = sub.add_parser("eval-f", parents=[common], help="F(z) directly and via its integral representation")
    p.add_argument("re", type=float)
    p.add_argument("im", type=float)
    p = sub.add_parser("density", parents=[common], help="CSV of the representing density on a log grid")
    p.add_argument("--t-min", type=float, default=1.000001)
    p.add_argument("--t-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=10_000)
    sub.add_parser("selftest", parents=[common], help="run every verification check")
    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    fields = set(RunConfig.__dataclass_fields__)
    config = RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})
    if config.parallelism < 1:
        raise UsageError("--jobs must be at least 1")
    if not (config.rel_tol > 0 and config.abs_tol > 0):
        raise UsageError("tolerances must be positive")
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config_from(ns)
        if ns.command == "bk2":
            return cmd_bk2(config)
        if ns.command == "verify-cm":
            return cmd_verify_cm(config)
        if ns.command == "eval-f":
            if not (math.isfinite(ns.re) and math.isfinite(ns.im)):
                raise UsageError("point must be finite")
            return cmd_eval_f(ns.re, ns.im, config)
        if ns.command == "density":
            return cmd_density(ns.t_min, ns.t_max, ns.points, config)
        return cmd_selftest(config)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
