"""The self-test battery: each check returns one :class:`VerificationRecord`.

Checks that sweep several points collapse to a single record describing the
worst point.  ``tol_scale >= 1`` loosens every tolerance uniformly; it never
tightens below the stated values.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .cplane import (
    BoundaryProbe,
    F_direct,
    F_via_representation,
    boundary_imaginary_limit,
    boundary_limit_closed_form,
    decay_at_infinity_probe,
    decay_bound,
    reciprocal_log_representation,
    small_z_vanishing_probe,
)
from .exact import (
    alternating_sequence,
    bk2_falling_factorial,
    bk2_recurrence,
    certify_cm,
    difference_table,
)
from .measure import bk2_via_integral, moment_unit_interval, total_mass
from .quadrature import IntegralTask, SemiInfiniteFrom, integrate
from .records import VerificationRecord, compare, fmt_exact, fmt_float

LISTED_VALUES = (
    Fraction(1), Fraction(1, 2), Fraction(-1, 12),
    Fraction(1, 24), Fraction(-19, 720), Fraction(3, 160),
)

REPRESENTATION_GRID = [
    cmath.rect(r, a)
    for r in (0.1, 1.0, 10.0, 100.0)
    for a in (0.0, math.pi / 4, -math.pi / 4, math.pi / 2, -math.pi / 2,
              3 * math.pi / 4, -3 * math.pi / 4)
]


def _worst(name: str, records: list[VerificationRecord]) -> VerificationRecord:
    def badness(r):
        err = r.rel_error if r.policy == "rel" else (
            r.abs_error if r.policy == "abs" else min(r.abs_error, r.rel_error))
        return (not r.passed, err / r.tolerance if r.tolerance else err)

    w = max(records, key=badness)
    return VerificationRecord(
        name, w.expected, w.computed, w.abs_error, w.rel_error, w.tolerance,
        all(r.passed for r in records), w.anchor, w.policy,
    )


def _exact_record(name: str, expected, computed, anchor: str) -> VerificationRecord:
    diff = max((abs(float(a - b)) for a, b in zip(expected, computed)), default=0.0)
    same = tuple(expected) == tuple(computed)
    return VerificationRecord(
        name,
        ",".join(fmt_exact(v) for v in expected) if len(expected) <= 8 else f"{len(expected)} exact values",
        ",".join(fmt_exact(v) for v in computed) if len(computed) <= 8 else (
            f"{len(computed)} exact values, identical" if same else f"{len(computed)} exact values, differ"),
        0.0 if same else max(diff, math.ulp(0.0)),
        0.0 if same else math.inf,
        0.0,
        same,
        anchor,
        "abs",
    )


def check_value_table(tol_scale: float = 1.0) -> VerificationRecord:
    return _exact_record(
        "c01-value-table", LISTED_VALUES, bk2_recurrence(5).values,
        "x/log(1+x) = sum b_n x^n, b_0..b_5",
    )


def check_oracle_equivalence(tol_scale: float = 1.0, N: int = 200) -> VerificationRecord:
    rec = bk2_recurrence(N).values
    ff = bk2_falling_factorial(N).values
    return _exact_record(
        "c02-oracle-equivalence", rec, ff,
        f"series inversion == (1/n!) int_0^1 s(s-1)...(s-n+1) ds, n <= {N}",
    )


def check_bk2_integral(tol_scale: float = 1.0, n_max: int = 20) -> VerificationRecord:
    b = bk2_recurrence(n_max).values
    recs = []
    for n in range(1, n_max + 1):
        exact = float(b[n] if n % 2 else -b[n])
        recs.append(compare(
            f"n={n}", exact, bk2_via_integral(n).value, 1e-10 * tol_scale,
            "(-1)^(n+1) b_n = int_1^inf dt / ((log^2(t-1)+pi^2) t^n)", "rel",
        ))
    return _worst("c03-bk2-integral", recs)


def check_cm_sequence(tol_scale: float = 1.0, total: int = 100) -> VerificationRecord:
    a = alternating_sequence(bk2_recurrence(total + 1))
    cert = certify_cm(difference_table(a, total))
    viol = cert.first_violation
    return VerificationRecord(
        "c04-cm-sequence",
        f"(-1)^k D^k a_n >= 0 for n+k <= {total}",
        "holds" if cert.holds else f"violation at k={viol[0]}, n={viol[1]}: {fmt_exact(viol[2])}",
        0.0, 0.0, 0.0, cert.holds,
        "a_n = (-1)^n b_(n+1) is a completely monotonic sequence",
        "abs",
    )


def check_stieltjes_representation(tol_scale: float = 1.0) -> VerificationRecord:
    recs = []
    for z in REPRESENTATION_GRID:
        direct = F_direct(z)
        rep = F_via_representation(z)
        err = abs(rep - direct)
        recs.append(VerificationRecord(
            f"z={z}", fmt_float(abs(direct)), fmt_float(abs(rep)), err,
            err / abs(direct), 1e-8 * tol_scale, err <= 1e-8 * tol_scale,
            "z/((1+z)Log(1+z)) = int_1^inf rho(t)/(z+t) dt", "abs",
        ))
    return _worst("c05-stieltjes-representation", recs)


def check_boundary_limit(tol_scale: float = 1.0) -> VerificationRecord:
    tol = 1e-4 * tol_scale
    anchor = "lim Im F(-t+i eps) = -pi t/((t-1)(log^2(t-1)+pi^2)), t > 1"
    recs = [
        compare(f"t={t}", boundary_limit_closed_form(t),
                boundary_imaginary_limit(BoundaryProbe(t, 1e-6)), tol, anchor, "rel")
        for t in (1.5, 2.0, 5.0, 10.0)
    ]
    recs.append(compare("t=2 vs -2/pi", -2 / math.pi,
                        boundary_imaginary_limit(BoundaryProbe(2.0, 1e-6)), tol, anchor, "rel"))
    return _worst("c06-boundary-limit", recs)


def _ln_ratio_integrand(b: float) -> Callable:
    return lambda u: (np.expm1(-u) - np.expm1(-b * u)) / u


def _reciprocal_integrand(x: float) -> Callable:
    base = math.log1p(x)
    return lambda u: np.exp(-(u + 1.0) * base)


def check_quadrature_selftests(tol_scale: float = 1.0) -> VerificationRecord:
    tol = 1e-12 * tol_scale
    recs = []
    for b in (2.0, 3.0, 10.0):
        r = integrate(IntegralTask(_ln_ratio_integrand(b), SemiInfiniteFrom(0.0)))
        recs.append(compare(f"ln {b}", math.log(b), r.value, tol,
                            "log(b/a) = int_0^inf (e^(-au) - e^(-bu))/u du", "abs"))
    for x in (0.5, 1.0, 2.0, 10.0):
        r = integrate(IntegralTask(_reciprocal_integrand(x), SemiInfiniteFrom(0.0)))
        recs.append(compare(f"x={x}", 1 / ((1 + x) * math.log1p(x)), r.value, tol,
                            "1/((1+x)log(1+x)) = int_0^inf (1+x)^-(u+1) du", "abs"))
    return _worst("c07-quadrature-selftests", recs)


def check_mass_identities(tol_scale: float = 1.0) -> VerificationRecord:
    recs = [
        compare("total mass", 1.0, total_mass().value, 1e-10 * tol_scale,
                "int_1^inf rho(t)/t dt = 1", "abs"),
        compare("n=1 moment", 0.5, bk2_via_integral(1).value, 1e-12 * tol_scale,
                "int_1^inf dt/((log^2(t-1)+pi^2) t) = b_1 = 1/2", "abs"),
    ]
    return _worst("c08-mass-identities", recs)


def check_reciprocal_log(tol_scale: float = 1.0) -> VerificationRecord:
    recs = [
        compare(f"x={x}", 1 / math.log1p(x), reciprocal_log_representation(x), 1e-8 * tol_scale,
                "1/log(1+x) = 1/x + int_1^inf dt/((log^2(t-1)+pi^2)(x+t))", "abs")
        for x in (0.5, 1.0, math.e - 1, 5.0)
    ]
    return _worst("c09-reciprocal-log", recs)


def check_change_of_variables(tol_scale: float = 1.0, n_max: int = 20) -> VerificationRecord:
    recs = []
    for n in range(1, n_max + 1):
        p = bk2_via_integral(n)
        q = moment_unit_interval(n)
        budget = (p.error_estimate + q.error_estimate) * tol_scale
        err = abs(p.value - q.value)
        recs.append(VerificationRecord(
            f"n={n}", fmt_float(p.value), fmt_float(q.value), err, err / p.value,
            budget, err <= budget,
            "int_1^inf ... t^-n dt = int_0^1 s^(n-2)/(log^2(1/s-1)+pi^2) ds", "abs",
        ))
    return _worst("c10-change-of-variables", recs)


def check_decay_at_infinity(tol_scale: float = 1.0) -> VerificationRecord:
    grid = np.linspace(-math.pi, math.pi, 102)[1:-1]
    recs = []
    for r in (1e3, 1e6):
        m = decay_at_infinity_probe(r, grid)
        bound = decay_bound(r)
        recs.append(VerificationRecord(
            f"r={r}", f"<= {fmt_float(bound)}", fmt_float(m), max(0.0, m - bound), 0.0, 0.0,
            m <= bound, "|F(r e^(i theta))| <= r/((r-1)log(r-1))", "abs",
        ))
    return _worst("l01-decay-at-infinity", recs)


def check_small_z(tol_scale: float = 1.0) -> VerificationRecord:
    thetas = np.linspace(-math.pi / 2, math.pi / 2, 41)
    rows = small_z_vanishing_probe([1e-1, 1e-2, 1e-3, 1e-4], thetas)
    maxima = [m for _, m, _ in rows]
    decreasing = all(b < a for a, b in zip(maxima, maxima[1:]))
    return VerificationRecord(
        "l02-small-z-vanishing", "strictly decreasing maxima",
        ",".join(fmt_float(m) for m in maxima), 0.0, 0.0, 0.0, decreasing,
        "lim_{eps->0+} z F(z) = 0 on z = eps e^(i theta)", "abs",
    )


ALL_CHECKS: dict[str, Callable[..., VerificationRecord]] = {
    "c01-value-table": check_value_table,
    "c02-oracle-equivalence": check_oracle_equivalence,
    "c03-bk2-integral": check_bk2_integral,
    "c04-cm-sequence": check_cm_sequence,
    "c05-stieltjes-representation": check_stieltjes_representation,
    "c06-boundary-limit": check_boundary_limit,
    "c07-quadrature-selftests": check_quadrature_selftests,
    "c08-mass-identities": check_mass_identities,
    "c09-reciprocal-log": check_reciprocal_log,
    "c10-change-of-variables": check_change_of_variables,
    "l01-decay-at-infinity": check_decay_at_infinity,
    "l02-small-z-vanishing": check_small_z,
}
