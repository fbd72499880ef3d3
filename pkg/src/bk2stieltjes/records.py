"""Verification records and the fixed text rendering used in every report."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

__all__ = ["VerificationRecord", "fmt_float", "fmt_exact", "compare"]


def fmt_float(x: float | None) -> str:
    """17 significant digits, lowercase exponent, always visibly a float."""
    if x is None:
        return ""
    s = format(float(x), ".17g")
    if not any(c in s for c in ".enia"):
        s += ".0"
    return s


def fmt_exact(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class VerificationRecord:
    """One named check: expected vs computed with its tolerance and verdict.

    ``policy`` is ``"abs"``, ``"rel"`` or ``"either"`` (pass if either
    error is within tolerance).
    """

    check_name: str
    expected: str
    computed: str
    abs_error: float
    rel_error: float
    tolerance: float
    passed: bool
    anchor: str
    policy: str = "either"

    def to_dict(self) -> dict:
        return asdict(self)


def compare(
    name: str,
    expected: float,
    computed: float,
    tolerance: float,
    anchor: str,
    policy: str = "either",
) -> VerificationRecord:
    abs_err = abs(computed - expected)
    rel_err = abs_err / abs(expected) if expected != 0 else (0.0 if abs_err == 0 else math.inf)
    if policy == "abs":
        ok = abs_err <= tolerance
    elif policy == "rel":
        ok = rel_err <= tolerance
    else:
        ok = abs_err <= tolerance or rel_err <= tolerance
    return VerificationRecord(
        name, fmt_float(expected), fmt_float(computed), abs_err, rel_err, tolerance, bool(ok), anchor, policy
    )
