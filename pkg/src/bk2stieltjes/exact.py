"""Exact rational Bernoulli numbers of the second kind and complete-monotonicity certificates.

``b_n`` are the Taylor coefficients of ``x / log(1 + x)``.  Two routes are
provided, sharing no code:

* :func:`bk2_recurrence` inverts the series ``log(1 + x)/x = sum (-1)^m x^m/(m+1)``.
* :func:`bk2_falling_factorial` integrates the falling factorial
  ``s(s-1)...(s-n+1)`` over ``[0, 1]`` term by term through signed Stirling
  numbers of the first kind.

All arithmetic is on :class:`fractions.Fraction`, which is always kept in
lowest terms with a positive denominator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "ExactRational",
    "Method",
    "Bk2Table",
    "DifferenceTable",
    "CmCertificate",
    "bk2_recurrence",
    "bk2_falling_factorial",
    "stirling_first_signed",
    "alternating_sequence",
    "difference_table",
    "certify_cm",
]

ExactRational = Fraction


class Method(enum.Enum):
    RECURRENCE = "recurrence"
    FALLING_FACTORIAL = "falling_factorial"


@dataclass(frozen=True)
class Bk2Table:
    values: tuple[Fraction, ...]
    method: Method

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]


@dataclass(frozen=True)
class DifferenceTable:
    """``rows[k][n]`` is the k-th forward difference of ``base`` at ``n``."""

    base: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def max_order(self) -> int:
        return len(self.rows) - 1


@dataclass(frozen=True)
class CmCertificate:
    max_index: int
    max_order: int
    holds: bool
    first_violation: tuple[int, int, Fraction] | None = None


def bk2_recurrence(N: int) -> Bk2Table:
    """``b_0..b_N`` from ``b_n = -sum_{k<n} (-1)^(n-k) b_k / (n-k+1)``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    b = [Fraction(1)]
    for n in range(1, N + 1):
        acc = Fraction(0)
        for k in range(n):
            term = b[k] / (n - k + 1)
            acc += term if (n - k) % 2 == 0 else -term
        b.append(-acc)
    return Bk2Table(tuple(b), Method.RECURRENCE)


def stirling_first_signed(N: int) -> list[list[int]]:
    """Rows ``0..N`` of signed Stirling numbers of the first kind, ``s[n][k]``.

    ``s(s-1)...(s-n+1) = sum_k s[n][k] * s**k``.
    """
    rows = [[1]]
    for n in range(N):
        prev = rows[-1]
        row = [0] * (n + 2)
        for k in range(1, n + 2):
            row[k] = prev[k - 1] - (n * prev[k] if k <= n else 0)
        rows.append(row)
    return rows


def bk2_falling_factorial(N: int) -> Bk2Table:
    """``b_n = (1/n!) * integral_0^1 s(s-1)...(s-n+1) ds``, evaluated exactly."""
    if N < 0:
        raise ValueError("N must be non-negative")
    values = []
    fact = 1
    for n, row in enumerate(stirling_first_signed(N)):
        if n:
            fact *= n
        integral = sum(Fraction(c, k + 1) for k, c in enumerate(row) if c)
        values.append(integral / fact)
    return Bk2Table(tuple(values), Method.FALLING_FACTORIAL)


def alternating_sequence(table: Bk2Table | Sequence[Fraction]) -> list[Fraction]:
    """``a_n = (-1)^n b_{n+1}`` for every ``n`` the table supports."""
    b = table.values if isinstance(table, Bk2Table) else tuple(table)
    if len(b) < 2:
        raise ValueError("need b_0 and b_1 at least")
    return [b[n + 1] if n % 2 == 0 else -b[n + 1] for n in range(len(b) - 1)]


def difference_table(seq: Sequence[Fraction], max_order: int) -> DifferenceTable:
    """Forward differences of ``seq`` up to order ``max_order`` by repeated subtraction."""
    base = tuple(Fraction(v) for v in seq)
    if max_order < 0 or max_order + 1 > len(base):
        raise ValueError(
            f"max_order={max_order} needs at least {max_order + 1} terms, got {len(base)}"
        )
    rows = [base]
    for _ in range(max_order):
        r = rows[-1]
        rows.append(tuple(r[n + 1] - r[n] for n in range(len(r) - 1)))
    return DifferenceTable(base, tuple(rows))


def certify_cm(table: DifferenceTable) -> CmCertificate:
    """Check ``(-1)^k * rows[k][n] >= 0`` everywhere, scanning k-major.

    The first offending entry is reported as ``(k, n, rows[k][n])``.
    """
    for k, row in enumerate(table.rows):
        for n, d in enumerate(row):
            if (d < 0) if k % 2 == 0 else (d > 0):
                return CmCertificate(len(table.base) - 1, table.max_order, False, (k, n, d))
    return CmCertificate(len(table.base) - 1, table.max_order, True)
