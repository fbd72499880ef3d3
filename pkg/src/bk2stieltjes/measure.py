"""The representing measure of F(x) = x / ((1+x) log(1+x)) and its moment integrals.

The density on ``(1, inf)`` is

    rho(t) = t / ((t - 1) * (log(t - 1)**2 + pi**2)).

Whenever it feeds a quadrature it is rewritten in ``w = log(t - 1)``, where
``rho(t) dt = (1 + e^w) / (w^2 + pi^2) dw`` is smooth on the whole line.
Moment routines return the positive quantity ``(-1)^(n+1) b_n``; callers
apply signs.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import (
    DEFAULT_REL_TOL,
    Finite,
    Integrand,
    IntegralResult,
    IntegralTask,
    SemiInfiniteFrom,
    Transform,
    integrate,
)
from .records import VerificationRecord, compare

__all__ = [
    "DomainError",
    "density_rho",
    "density_grid",
    "bk2_weight",
    "unit_interval_weight",
    "bk2_via_integral",
    "moment_unit_interval",
    "total_mass",
    "total_mass_identity",
]

PI2 = math.pi ** 2


class DomainError(ValueError):
    """Argument outside the domain where the quantity is defined."""


def density_rho(t):
    """Density of the representing measure; scalar or array, every ``t > 1``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 1.0)):
        raise DomainError("density_rho needs t > 1")
    u = t_arr - 1.0
    with np.errstate(over="ignore"):
        L = np.log(u) ** 2 + PI2
        out = np.where(np.isinf(L), 0.0, 1.0 / (u * L)) * t_arr
    return float(out) if np.ndim(out) == 0 else out


def density_grid(t_min: float, t_max: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced samples ``(t, rho(t))`` on ``[t_min, t_max]``."""
    if not (1.0 < t_min < t_max) or points < 2:
        raise DomainError("need 1 < t_min < t_max and points >= 2")
    t = np.geomspace(t_min, t_max, points)
    return t, density_rho(t)


def _check_order(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"moment index must be an integer >= 1 (n={n!r}); n = 0 diverges")


def bk2_weight(n: int) -> Integrand:
    """``1 / ((log(t-1)^2 + pi^2) t^n)`` on ``(1, inf)`` with its ``t = 1 + e^w`` form."""

    def f(t):
        return 1.0 / ((np.log(t - 1.0) ** 2 + PI2) * t ** n)

    def on_line(w):
        # e^w / (1 + e^w)^n
        return np.exp(w - n * np.logaddexp(0.0, w)) / (w * w + PI2)

    return Integrand(f, on_line)


def unit_interval_weight(n: int) -> Integrand:
    """``s^(n-2) / (log(1/s - 1)^2 + pi^2)`` on ``(0, 1)`` with its logistic form."""

    def f(s):
        return s ** (n - 2) / (np.log(1.0 / s - 1.0) ** 2 + PI2)

    def on_line(w):
        # s = sigma(w): log(1/s - 1) = -w and s^(n-2) ds = sigma(w)^(n-1) sigma(-w) dw
        log_s = -np.logaddexp(0.0, -w)
        log_1ms = -np.logaddexp(0.0, w)
        return np.exp((n - 1) * log_s + log_1ms) / (w * w + PI2)

    return Integrand(f, on_line)


def bk2_via_integral(n: int, tol: float = DEFAULT_REL_TOL) -> IntegralResult:
    """``(-1)^(n+1) b_n`` as the integral of :func:`bk2_weight` over ``(1, inf)``."""
    _check_order(n)
    task = IntegralTask(bk2_weight(n), SemiInfiniteFrom(1.0), Transform.EXP_SHIFT,
                        rel_tol=tol, abs_tol=1e-300)
    return integrate(task)


def moment_unit_interval(n: int, tol: float = DEFAULT_REL_TOL) -> IntegralResult:
    """The same quantity after ``t = 1/s``: an integral over ``(0, 1)``."""
    _check_order(n)
    task = IntegralTask(unit_interval_weight(n), Finite(0.0, 1.0), Transform.LOGISTIC,
                        rel_tol=tol, abs_tol=1e-300)
    return integrate(task)


def total_mass(tol: float = DEFAULT_REL_TOL) -> IntegralResult:
    """Integral of ``rho(t)/t`` over ``(1, inf)``; equals ``F(0+) = 1``."""

    def f(t):
        return 1.0 / ((t - 1.0) * (np.log(t - 1.0) ** 2 + PI2))

    def on_line(w):
        return 1.0 / (w * w + PI2)

    task = IntegralTask(Integrand(f, on_line), SemiInfiniteFrom(1.0), Transform.EXP_SHIFT,
                        rel_tol=tol)
    return integrate(task)


def total_mass_identity(tol: float = 1e-10) -> VerificationRecord:
    res = total_mass(min(DEFAULT_REL_TOL, tol * 1e-2))
    return compare(
        "total-mass", 1.0, res.value, tol,
        "int_1^inf rho(t)/t dt = lim_{x->0+} x/((1+x)log(1+x)) = 1",
        policy="abs",
    )
