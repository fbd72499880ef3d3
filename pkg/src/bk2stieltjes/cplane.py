"""F(z) = z / ((1+z) Log(1+z)) on the cut plane C \\ (-inf, 0], its Stieltjes
integral form, and numerical probes of its boundary and limiting behaviour.

Points with ``im == 0`` and ``re <= 0`` are rejected, except ``z = 0``
where the removable singularity gives ``F(0) = 1``.  The cut itself is only
approached through :func:`boundary_imaginary_limit` with an explicit
offset ``eps``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import bk2_recurrence
from .measure import PI2, DomainError
from .quadrature import (
    Integrand,
    IntegralTask,
    SemiInfiniteFrom,
    Transform,
    integrate,
)

__all__ = [
    "BoundaryProbe",
    "in_cut_plane",
    "log1p_complex",
    "F_direct",
    "F_via_representation",
    "reciprocal_log_representation",
    "kth_derivative_via_integral",
    "x_over_log1p",
    "x_over_log1p_derivative_series",
    "boundary_imaginary_limit",
    "boundary_limit_closed_form",
    "decay_at_infinity_probe",
    "decay_bound",
    "small_z_vanishing_probe",
    "MAX_DERIVATIVE_ORDER",
]

MAX_DERIVATIVE_ORDER = 8
REPRESENTATION_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryProbe:
    t: float
    epsilon: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        if self.t == 1:
            raise DomainError("t = 1: the boundary limit is infinite")
        if not 0 < self.epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)")


def in_cut_plane(z: complex) -> bool:
    z = complex(z)
    return not (z.imag == 0 and z.real <= 0)


def _require_cut_plane(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite point {z!r}")
    if z != 0 and not in_cut_plane(z):
        raise DomainError(f"{z!r} lies on the cut (-inf, 0]")
    return z


def log1p_complex(z: complex) -> complex:
    """Principal ``Log(1 + z)`` accurate for small ``|z|``."""
    u = 1 + z
    if u == 1:
        return z
    return cmath.log(u) * (z / (u - 1))


def F_direct(z: complex) -> complex:
    z = _require_cut_plane(z)
    if z == 0:
        return 1 + 0j
    return z / ((1 + z) * log1p_complex(z))


def _representation_integrand(z: complex, part: str) -> Integrand:
    """``rho(t) / (z + t)`` on ``(1, inf)``, real or imaginary part, with its ``t = 1 + e^w`` form."""
    take = np.real if part == "re" else np.imag

    def f(t):
        rho = t / ((t - 1.0) * (np.log(t - 1.0) ** 2 + PI2))
        return take(rho / (z + t))

    def on_line(w):
        # rho dt = (1 + e^w)/(w^2+pi^2) dw and (1 + e^w)/(z + 1 + e^w) = 1 - z/(z + 1 + e^w)
        w = np.asarray(w, dtype=float)
        neg = np.minimum(w, 0.0)
        pos_decay = np.exp(-np.maximum(w, 0.0))
        r = np.where(
            w > 0,
            z * pos_decay / (1.0 + (z + 1.0) * pos_decay),
            z / (z + 1.0 + np.exp(neg)),
        )
        return take(1.0 - r) / (w * w + PI2)

    return Integrand(f, on_line)


def F_via_representation(z: complex, tol: float = REPRESENTATION_TOL) -> complex:
    """``integral_1^inf rho(t)/(z+t) dt`` as two real quadratures."""
    z = _require_cut_plane(z)
    parts = []
    for part in ("re", "im"):
        if part == "im" and z.imag == 0:
            parts.append(0.0)
            continue
        task = IntegralTask(_representation_integrand(z, part), SemiInfiniteFrom(1.0),
                            Transform.EXP_SHIFT, rel_tol=tol, abs_tol=tol * 1e-2)
        parts.append(integrate(task).value)
    return complex(parts[0], parts[1])


def reciprocal_log_representation(x: float, tol: float = REPRESENTATION_TOL) -> float:
    """``1/x + integral_1^inf dt / ((log(t-1)^2 + pi^2)(x + t))``, equal to ``1/log(1+x)``."""
    if not x > 0:
        raise DomainError("x must be positive")
    shift = math.log1p(x)

    def f(t):
        return 1.0 / ((np.log(t - 1.0) ** 2 + PI2) * (x + t))

    def on_line(w):
        # e^w / (x + 1 + e^w) = sigma(w - log(1+x))
        return np.exp(-np.logaddexp(0.0, shift - w)) / (w * w + PI2)

    task = IntegralTask(Integrand(f, on_line), SemiInfiniteFrom(1.0), Transform.EXP_SHIFT,
                        rel_tol=tol, abs_tol=tol * 1e-2)
    return 1.0 / x + integrate(task).value


def kth_derivative_via_integral(x: float, k: int, tol: float = REPRESENTATION_TOL) -> float:
    """``d^k/dx^k [x / log(1+x)] = (-1)^(k+1) k! integral_1^inf t (x+t)^-(k+1) / (log(t-1)^2+pi^2) dt``."""
    if not x > 0:
        raise DomainError("x must be positive")
    if int(k) != k or not 1 <= k <= MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order must be an integer in [1, {MAX_DERIVATIVE_ORDER}]")
    k = int(k)
    shift = math.log1p(x)

    def f(t):
        return t / ((np.log(t - 1.0) ** 2 + PI2) * (x + t) ** (k + 1))

    def on_line(w):
        # e^w (1 + e^w) / (1 + x + e^w)^(k+1), with A = log(1 + x + e^w)
        A = np.logaddexp(shift, w)
        return np.exp(w - A) * (1.0 - x * np.exp(-A)) * np.exp(-(k - 1) * A) / (w * w + PI2)

    task = IntegralTask(Integrand(f, on_line), SemiInfiniteFrom(1.0), Transform.EXP_SHIFT,
                        rel_tol=tol, abs_tol=1e-300)
    sign = 1 if k % 2 else -1
    return sign * math.factorial(k) * integrate(task).value


def x_over_log1p(x: float) -> float:
    if x == 0:
        return 1.0
    return x / math.log1p(x)


def x_over_log1p_derivative_series(x: float, k: int, terms: int = 60) -> tuple[float, float]:
    """k-th derivative of ``x/log(1+x)`` from the exact Taylor coefficients.

    Returns ``(value, remainder_bound)``.  The bound uses ``|b_n| <= 1/2`` for
    ``n >= 1``, valid for ``0 <= x < 1``.
    """
    if not 0 <= x < 1:
        raise ValueError("series route needs 0 <= x < 1")
    N = k + terms
    b = bk2_recurrence(N).values
    total = 0.0
    for n in range(k, N + 1):
        total += float(b[n]) * math.perm(n, k) * x ** (n - k)
    # sum_{n>N} n^k x^(n-k) / 2, bounded by a geometric tail once (n+1)^k/n^k * x < 1
    ratio = ((N + 2) / (N + 1)) ** k * x
    head = 0.5 * (N + 1) ** k * x ** (N + 1 - k)
    bound = head / (1 - ratio) if ratio < 1 else math.inf
    return total, bound


def boundary_imaginary_limit(probe: BoundaryProbe) -> float:
    """``Im F(-t + i eps)``; tends to ``-pi * rho(t)`` for ``t > 1`` and to 0 for ``t < 1``."""
    return F_direct(complex(-probe.t, probe.epsilon)).imag


def boundary_limit_closed_form(t: float) -> float:
    """The ``eps -> 0+`` limit of ``Im F(-t + i eps)``."""
    if not t > 0 or t == 1:
        raise DomainError("t must be positive and different from 1")
    if t < 1:
        return 0.0
    return -math.pi * t / ((t - 1) * (math.log(t - 1) ** 2 + PI2))


def decay_bound(r: float) -> float:
    """``r / ((r - 1) log(r - 1))``, a majorant of ``|F|`` on the circle of radius ``r``."""
    return r / ((r - 1) * math.log(r - 1))


def decay_at_infinity_probe(r: float, theta_grid: Sequence[float]) -> float:
    """Largest ``|F(r e^{i theta})|`` over the grid."""
    if not r > 2:
        raise ValueError("r must exceed 2")
    thetas = np.asarray(theta_grid, dtype=float)
    if thetas.size == 0 or np.any(np.abs(thetas) >= math.pi):
        raise ValueError("theta grid must be non-empty and inside (-pi, pi)")
    return max(abs(F_direct(cmath.rect(r, th))) for th in thetas)


def small_z_vanishing_probe(
    eps_grid: Sequence[float], theta_grid: Sequence[float]
) -> list[tuple[float, float, float]]:
    """``(eps, max_theta |z F(z)|, 10 eps/|log eps|)`` for ``z = eps e^{i theta}``.

    The last column is a reporting envelope only.
    """
    if len(eps_grid) == 0 or len(theta_grid) == 0:
        raise ValueError("grids must be non-empty")
    out = []
    for eps in eps_grid:
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        m = 0.0
        for th in theta_grid:
            if abs(th) > math.pi / 2:
                raise ValueError("theta must lie in [-pi/2, pi/2]")
            z = cmath.rect(eps, th)
            m = max(m, abs(z * F_direct(z)))
        out.append((eps, m, 10 * eps / abs(math.log(eps))))
    return out
