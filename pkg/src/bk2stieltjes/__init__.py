"""Bernoulli numbers of the second kind, the Stieltjes function x/((1+x)log(1+x)),
and a verification battery tying the two together."""

from .exact import (
    Bk2Table,
    CmCertificate,
    DifferenceTable,
    alternating_sequence,
    bk2_falling_factorial,
    bk2_recurrence,
    certify_cm,
    difference_table,
)
from .measure import DomainError, bk2_via_integral, density_rho, moment_unit_interval, total_mass_identity
from .cplane import F_direct, F_via_representation, kth_derivative_via_integral, reciprocal_log_representation
from .quadrature import IntegralResult, IntegralTask, integrate
from .records import VerificationRecord

__version__ = "0.1.0"
