"""Fractional eigenvalue cone condition and its dimensional thresholds.

The condition compares the (possibly fractional) partial sum of the smallest
eigenvalues of the second-kind operator against a multiple of the eigenvalue
average.  The dimensional threshold constants are exact rationals; spectra
are compared in floating point with a small boundary tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .operators import Spectrum, dim_tracefree

BOUNDARY_TOL = 1e-12


class NotApplicableError(ValueError):
    """The dimension is outside the range covered by the threshold constants."""


def theta_threshold(n: int) -> Fraction:
    """Exact threshold constant for dimension n.

    Defined for n = 4, n = 5 and n >= 8; dimensions 6 and 7 are an open
    problem and are rejected.
    """
    if n == 4:
        return Fraction(1, 2)
    if n == 5:
        return Fraction(2, 3)
    if n >= 8:
        big_n = dim_tracefree(n)
        return Fraction(2 * big_n - 9 * n + 6, big_n + 6 * n - 3)
    raise NotApplicableError(f"no threshold constant for dimension {n}")


def theta_in_window(n: int) -> bool:
    """Exact check that 0 < theta(n) < 2(n-1)/(n+2)."""
    theta = theta_threshold(n)
    return Fraction(0) < theta < Fraction(2 * (n - 1), n + 2)


@dataclass(frozen=True)
class ConeParams:
    """Pair (alpha, theta) defining the cone condition."""

    alpha: float
    theta: float

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")
        if self.theta <= -1:
            raise ValueError("theta must exceed -1")

    @classmethod
    def for_dimension(cls, n: int, alpha: float = 2.0) -> "ConeParams":
        return cls(alpha, float(theta_threshold(n)))


@dataclass(frozen=True)
class ConeVerdict:
    status: str  # strict | boundary | violated
    margin: float


def partial_sum(spec: Spectrum, alpha: float) -> float:
    """Fractional partial sum of the alpha smallest eigenvalues.

    Sum of the floor(alpha) smallest values plus the fractional remainder
    times the next one.  Requires 1 <= alpha < N and sorted values.
    """
    values = np.asarray(spec.values, dtype=float)
    big_n = len(values)
    if not 1 <= alpha < big_n:
        raise ValueError(f"alpha must lie in [1, {big_n}), got {alpha}")
    whole = int(math.floor(alpha))
    frac = alpha - whole
    total = float(values[:whole].sum())
    if frac > 0.0:
        total += frac * float(values[whole])
    return total


def cone_membership(spec: Spectrum, params: ConeParams, tol: float = BOUNDARY_TOL) -> ConeVerdict:
    """Decide whether a spectrum satisfies the cone condition.

    The margin is the normalized partial sum minus its lower bound
    -theta * lambda_bar; the sign (with tolerance) gives the status.
    """
    margin = partial_sum(spec, params.alpha) / params.alpha + params.theta * spec.lambda_bar
    if margin > tol:
        status = "strict"
    elif margin < -tol:
        status = "violated"
    else:
        status = "boundary"
    return ConeVerdict(status, float(margin))
