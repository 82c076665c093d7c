"""Explicit geometric envelopes that majorize bounded orbits.

For alpha > 1 and exponents in (0, 1], the even and odd subsequences of
each component are dominated termwise by geometric paths

    seed * a**n + (B / (1 - a)) * (1 - a**n),

where a = alpha**-(p+q) < 1, B = alpha**(1-p) + alpha for the x-series
and alpha**(1-q) + alpha for the y-series, and the seeds are the orbit's
own values at indices 2 and 3.  The lower bound alpha holds strictly
from index 1 on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Orbit, Params
from .errors import DomainError


@dataclass(frozen=True)
class EnvelopeCoeffs:
    """Geometric ratio `a` and the per-component drive terms `b`, `c`."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class EnvelopeSeries:
    """Upper-bound sequences seeded from an orbit's indices 2 and 3."""

    seeds: tuple[float, float, float, float]  # x2, x3, y2, y3
    x_even: np.ndarray  # bounds for x at indices 2n+2
    x_odd: np.ndarray   # bounds for x at indices 2n+3
    y_even: np.ndarray
    y_odd: np.ndarray


@dataclass(frozen=True)
class Violation:
    index: int
    component: str
    value: float
    lower: float
    upper: float | None


@dataclass(frozen=True)
class BoundsAudit:
    checked: int
    violations: tuple[Violation, ...]
    early_violations: tuple[Violation, ...]  # upper-bound misses at indices 2-3
    max_slack_used: float

    @property
    def clean(self) -> bool:
        return not self.violations


def envelope_coeffs(params: Params) -> EnvelopeCoeffs:
    """Envelope coefficients; defined only for alpha > 1 (so a < 1)."""
    alpha, p, q = params.alpha, params.p, params.q
    if alpha <= 1.0:
        raise DomainError(f"envelope requires alpha > 1, got alpha={alpha}")
    return EnvelopeCoeffs(
        a=alpha ** -(p + q),
        b=alpha ** (1.0 - p) + alpha,
        c=alpha ** (1.0 - q) + alpha,
    )


def envelope_at(coeffs: EnvelopeCoeffs, seed: float, n: int,
                component: str = "x") -> float:
    """Envelope value seed*a**n + (B/(1-a))*(1-a**n) after n doubled steps."""
    if n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n}")
    drive = coeffs.b if component == "x" else coeffs.c
    an = coeffs.a ** n
    return seed * an + (drive / (1.0 - coeffs.a)) * (1.0 - an)


def envelope_series(coeffs: EnvelopeCoeffs, x2: float, x3: float,
                    y2: float, y3: float, count: int) -> EnvelopeSeries:
    """The four envelope branches out to `count` doubled steps each."""
    n = np.arange(count)
    an = coeffs.a ** n
    bx = coeffs.b / (1.0 - coeffs.a)
    by = coeffs.c / (1.0 - coeffs.a)
    return EnvelopeSeries(
        seeds=(x2, x3, y2, y3),
        x_even=x2 * an + bx * (1.0 - an),
        x_odd=x3 * an + bx * (1.0 - an),
        y_even=y2 * an + by * (1.0 - an),
        y_odd=y3 * an + by * (1.0 - an),
    )


def audit_bounds(orbit: Orbit, params: Params, slack: float = 1e-9) -> BoundsAudit:
    """Check every orbit value against the lower bound and upper envelopes.

    Indices >= 1 must exceed alpha strictly (no slack: each iterate is
    alpha plus a positive term).  Indices >= 2 must also sit below the
    matching even/odd envelope plus `slack`; envelope misses at the seed
    indices 2-3 are recorded separately rather than counted as failures.
    """
    alpha = params.alpha
    coeffs = envelope_coeffs(params)
    if orbit.last_index < 3:
        raise ValueError("bounds audit needs an orbit reaching index 3")

    seeds = {"x": (orbit.x_at(2), orbit.x_at(3)),
             "y": (orbit.y_at(2), orbit.y_at(3))}
    drives = {"x": coeffs.b / (1.0 - coeffs.a),
              "y": coeffs.c / (1.0 - coeffs.a)}

    checked = 0
    violations: list[Violation] = []
    early: list[Violation] = []
    max_slack_used = 0.0
    for k in range(1, orbit.last_index + 1):
        for component in ("x", "y"):
            value = orbit.x_at(k) if component == "x" else orbit.y_at(k)
            upper = None
            if k >= 2:
                seed = seeds[component][k % 2]
                half = (k - 2) // 2
                an = coeffs.a ** half
                upper = seed * an + drives[component] * (1.0 - an)
            checked += 1
            if not value > alpha:
                violations.append(Violation(k, component, value, alpha, upper))
                continue
            if upper is not None:
                overshoot = value - upper
                if overshoot > slack:
                    v = Violation(k, component, value, alpha, upper)
                    (early if k <= 3 else violations).append(v)
                elif overshoot > max_slack_used:
                    max_slack_used = overshoot
    return BoundsAudit(
        checked=checked,
        violations=tuple(violations),
        early_violations=tuple(early),
        max_slack_used=max(0.0, max_slack_used),
    )
