"""Error-vector tracking and decay-rate estimation for converging orbits.

The deviation of a converging orbit from the equilibrium, stacked over
three lags of both components, contracts asymptotically at a rate equal
to the modulus of one eigenvalue of the linearization.  The rate is
estimated two ways: the geometric mean of successive error-norm ratios
over a trailing window, and the n-th root of the last usable norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import Equilibrium, Orbit
from .errors import InsufficientDataError

NORM_FLOOR = 1e-13
DEFAULT_BURN_IN = 20
DEFAULT_WINDOW = 50


@dataclass(frozen=True)
class ErrorVector:
    """Deviations from the equilibrium at lags 0, 1, 2 of both components."""

    n: int
    x_dev: float
    x_dev_prev: float
    x_dev_prev2: float
    y_dev: float
    y_dev_prev: float
    y_dev_prev2: float
    norm: float


@dataclass(frozen=True)
class RateEstimate:
    ratio_estimate: float
    root_estimate: float
    matched_modulus: float | None
    gap: float | None
    usable_range: tuple[int, int]


def error_norms(orbit: Orbit, eq: Equilibrium, floor: float = NORM_FLOOR) -> np.ndarray:
    """Euclidean norms of the stacked error vectors for n >= 0.

    The sequence stops at the first norm below `floor`, under which
    cancellation noise in value - equilibrium dominates.
    """
    dx = orbit.xs - eq.x_bar
    dy = orbit.ys - eq.y_bar
    norms = np.sqrt(dx[2:] ** 2 + dx[1:-1] ** 2 + dx[:-2] ** 2
                    + dy[2:] ** 2 + dy[1:-1] ** 2 + dy[:-2] ** 2)
    below = np.flatnonzero(norms < floor)
    if len(below):
        norms = norms[: below[0]]
    return norms


def error_sequence(orbit: Orbit, eq: Equilibrium,
                   floor: float = NORM_FLOOR) -> list[ErrorVector]:
    """Stacked error vectors with norms, truncated at the norm floor."""
    norms = error_norms(orbit, eq, floor=floor)
    dx = orbit.xs - eq.x_bar
    dy = orbit.ys - eq.y_bar
    out = []
    for i, norm in enumerate(norms):
        out.append(ErrorVector(
            n=i,
            x_dev=float(dx[i + 2]), x_dev_prev=float(dx[i + 1]), x_dev_prev2=float(dx[i]),
            y_dev=float(dy[i + 2]), y_dev_prev=float(dy[i + 1]), y_dev_prev2=float(dy[i]),
            norm=float(norm),
        ))
    return out


def estimate_rate(norms, burn_in: int = DEFAULT_BURN_IN,
                  window: int = DEFAULT_WINDOW) -> RateEstimate:
    """Decay-rate estimates from an error-norm sequence.

    ratio_estimate is the geometric mean of the last `window` consecutive
    norm ratios (telescoping to an end-point ratio); root_estimate is
    norms[N]**(1/N) at the last index.  Requires burn_in + window + 1
    usable norms.
    """
    norms = np.asarray(norms, dtype=np.float64)
    if burn_in < 0 or window < 1:
        raise ValueError("burn_in must be >= 0 and window >= 1")
    needed = burn_in + window + 1
    if len(norms) < needed:
        raise InsufficientDataError(
            f"need {needed} usable norms (burn_in={burn_in}, window={window}), "
            f"got {len(norms)}")
    if not np.all(np.isfinite(norms)) or np.any(norms <= 0.0):
        raise InsufficientDataError("norms must be positive and finite")
    last = len(norms) - 1
    ratio = float((norms[last] / norms[last - window]) ** (1.0 / window))
    root = float(norms[last] ** (1.0 / last))
    return RateEstimate(
        ratio_estimate=ratio,
        root_estimate=root,
        matched_modulus=None,
        gap=None,
        usable_range=(last - window, last),
    )


def match_eigenvalue(estimate: float, eigs) -> tuple[float, float]:
    """Eigenvalue modulus nearest the estimate, with the gap."""
    moduli = [abs(complex(z)) for z in eigs]
    matched = min(moduli, key=lambda m: abs(estimate - m))
    return matched, abs(estimate - matched)


def fit_window(usable: int, theta: float | None = None,
               burn_in: int = DEFAULT_BURN_IN,
               window: int = DEFAULT_WINDOW, min_burn_in: int = 10) -> tuple[int, int]:
    """Choose (burn_in, window) for a usable-norm sequence.

    Without a rotation angle the defaults are kept when they fit and are
    otherwise shrunk to an even window.  Given the rotation angle of the
    dominant eigenvalue, the window is instead aligned so window * theta
    sits near a multiple of pi: complex dominant pairs modulate the error
    norms at that frequency, and an aligned even window cancels the
    modulation at both telescoping endpoints regardless of its phase.
    """
    top = usable - 1 - max(min_burn_in, (usable - 1) // 4)
    if theta is None:
        if usable >= burn_in + window + 1:
            return burn_in, window
        w = min(window, top)
        w -= w % 2
    else:
        best, best_score = None, None
        for w_try in range(8, top + 1, 2):
            k = round(w_try * theta / math.pi)
            score = abs(w_try * theta - k * math.pi) / w_try
            if best is None or score <= best_score - 1e-12 or (
                    abs(score - best_score) < 1e-12 and w_try > best):
                best, best_score = w_try, score
        w = 0 if best is None else best
    if w < 8:
        raise InsufficientDataError(
            f"only {usable} usable norms; too few for a rate estimate")
    return usable - 1 - w, w


def rate_report(orbit: Orbit, eq: Equilibrium, eigs,
                burn_in: int | None = None,
                window: int | None = None,
                floor: float = NORM_FLOOR,
                convergence_tol: float = 1e-6) -> RateEstimate:
    """Rate estimate for a converged orbit, matched to the spectrum.

    Raises InsufficientDataError when the orbit did not converge to the
    equilibrium (final deviation >= convergence_tol) or the usable norm
    sequence is too short.  When burn_in/window are not given they are
    auto-fitted to the usable length and aligned with the dominant
    eigenvalue's rotation angle.
    """
    final_dev = max(abs(orbit.x_at(orbit.last_index) - eq.x_bar),
                    abs(orbit.y_at(orbit.last_index) - eq.y_bar))
    if not orbit.termination.completed or not final_dev < convergence_tol:
        raise InsufficientDataError(
            f"orbit did not converge (final deviation {final_dev:g}, "
            f"termination {orbit.termination.kind})")
    norms = error_norms(orbit, eq, floor=floor)
    if window is None:
        dominant = max((complex(z) for z in eigs),
                       key=lambda z: (abs(z), abs(z.imag)))
        theta = None
        if abs(dominant) > 0.0:
            theta = abs(math.atan2(dominant.imag, dominant.real))
        b, w = fit_window(len(norms), theta=theta)
    else:
        w = window
        b = burn_in if burn_in is not None else max(0, len(norms) - 1 - w)
    estimate = estimate_rate(norms, burn_in=b, window=w)
    matched, gap = match_eigenvalue(estimate.ratio_estimate, eigs)
    return replace(estimate, matched_modulus=matched, gap=gap)
