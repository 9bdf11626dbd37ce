"""Windowed spectra of superoscillating signals.

A bandlimited signal carries no frequency above its bandlimit on the full
line, so whatever amplitude a super-band frequency has inside a window must be
cancelled by the transform over the rest of the line. The full complement is
not computable, so it is truncated at +-T_max and convergence is reported
along a doubling ladder instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BandViolation
from .signals import Signal, sample_grid, windowed_transform

DEFECT_FLOOR = 1e-30


@dataclass(frozen=True)
class AntisymmetryReport:
    omega: float
    a_in: complex
    a_out: complex
    defect: float
    t_max: float
    truncation_dominated: bool

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "a_in": [self.a_in.real, self.a_in.imag],
            "a_out": [self.a_out.real, self.a_out.imag],
            "defect": self.defect,
            "t_max": self.t_max,
            "truncation_dominated": self.truncation_dominated,
        }


def antisymmetry_report(signal: Signal, window, omega: float, t_max: float, tol: float = 1e-10) -> AntisymmetryReport:
    t1, t2 = map(float, window)
    omega = float(omega)
    if not t1 < t2:
        raise ValueError("window must satisfy t1 < t2")
    if not (-t_max <= t1 and t2 <= t_max):
        raise ValueError(f"window [{t1}, {t2}] is not inside [-{t_max}, {t_max}]")
    band = signal.declared_bandwidth()
    if not omega > band:
        raise BandViolation(f"probe frequency {omega} does not exceed the bandwidth {band}")
    a_in = windowed_transform(signal, t1, t2, omega, tol)
    a_out = windowed_transform(signal, -t_max, t1, omega, tol) + windowed_transform(signal, t2, t_max, omega, tol)
    defect = abs(a_in + a_out) / max(abs(a_in), DEFECT_FLOOR)
    return AntisymmetryReport(omega, a_in, a_out, defect, float(t_max), not signal.square_integrable())


def cancellation_ladder(signal: Signal, window, omega: float, t_values, tol: float = 1e-10) -> list[AntisymmetryReport]:
    return [antisymmetry_report(signal, window, omega, T, tol) for T in t_values]


def zero_crossings(signal: Signal, interval, oversampling: int = 64, min_points: int = 4096) -> list[float]:
    """Sign changes on an oversampled grid, each located to 1e-12 in time."""
    a, b = map(float, interval)
    t = sample_grid(signal, (a, b), oversampling, min_points)
    y = np.asarray(signal.evaluate(t))
    f = lambda s: float(signal.evaluate(s))
    exact = set(np.flatnonzero(y == 0.0).tolist())
    flips = np.flatnonzero(y[:-1] * y[1:] < 0).tolist()
    roots = [float(t[i]) for i in exact]
    for i in flips:
        # the scalar path can round differently from the vector path at noise level
        fa, fb = f(t[i]), f(t[i + 1])
        if fa == 0.0 or fb == 0.0:
            roots.append(float(t[i] if fa == 0.0 else t[i + 1]))
        elif fa * fb < 0:
            roots.append(brentq(f, t[i], t[i + 1], xtol=1e-12))
    return sorted(set(roots))


def local_frequency(signal: Signal, interval, oversampling: int = 64, min_points: int = 4096) -> list[tuple[float, float]]:
    """(gap midpoint, pi / gap) for every pair of consecutive zeros."""
    z = zero_crossings(signal, interval, oversampling, min_points)
    return [(0.5 * (lo + hi), math.pi / (hi - lo)) for lo, hi in zip(z, z[1:])]


def max_local_frequency(signal: Signal, interval, **kw) -> float:
    rates = local_frequency(signal, interval, **kw)
    return max((w for _, w in rates), default=0.0)
