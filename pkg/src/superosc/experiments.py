"""Dynamic-range scaling laws and the channel-capacity bookkeeping around them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import additive, multiplicative
from .errors import DegenerateStretch, SuperoscError
from .signals import Signal, sup_norm_on

MULT = "mult"
MINNORM = "minnorm"
# grid points per zero gap inside the stretch
POINTS_PER_GAP = 24


def shannon_hartley(band_hz: float, snr: float) -> float:
    """Capacity in bits per unit time of a band_hz-wide channel at signal-to-noise ratio snr."""
    if not (math.isfinite(band_hz) and math.isfinite(snr)) or band_hz < 0 or snr < 0:
        raise ValueError("bandwidth and SNR must be finite and non-negative")
    return band_hz * math.log2(1.0 + snr)


def _subtract(reference, stretch):
    r1, r2 = reference
    s1, s2 = stretch
    parts = []
    if r1 < min(s1, r2):
        parts.append((r1, min(s1, r2)))
    if r2 > max(s2, r1):
        parts.append((max(s2, r1), r2))
    return parts


def dynamic_range(signal: Signal, stretch, reference, oversampling: int = 16, stretch_oversampling: int | None = None) -> float:
    """sup |f| over ``reference`` minus the stretch, divided by sup |f| over the stretch.

    A reference interval that encloses the stretch is read as its two flanks.
    """
    if oversampling < 16:
        raise ValueError("oversampling must be at least 16")
    s1, s2 = map(float, stretch)
    flanks = _subtract(tuple(map(float, reference)), (s1, s2))
    if not flanks:
        raise ValueError("reference interval has nothing outside the stretch")
    inner = sup_norm_on(signal, (s1, s2), stretch_oversampling or oversampling)
    if inner < 1e-300:
        raise DegenerateStretch(f"sup |f| over the stretch is {inner:.3e}")
    outer = max(sup_norm_on(signal, part, oversampling) for part in flanks)
    return outer / inner


@dataclass(frozen=True)
class DynamicRangeMeasurement:
    n: int
    compression: float
    method: str
    dynamic_range: float | None
    kappa: float | None
    reference: tuple[float, float]
    stretch: tuple[float, float]
    note: str = ""

    def row(self):
        return (self.method, self.n, self.compression, self.dynamic_range, self.kappa, *self.reference)


def _stretch_oversampling(oversampling: int, band: float, spacing: float) -> int:
    return max(oversampling, math.ceil(POINTS_PER_GAP * math.pi / (band * spacing)))


def mult_setup(n: int, c: float, band: float, family: str = multiplicative.SINE):
    """Uniform zeros spaced c times the Nyquist spacing pi/band of the whole product.

    Spacing is measured against pi/band rather than the factor spacing pi*n/band
    so that c < 1 always means sub-Nyquist zeros and both generators share one
    meaning of c.
    """
    s = c * math.pi / band
    spec = multiplicative.ZeroSpec(multiplicative.uniform_zeros(n, s), band, family)
    stretch = (spec.zeros[0], spec.zeros[-1]) if n > 1 else (spec.zeros[0] - s / 2, spec.zeros[0] + s / 2)
    return spec, stretch, multiplicative.reference_interval(spec), s


def minnorm_setup(n: int, c: float, band: float):
    """n alternating constraints spaced c times the Nyquist spacing pi/band."""
    s = c * math.pi / band
    cs = additive.alternating(n, s)
    stretch = (cs.points[0], cs.points[-1]) if n > 1 else (cs.points[0] - s / 2, cs.points[0] + s / 2)
    pad = 2 * math.pi * n / band
    return cs, stretch, (cs.points[0] - pad, cs.points[-1] + pad), s


def measure(method: str, n: int, c: float, band: float, oversampling: int = 16,
            family: str = multiplicative.SINE) -> DynamicRangeMeasurement:
    if method == MULT:
        spec, stretch, ref, s = mult_setup(n, c, band, family)
        signal = multiplicative.generate_multiplicative(spec)
        kappa = None
    elif method == MINNORM:
        cs, stretch, ref, s = minnorm_setup(n, c, band)
        try:
            signal, report = additive.solve_minnorm(cs.points, cs.amplitudes, band)
        except SuperoscError as exc:
            return DynamicRangeMeasurement(n, c, method, None, None, ref, stretch, type(exc).__name__)
        kappa = report.kappa
    else:
        raise ValueError(f"unknown method {method!r}")
    d = dynamic_range(signal, stretch, ref, oversampling, _stretch_oversampling(oversampling, band, s))
    return DynamicRangeMeasurement(n, c, method, d, kappa, ref, stretch)


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    r2: float
    points: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2, "points": self.points}


def ols(x, y) -> Fit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 4:
        raise ValueError("a fit needs at least 4 points")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return Fit(float(slope), float(intercept), r2, int(x.size))


@dataclass
class ScalingReport:
    method: str
    band: float
    rows: list[DynamicRangeMeasurement]
    fit_n: dict[float, Fit] = field(default_factory=dict)
    fit_c: dict[int, Fit] = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "band": self.band,
            "fit_log_d_vs_n": [{"compression": c, **f.to_dict()} for c, f in self.fit_n.items()],
            "fit_log_d_vs_log_inv_c": [{"n": n, **f.to_dict()} for n, f in self.fit_c.items()],
            "missing": [[r.n, r.compression, r.note] for r in self.rows if r.dynamic_range is None],
        }


def scaling_experiment(method: str, ns, compressions, band: float, oversampling: int = 16,
                       family: str = multiplicative.SINE) -> ScalingReport:
    """Measure D on the (N, c) grid; fit log D against N per c and against log(1/c) per N.

    N = 1 rows are measured but never enter the log(1/c) fit: with a single
    zero there is no superoscillating stretch between zeros.
    """
    ns = [int(n) for n in ns]
    compressions = [float(c) for c in compressions]
    if len(ns) < 4 or len(compressions) < 4:
        raise ValueError("need at least 4 values of N and of c")
    if any(not 0 < c < 1 for c in compressions):
        raise ValueError("compressions must lie in (0, 1)")
    rows = [measure(method, n, c, band, oversampling, family) for n in ns for c in compressions]
    report = ScalingReport(method, band, rows)
    for c in compressions:
        pts = [(r.n, math.log(r.dynamic_range)) for r in rows if r.compression == c and r.dynamic_range]
        if len(pts) >= 4:
            report.fit_n[c] = ols(*zip(*pts))
    for n in ns:
        if n < 2:
            continue
        pts = [(math.log(1 / r.compression), math.log(r.dynamic_range)) for r in rows if r.n == n and r.dynamic_range]
        if len(pts) >= 4:
            report.fit_c[n] = ols(*zip(*pts))
    return report


@dataclass(frozen=True)
class CapacityReport:
    n: int
    compression: float
    band: float
    stretch_duration: float
    total_duration: float
    dynamic_range: float
    bit_rate: float
    capacity: float
    ratio: float
    snr_proxy: str = "D^2"
    band_hz_convention: str = "band/(2*pi)"

    @property
    def log_snr(self) -> float:
        return math.log2(1.0 + self.dynamic_range**2)

    def row(self):
        return (self.n, self.compression, self.band, self.stretch_duration, self.total_duration,
                self.dynamic_range, self.bit_rate, self.capacity, self.ratio)


CAPACITY_HEADER = ("N", "c", "band", "tau", "tau_total", "D", "bit_rate", "capacity", "ratio")


def capacity_consistency(n: int, band: float, compression: float | None = None, tau: float | None = None,
                         oversampling: int = 16) -> CapacityReport:
    """Compare N/tau_total with (band/2pi) * log2(1 + D^2) for N alternating constraints.

    Either ``compression`` (spacing over pi/band) or ``tau`` (N equal slots of
    width tau/N) fixes the spacing.
    """
    if (compression is None) == (tau is None):
        raise ValueError("give exactly one of compression or tau")
    c = compression if compression is not None else (tau / n) * band / math.pi
    cs, stretch, ref, s = minnorm_setup(n, c, band)
    signal, _ = additive.solve_minnorm(cs.points, cs.amplitudes, band)
    d = dynamic_range(signal, stretch, ref, oversampling, _stretch_oversampling(oversampling, band, s))
    total = ref[1] - ref[0]
    rate = n / total
    cap = shannon_hartley(band / (2 * math.pi), d * d)
    return CapacityReport(n, c, band, n * s, total, d, rate, cap, rate / cap)
