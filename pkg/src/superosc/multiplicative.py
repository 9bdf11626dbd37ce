"""Superoscillations by multiplication.

A product of N factors, each bandlimited to Omega/N and translated so that it
vanishes at one prescribed point, is bandlimited to Omega and vanishes at all
of them. No linear system is solved anywhere here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, NotUniform
from .signals import HarmonicSum, ProductSignal, SincSeries

SINE = "sine"
SHIFTED_SINC = "sinc"
FAMILIES = (SINE, SHIFTED_SINC)


@dataclass(frozen=True)
class ZeroSpec:
    zeros: tuple[float, ...]
    total_bandwidth: float
    family: str = SINE
    factor_bandwidths: tuple[float, ...] | None = None
    # +1 puts the zero of sinc(x) at x = +pi on t_n, -1 uses x = -pi instead
    sinc_sides: tuple[int, ...] | None = None

    def __post_init__(self):
        zeros = tuple(float(z) for z in self.zeros)
        object.__setattr__(self, "zeros", zeros)
        if not zeros:
            raise InvalidSpec("at least one zero is required")
        if not all(math.isfinite(z) for z in zeros):
            raise InvalidSpec("zeros must be finite")
        if any(b <= a for a, b in zip(zeros, zeros[1:])):
            raise InvalidSpec("zeros must be strictly increasing (no duplicates)")
        if not self.total_bandwidth > 0:
            raise InvalidSpec(f"total bandwidth must be positive, got {self.total_bandwidth}")
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown factor family {self.family!r}")
        if self.factor_bandwidths is not None:
            bws = tuple(float(w) for w in self.factor_bandwidths)
            if len(bws) != len(zeros) or any(w <= 0 for w in bws):
                raise InvalidSpec("need one positive bandwidth per zero")
            if sum(bws) > self.total_bandwidth * (1 + 1e-12):
                raise InvalidSpec("factor bandwidths exceed the total bandwidth")
            object.__setattr__(self, "factor_bandwidths", bws)
        if self.sinc_sides is not None:
            sides = tuple(int(s) for s in self.sinc_sides)
            if len(sides) != len(zeros) or any(s not in (1, -1) for s in sides):
                raise InvalidSpec("sinc_sides must hold one +1/-1 per zero")
            object.__setattr__(self, "sinc_sides", sides)

    @property
    def n(self) -> int:
        return len(self.zeros)

    def bandwidths(self) -> tuple[float, ...]:
        if self.factor_bandwidths is not None:
            return self.factor_bandwidths
        return (self.total_bandwidth / self.n,) * self.n

    @property
    def factor_nyquist(self) -> float:
        """Nyquist spacing pi*N/Omega of an equal-split factor."""
        return math.pi * self.n / self.total_bandwidth


def uniform_zeros(n: int, spacing: float, center: float = 0.0) -> tuple[float, ...]:
    """n zeros ``spacing`` apart, centered on ``center``."""
    return tuple(center + (k - (n - 1) / 2) * spacing for k in range(n))


def sine_factor(zero: float, band: float) -> HarmonicSum:
    """sin(band * (t - zero)) written as a cosine term."""
    return HarmonicSum(((1.0, band, -band * zero - math.pi / 2),))


def sinc_factor(zero: float, band: float, side: int = 1) -> SincSeries:
    """sinc(band * (t - zero) + side*pi): a translated sinc whose first zero sits at ``zero``."""
    return SincSeries(band, (zero - side * math.pi / band,), (1.0,))


def generate_multiplicative(spec: ZeroSpec) -> ProductSignal:
    factors = []
    sides = spec.sinc_sides or (1,) * spec.n
    for zero, band, side in zip(spec.zeros, spec.bandwidths(), sides):
        if spec.family == SINE:
            factors.append(sine_factor(zero, band))
        else:
            factors.append(sinc_factor(zero, band, side))
    return ProductSignal(tuple(factors))


def reference_interval(spec: ZeroSpec) -> tuple[float, float]:
    """Two factor-Nyquist spacings beyond the outermost zeros on each side."""
    pad = 2 * spec.factor_nyquist
    return spec.zeros[0] - pad, spec.zeros[-1] + pad


def stretch(spec: ZeroSpec) -> tuple[float, float]:
    return spec.zeros[0], spec.zeros[-1]


def compression(spec: ZeroSpec) -> float:
    """Zero spacing divided by the factor Nyquist spacing (uniform zeros only)."""
    return uniform_spacing(spec) / spec.factor_nyquist


def uniform_spacing(spec: ZeroSpec) -> float:
    gaps = np.diff(spec.zeros)
    if gaps.size == 0:
        raise NotUniform("a single zero has no spacing")
    s = float(gaps.mean())
    if np.max(np.abs(gaps - s)) > 1e-9 * s:
        raise NotUniform("zeros are not uniformly spaced")
    return s


def superoscillation_region_model(spec: ZeroSpec, spacing: float | None = None) -> float:
    """First-order prediction of the amplitude scale between the zeros.

    Each factor is replaced by its tangent line at its zero, so the product is
    ``prod |g_n'(t_n)| * (s/2)**N`` with s the uniform spacing. For N = 1 there is
    no spacing to measure and ``spacing`` must be given.
    """
    if spec.n == 1:
        if spacing is None:
            raise NotUniform("a single zero needs an explicit spacing")
        s = float(spacing)
    else:
        s = uniform_spacing(spec)
    if spec.family == SINE:
        slopes = spec.bandwidths()
    else:
        # d/dx sin(x)/x at x = +-pi has magnitude 1/pi
        slopes = tuple(w / math.pi for w in spec.bandwidths())
    return math.prod(slopes) * (s / 2) ** spec.n
