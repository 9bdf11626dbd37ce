"""Registered basis families for generic-span interpolation.

Each family evaluates ``b_n(t)`` in float64 (vectorized over ``t``) and, for the
built-in families, also in mpmath so constraint matrices can be rebuilt at any
working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import mpmath
import numpy as np

from .errors import UnknownBasis


@dataclass(frozen=True)
class BasisFamily:
    name: str
    count: int
    evaluator: Callable[[int, Any], Any]
    mp_evaluator: Callable[[int, Any], Any] | None = None
    bandwidth: float | None = None
    square_integrable: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("a basis needs at least one function")

    def evaluate(self, n, t):
        return self.evaluator(n, t)


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def _mp_sinc(x):
    return mpmath.sinc(x)


def monomial(count: int) -> BasisFamily:
    count = int(count)
    return BasisFamily(
        "monomial",
        count,
        lambda n, t: np.asarray(t, dtype=float) ** n,
        lambda n, t: mpmath.mpf(t) ** n,
        params={"count": count},
    )


def gaussian(centers, width: float) -> BasisFamily:
    centers = tuple(float(c) for c in centers)
    width = float(width)
    if width <= 0:
        raise ValueError("gaussian width must be positive")

    def ev(n, t):
        u = (np.asarray(t, dtype=float) - centers[n]) / width
        return np.exp(-0.5 * u * u)

    def mp_ev(n, t):
        u = (mpmath.mpf(t) - mpmath.mpf(centers[n])) / mpmath.mpf(width)
        return mpmath.exp(-u * u / 2)

    return BasisFamily(
        "gaussian",
        len(centers),
        ev,
        mp_ev,
        square_integrable=True,
        params={"centers": list(centers), "width": width},
    )


def _fourier_index(n: int, constant: bool) -> tuple[int, str]:
    if constant:
        if n == 0:
            return 0, "cos"
        n -= 1
    k = n // 2 + 1
    return k, "cos" if n % 2 == 0 else "sin"


def fourier(count: int, freq: float, constant: bool = True) -> BasisFamily:
    """1, cos(wt), sin(wt), cos(2wt), ... (the leading 1 dropped when ``constant`` is False)."""
    count = int(count)
    freq = float(freq)

    def ev(n, t):
        k, kind = _fourier_index(n, constant)
        arg = k * freq * np.asarray(t, dtype=float)
        return np.cos(arg) if kind == "cos" else np.sin(arg)

    def mp_ev(n, t):
        k, kind = _fourier_index(n, constant)
        arg = k * mpmath.mpf(freq) * mpmath.mpf(t)
        return mpmath.cos(arg) if kind == "cos" else mpmath.sin(arg)

    top = max(_fourier_index(n, constant)[0] for n in range(count))
    return BasisFamily(
        "fourier",
        count,
        ev,
        mp_ev,
        bandwidth=top * abs(freq),
        params={"count": count, "freq": freq, "constant": bool(constant)},
    )


def sinc(band: float, centers) -> BasisFamily:
    """Sinc kernels of bandwidth ``band`` centered at ``centers``."""
    band = float(band)
    centers = tuple(float(c) for c in centers)
    if band <= 0:
        raise ValueError("sinc band must be positive")

    def ev(n, t):
        return _sinc(band * (np.asarray(t, dtype=float) - centers[n]))

    def mp_ev(n, t):
        return _mp_sinc(mpmath.mpf(band) * (mpmath.mpf(t) - mpmath.mpf(centers[n])))

    return BasisFamily(
        "sinc",
        len(centers),
        ev,
        mp_ev,
        bandwidth=band,
        square_integrable=True,
        params={"band": band, "centers": list(centers)},
    )


_REGISTRY: dict[str, Callable[..., BasisFamily]] = {
    "monomial": monomial,
    "gaussian": gaussian,
    "fourier": fourier,
    "sinc": sinc,
}


def register_basis(name: str, factory: Callable[..., BasisFamily]) -> None:
    _REGISTRY[name] = factory


def registered() -> list[str]:
    return sorted(_REGISTRY)


def make_basis(name: str, **params) -> BasisFamily:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise UnknownBasis(f"no basis family named {name!r}; known: {registered()}") from None
    return factory(**params)
