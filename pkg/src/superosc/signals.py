"""Signal representations, exact evaluation, bandwidth bookkeeping, norms and windowed spectra.

Three concrete forms share one small protocol (``evaluate``, ``declared_bandwidth``,
``to_dict``):

* :class:`HarmonicSum`  -- sum of ``amp * cos(freq * t + phase)``
* :class:`SincSeries`   -- sum of ``c_k * sinc(band * (t - t_k))`` with ``sinc(x) = sin(x)/x``
* :class:`ProductSignal` -- pointwise product of other signals

plus :class:`BasisSum`, a coefficient vector over a registered basis family.

Frequencies are angular (rad per unit time) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Union

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import bases
from .errors import CapExceeded
from .quadrature import integrate

EXPAND_CAP = 2**22
MERGE_TOL = 1e-12
_CHUNK = 1 << 18


def sinc(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _finish(values, scalar):
    return float(values.reshape(-1)[0]) if scalar else values


@dataclass(frozen=True)
class HarmonicSum:
    """Finite sum of cosines; each term is ``(amp, freq, phase)``."""

    terms: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        terms = tuple((float(a), float(w), float(p)) for a, w, p in self.terms)
        for _, w, _ in terms:
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"term frequency must be finite and >= 0, got {w}")
        object.__setattr__(self, "terms", terms)

    def evaluate(self, t):
        arr, scalar = _as_array(t)
        out = np.zeros(arr.shape)
        for a, w, p in self.terms:
            out += a * np.cos(w * arr + p)
        return _finish(out, scalar)

    def declared_bandwidth(self) -> float:
        return max((w for _, w, _ in self.terms), default=0.0)

    def square_integrable(self) -> bool:
        return all(a == 0 for a, _, _ in self.terms)

    def to_dict(self) -> dict:
        return {
            "type": "harmonic_sum",
            "terms": [{"amp": a, "freq": w, "phase": p} for a, w, p in self.terms],
        }


@dataclass(frozen=True)
class SincSeries:
    """``sum_k coeffs[k] * sinc(band * (t - centers[k]))``.

    When ``precision`` (bits) is set, the coefficients are mpmath numbers and
    every evaluation runs in that precision before rounding to float64. This is
    how fine-tuned minimum-norm coefficients stay meaningful after the solver
    had to escalate past double precision.
    """

    band: float
    centers: tuple[float, ...]
    coeffs: tuple[Any, ...]
    precision: int | None = None

    def __post_init__(self):
        band = float(self.band)
        if not band > 0:
            raise ValueError("sinc series bandwidth must be positive")
        centers = tuple(float(c) for c in self.centers)
        if len(centers) != len(self.coeffs):
            raise ValueError("centers and coefficients differ in length")
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError("centers must be strictly increasing")
        if self.precision is None:
            coeffs = tuple(float(c) for c in self.coeffs)
        else:
            with mpmath.workprec(self.precision):
                coeffs = tuple(mpmath.mpf(c) for c in self.coeffs)
        object.__setattr__(self, "band", band)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "coeffs", coeffs)

    def evaluate(self, t):
        arr, scalar = _as_array(t)
        flat = arr.reshape(-1)
        if self.precision is not None:
            out = self._evaluate_mp(flat)
        else:
            out = np.zeros(flat.shape)
            if self.centers:
                c = np.asarray(self.centers)
                k = np.asarray(self.coeffs)
                step = max(1, _CHUNK // len(c))
                for i in range(0, flat.size, step):
                    chunk = flat[i : i + step]
                    out[i : i + step] = sinc(self.band * (chunk[:, None] - c[None, :])) @ k
        return _finish(out.reshape(arr.shape), scalar)

    def _evaluate_mp(self, flat):
        out = np.empty(flat.shape)
        with mpmath.workprec(self.precision + 24):
            band = mpmath.mpf(self.band)
            centers = [mpmath.mpf(c) for c in self.centers]
            cos_k = [mpmath.cos(band * c) for c in centers]
            sin_k = [mpmath.sin(band * c) for c in centers]
            for i, ti in enumerate(flat):
                x = mpmath.mpf(float(ti))
                s, c = mpmath.sin(band * x), mpmath.cos(band * x)
                acc = mpmath.mpf(0)
                for ck, tk, ck_cos, ck_sin in zip(self.coeffs, centers, cos_k, sin_k):
                    d = x - tk
                    if d == 0:
                        acc += ck
                    else:
                        acc += ck * (s * ck_cos - c * ck_sin) / (band * d)
                out[i] = float(acc)
        return out

    def declared_bandwidth(self) -> float:
        return self.band

    def square_integrable(self) -> bool:
        return True

    def to_dict(self) -> dict:
        d = {
            "type": "sinc_series",
            "band": self.band,
            "centers": list(self.centers),
            "coeffs": list(self.coeffs),
        }
        if self.precision is not None:
            d["precision"] = self.precision
        return d


@dataclass(frozen=True)
class ProductSignal:
    factors: tuple["Signal", ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def evaluate(self, t):
        arr, scalar = _as_array(t)
        out = np.ones(arr.shape)
        for g in self.factors:
            out = out * np.asarray(g.evaluate(arr))
        return _finish(out, scalar)

    def declared_bandwidth(self) -> float:
        return sum(g.declared_bandwidth() for g in self.factors)

    def square_integrable(self) -> bool:
        # every supported form is bounded, so one decaying factor suffices
        return any(g.square_integrable() for g in self.factors)

    def to_dict(self) -> dict:
        return {"type": "product", "factors": [g.to_dict() for g in self.factors]}


@dataclass(frozen=True)
class BasisSum:
    """``sum_n coeffs[n] * b_n(t)`` over a registered basis family."""

    family: str
    params: dict
    coeffs: tuple[Any, ...]
    precision: int | None = None
    basis: bases.BasisFamily | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.precision is None:
            coeffs = tuple(float(c) for c in self.coeffs)
        else:
            with mpmath.workprec(self.precision):
                coeffs = tuple(mpmath.mpf(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.basis is None:
            object.__setattr__(self, "basis", bases.make_basis(self.family, **self.params))
        if self.basis.count != len(coeffs):
            raise ValueError("coefficient count does not match the basis")

    def evaluate(self, t):
        arr, scalar = _as_array(t)
        flat = arr.reshape(-1)
        if self.precision is not None and self.basis.mp_evaluator is not None:
            out = np.empty(flat.shape)
            with mpmath.workprec(self.precision + 24):
                for i, ti in enumerate(flat):
                    x = mpmath.mpf(float(ti))
                    out[i] = float(
                        mpmath.fsum(c * self.basis.mp_evaluator(n, x) for n, c in enumerate(self.coeffs))
                    )
        else:
            out = np.zeros(flat.shape)
            for n, c in enumerate(self.coeffs):
                out += float(c) * self.basis.evaluate(n, flat)
        return _finish(out.reshape(arr.shape), scalar)

    def declared_bandwidth(self) -> float:
        bw = self.basis.bandwidth
        return math.inf if bw is None else bw

    def square_integrable(self) -> bool:
        return self.basis.square_integrable

    def to_dict(self) -> dict:
        d = {
            "type": "basis_sum",
            "family": self.family,
            "params": self.params,
            "coeffs": list(self.coeffs),
        }
        if self.precision is not None:
            d["precision"] = self.precision
        return d


Signal = Union[HarmonicSum, SincSeries, ProductSignal, BasisSum]


_EPS = np.finfo(float).eps


def magnitude_bound(signal: Signal) -> float:
    """A crude sup bound: sum of absolute amplitudes (|cos|, |sinc| <= 1)."""
    if isinstance(signal, HarmonicSum):
        return sum(abs(a) for a, _, _ in signal.terms)
    if isinstance(signal, (SincSeries, BasisSum)):
        return float(sum(abs(c) for c in signal.coeffs))
    return math.prod(magnitude_bound(g) for g in signal.factors)


def rounding_noise(signal: Signal) -> float:
    """Rough absolute bound on the rounding error of ``signal.evaluate``."""
    if isinstance(signal, ProductSignal):
        bounds = [magnitude_bound(g) for g in signal.factors]
        total = 0.0
        for i, g in enumerate(signal.factors):
            total += rounding_noise(g) * math.prod(bounds[:i] + bounds[i + 1 :])
        return total
    prec = getattr(signal, "precision", None)
    unit = _EPS if prec is None else 2.0**-prec
    return 4 * unit * magnitude_bound(signal)


def evaluate(signal: Signal, t):
    return signal.evaluate(t)


def declared_bandwidth(signal: Signal) -> float:
    return signal.declared_bandwidth()


def is_square_integrable(signal: Signal) -> bool:
    return signal.square_integrable()


def zero_signal() -> HarmonicSum:
    return HarmonicSum(())


def from_dict(d: dict) -> Signal:
    kind = d["type"]
    if kind == "harmonic_sum":
        return HarmonicSum(tuple((x["amp"], x["freq"], x["phase"]) for x in d["terms"]))
    if kind == "sinc_series":
        prec = d.get("precision")
        return SincSeries(float(d["band"]), d["centers"], _coeffs(d["coeffs"], prec), prec)
    if kind == "product":
        return ProductSignal(tuple(from_dict(f) for f in d["factors"]))
    if kind == "basis_sum":
        prec = d.get("precision")
        return BasisSum(d["family"], dict(d["params"]), _coeffs(d["coeffs"], prec), prec)
    raise ValueError(f"unknown signal type {kind!r}")


def _coeffs(raw, prec):
    if prec is None:
        return tuple(float(c) for c in raw)
    with mpmath.workprec(prec):
        return tuple(mpmath.mpf(getattr(c, "text", None) or repr(c)) for c in raw)


# -- exact certification ------------------------------------------------------


def _flatten(p: Signal) -> list[HarmonicSum]:
    if isinstance(p, ProductSignal):
        out = []
        for g in p.factors:
            out.extend(_flatten(g))
        return out
    if isinstance(p, HarmonicSum):
        return [p]
    raise TypeError(f"expand_product needs harmonic-sum factors, got {type(p).__name__}")


def _merge(terms: list[tuple[float, complex]]) -> list[tuple[float, complex]]:
    terms.sort(key=lambda x: x[0])
    merged: list[tuple[float, complex]] = []
    i = 0
    while i < len(terms):
        w0 = terms[i][0]
        z = 0j
        mass = 0.0
        j = i
        while j < len(terms) and terms[j][0] - w0 <= MERGE_TOL:
            z += terms[j][1]
            mass += abs(terms[j][1])
            j += 1
        if w0 == 0.0:
            z = complex(z.real, 0.0)
        if abs(z) > 1e-15 * mass:
            merged.append((w0, z))
        i = j
    return merged


def expand_product(p: Signal, cap: int = EXPAND_CAP) -> HarmonicSum:
    """Expand a product of harmonic sums into a single harmonic sum.

    Each term is carried as a phasor ``z`` with ``amp*cos(w t + phase) = Re(z e^{iwt})``;
    products use ``Re(a)Re(b) = (Re(ab) + Re(a conj(b))) / 2`` and terms whose
    frequencies agree to within 1e-12 are merged by adding phasors.
    """
    factors = _flatten(p)
    acc: list[tuple[float, complex]] = [(0.0, 1 + 0j)]
    for g in factors:
        terms = [(w, a * complex(math.cos(ph), math.sin(ph))) for a, w, ph in g.terms]
        count = 2 * len(acc) * len(terms)
        if count > cap:
            raise CapExceeded(f"expansion needs {count} terms, cap is {cap}")
        nxt: list[tuple[float, complex]] = []
        for w1, z1 in acc:
            for w2, z2 in terms:
                nxt.append((w1 + w2, 0.5 * z1 * z2))
                d = w1 - w2
                z = 0.5 * z1 * z2.conjugate()
                if d < 0:
                    d, z = -d, z.conjugate()
                nxt.append((d, z))
        acc = _merge(nxt)
    return HarmonicSum(tuple((abs(z), w, math.atan2(z.imag, z.real)) for w, z in acc))


# -- spectra --------------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """``amplitudes[j] = integral over window of f(t) exp(-i * frequencies[j] * t) dt``."""

    frequencies: np.ndarray
    amplitudes: np.ndarray
    window: tuple[float, float] | None = None

    def rows(self):
        for w, a in zip(self.frequencies, self.amplitudes):
            yield float(w), float(a.real), float(a.imag)


def _exp_integral(kappa, t1, t2):
    """integral_{t1}^{t2} exp(i kappa t) dt, stable as kappa -> 0."""
    width = t2 - t1
    mid = 0.5 * (t1 + t2)
    return width * np.sinc(kappa * width / (2 * math.pi)) * np.exp(1j * kappa * mid)


def windowed_transform(signal: Signal, t1: float, t2: float, omega: float, tol: float = 1e-10) -> complex:
    """integral_{t1}^{t2} f(t) exp(-i omega t) dt."""
    if t2 <= t1:
        return 0j
    if isinstance(signal, HarmonicSum):
        total = 0j
        for a, w, p in signal.terms:
            total += 0.5 * a * (
                np.exp(1j * p) * _exp_integral(w - omega, t1, t2)
                + np.exp(-1j * p) * _exp_integral(-w - omega, t1, t2)
            )
        return complex(total)
    max_freq = abs(omega) + _finite_bandwidth(signal)
    return complex(
        integrate(
            lambda t: signal.evaluate(t) * np.exp(-1j * omega * t),
            t1,
            t2,
            max_freq=max_freq,
            atol=tol,
            noise=rounding_noise(signal),
        )
    )


def _finite_bandwidth(signal: Signal) -> float:
    bw = signal.declared_bandwidth()
    return bw if math.isfinite(bw) else 0.0


def numeric_spectrum(signal: Signal, window, grid, tol: float = 1e-10) -> Spectrum:
    t1, t2 = map(float, window)
    if not t1 < t2:
        raise ValueError("window must satisfy t1 < t2")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("frequency grid is empty")
    amps = np.array([windowed_transform(signal, t1, t2, w, tol) for w in grid], dtype=complex)
    return Spectrum(grid, amps, (t1, t2))


# -- norms ----------------------------------------------------------------------


def sample_grid(signal: Signal, interval, oversampling: int = 32, min_points: int = 64) -> np.ndarray:
    """Uniform grid of ``oversampling * bandwidth / pi`` points per unit time."""
    a, b = map(float, interval)
    density = oversampling * _finite_bandwidth(signal) / math.pi
    n = max(min_points, math.ceil((b - a) * density) + 1)
    return np.linspace(a, b, n)


def sup_norm_on(signal: Signal, interval, oversampling: int = 32) -> float:
    """max |f| on ``[a, b]``: dense grid scan, then bounded Brent ascent on the leading lobes."""
    a, b = map(float, interval)
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    if oversampling < 4:
        raise ValueError("oversampling must be at least 4")
    t = sample_grid(signal, (a, b), oversampling, min_points=8 * oversampling)
    y = np.abs(np.asarray(signal.evaluate(t)))
    best = float(y.max())
    if best == 0.0:
        return 0.0
    interior = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] >= y[2:])) + 1
    interior = interior[y[interior] >= 0.9 * best]
    interior = interior[np.argsort(-y[interior], kind="stable")][:64]
    # bounds rather than a bracket: two equal samples straddling a peak are not a valid bracket
    xatol = 1e-10 * (t[1] - t[0])
    for i in interior:
        res = minimize_scalar(
            lambda s: -abs(float(signal.evaluate(s))),
            bounds=(t[i - 1], t[i + 1]),
            method="bounded",
            options={"xatol": xatol},
        )
        best = max(best, -float(res.fun))
    return best


def l2_norm_on(signal: Signal, interval, atol: float = 1e-10) -> float:
    a, b = map(float, interval)
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    energy = integrate(
        lambda t: np.asarray(signal.evaluate(t)) ** 2,
        a,
        b,
        max_freq=2 * _finite_bandwidth(signal),
        atol=atol,
        noise=2 * rounding_noise(signal) * magnitude_bound(signal),
    )
    return math.sqrt(max(energy, 0.0))


def inner_product_on(f: Signal, g: Signal, interval, atol: float = 1e-10) -> float:
    a, b = map(float, interval)
    return integrate(
        lambda t: np.asarray(f.evaluate(t)) * np.asarray(g.evaluate(t)),
        a,
        b,
        max_freq=_finite_bandwidth(f) + _finite_bandwidth(g),
        atol=atol,
        noise=rounding_noise(f) * magnitude_bound(g) + rounding_noise(g) * magnitude_bound(f),
    )
