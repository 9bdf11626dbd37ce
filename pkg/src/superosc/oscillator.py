"""A resonant oscillator driven by a signal, with optional environmental collisions.

Between collisions the oscillator obeys x'' + w0^2 x = f(t) with no damping.
A collision (Poisson process of rate ``collision_rate``) banks the current
energy as dissipated and resets the oscillator to rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import StepTooLarge
from .signals import Signal

STEPS_PER_PERIOD = 50


@dataclass(frozen=True)
class OscillatorConfig:
    omega0: float
    t_start: float
    t_end: float
    step: float
    collision_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if not self.t_start < self.t_end:
            raise ValueError("need t_start < t_end")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.collision_rate < 0:
            raise ValueError("collision rate must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")


@dataclass
class OscillatorTrace:
    times: np.ndarray
    x: np.ndarray
    v: np.ndarray
    energy: np.ndarray
    dissipated: np.ndarray
    work: np.ndarray
    collisions: np.ndarray
    omega0: float

    def rows(self):
        return zip(self.times, self.x, self.v, self.energy, self.dissipated)


@dataclass(frozen=True)
class TimescaleEstimate:
    length: float
    speed: float
    time: float
    label: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "length_m": self.length, "speed_m_per_s": self.speed, "time_s": self.time}


def timescale_estimate(length: float, speed: float, label: str = "") -> TimescaleEstimate:
    if not (length > 0 and speed > 0):
        raise ValueError("length and speed must be positive")
    return TimescaleEstimate(float(length), float(speed), length / speed, label)


def max_step(omega0: float, drive_rate: float) -> float:
    return 2 * math.pi / (STEPS_PER_PERIOD * max(omega0, drive_rate))


def drive_rate(drive: Signal, span) -> float:
    """Fastest local oscillation of the drive over ``span``, floored at its bandwidth."""
    band = drive.declared_bandwidth()
    band = band if math.isfinite(band) else 0.0
    return max(band, spectral.max_local_frequency(drive, span))


def collision_times(rate: float, t_start: float, t_end: float, seed: int) -> np.ndarray:
    if rate <= 0:
        return np.empty(0)
    rng = np.random.default_rng(seed)
    out = []
    t = t_start
    while True:
        t += rng.exponential(1.0 / rate)
        if t > t_end:
            return np.asarray(out)
        out.append(t)


def simulate(drive: Signal, cfg: OscillatorConfig, rate: float | None = None) -> OscillatorTrace:
    """Classic RK4 on (x, v, W) with W' = f v the work done by the drive.

    The span is cut into ceil(span/step) equal steps. Collisions are applied
    at the end of the step containing them; several in one step count once.
    ``rate`` overrides the scan for the drive's fastest local frequency.
    """
    span = (cfg.t_start, cfg.t_end)
    if rate is None:
        rate = drive_rate(drive, span)
    limit = max_step(cfg.omega0, rate)
    if cfg.step > limit * (1 + 1e-12):
        raise StepTooLarge(f"step {cfg.step} exceeds 2*pi/(50*max(omega0, {rate:.6g})) = {limit:.6g}")
    n = max(1, math.ceil((cfg.t_end - cfg.t_start) / cfg.step - 1e-9))
    h = (cfg.t_end - cfg.t_start) / n
    half = cfg.t_start + 0.5 * h * np.arange(2 * n + 1)
    half[-1] = cfg.t_end
    fv = np.asarray(drive.evaluate(half), dtype=float).tolist()
    times = half[::2]

    hits = collision_times(cfg.collision_rate, cfg.t_start, cfg.t_end, cfg.seed)
    reset_at = np.zeros(n + 1, dtype=bool)
    if hits.size:
        k = np.ceil((hits - cfg.t_start) / h - 1e-12).astype(int)
        reset_at[np.clip(k, 1, n)] = True
    reset = reset_at.tolist()

    w2 = cfg.omega0 * cfg.omega0
    xs = [0.0] * (n + 1)
    vs = [0.0] * (n + 1)
    ws = [0.0] * (n + 1)
    ds = [0.0] * (n + 1)
    x = v = w = d = 0.0
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(n):
        f0, fm, f1 = fv[2 * i], fv[2 * i + 1], fv[2 * i + 2]
        k1x, k1v = v, f0 - w2 * x
        k1w = f0 * v
        x2, v2 = x + h2 * k1x, v + h2 * k1v
        k2x, k2v = v2, fm - w2 * x2
        k2w = fm * v2
        x3, v3 = x + h2 * k2x, v + h2 * k2v
        k3x, k3v = v3, fm - w2 * x3
        k3w = fm * v3
        x4, v4 = x + h * k3x, v + h * k3v
        k4x, k4v = v4, f1 - w2 * x4
        k4w = f1 * v4
        x += h6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v += h6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        w += h6 * (k1w + 2 * k2w + 2 * k3w + k4w)
        if reset[i + 1]:
            d += 0.5 * (v * v + w2 * x * x)
            x = v = 0.0
        xs[i + 1], vs[i + 1], ws[i + 1], ds[i + 1] = x, v, w, d

    x_arr, v_arr = np.asarray(xs), np.asarray(vs)
    energy = 0.5 * (v_arr**2 + w2 * x_arr**2)
    return OscillatorTrace(times, x_arr, v_arr, energy, np.asarray(ds), np.asarray(ws), hits, cfg.omega0)


@dataclass(frozen=True)
class SweepRow:
    rate: float
    mean_dissipated: float
    std_dissipated: float
    n_seeds: int
    finals: tuple[float, ...]

    def confidence_low(self, z: float = 1.96) -> float:
        """Lower end of the normal-approximation interval for the mean."""
        return self.mean_dissipated - z * self.std_dissipated / math.sqrt(self.n_seeds)


def absorption_sweep(drive: Signal, cfg: OscillatorConfig, rates, n_seeds: int = 8, seed0: int | None = None):
    """Final dissipated energy per (rate, seed), merged in (rate, seed) order."""
    if n_seeds < 8:
        raise ValueError("absorption sweeps need at least 8 seeds per rung")
    rates = [float(r) for r in rates]
    if not rates:
        raise ValueError("rate ladder is empty")
    base = cfg.seed if seed0 is None else seed0
    drive_fast = drive_rate(drive, (cfg.t_start, cfg.t_end))
    rows = []
    for lam in rates:
        finals = []
        for k in range(n_seeds):
            run = OscillatorConfig(cfg.omega0, cfg.t_start, cfg.t_end, cfg.step, lam, base + k)
            finals.append(float(simulate(drive, run, rate=drive_fast).dissipated[-1]))
        arr = np.asarray(finals)
        std = float(arr.std(ddof=1)) if n_seeds > 1 else 0.0
        rows.append(SweepRow(lam, float(arr.mean()), std, n_seeds, tuple(finals)))
    return rows
