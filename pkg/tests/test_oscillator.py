import math

import numpy as np
import pytest

from superosc import oscillator as O
from superosc import signals as S
from superosc.errors import StepTooLarge


def tone(w, phase=0.0):
    return S.HarmonicSum(((1.0, w, phase),))


def test_off_resonant_closed_form():
    # x'' + w0^2 x = cos(w t) from rest: x = (cos w t - cos w0 t) / (w0^2 - w^2)
    w0, w = 2.0, 0.7
    tr = O.simulate(tone(w), O.OscillatorConfig(w0, 0.0, 30.0, 0.005))
    x = (np.cos(w * tr.times) - np.cos(w0 * tr.times)) / (w0**2 - w**2)
    assert np.max(np.abs(tr.x - x)) < 1e-8


def test_energy_equals_work_without_collisions():
    tr = O.simulate(tone(1.3), O.OscillatorConfig(1.0, 0.0, 40.0, 0.01))
    assert np.max(np.abs(tr.energy - tr.work)) < 1e-8 * np.max(tr.energy)
    assert np.all(tr.dissipated == 0)


def test_bookkeeping_with_collisions():
    # E + D = W at every step (up to RK4 error in W)
    tr = O.simulate(tone(1.0), O.OscillatorConfig(1.0, 0.0, 200.0, 0.03, collision_rate=0.2, seed=11))
    assert tr.collisions.size > 10
    scale = np.max(tr.work)
    assert np.max(np.abs(tr.energy + tr.dissipated - tr.work)) <= 1e-6 * scale


def test_collisions_are_seeded():
    a = O.collision_times(0.5, 0.0, 100.0, 3)
    b = O.collision_times(0.5, 0.0, 100.0, 3)
    c = O.collision_times(0.5, 0.0, 100.0, 4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert O.collision_times(0.0, 0.0, 100.0, 3).size == 0


def test_collision_count_matches_rate():
    counts = [O.collision_times(2.0, 0.0, 50.0, s).size for s in range(200)]
    # Poisson mean 100, standard error of the mean 100**0.5/200**0.5
    assert abs(np.mean(counts) - 100.0) < 5 * math.sqrt(100 / 200)


def test_step_bound():
    with pytest.raises(StepTooLarge):
        O.simulate(tone(1.0), O.OscillatorConfig(10.0, 0.0, 1.0, 0.02))
    assert O.max_step(10.0, 1.0) == pytest.approx(2 * math.pi / 500)


def test_invalid_config():
    for kw in ({"omega0": 0}, {"t_end": -1}, {"step": 0}, {"collision_rate": -1}, {"seed": -1}):
        base = dict(omega0=1.0, t_start=0.0, t_end=1.0, step=0.01)
        base.update(kw)
        with pytest.raises(ValueError):
            O.OscillatorConfig(**base)


def test_sweep_requires_eight_seeds_and_zero_rate_dissipates_nothing():
    cfg = O.OscillatorConfig(1.0, 0.0, 30.0, 0.02)
    with pytest.raises(ValueError):
        O.absorption_sweep(tone(1.0), cfg, [0.1], n_seeds=4)
    rows = O.absorption_sweep(tone(1.0), cfg, [0.0, 0.5], n_seeds=8, seed0=2)
    assert rows[0].mean_dissipated == 0.0 and rows[0].std_dissipated == 0.0
    assert rows[1].mean_dissipated > 0 and rows[1].n_seeds == 8
    again = O.absorption_sweep(tone(1.0), cfg, [0.5], n_seeds=8, seed0=2)
    assert again[0].finals == rows[1].finals


def test_timescale_estimate():
    est = O.timescale_estimate(1e-9, 1e3, "collision")
    assert est.time == 1e-12 and est.to_dict()["label"] == "collision"
    with pytest.raises(ValueError):
        O.timescale_estimate(-1, 1)
