import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superosc import signals as S
from superosc.errors import CapExceeded, QuadratureFailure
from superosc.jsonio import dumps, loads
from superosc.quadrature import integrate


def cos_sum(*terms):
    return S.HarmonicSum(tuple(terms))


# -- quadrature -------------------------------------------------------------------


def test_integrate_polynomial_and_oscillatory():
    assert integrate(lambda t: t**3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-13)
    # integral_0^50 cos(7t) dt = sin(350)/7
    got = integrate(lambda t: np.cos(7 * t), 0.0, 50.0, max_freq=7.0)
    assert got == pytest.approx(math.sin(350.0) / 7, abs=1e-11)


def test_integrate_budget_failure():
    with pytest.raises(QuadratureFailure):
        integrate(lambda t: np.cos(t), 0.0, 1e6, max_freq=1.0, budget=16)


# -- evaluation and bandwidth -------------------------------------------------------


def test_harmonic_sum_values():
    f = cos_sum((2.0, 3.0, 0.5), (1.0, 0.0, 0.0))
    t = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(f.evaluate(t), 2 * np.cos(3 * t + 0.5) + 1, atol=1e-15)
    assert f.declared_bandwidth() == 3.0
    assert not f.square_integrable()


def test_sinc_series_values_and_bandwidth():
    f = S.SincSeries(2.0, (-1.0, 0.5), (1.0, -3.0))
    t = np.array([-1.0, 0.0, 0.5, 2.0])
    x1, x2 = 2 * (t + 1), 2 * (t - 0.5)
    want = [float(mpmath.sinc(a)) - 3 * float(mpmath.sinc(b)) for a, b in zip(x1, x2)]
    np.testing.assert_allclose(f.evaluate(t), want, atol=1e-15)
    assert f.declared_bandwidth() == 2.0 and f.square_integrable()


def test_product_bandwidth_is_additive():
    p = S.ProductSignal((cos_sum((1, 0.25, 0)), S.SincSeries(0.5, (0.0,), (1.0,)), cos_sum((1, 0.25, 1))))
    assert p.declared_bandwidth() == pytest.approx(1.0)
    assert p.square_integrable()


def test_invalid_inputs():
    with pytest.raises(ValueError):
        cos_sum((1, -1.0, 0))
    with pytest.raises(ValueError):
        S.SincSeries(1.0, (1.0, 0.0), (1.0, 1.0))


# -- symbolic expansion ----------------------------------------------------------------


def test_expand_product_of_two_cosines():
    # cos(a t) cos(b t) = (cos((a+b)t) + cos((a-b)t)) / 2
    e = S.expand_product(S.ProductSignal((cos_sum((1, 3, 0)), cos_sum((1, 1, 0)))))
    freqs = sorted((w, round(a, 15)) for a, w, _ in e.terms)
    assert freqs == [(2.0, 0.5), (4.0, 0.5)]


def test_expand_product_cap():
    f = cos_sum(*[(1.0, float(k), 0.0) for k in range(1, 40)])
    with pytest.raises(CapExceeded):
        S.expand_product(S.ProductSignal((f, f, f)), cap=1000)


term = st.tuples(
    st.floats(-2, 2, allow_nan=False), st.floats(0, 3, allow_nan=False), st.floats(-3.2, 3.2, allow_nan=False)
)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(term, min_size=1, max_size=3), min_size=1, max_size=3), st.floats(-20, 20))
def test_expansion_fidelity(factors, t):
    p = S.ProductSignal(tuple(S.HarmonicSum(tuple(f)) for f in factors))
    e = S.expand_product(p)
    bound = S.magnitude_bound(p)
    assert abs(float(e.evaluate(t)) - float(p.evaluate(t))) <= 1e-12 * max(1.0, bound)
    assert max((w for _, w, _ in e.terms), default=0.0) <= p.declared_bandwidth() + 1e-12


# -- spectra ----------------------------------------------------------------------------


def test_windowed_transform_closed_form_matches_quadrature():
    f = cos_sum((1.0, 1.3, 0.2), (0.5, 0.4, -1.0))
    t1, t2, w = -3.0, 5.0, 2.1
    oracle = mpmath.quad(
        lambda t: (mpmath.cos(1.3 * t + 0.2) + 0.5 * mpmath.cos(0.4 * t - 1)) * mpmath.exp(-1j * w * t), [t1, t2]
    )
    assert abs(S.windowed_transform(f, t1, t2, w) - complex(oracle)) < 1e-12
    # the same value through the generic quadrature path
    as_product = S.ProductSignal((f, cos_sum((1.0, 0.0, 0.0))))
    assert abs(S.windowed_transform(as_product, t1, t2, w) - complex(oracle)) < 1e-9


def test_windowed_transform_near_zero_frequency():
    # integral_{-T}^{T} cos(w0 t) dt = 2 sin(w0 T)/w0 at omega = 0
    got = S.windowed_transform(cos_sum((1.0, 0.7, 0.0)), -4.0, 4.0, 0.0)
    assert got == pytest.approx(2 * math.sin(2.8) / 0.7, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.lists(term, min_size=1, max_size=3),
    st.lists(term, min_size=1, max_size=3), st.floats(0, 5),
)
def test_spectrum_linearity(a, b, f_terms, g_terms, w):
    f, g = S.HarmonicSum(tuple(f_terms)), S.HarmonicSum(tuple(g_terms))
    combo = S.HarmonicSum(
        tuple((a * amp, fr, ph) for amp, fr, ph in f.terms) + tuple((b * amp, fr, ph) for amp, fr, ph in g.terms)
    )
    lhs = S.windowed_transform(combo, -2.0, 3.0, w)
    rhs = a * S.windowed_transform(f, -2.0, 3.0, w) + b * S.windowed_transform(g, -2.0, 3.0, w)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_numeric_spectrum_shape():
    sp = S.numeric_spectrum(cos_sum((1.0, 1.0, 0.0)), (-1, 1), [0.0, 1.0, 2.0])
    assert sp.amplitudes.shape == (3,) and len(list(sp.rows())) == 3
    with pytest.raises(ValueError):
        S.numeric_spectrum(cos_sum((1.0, 1.0, 0.0)), (1, -1), [0.0])


# -- norms ------------------------------------------------------------------------------


def test_l2_norm_of_cosine_closed_form():
    # integral_{-T}^{T} cos^2(w0 t) dt = T + sin(2 w0 T)/(2 w0)
    w0, T = 1.7, 6.0
    want = math.sqrt(T + math.sin(2 * w0 * T) / (2 * w0))
    assert S.l2_norm_on(cos_sum((1.0, w0, 0.0)), (-T, T)) == pytest.approx(want, rel=1e-11)


def test_sup_norm_finds_peak_between_samples():
    f = cos_sum((1.0, 1.0, 0.123456))
    assert S.sup_norm_on(f, (0.0, 10.0), oversampling=4) == pytest.approx(1.0, abs=1e-12)
    assert S.sup_norm_on(S.SincSeries(1.0, (0.3,), (2.5,)), (-5, 5)) == pytest.approx(2.5, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(term, min_size=1, max_size=4), st.floats(-10, 10), st.floats(0.1, 10), st.floats(0, 5), st.floats(0, 5))
def test_sup_norm_monotone_under_inclusion(terms, a, width, grow_left, grow_right):
    f = S.HarmonicSum(tuple(terms))
    inner = S.sup_norm_on(f, (a, a + width))
    outer = S.sup_norm_on(f, (a - grow_left, a + width + grow_right))
    assert outer >= inner - 1e-12 * max(1.0, inner)


# -- serialization --------------------------------------------------------------------


def test_json_round_trip_plain_and_extended():
    signals = [
        cos_sum((1.0, 0.1, 0.3)),
        S.ProductSignal((cos_sum((1.0, 0.5, 0.0)), S.SincSeries(0.5, (0.0, 1.0), (1.0, -0.25)))),
    ]
    with mpmath.workprec(200):
        coeffs = (mpmath.mpf(1) / 3 * mpmath.mpf(10) ** 19, -mpmath.mpf(2) / 7 * mpmath.mpf(10) ** 19)
    signals.append(S.SincSeries(1.0, (-0.1, 0.1), coeffs, precision=200))
    for f in signals:
        text = dumps(f.to_dict())
        back = S.from_dict(loads(text))
        assert dumps(back.to_dict()) == text
        t = np.array([-0.7, 0.05, 2.0])
        np.testing.assert_array_equal(back.evaluate(t), f.evaluate(t))


def test_random_five_factor_product_expansion():
    rng = np.random.default_rng(5)
    factors = tuple(
        S.HarmonicSum(tuple((rng.normal(), rng.uniform(0, 0.4), rng.uniform(-3, 3)) for _ in range(2)))
        for _ in range(5)
    )
    p = S.ProductSignal(factors)
    e = S.expand_product(p)
    t = rng.uniform(-50, 50, 1000)
    direct = np.prod([f.evaluate(t) for f in factors], axis=0)
    assert np.max(np.abs(e.evaluate(t) - direct)) <= 1e-12
    assert np.max(np.abs(e.evaluate(t) - p.evaluate(t))) <= 1e-10 * (1 + S.sup_norm_on(p, (-50, 50)))


def test_sup_norm_against_dense_brute_grid():
    rng = np.random.default_rng(9)
    p = S.ProductSignal(tuple(S.HarmonicSum(((1.0, rng.uniform(0.1, 0.5), rng.uniform(-3, 3)),)) for _ in range(5)))
    a, b = -20.0, 20.0
    grid = S.sample_grid(p, (a, b), 32 * 100)
    brute = float(np.max(np.abs(p.evaluate(grid))))
    assert S.sup_norm_on(p, (a, b)) == pytest.approx(brute, rel=1e-6)


def test_cosine_window_at_own_frequency():
    # integral_{-T}^{T} cos(w0 t) exp(-i w0 t) dt = T + sin(2 w0 T)/(2 w0), imaginary part 0
    w0, T = 0.9, 7.0
    got = S.windowed_transform(S.HarmonicSum(((1.0, w0, 0.0),)), -T, T, w0)
    assert got.real == pytest.approx(T + math.sin(2 * w0 * T) / (2 * w0), abs=1e-13)
    assert abs(got.imag) < 1e-13
    oracle = mpmath.quad(lambda t: mpmath.cos(w0 * t) ** 2, [-T, 0, T])
    assert got.real == pytest.approx(float(oracle), abs=1e-12)


def test_orthogonal_cosines_over_common_period():
    # cos(t) and 2 cos(3t + 1) over [0, 2 pi]: energies pi and 4 pi
    f = S.HarmonicSum(((1.0, 1.0, 0.0), (2.0, 3.0, 1.0)))
    direct = math.sqrt(float(mpmath.quad(lambda t: (mpmath.cos(t) + 2 * mpmath.cos(3 * t + 1)) ** 2, [0, 2 * mpmath.pi])))
    assert S.l2_norm_on(f, (0.0, 2 * math.pi)) == pytest.approx(math.sqrt(5 * math.pi), rel=1e-12)
    assert direct == pytest.approx(math.sqrt(5 * math.pi), rel=1e-12)
