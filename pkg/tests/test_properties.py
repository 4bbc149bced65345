import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hqrcheck.core import (
    CoefficientSeries,
    HarmonicMap,
    antiderivative,
    derivative,
    dilatation_samples,
    eval_analytic,
)
from hqrcheck.means import circle_data, integral_mean, m2_exact, pth_power_mean

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
series = st.lists(complexes, min_size=1, max_size=40).map(CoefficientSeries)
radii = st.floats(0.05, 0.95)

SETTINGS = settings(max_examples=60, deadline=None)


@SETTINGS
@given(series)
def test_derivative_inverts_antiderivative(s):
    back = derivative(antiderivative(s))
    assert np.allclose(back.coeffs, s.coeffs, atol=1e-12)
    assert antiderivative(s).coeffs[0] == 0


@SETTINGS
@given(series, radii)
def test_parseval(s, r):
    exact = m2_exact(s, r)
    assert abs(integral_mean(eval_analytic(s, r, 256), 2) - exact) <= 1e-9 * max(1.0, exact)


@SETTINGS
@given(st.lists(complexes, min_size=1, max_size=64), st.floats(0.05, 0.95))
def test_pth_power_mean_is_mean_to_the_p(values, p):
    x = np.array(values)
    lhs = pth_power_mean(x, p)
    assert math.isclose(lhs, integral_mean(x, p) ** p, rel_tol=1e-10, abs_tol=1e-300)


@SETTINGS
@given(series, series, complexes, st.floats(0, 2 * math.pi), radii)
def test_dilatation_invariant_under_shift_and_rotation(h, g, shift, angle, r):
    # h = z + small perturbation keeps |h'| >= 1/2, so omega is well defined
    w = derivative(h.times_power(1))
    norm = float(np.sum(np.abs(w.coeffs))) or 1.0
    h = h.times_power(1).scale(0.5 / norm) + CoefficientSeries([0, 1.0])
    g = (g - CoefficientSeries([g.coeffs[0]])).scale(0.01)
    base = dilatation_samples(HarmonicMap(h, g), r, 128).values
    rot = complex(math.cos(angle), math.sin(angle))
    moved = dilatation_samples(HarmonicMap(h.shift(shift).scale(rot), g.scale(rot.conjugate())), r, 128).values
    assert np.allclose(np.abs(base), np.abs(moved), atol=1e-12)


@SETTINGS
@given(st.lists(finite, min_size=2, max_size=30), radii)
def test_conjugate_identity(c, r):
    fmap = HarmonicMap(CoefficientSeries(c))
    d = circle_data(fmap, r, 256)
    lhs = integral_mean(d.v, 2) ** 2 + c[0] ** 2
    assert math.isclose(lhs, integral_mean(d.u, 2) ** 2, rel_tol=1e-9, abs_tol=1e-9)
