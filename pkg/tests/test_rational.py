import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tra_spectrum.rational import ThieleInterpolant, thiele_fit


def test_reproduces_samples():
    x = np.linspace(-3, 2, 25)
    y = np.exp(x) * np.cos(x)
    f = thiele_fit(x, y)
    np.testing.assert_allclose(f(x), y, rtol=1e-12, atol=1e-12)


def test_recovers_low_order_rational_exactly():
    # (1 + 2x) / (3 + x^2) needs only a handful of continued-fraction terms
    x = np.linspace(-2, 5, 30)
    f = thiele_fit(x, (1 + 2 * x) / (3 + x * x))
    assert f.order <= 5
    xt = np.linspace(-1.9, 4.9, 101)
    np.testing.assert_allclose(f(xt), (1 + 2 * xt) / (3 + xt * xt), rtol=1e-10)


def test_constant_and_linear():
    f = thiele_fit([0.0, 1.0, 2.0], [4.0, 4.0, 4.0])
    assert f.order == 1
    assert f(7.3) == pytest.approx(4.0)
    g = thiele_fit(np.arange(6.0), 2 * np.arange(6.0) - 1)
    assert g(10.0) == pytest.approx(19.0, rel=1e-12)


def test_interpolates_between_samples_smooth_function():
    x = np.linspace(0.1, 4, 16)
    f = thiele_fit(x, np.sqrt(x))
    xt = np.linspace(0.2, 3.9, 50)
    np.testing.assert_allclose(f(xt), np.sqrt(xt), rtol=1e-5)


def test_max_terms_caps_order():
    x = np.linspace(0, 1, 20)
    f = thiele_fit(x, np.sin(7 * x), max_terms=4)
    assert isinstance(f, ThieleInterpolant)
    assert f.order == 4


def test_bad_input():
    with pytest.raises(ValueError):
        thiele_fit([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        thiele_fit([], [])


@settings(max_examples=40)
@given(
    a=st.floats(-5, 5),
    b=st.floats(0.5, 5),
    c=st.floats(0.1, 3),
)
def test_mobius_needs_three_terms(a, b, c):
    # (a x + 1) / (x + b) on x >= 0 is a Moebius map: exact with at most 3 terms
    x = np.linspace(0, 3, 12)
    y = (a * x + 1) / (x + b)
    f = thiele_fit(x, y, rtol=1e-12)
    assert f.order <= 3
    assert f(c) == pytest.approx((a * c + 1) / (c + b), rel=1e-9, abs=1e-9)
