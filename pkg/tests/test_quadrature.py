import numpy as np
import pytest

from indstring.quadrature import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, adaptive_panels,
                                  gauss_kronrod, panel_nodes)


def test_rule_shape():
    assert NODES.shape == (15,)
    assert np.all(np.diff(NODES) > 0)
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2, abs=1e-15)
    assert np.count_nonzero(GAUSS_WEIGHTS) == 7


@pytest.mark.parametrize("deg", range(0, 24))
def test_polynomial_exactness(deg):
    a, b = np.array([0.3]), np.array([1.1])
    x = panel_nodes(a, b)
    k, g = gauss_kronrod(x ** deg, a, b)
    exact = (1.1 ** (deg + 1) - 0.3 ** (deg + 1)) / (deg + 1)
    assert k[0] == pytest.approx(exact, rel=1e-14)      # Kronrod: degree 22 (23 by symmetry)
    if deg <= 13:
        assert g[0] == pytest.approx(exact, rel=1e-14)  # Gauss: degree 13
    else:
        assert abs(g[0] - exact) > 1e-14 * exact


def test_adaptive_sqrt_endpoint():
    ps = adaptive_panels(lambda x: np.sqrt(x), [0.0, 1.0], 1e-12)
    assert ps.integrate() == pytest.approx(2 / 3, abs=1e-12)
    assert ps.error < 1e-12


def test_adaptive_log_singularity_and_weights():
    ps = adaptive_panels(lambda x: np.log(x), [0.0, 0.5, 1.0], 1e-11)
    assert ps.integrate() == pytest.approx(-1.0, abs=1e-10)
    assert ps.integrate(weight=ps.nodes) == pytest.approx(-0.25, abs=1e-10)
    assert ps.integrate(upto=0.5) == pytest.approx(0.5 * np.log(0.5) - 0.5, abs=1e-10)
    assert np.all(np.diff(ps.a) > 0)
    np.testing.assert_array_equal(ps.a[1:], ps.b[:-1])


def test_adaptive_vector_valued():
    ps = adaptive_panels(lambda x: np.stack([np.sin(x), np.cos(x)]), [0.0, np.pi], 1e-12)
    np.testing.assert_allclose(ps.integrate(), [2.0, 0.0], atol=1e-12)


def test_adaptive_budget():
    with pytest.raises(RuntimeError):
        adaptive_panels(lambda x: np.sign(x - 0.3), [0.0, 1.0], 1e-30, max_panels=64,
                        min_width=0.0)
