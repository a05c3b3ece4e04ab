import math

import numpy as np
import pytest

from rotgreen.geometry import (
    TWO_PI,
    AngleSet,
    CartPoint,
    Circle,
    CylPoint,
    Dimension,
    build_configuration,
    cart_to_cyl,
    cyl_to_cart,
    normalize_angle,
    symmetric_angles,
)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
def test_dimension_constants(d):
    dim = Dimension(d)
    assert dim.omega > 0 and dim.lam > 0
    assert dim.lam * (d - 2) * dim.omega == pytest.approx(1.0, rel=1e-15)


def test_dimension_rejects_small_d():
    with pytest.raises(ValueError):
        Dimension(2)


def test_known_surface_measures():
    assert Dimension(3).omega == pytest.approx(4 * math.pi, rel=1e-15)
    assert Dimension(4).omega == pytest.approx(2 * math.pi**2, rel=1e-15)


@pytest.mark.parametrize(
    "p,d,expected",
    [
        (CylPoint(1.0, 0.0, (0.0,)), 3, (1.0, 0.0, 0.0)),
        (CylPoint(1.0, math.pi / 2, (2.0,)), 3, (0.0, 1.0, 2.0)),
        (CylPoint(0.5, math.pi, (0.0, 0.0)), 4, (-0.5, 0.0, 0.0, 0.0)),
    ],
)
def test_cyl_to_cart_examples(p, d, expected):
    got = cyl_to_cart(p, Dimension(d)).coords
    assert np.allclose(got, expected, atol=1e-15)


def test_cyl_to_cart_preserves_norm():
    rng = np.random.default_rng(11)
    dim = Dimension(5)
    for _ in range(50):
        p = CylPoint(rng.uniform(0, 2), rng.uniform(0, TWO_PI), tuple(rng.normal(size=3)))
        x = cyl_to_cart(p, dim).array
        assert x @ x == pytest.approx(p.rho**2 + sum(v * v for v in p.xprime), rel=1e-12)


def test_cyl_to_cart_dimension_mismatch():
    with pytest.raises(ValueError):
        cyl_to_cart(CylPoint(1.0, 0.0, (0.0, 0.0)), Dimension(3))


def test_cart_to_cyl_examples():
    p = cart_to_cyl(CartPoint((0.0, 1.0, 2.0)))
    assert p.rho == pytest.approx(1.0)
    assert p.theta == pytest.approx(math.pi / 2)
    assert p.xprime == (2.0,)
    axis = cart_to_cyl(CartPoint((0.0, 0.0, 5.0)))
    assert axis.rho == 0.0 and axis.theta == 0.0 and axis.xprime == (5.0,)


def test_roundtrip_random_points():
    rng = np.random.default_rng(7)
    dim = Dimension(4)
    worst = 0.0
    for _ in range(1000):
        x = CartPoint(tuple(rng.normal(size=4)))
        back = cyl_to_cart(cart_to_cyl(x), dim).array
        worst = max(worst, float(np.max(np.abs(back - x.array))))
    assert worst < 1e-12


def test_angle_normalization():
    assert normalize_angle(TWO_PI + 0.5) == pytest.approx(0.5)
    assert normalize_angle(-0.5) == pytest.approx(TWO_PI - 0.5)
    assert normalize_angle(TWO_PI - 1e-15) == 0.0
    assert CylPoint(1.0, TWO_PI + 1.0, ()).theta == pytest.approx(1.0)


def test_cylpoint_rejects_negative_rho():
    with pytest.raises(ValueError):
        CylPoint(-0.1, 0.0, (0.0,))


def test_circle_rejects_axis():
    with pytest.raises(ValueError):
        Circle(0.0, (0.0,))


def test_angleset_requires_increasing():
    with pytest.raises(ValueError):
        AngleSet((1.0, 0.5))
    with pytest.raises(ValueError):
        AngleSet((0.0, 0.0))
    with pytest.raises(ValueError):
        AngleSet(())
    # wrap-point angle collapses onto 0 and collides with an existing 0
    with pytest.raises(ValueError):
        AngleSet((0.0, TWO_PI - 1e-15))


@pytest.mark.parametrize(
    "m,expected",
    [
        (1, (0.0,)),
        (3, (0.0, TWO_PI / 3, 2 * TWO_PI / 3)),
        (4, (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)),
    ],
)
def test_symmetric_angles(m, expected):
    assert np.allclose(symmetric_angles(m).angles, expected, atol=1e-15)


def test_symmetric_angles_rejects_zero():
    with pytest.raises(ValueError):
        symmetric_angles(0)


def test_symmetric_angles_shift_invariance():
    m = 5
    a = symmetric_angles(m).angles
    for j in range(m):
        assert normalize_angle(a[j] + TWO_PI / m) == pytest.approx(a[(j + 1) % m], abs=1e-12)


def test_build_configuration_counts_and_indexing():
    dim = Dimension(3)
    circles = [Circle(0.5, (0.0,)), Circle(0.7, (0.25,))]
    angles = symmetric_angles(3)
    cfg = build_configuration(dim, circles, angles)
    assert cfg.n == 6
    # circle-major order: point c*m + j is circle c at angle j
    for c in range(2):
        for j in range(3):
            p = cfg.points[c * 3 + j]
            assert p.rho == circles[c].rho0
            assert p.theta == pytest.approx(angles.angles[j])
    assert cfg.cart.shape == (6, 3)
    assert not cfg.cart.flags.writeable


def test_build_configuration_cartesian_values():
    cfg = build_configuration(
        Dimension(3), [Circle(1.0, (0.0,))], AngleSet((0.0, math.pi))
    )
    assert np.allclose(cfg.cart, [[1, 0, 0], [-1, 0, 0]], atol=1e-12)


def test_build_configuration_rejects_duplicates():
    dim = Dimension(3)
    with pytest.raises(ValueError):
        build_configuration(
            dim, [Circle(0.5, (0.0,)), Circle(0.5, (0.0,))], symmetric_angles(2)
        )
    with pytest.raises(ValueError):
        build_configuration(dim, [], symmetric_angles(2))


def test_same_radius_different_axis_position_is_distinct():
    dim = Dimension(3)
    cfg = build_configuration(
        dim, [Circle(0.5, (0.0,)), Circle(0.5, (0.3,))], symmetric_angles(4)
    )
    d = cfg.cart[:, None, :] - cfg.cart[None, :, :]
    dist = np.sqrt((d * d).sum(-1))
    off = ~np.eye(8, dtype=bool)
    assert dist[off].min() > 1e-10
