"""Finite-difference curvature oracle: frozen values and properties."""

import math

import numpy as np
import pytest

from pscends import (ChartMetric, DegenerateMetricError, DomainError,
                     UnreliableStepError, christoffel, euclidean_chart,
                     heisenberg_entry, product_chart, ricci, scalar_curvature,
                     scalar_value)
from pscends.bundle_metric import case_profile


def sphere_chart(radius=1.0):
    r2 = radius * radius
    return ChartMetric(2, lambda p: np.array([[r2, 0.0], [0.0, r2 * math.sin(p[0]) ** 2]]),
                       domain_hint=((0.05, math.pi - 0.05), (-10.0, 10.0)), name="sphere")


def hyperbolic_chart():
    return ChartMetric(2, lambda p: np.eye(2) / (p[1] * p[1]),
                       domain_hint=((-10.0, 10.0), (0.05, 10.0)), name="halfplane")


def test_euclidean_christoffel_and_scalar_vanish():
    chart = euclidean_chart(3)
    gam = christoffel(chart, (0.3, -1.0, 2.0))
    assert np.abs(gam).max() < 1e-12
    rep = scalar_curvature(chart, (0.3, -1.0, 2.0))
    assert abs(rep.scalar) < 1e-10


def test_polar_plane_christoffel_frozen_values():
    # plane in polar coordinates: diag(1, r^2); at r = 2 the nonzero symbols
    # are Gamma^r_{theta theta} = -r and Gamma^theta_{r theta} = 1/r
    chart = ChartMetric(2, lambda p: np.diag([1.0, p[0] ** 2]),
                        domain_hint=((0.1, 50.0), (-10.0, 10.0)))
    gam = christoffel(chart, (2.0, 0.7))
    assert gam[0, 1, 1] == pytest.approx(-2.0, abs=1e-8)
    assert gam[1, 0, 1] == pytest.approx(0.5, abs=1e-8)
    assert gam[1, 1, 0] == pytest.approx(0.5, abs=1e-8)
    # everything else vanishes
    mask = np.ones((2, 2, 2), dtype=bool)
    mask[0, 1, 1] = mask[1, 0, 1] = mask[1, 1, 0] = False
    assert np.abs(gam[mask]).max() < 1e-8


def test_christoffel_symmetric_on_heisenberg_chart():
    entry = heisenberg_entry()
    chart = entry.total_chart(case_profile(4, 0.7))
    rng = np.random.default_rng(5)
    for _ in range(3):
        p = entry.random_points(rng, 1, t_range=(0.2, 3.0))[0]
        gam = christoffel(chart, p)
        assert np.abs(gam - np.transpose(gam, (0, 2, 1))).max() < 1e-8


def test_unit_sphere_scalar_is_two():
    rep = scalar_curvature(sphere_chart(), (1.1, 0.4))
    assert rep.scalar == pytest.approx(2.0, abs=1e-6)
    assert abs(rep.scalar - 2.0) <= 10.0 * rep.estimated_error + 1e-9


def test_hyperbolic_plane_scalar_is_minus_two():
    rep = scalar_curvature(hyperbolic_chart(), (0.0, 1.0))
    assert rep.scalar == pytest.approx(-2.0, abs=1e-6)


def test_ricci_symmetric_and_sphere_value():
    ric = ricci(sphere_chart(), (1.0, 0.2))
    assert np.abs(ric - ric.T).max() < 1e-8
    # unit sphere: Ricci = metric
    g = sphere_chart().at((1.0, 0.2))
    assert np.abs(ric - g).max() < 1e-6


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
def test_scaling_property(c):
    # g -> c^2 g multiplies scalar curvature by 1/c^2
    base = sphere_chart()
    scaled = ChartMetric(2, lambda p, _f=c * c: _f * base.components(p),
                         domain_hint=base.domain_hint)
    pt = (1.3, -0.5)
    r0 = scalar_value(base, pt)
    r1 = scalar_value(scaled, pt)
    assert r1 == pytest.approx(r0 / (c * c), rel=1e-5)


def test_scaling_property_heisenberg():
    entry = heisenberg_entry()
    chart = entry.total_chart(case_profile(4, 0.5))
    pt = (1.0, 0.2, 0.3, 0.1)
    scaled = ChartMetric(4, lambda p: 4.0 * chart.components(p),
                         domain_hint=chart.domain_hint)
    assert scalar_value(scaled, pt) == pytest.approx(scalar_value(chart, pt) / 4.0, rel=1e-5)


def test_product_chart_scalar_adds():
    s2 = sphere_chart()
    h2 = hyperbolic_chart()
    prod = product_chart(s2, h2)
    pt = (1.2, 0.3, 0.1, 1.5)
    r = scalar_value(prod, pt)
    expected = scalar_value(s2, pt[:2]) + scalar_value(h2, pt[2:])
    assert r == pytest.approx(expected, abs=1e-5)
    # two spheres: 2 + 2 = 4
    prod2 = product_chart(s2, sphere_chart())
    assert scalar_value(prod2, (1.0, 0.0, 1.4, 0.8)) == pytest.approx(4.0, abs=1e-5)


def test_convergence_second_order_on_sphere():
    pt = (1.0, 0.0)
    err_h = abs(scalar_value(sphere_chart(), pt, step=2e-3) - 2.0)
    err_half = abs(scalar_value(sphere_chart(), pt, step=1e-3) - 2.0)
    assert err_h / err_half >= 3.0


def test_degenerate_metric_rejected():
    singular = ChartMetric(2, lambda p: np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(DegenerateMetricError):
        scalar_value(singular, (0.0, 0.0))
    indefinite = ChartMetric(2, lambda p: np.diag([1.0, -1.0]))
    with pytest.raises(DegenerateMetricError):
        christoffel(indefinite, (0.0, 0.0))
    ill = ChartMetric(2, lambda p: np.diag([1.0, 1e-14]))
    with pytest.raises(DegenerateMetricError):
        scalar_value(ill, (0.0, 0.0))


def test_domain_hint_enforced():
    chart = sphere_chart()
    with pytest.raises(DomainError):
        scalar_value(chart, (0.049, 0.0))
    # stencil must stay inside too
    with pytest.raises(DomainError):
        scalar_value(chart, (0.0501, 0.0), step=1e-3)


def test_asymmetric_components_rejected():
    bad = ChartMetric(2, lambda p: np.array([[1.0, 1e-3], [0.0, 1.0]]))
    with pytest.raises(DegenerateMetricError):
        bad.at((0.0, 0.0))


def test_unreliable_step_on_kinked_metric():
    # second derivative of |x|^(5/2) is only Hoelder, killing the FD order
    def comps(p):
        x = p[0]
        return np.array([[1.0 + abs(x) ** 2.5, 0.0], [0.0, 1.0 + x * x]])

    chart = ChartMetric(2, comps, name="kink")
    with pytest.raises(UnreliableStepError):
        scalar_curvature(chart, (0.0, 0.3), step=1e-4)


def test_richardson_error_estimate_brackets_truth():
    rep = scalar_curvature(sphere_chart(), (0.9, 0.1), step=1e-3)
    assert abs(rep.scalar - 2.0) <= 5.0 * rep.estimated_error
    assert rep.step == 1e-3
