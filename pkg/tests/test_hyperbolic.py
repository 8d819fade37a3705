import math
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from etcs.eta import EtaParams, F_contribution
from etcs.hyperbolic import (
    INF,
    TWO_THETA,
    AngleExpr,
    BoundaryPoint,
    Cusp,
    Edge,
    HyperPolygon,
    PolygonError,
    cusp_sum,
    cuspid_angle,
    f_sum_via_polygon,
    nu_bar_via_polygon,
    polygon_area,
    rho_from_theta,
    symmetry_geodesic_check,
)

F = Fraction
THETA = math.acos(1 / math.sqrt(3))


@pytest.fixture
def twisted_polygon():
    text = resources.files("etcs").joinpath("data", "polygons", "twisted_k3_1.json").read_text()
    import json

    return HyperPolygon.from_obj(json.loads(text))


def test_cuspid_angles():
    assert cuspid_angle("0", "-1/3", "-1/2") == 1
    assert cuspid_angle("-1/2", "-1", "-1/3") == 2
    assert cuspid_angle("-1/3", "-1/2", "inf") == F(2, 3)
    assert cuspid_angle("-1/3", "inf", "-1/2") == F(-2, 3)
    with pytest.raises(PolygonError):
        cuspid_angle("0", "0", "1")
    with pytest.raises(PolygonError):
        cuspid_angle("inf", "0", "1")


def test_boundary_point_parse():
    assert BoundaryPoint.parse("inf") is INF
    assert BoundaryPoint.parse("2/4").ratio == (1, 2)
    assert BoundaryPoint.parse(F(-1, 3)).ratio == (-1, 3)
    with pytest.raises(PolygonError):
        BoundaryPoint.parse("x/2")


rationals = st.fractions(-20, 20, max_denominator=12)
points = st.one_of(rationals.map(BoundaryPoint), st.just(INF))


@given(rationals, points, points)
def test_cuspid_antisymmetry(base, x, y):
    b = BoundaryPoint(base)
    if b in (x, y) or (x.is_inf and y.is_inf):
        return
    assert cuspid_angle(b, x, y) == -cuspid_angle(b, y, x)


@given(rationals, points, points)
def test_cuspid_translation_invariance(base, x, y):
    b = BoundaryPoint(base)
    if b in (x, y) or (x.is_inf and y.is_inf):
        return

    def shift(p):
        return p if p.is_inf else BoundaryPoint(p.value + 1)

    assert cuspid_angle(shift(b), shift(x), shift(y)) == cuspid_angle(b, x, y)


def test_symmetry_geodesic_check():
    assert symmetry_geodesic_check("-1", "0") == ("rectangular", 1)
    assert symmetry_geodesic_check("-1/2", "inf") == ("rhombic", 2)
    assert symmetry_geodesic_check("-1/3", "inf") == ("not_symmetric", 3)
    assert symmetry_geodesic_check("0", "3") == ("not_symmetric", 3)


def test_polygon_area():
    assert polygon_area(HyperPolygon(3)) == AngleExpr(F(1))
    assert polygon_area(HyperPolygon(4)) == AngleExpr(F(2))
    area = polygon_area(HyperPolygon(4, interior_angles=(TWO_THETA,)))
    assert area == AngleExpr(F(2), F(-2))
    assert area.value(THETA) == pytest.approx(2 * math.pi - 2 * THETA)
    with pytest.raises(PolygonError):
        HyperPolygon(3, interior_angles=(AngleExpr(c_rad=4.0),))


def test_example_polygon(twisted_polygon):
    assert [c.angle for c in twisted_polygon.cusps] == [1, 2, F(2, 3)]
    assert cusp_sum(twisted_polygon) == F(11, 3)
    assert polygon_area(twisted_polygon) == AngleExpr(F(2), F(-2))
    fs = f_sum_via_polygon(twisted_polygon)
    assert fs.ell == F(11, 3)
    # two-route consistency with the eta series
    assert fs.value(THETA) == pytest.approx(F_contribution(EtaParams(3, -1, 2)).value, abs=1e-6)


def test_nu_bar_exact_cancellation(twisted_polygon):
    r = nu_bar_via_polygon(twisted_polygon, rho_from_theta(), -1)
    assert r.exact == -19 and r.theta_coefficient == 0
    assert nu_bar_via_polygon(twisted_polygon, rho_from_theta(), 0).exact == -16
    numeric = nu_bar_via_polygon(twisted_polygon, math.pi - 2 * THETA, -1, theta=THETA)
    assert numeric.exact is None and numeric.value == pytest.approx(-19, abs=1e-9)


def test_empty_polygon():
    empty = HyperPolygon(0)
    assert f_sum_via_polygon(empty).value() == 0
    assert nu_bar_via_polygon(empty, 0.0, 0).value == 0


def test_non_symmetric_completion_rejected():
    p = HyperPolygon(3, cusps=(Cusp(BoundaryPoint(F(0)), INF, BoundaryPoint(F(3))),),
                     edges=(Edge(BoundaryPoint(F(0)), BoundaryPoint(F(3))),))
    with pytest.raises(PolygonError, match="k = 3"):
        f_sum_via_polygon(p)


def test_roundtrip(twisted_polygon):
    assert HyperPolygon.from_obj(twisted_polygon.to_obj()) == twisted_polygon
    with pytest.raises(PolygonError, match="missing"):
        HyperPolygon.from_obj({"cusps": []})
