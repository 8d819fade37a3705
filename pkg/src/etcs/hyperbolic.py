"""Ideal polygons in the upper half plane and the polygon route to F+ + F-.

Angles that depend on the gluing angle theta are kept symbolic as
``c_pi * pi + c_theta * theta + c_rad`` so that theta can cancel exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


class PolygonError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of R u {inf}; ``value is None`` means infinity."""

    value: Fraction | None = None

    @classmethod
    def parse(cls, s) -> "BoundaryPoint":
        if isinstance(s, BoundaryPoint):
            return s
        if s is None or (isinstance(s, str) and s.strip().lower() in ("inf", "infinity", "∞", "1/0")):
            return INF
        try:
            return cls(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise PolygonError(f"bad boundary point {s!r}: {exc}") from None

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def ratio(self) -> tuple[int, int]:
        """(a, b) with the point equal to a/b, b >= 0; infinity is 1/0."""
        return (1, 0) if self.value is None else (self.value.numerator, self.value.denominator)

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


INF = BoundaryPoint(None)


def cuspid_angle(base, x, y) -> Fraction:
    """(x - y) / ((f x - e)(f y - e)) for the cusp at e/f, with limits at infinity."""
    base, x, y = (BoundaryPoint.parse(v) for v in (base, x, y))
    if base.is_inf:
        raise PolygonError("cusp base must be a rational point")
    if x == base or y == base:
        raise PolygonError("neighbours must differ from the cusp")
    e, f = base.ratio
    if x.is_inf and y.is_inf:
        raise PolygonError("both neighbours at infinity")
    if y.is_inf:
        return Fraction(-1, f * (f * x.value - e))
    if x.is_inf:
        return Fraction(1, f * (f * y.value - e))
    return (x.value - y.value) / ((f * x.value - e) * (f * y.value - e))


def symmetry_geodesic_check(a, b) -> tuple[str, int]:
    """Classify the geodesic between two boundary points by k = |ad - bc|."""
    (p, q), (r, s) = BoundaryPoint.parse(a).ratio, BoundaryPoint.parse(b).ratio
    k = abs(p * s - q * r)
    return {1: "rectangular", 2: "rhombic"}.get(k, "not_symmetric"), k


@dataclass(frozen=True)
class AngleExpr:
    """c_pi * pi + c_theta * theta + c_rad."""

    c_pi: Fraction = Fraction(0)
    c_theta: Fraction = Fraction(0)
    c_rad: float = 0.0

    def __add__(self, o: "AngleExpr") -> "AngleExpr":
        return AngleExpr(self.c_pi + o.c_pi, self.c_theta + o.c_theta, self.c_rad + o.c_rad)

    def __neg__(self) -> "AngleExpr":
        return AngleExpr(-self.c_pi, -self.c_theta, -self.c_rad)

    def __sub__(self, o: "AngleExpr") -> "AngleExpr":
        return self + (-o)

    def scaled(self, c: Fraction) -> "AngleExpr":
        return AngleExpr(c * self.c_pi, c * self.c_theta, float(c) * self.c_rad)

    @property
    def needs_theta(self) -> bool:
        return self.c_theta != 0

    def value(self, theta: float | None = None) -> float:
        if self.needs_theta and theta is None:
            raise PolygonError("expression depends on theta; supply its value")
        return float(self.c_pi) * math.pi + float(self.c_theta) * (theta or 0.0) + self.c_rad

    def __str__(self):
        parts = []
        if self.c_pi:
            parts.append(f"{self.c_pi}*pi")
        if self.c_theta:
            parts.append(f"{self.c_theta}*theta")
        if self.c_rad:
            parts.append(repr(self.c_rad))
        return " + ".join(parts) or "0"


TWO_THETA = AngleExpr(c_theta=Fraction(2))


def rho_from_theta() -> AngleExpr:
    """rho = pi - 2 theta, kept symbolic."""
    return AngleExpr(Fraction(1), Fraction(-2))


@dataclass(frozen=True)
class Cusp:
    base: BoundaryPoint
    x: BoundaryPoint
    y: BoundaryPoint

    @property
    def angle(self) -> Fraction:
        return cuspid_angle(self.base, self.x, self.y)


@dataclass(frozen=True)
class Edge:
    a: BoundaryPoint
    b: BoundaryPoint
    role: str = "completion"  # or "gamma" for the two rays of the torus families


@dataclass(frozen=True)
class HyperPolygon:
    n_sides: int
    cusps: tuple[Cusp, ...] = ()
    interior_angles: tuple[AngleExpr, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n_sides < 0 or (0 < self.n_sides < 3):
            raise PolygonError("a polygon needs at least three sides (or zero for the empty polygon)")
        if len(self.cusps) + len(self.interior_angles) > max(self.n_sides, 0):
            raise PolygonError("more corners than sides")
        for a in self.interior_angles:
            if not a.needs_theta and not 0 < a.value() < math.pi:
                raise PolygonError(f"interior angle {a} outside (0, pi)")

    @classmethod
    def from_obj(cls, obj: dict, where: str = "polygon") -> "HyperPolygon":
        try:
            cusps = tuple(
                Cusp(*(BoundaryPoint.parse(c[key]) for key in ("base", "x", "y"))) for c in obj.get("cusps", [])
            )
            angles = []
            for i, a in enumerate(obj.get("interior_angles", [])):
                if a.get("two_theta"):
                    angles.append(TWO_THETA)
                elif "radians" in a:
                    angles.append(AngleExpr(c_rad=float(a["radians"])))
                elif "pi_frac" in a:
                    angles.append(AngleExpr(c_pi=Fraction(a["pi_frac"])))
                else:
                    raise PolygonError(f"{where}.interior_angles[{i}]: unknown angle form")
            edges = tuple(
                Edge(BoundaryPoint.parse(e["from"]), BoundaryPoint.parse(e["to"]), e.get("role", "completion"))
                for e in obj.get("edges", [])
            )
            return cls(int(obj["n_sides"]), cusps, tuple(angles), edges)
        except KeyError as exc:
            raise PolygonError(f"{where}: missing field {exc}") from None

    def to_obj(self) -> dict:
        def angle(a: AngleExpr):
            if a == TWO_THETA:
                return {"two_theta": True}
            if a.c_rad == 0 and a.c_theta == 0:
                return {"pi_frac": str(a.c_pi)}
            return {"radians": a.value()}

        return {
            "n_sides": self.n_sides,
            "cusps": [{"base": str(c.base), "x": str(c.x), "y": str(c.y)} for c in self.cusps],
            "interior_angles": [angle(a) for a in self.interior_angles],
            "edges": [{"from": str(e.a), "to": str(e.b), "role": e.role} for e in self.edges],
        }

    @classmethod
    def load(cls, path) -> "HyperPolygon":
        return cls.from_obj(json.loads(Path(path).read_text()), where=str(path))


def polygon_area(p: HyperPolygon) -> AngleExpr:
    """Gauss-Bonnet: (n - 2) pi minus interior angles; cusps add nothing."""
    if p.n_sides == 0:
        return AngleExpr()
    area = AngleExpr(Fraction(p.n_sides - 2))
    for a in p.interior_angles:
        area = area - a
    return area


def cusp_sum(p: HyperPolygon) -> Fraction:
    return sum((c.angle for c in p.cusps), Fraction(0))


def check_completion_edges(p: HyperPolygon) -> None:
    for e in p.edges:
        if e.role == "gamma":
            continue
        kind, k = symmetry_geodesic_check(e.a, e.b)
        if kind == "not_symmetric":
            raise PolygonError(f"completion geodesic {e.a} -- {e.b} has k = {k}; only k in {{1, 2}} is allowed")


@dataclass(frozen=True)
class PolygonFSum:
    area: AngleExpr
    ell: Fraction

    def value(self, theta: float | None = None) -> float:
        return 72 / math.pi * self.area.value(theta) - 24 * float(self.ell)


def f_sum_via_polygon(p: HyperPolygon) -> PolygonFSum:
    check_completion_edges(p)
    return PolygonFSum(polygon_area(p), cusp_sum(p))


@dataclass(frozen=True)
class PolygonNuBar:
    value: float
    exact: Fraction | None
    theta_coefficient: Fraction


def nu_bar_via_polygon(p: HyperPolygon, rho, m_rho: int, D_plus=0, D_minus=0, theta: float | None = None) -> PolygonNuBar:
    """D+ + D- + (72/pi) A(P) - 24 l(P) - 72 rho / pi + 3 m_rho.

    ``rho`` is a float or an AngleExpr; with A(P) and rho both symbolic in
    theta the theta terms cancel and the result is exact.
    """
    fs = f_sum_via_polygon(p)
    rho_expr = rho if isinstance(rho, AngleExpr) else AngleExpr(c_rad=float(rho))
    diff = fs.area - rho_expr  # multiplied by 72/pi below
    exact_d = all(isinstance(d, (int, Fraction)) for d in (D_plus, D_minus))
    rational_part = Fraction(D_plus) + Fraction(D_minus) if exact_d else None
    if rational_part is not None and diff.c_theta == 0 and diff.c_rad == 0:
        exact = rational_part + 72 * diff.c_pi - 24 * fs.ell + 3 * m_rho
        return PolygonNuBar(float(exact), exact, Fraction(0))
    val = float(D_plus) + float(D_minus) + 72 / math.pi * diff.value(theta) - 24 * float(fs.ell) + 3 * m_rho
    return PolygonNuBar(val, None, diff.c_theta)
