"""Torus gluing data: constraint checks, derived shape ratios, enumeration, figures.

A gluing is ``(k+, eps+, k-, eps-, G)`` with ``G = (m p; n q)``.  Unit
representatives ``eps`` are normalised into ``(-k/2, k/2]`` on construction
(``eps = 0`` when ``k = 1``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _kernels

GENERIC = "generic"
RIGHT_ANGLE = "right_angle"
THETA_ZERO = "theta_zero_excluded"
# mnpq = 0 without n = p = 0 or m = q = 0: no torus isometry realises it
DEGENERATE = "degenerate_excluded"

EXCLUDED_REASONS = {
    THETA_ZERO: "n = p = 0 forces theta = 0; the resulting manifold has infinite fundamental group",
    DEGENERATE: "exactly one of the products mp, nq vanishes; no isometry of the tori has this matrix",
}


class GluingError(ValueError):
    pass


def normalize_unit(eps: int, k: int) -> int:
    """Representative of eps mod k in (-k/2, k/2]."""
    r = eps % k
    return r - k if 2 * r > k else r


def units(k: int) -> list[int]:
    """All unit representatives mod k, ascending, in (-k/2, k/2]."""
    return sorted(normalize_unit(e, k) for e in range(k) if math.gcd(e, k) == 1)


@dataclass(frozen=True)
class GluingData:
    k_plus: int
    eps_plus: int
    k_minus: int
    eps_minus: int
    m: int
    n: int
    p: int
    q: int

    def __post_init__(self):
        for name in ("k_plus", "k_minus"):
            if getattr(self, name) < 1:
                raise GluingError(f"{name} must be a positive integer")
        object.__setattr__(self, "eps_plus", normalize_unit(self.eps_plus, self.k_plus))
        object.__setattr__(self, "eps_minus", normalize_unit(self.eps_minus, self.k_minus))

    @property
    def G(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m, self.p), (self.n, self.q))

    @classmethod
    def from_matrix(cls, k_plus, eps_plus, k_minus, eps_minus, G) -> "GluingData":
        (m, p), (n, q) = G
        return cls(k_plus, eps_plus, k_minus, eps_minus, m, n, p, q)

    def to_obj(self) -> dict:
        return {
            "k_plus": self.k_plus,
            "eps_plus": self.eps_plus,
            "k_minus": self.k_minus,
            "eps_minus": self.eps_minus,
            "G": [list(r) for r in self.G],
        }

    @classmethod
    def from_obj(cls, obj: dict, where: str = "gluing") -> "GluingData":
        if not isinstance(obj, dict):
            raise GluingError(f"{where}: expected an object")
        vals = {}
        for key in ("k_plus", "eps_plus", "k_minus", "eps_minus"):
            v = obj.get(key)
            if isinstance(v, bool) or not isinstance(v, int):
                raise GluingError(f"{where}.{key}: expected an integer, got {v!r}")
            vals[key] = v
        g = obj.get("G")
        ok = isinstance(g, list) and len(g) == 2 and all(isinstance(r, list) and len(r) == 2 for r in g)
        if not ok or not all(isinstance(x, int) and not isinstance(x, bool) for r in g for x in r):
            raise GluingError(f"{where}.G: expected a 2x2 integer array [[m, p], [n, q]]")
        return cls.from_matrix(G=g, **vals)

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_json(cls, text: str) -> "GluingData":
        return cls.from_obj(json.loads(text))

    def negated(self) -> "GluingData":
        return GluingData(self.k_plus, self.eps_plus, self.k_minus, self.eps_minus, -self.m, -self.n, -self.p, -self.q)

    def flipped(self) -> "GluingData":
        """Reverse both internal circles: (m, n, p, q) -> (m, -n, -p, q), eps -> -eps."""
        return GluingData(self.k_plus, -self.eps_plus, self.k_minus, -self.eps_minus, self.m, -self.n, -self.p, self.q)

    def orbit(self) -> set["GluingData"]:
        f = self.flipped()
        return {self, self.negated(), f, f.negated()}

    def canonical(self) -> "GluingData":
        return max(self.orbit(), key=_order_key)


def _order_key(g: GluingData):
    return (g.m, g.p, g.n, g.q, g.eps_plus, g.eps_minus)


@dataclass(frozen=True)
class ValidationReport:
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


def validate(g: GluingData) -> ValidationReport:
    kp, km = g.k_plus, g.k_minus
    m, n, p, q = g.m, g.n, g.p, g.q
    return ValidationReport(
        {
            "unit_plus": math.gcd(g.eps_plus, kp) == 1 and (kp > 1 or g.eps_plus == 0),
            "unit_minus": math.gcd(g.eps_minus, km) == 1 and (km > 1 or g.eps_minus == 0),
            "determinant": m * q - p * n == -kp * km,
            "sign": m * n * p * q <= 0,
            "congruence_plus": (g.eps_plus * m - n) % kp == 0 and (g.eps_plus * p - q) % kp == 0,
            "congruence_minus": (g.eps_minus * p + m) % km == 0 and (g.eps_minus * q + n) % km == 0,
        }
    )


@dataclass(frozen=True)
class DerivedGeometry:
    """Shape data of the glued tori.  ``None`` ratios mean "free" (right-angle case)."""

    case: str
    s_plus_sq: Fraction | None = None
    s_minus_sq: Fraction | None = None
    cos2_theta: Fraction | None = None
    theta: float | None = None
    reason: str | None = None

    @property
    def excluded(self) -> bool:
        return self.case in EXCLUDED_REASONS

    @property
    def ratios_free(self) -> bool:
        return self.case == RIGHT_ANGLE

    def to_obj(self) -> dict:
        def q(x):
            if x is None:
                return "free" if self.ratios_free else None
            return str(x)

        out = {"case": self.case, "s_plus_sq": q(self.s_plus_sq), "s_minus_sq": q(self.s_minus_sq)}
        out["cos2_theta"] = None if self.cos2_theta is None else str(self.cos2_theta)
        out["theta"] = self.theta
        if self.reason:
            out["reason"] = self.reason
        return out


def derive(g: GluingData) -> DerivedGeometry:
    rep = validate(g)
    if not rep.ok:
        raise GluingError(f"gluing fails constraints: {', '.join(rep.failures())}")
    m, n, p, q = g.m, g.n, g.p, g.q
    if n == 0 and p == 0:
        return DerivedGeometry(THETA_ZERO, reason=EXCLUDED_REASONS[THETA_ZERO])
    if m == 0 and q == 0:
        return DerivedGeometry(RIGHT_ANGLE, cos2_theta=Fraction(0), theta=math.pi / 2)
    if m * n * p * q == 0:
        return DerivedGeometry(DEGENERATE, reason=EXCLUDED_REASONS[DEGENERATE])
    s_minus_sq = Fraction(-m * n, p * q)
    s_plus_sq = Fraction(-n * q, m * p)
    cos2 = m * m * s_plus_sq / (m * m * s_plus_sq + n * n)
    theta = math.atan2(n, m * math.sqrt(s_plus_sq)) % math.pi
    return DerivedGeometry(GENERIC, s_plus_sq, s_minus_sq, cos2, theta)


@dataclass
class GluingClass:
    representative: GluingData
    geometry: DerivedGeometry
    members: list[GluingData] = field(default_factory=list)

    def __contains__(self, g: GluingData) -> bool:
        return g in self.members


def candidates(k_plus: int, k_minus: int, bound: int, eps_plus=None, eps_minus=None) -> Iterator[GluingData]:
    """Every tuple within the bound that passes all constraints (deterministic order)."""
    ep = units(k_plus) if eps_plus is None else [normalize_unit(e, k_plus) for e in eps_plus]
    em = units(k_minus) if eps_minus is None else [normalize_unit(e, k_minus) for e in eps_minus]
    rows = _kernels.gluing_scan(k_plus, k_minus, ep, em, bound)
    for e1, e2, m, n, p, q in rows.tolist():
        yield GluingData(k_plus, e1, k_minus, e2, m, n, p, q)


def enumerate_gluings(
    k_plus: int, k_minus: int, bound: int, eps_plus=None, eps_minus=None, dedupe: bool = True
) -> list[GluingClass]:
    """Admissible gluings with entries bounded by ``bound``, grouped into equivalence classes."""
    if bound < k_plus * k_minus:
        raise GluingError(f"bound must be at least k_plus*k_minus = {k_plus * k_minus}")
    classes: dict[GluingData, GluingClass] = {}
    for g in candidates(k_plus, k_minus, bound, eps_plus, eps_minus):
        geo = derive(g)
        if geo.excluded:
            continue
        key = g.canonical() if dedupe else g
        if key not in classes:
            classes[key] = GluingClass(key, derive(key))
        classes[key].members.append(g)
    return sorted(classes.values(), key=lambda c: _order_key(c.representative), reverse=True)


# --------------------------------------------------------------------- figure


@dataclass
class TorusFigure:
    points: np.ndarray  # (N, 2)
    vectors: dict[str, tuple[float, float]]
    theta: float

    def to_svg(self, scale: float = 60.0, margin: float = 30.0) -> str:
        pts = self.points
        allx = np.concatenate([pts[:, 0], [v[0] for v in self.vectors.values()], [0.0]])
        ally = np.concatenate([pts[:, 1], [v[1] for v in self.vectors.values()], [0.0]])
        x0, x1, y0, y1 = allx.min(), allx.max(), ally.min(), ally.max()
        w = (x1 - x0) * scale + 2 * margin
        h = (y1 - y0) * scale + 2 * margin

        def tx(x, y):
            return (x - x0) * scale + margin, (y1 - y) * scale + margin

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" viewBox="0 0 {w:.1f} {h:.1f}">',
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" '
            'orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>',
        ]
        for x, y in pts:
            cx, cy = tx(x, y)
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5" fill="black"/>')
        ox, oy = tx(0.0, 0.0)
        for label, (vx, vy) in self.vectors.items():
            ex, ey = tx(vx, vy)
            colour = "firebrick" if label.endswith("+") else "steelblue"
            out.append(
                f'<line x1="{ox:.2f}" y1="{oy:.2f}" x2="{ex:.2f}" y2="{ey:.2f}" stroke="{colour}" '
                f'stroke-width="2" marker-end="url(#arrow)"/>'
            )
            out.append(f'<text x="{ex + 4:.2f}" y="{ey - 4:.2f}" font-size="12" fill="{colour}">{label}</text>')
        out.append("</svg>")
        return "\n".join(out)


def torus_figure(
    g: GluingData, geometry: DerivedGeometry | None = None, s_plus: float | None = None, extent: float = 2.0
) -> TorusFigure:
    """Lattice of the '+' torus with the four coordinate directions of both sides.

    Units: zeta+ = 1, xi+ = s+.  In the right-angle case ``s_plus`` must be given.
    """
    geometry = geometry or derive(g)
    if geometry.excluded:
        raise GluingError(f"no figure for excluded gluing: {geometry.reason}")
    if geometry.ratios_free:
        if s_plus is None:
            raise GluingError("right-angle gluing: the ratio s_plus is free and must be supplied")
    else:
        s_plus = math.sqrt(geometry.s_plus_sq)
    xi, zeta, k = s_plus, 1.0, g.k_plus
    dv_plus = np.array([xi, 0.0])
    du_plus = np.array([0.0, zeta])
    dv_minus = np.array([g.m * xi, g.n * zeta]) / k
    du_minus = np.array([g.p * xi, g.q * zeta]) / k

    # direction of dv- measured from dv+, as an unoriented line angle in (0, pi)
    angle = math.atan2(dv_minus[1], dv_minus[0]) % math.pi
    assert abs(angle - geometry.theta) < 1e-9
    assert abs(dv_minus @ du_minus) < 1e-9 * (1 + np.linalg.norm(dv_minus) * np.linalg.norm(du_minus))

    reach = extent * max(np.linalg.norm(v) for v in (dv_plus, du_plus, dv_minus, du_minus))
    amax = int(math.ceil(reach * k / xi)) + 1
    bmax = int(math.ceil(reach * k / zeta)) + 1
    pts = [
        (a * xi / k, b * zeta / k)
        for a in range(-amax, amax + 1)
        for b in range(-bmax, bmax + 1)
        if (b - g.eps_plus * a) % k == 0
    ]
    pts = np.array([pt for pt in pts if math.hypot(*pt) <= reach + 1e-12])
    vectors = {
        "du+": tuple(du_plus),
        "dv+": tuple(dv_plus),
        "du-": tuple(du_minus),
        "dv-": tuple(dv_minus),
    }
    return TorusFigure(pts, vectors, angle)
