"""Configurations of two polarising lattices inside the K3 lattice.

A configuration is stored as the Gram matrix of the push-out ``W = N+ + N-``
in a basis whose first ``r_plus`` vectors span ``N+`` and whose last
``r_minus`` vectors span ``N-``.  With ``N``/``N'`` the Gram blocks of the two
sides and ``B`` the cross block, the composition of orthogonal projections
restricted to one side is ``N^-1 B N'^-1 B^T``.

Configuration angles are the arguments of the eigenvalues of the product of
the two reflections ``A+ A-`` restricted to its positive and negative
invariant subspaces.  Angles are classified exactly whenever the relevant
characteristic-polynomial factor is ``x - 1``, ``x + 1`` or
``x^2 - t x + 1`` with rational ``t``; only higher-degree irreducible factors
fall back to floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from . import _rational as rq
from .lattice import GramMatrix, LatticeError, signature

PLUS, MINUS = "plus", "minus"
ANGLE_TOL = 1e-9
DEFINITENESS_MARGIN = 1e-9
K3_POSITIVE, K3_NEGATIVE = 3, 19


class ConfigurationError(ValueError):
    pass


class NotAnEigenvalue(ConfigurationError):
    pass


class AmbiguousAngle(ConfigurationError):
    pass


@dataclass(frozen=True)
class Configuration:
    gram: GramMatrix
    r_plus: int
    r_minus: int

    def __post_init__(self):
        if not isinstance(self.gram, GramMatrix):
            object.__setattr__(self, "gram", GramMatrix.from_rows(self.gram))
        if self.r_plus < 0 or self.r_minus < 0 or self.r_plus + self.r_minus != self.gram.r:
            raise ConfigurationError(
                f"r_plus + r_minus = {self.r_plus} + {self.r_minus} does not match rank {self.gram.r}"
            )

    @property
    def r(self) -> int:
        return self.gram.r

    def side_range(self, side: str) -> range:
        if side == PLUS:
            return range(0, self.r_plus)
        if side == MINUS:
            return range(self.r_plus, self.r)
        raise ConfigurationError(f"side must be 'plus' or 'minus', got {side!r}")

    def n_gram(self, side: str) -> GramMatrix:
        return self.gram.block(self.side_range(side))

    def to_obj(self) -> dict:
        return {"schema": "etcs/1", "gram": self.gram.tolist(), "r_plus": self.r_plus, "r_minus": self.r_minus}

    @classmethod
    def from_obj(cls, obj: dict) -> "Configuration":
        for key in ("gram", "r_plus", "r_minus"):
            if key not in obj:
                raise ConfigurationError(f"configuration: missing field {key!r}")
        try:
            gram = GramMatrix.from_obj(obj["gram"])
        except LatticeError as exc:
            raise ConfigurationError(f"configuration.gram: {exc}") from None
        return cls(gram, int(obj["r_plus"]), int(obj["r_minus"]))


def _other(side: str) -> str:
    return MINUS if side == PLUS else PLUS


def _block_q(cfg: Configuration, rows: str, cols: str) -> rq.Matrix:
    return rq.sub_block(rq.to_q(cfg.gram.entries), cfg.side_range(rows), cfg.side_range(cols))


def _inv_block(cfg: Configuration, side: str) -> rq.Matrix:
    try:
        return rq.inverse(_block_q(cfg, side, side))
    except ZeroDivisionError:
        raise ConfigurationError(f"Gram block of N_{side} is singular") from None


def condition_i(cfg: Configuration) -> bool:
    """W non-degenerate of signature (2, rk W - 2)."""
    return tuple(signature(cfg.gram)) == (2, cfg.r - 2, 0)


def proj_composition(cfg: Configuration, side: str) -> rq.Matrix:
    """Matrix of (projection to the other side, then back) on N_side, in its basis."""
    other = _other(side)
    n_inv = _inv_block(cfg, side)
    o_inv = _inv_block(cfg, other)
    b = _block_q(cfg, side, other)
    return rq.matmul(rq.matmul(rq.matmul(n_inv, b), o_inv), rq.transpose(b))


_X = sympy.Symbol("x")


def _charpoly_factors(m: rq.Matrix) -> list[tuple[list[Fraction], int]]:
    """Monic irreducible factors over Q with multiplicities, coefficients high to low."""
    if not m:
        return []
    sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])
    poly = sm.charpoly(_X)
    _, factors = sympy.factor_list(poly.as_expr(), _X)
    out = []
    for f, mult in factors:
        p = sympy.Poly(f, _X).monic()
        coeffs = [Fraction(int(c.p), int(c.q)) for c in p.all_coeffs()]
        out.append((coeffs, int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), [float(c) for c in fm[0]]))
    return out


@dataclass(frozen=True)
class Cos2Spectrum:
    """Eigenvalues of the projection composition: rational roots plus leftover factors."""

    rational: tuple[Fraction, ...]
    irrational_factors: tuple[tuple[tuple[Fraction, ...], int], ...] = ()

    def __contains__(self, c) -> bool:
        return Fraction(c) in self.rational


def gluing_angle_cos2(cfg: Configuration, side: str = PLUS) -> Cos2Spectrum:
    rational: list[Fraction] = []
    irr = []
    for coeffs, mult in _charpoly_factors(proj_composition(cfg, side)):
        if len(coeffs) == 2:
            rational.extend([-coeffs[1]] * mult)
        else:
            irr.append((tuple(coeffs), mult))
    return Cos2Spectrum(tuple(sorted(rational)), tuple(irr))


def theta_eigenspace(cfg: Configuration, c, side: str = PLUS) -> list[list[Fraction]]:
    """Basis of the c-eigenspace of the projection composition on N_side."""
    c = Fraction(c)
    p = proj_composition(cfg, side)
    n = len(p)
    shifted = rq.add(p, rq.scale(-c, rq.identity(n)))
    basis = rq.nullspace(shifted, n)
    if not basis:
        raise NotAnEigenvalue(f"{c} is not an eigenvalue of the projection composition on N_{side}")
    return basis


def condition_ii(cfg: Configuration, c, side: str = PLUS) -> bool:
    """Non-triviality part of condition (ii): the c-eigenspace on N_side is nonzero."""
    try:
        return len(theta_eigenspace(cfg, c, side)) > 0
    except (NotAnEigenvalue, ConfigurationError):
        return False


def lambda_sum_gram(cfg: Configuration, c, side: str = PLUS) -> GramMatrix:
    """Gram of N_side + (orthogonal complement of the c-eigenspace in N_other).

    The complement generators are scaled to primitive integer vectors.  No
    primitive closure inside the K3 lattice is taken.
    """
    other = _other(side)
    eig = theta_eigenspace(cfg, c, other)
    n_other = _block_q(cfg, other, other)
    constraints = [rq.matvec(rq.transpose(n_other), v) for v in eig]
    complement = rq.nullspace(constraints, len(n_other))
    gens = [rq.primitive_integer(v) for v in complement]

    cols: list[list[int]] = []
    for i in cfg.side_range(side):
        cols.append([int(j == i) for j in range(cfg.r)])
    offset = cfg.side_range(other).start
    for v in gens:
        col = [0] * cfg.r
        for k, x in enumerate(v):
            col[offset + k] = x
        cols.append(col)
    s = [list(row) for row in zip(*cols)]
    return cfg.gram.transform(s)


def _projection(cfg: Configuration, side: str) -> rq.Matrix:
    """Orthogonal projection of W onto N_side, as an r x r matrix on coordinates."""
    g = rq.to_q(cfg.gram.entries)
    rng = cfg.side_range(side)
    coeff = rq.matmul(_inv_block(cfg, side), [g[i] for i in rng])
    out = rq.zeros(cfg.r, cfg.r)
    for k, i in enumerate(rng):
        out[i] = coeff[k]
    return out


def reflection_product(cfg: Configuration) -> rq.Matrix:
    """A+ A- = (2 pi+ - 1)(2 pi- - 1) on W; checked to be an isometry of the Gram."""
    ident = rq.identity(cfg.r)
    a_plus = rq.add(rq.scale(2, _projection(cfg, PLUS)), rq.scale(-1, ident))
    a_minus = rq.add(rq.scale(2, _projection(cfg, MINUS)), rq.scale(-1, ident))
    t = rq.matmul(a_plus, a_minus)
    g = rq.to_q(cfg.gram.entries)
    if rq.matmul(rq.matmul(rq.transpose(t), g), t) != g:
        raise ConfigurationError("reflection product is not an isometry (internal error)")
    return t


@dataclass(frozen=True)
class Angle:
    """One eigen-argument in (-pi, pi].

    ``kind`` is ``zero``, ``pi``, ``cos`` (exact: ``trace`` = 2 cos|alpha| is
    rational, ``sign`` gives the sign of alpha) or ``float``.
    """

    kind: str
    trace: Fraction | None = None
    sign: int = 1
    value: float | None = None

    @property
    def radians(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "pi":
            return math.pi
        if self.kind == "cos":
            return self.sign * math.acos(float(self.trace) / 2)
        return float(self.value)

    def to_obj(self) -> dict:
        if self.kind in ("zero", "pi"):
            return {self.kind: True}
        if self.kind == "cos":
            return {"cos2": str(self.trace), "sign": self.sign}
        return {"float": self.value}

    @classmethod
    def from_obj(cls, obj: dict) -> "Angle":
        if obj.get("zero"):
            return ZERO
        if obj.get("pi"):
            return PI
        if "cos2" in obj:
            return cls("cos", Fraction(obj["cos2"]), int(obj.get("sign", 1)))
        if "float" in obj:
            return cls("float", value=float(obj["float"]))
        raise ConfigurationError(f"unrecognised angle tag {obj!r}")

    @classmethod
    def from_radians(cls, x: float) -> "Angle":
        if x == 0:
            return ZERO
        if x == math.pi:
            return PI
        return cls("float", value=float(x))


ZERO = Angle("zero")
PI = Angle("pi")


def _angle_key(a: Angle):
    return (abs(a.radians), a.sign if a.kind == "cos" else 0, a.radians)


@dataclass(frozen=True)
class AngleSpectrum:
    alpha_plus: tuple[Angle, ...]
    alpha_minus: tuple[Angle, ...]
    exact_cosines: tuple[Fraction, ...] = field(default=())

    def to_obj(self) -> dict:
        return {
            "alpha_plus": [a.to_obj() for a in self.alpha_plus],
            "alpha_minus": [a.to_obj() for a in self.alpha_minus],
            "exact_cosines": [str(t) for t in self.exact_cosines],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "AngleSpectrum":
        return cls(
            tuple(Angle.from_obj(a) for a in obj["alpha_plus"]),
            tuple(Angle.from_obj(a) for a in obj["alpha_minus"]),
            tuple(Fraction(t) for t in obj.get("exact_cosines", ())),
        )

    @classmethod
    def trivial_minus(cls, alpha_plus: Sequence[Angle], alpha_minus: Sequence[Angle] = ()) -> "AngleSpectrum":
        """Spectrum with ``alpha_minus`` padded by zeros to length 19."""
        minus = tuple(alpha_minus) + (ZERO,) * (K3_NEGATIVE - len(alpha_minus))
        return cls(tuple(alpha_plus), minus)


def _restricted_inertia(cfg: Configuration, basis: list[list[Fraction]]) -> tuple[int, int, int]:
    g = rq.to_q(cfg.gram.entries)
    sub = [[rq.bilinear(g, u, v) for v in basis] for u in basis]
    return rq.symmetric_inertia(sub)


def _numeric_blocks(cfg, t_mat, basis, coeffs, mult):
    """Float fallback for an irreducible factor of degree > 2."""
    g = np.array([[float(x) for x in row] for row in cfg.gram.entries])
    t = np.array([[float(x) for x in row] for row in t_mat])
    roots = np.roots([float(c) for c in coeffs])
    if np.max(np.abs(np.abs(roots) - 1)) > ANGLE_TOL:
        raise ConfigurationError(f"eigenvalues off the unit circle for factor {coeffs}")
    plus: list[Angle] = []
    minus: list[Angle] = []
    n = len(t)
    for lam in roots:
        alpha = float(np.angle(lam))
        if alpha <= 0:
            continue
        trace = 2 * math.cos(alpha)
        q = t @ t - trace * t + np.eye(n)
        _, s, vh = np.linalg.svd(q)
        plane = vh[n - 2 * mult:].T
        if s[n - 2 * mult] > 1e-8 * max(1.0, s[0]):
            raise ConfigurationError("non-semisimple eigenvalue in float fallback")
        sub = plane.T @ g @ plane
        ev = np.linalg.eigvalsh((sub + sub.T) / 2)
        if np.min(np.abs(ev)) < DEFINITENESS_MARGIN:
            raise ConfigurationError("invariant plane is not definite within the float margin")
        a = int((ev > 0).sum()) // 2
        b = int((ev < 0).sum()) // 2
        plus += [Angle("float", value=alpha), Angle("float", value=-alpha)] * a
        minus += [Angle("float", value=alpha), Angle("float", value=-alpha)] * b
    return plus, minus


def w_angles(cfg: Configuration) -> tuple[list[Angle], list[Angle], list[Fraction]]:
    """Eigen-arguments of A+ A- on W, split by the sign of the invariant subspace."""
    t_mat = reflection_product(cfg)
    n = cfg.r
    plus: list[Angle] = []
    minus: list[Angle] = []
    traces: list[Fraction] = []
    for coeffs, mult in _charpoly_factors(t_mat):
        deg = len(coeffs) - 1
        kernel = rq.nullspace(rq.poly_eval_matrix(coeffs, t_mat), n)
        if len(kernel) != deg * mult:
            raise ConfigurationError(f"reflection product is not semisimple (factor {coeffs})")
        if deg == 1:
            lam = -coeffs[1]
            if lam not in (1, -1):
                raise ConfigurationError(f"real eigenvalue {lam} off the unit circle")
            a, b, z = _restricted_inertia(cfg, kernel)
            if z:
                raise ConfigurationError(f"degenerate invariant subspace for eigenvalue {lam}")
            ang = ZERO if lam == 1 else PI
            plus += [ang] * a
            minus += [ang] * b
            traces.append(2 * lam)
        elif deg == 2 and coeffs[2] == 1 and abs(coeffs[1]) < 2:
            trace = -coeffs[1]
            a, b, z = _restricted_inertia(cfg, kernel)
            if z or a % 2 or b % 2:
                raise ConfigurationError(f"invariant subspace for factor {coeffs} has inertia {(a, b, z)}")
            pair = [Angle("cos", trace, 1), Angle("cos", trace, -1)]
            plus += pair * (a // 2)
            minus += pair * (b // 2)
            traces.append(trace)
        elif deg == 2:
            raise ConfigurationError(f"eigenvalues off the unit circle for factor {coeffs}")
        else:
            p, m = _numeric_blocks(cfg, t_mat, kernel, coeffs, mult)
            plus += p
            minus += m
    return plus, minus, traces


def configuration_angles(cfg: Configuration, cos2_theta=None) -> AngleSpectrum:
    """Configuration angles, padded with zeros for the complement of W in L.

    If ``cos2_theta`` is given, the positive part is checked to be
    {0, +2 theta, -2 theta}; otherwise it is checked against some rational
    eigenvalue of the projection composition.
    """
    if not condition_i(cfg):
        raise ConfigurationError(f"condition (i) fails: signature {tuple(signature(cfg.gram))}")
    if cfg.r - 2 > K3_NEGATIVE:
        raise ConfigurationError("rank of W too large for the K3 lattice")
    plus, minus, traces = w_angles(cfg)
    _check_plus(cfg, plus, cos2_theta)
    plus = sorted(plus + [ZERO] * (K3_POSITIVE - len(plus)), key=_angle_key)
    minus = sorted(minus + [ZERO] * (K3_NEGATIVE - len(minus)), key=_angle_key)
    return AngleSpectrum(tuple(plus), tuple(minus), tuple(sorted(set(traces))))


def _check_plus(cfg: Configuration, plus: list[Angle], cos2_theta) -> None:
    assert len(plus) == 2
    if cos2_theta is None:
        candidates = gluing_angle_cos2(cfg).rational
    else:
        candidates = (Fraction(cos2_theta),)
    a, b = plus
    if a.kind == "cos":
        ok = any(4 * c - 2 == a.trace for c in candidates)
    elif a.kind == "float":
        ok = any(abs(math.cos(a.radians) - float(2 * c - 1)) < 1e-8 for c in candidates) or (
            cos2_theta is None and bool(gluing_angle_cos2(cfg).irrational_factors)
        )
    elif a.kind == b.kind == "pi":
        ok = 0 in candidates
    elif a.kind == b.kind == "zero":
        ok = 1 in candidates
    else:
        ok = False
    if not ok:
        raise ConfigurationError(
            f"positive configuration angles {[x.to_obj() for x in plus]} are not {{+-2 theta}} "
            f"for cos^2 theta in {[str(c) for c in candidates]}"
        )


def _classify(a: Angle, boundary: float, boundary_cos: Fraction | None, tol: float) -> str:
    """'closed' if alpha in {pi - |rho|, pi}, 'open' if in (pi - |rho|, pi), else 'out'."""
    if a.kind == "pi":
        return "closed"
    if a.kind == "zero":
        return "out"
    if a.kind == "cos":
        if a.sign < 0:
            return "out"
        if boundary_cos is not None:
            cos_a = a.trace / 2
            if cos_a == boundary_cos:
                return "closed"
            return "open" if cos_a < boundary_cos else "out"
    x = a.radians
    if x <= 0:
        return "out"
    if abs(x - boundary) <= tol or abs(x - math.pi) <= tol:
        raise AmbiguousAngle(f"angle {x!r} within {tol} of a boundary of the counting sets")
    return "open" if boundary < x < math.pi else "out"


def m_rho(spec: AngleSpectrum, rho: float, rho_cos_exact=None, tol: float = ANGLE_TOL) -> int:
    """Signed count of negative configuration angles near pi.

    ``rho_cos_exact`` is cos(pi - |rho|) as an exact rational when known.
    """
    if not -math.pi < rho < math.pi:
        raise ValueError(f"rho must lie in (-pi, pi), got {rho}")
    if rho == 0:
        return 0
    sign = 1 if rho > 0 else -1
    boundary = math.pi - abs(rho)
    bcos = None if rho_cos_exact is None else Fraction(rho_cos_exact)
    if bcos is not None and abs(math.cos(boundary) - float(bcos)) > 1e-9:
        raise ValueError(f"rho_cos_exact {bcos} inconsistent with rho {rho}")
    closed = opened = 0
    for a in spec.alpha_minus:
        cls = _classify(a, boundary, bcos, tol)
        closed += cls == "closed"
        opened += cls == "open"
    return sign * (closed - 1 + 2 * opened)
