"""Coboundary-defect invariants of 7-manifolds with G2-structure.

Given an 8-dimensional spin coboundary W of M with data (chi, sigma, n+, p^2):

* mu  = (p^2 - sigma)/8   in Z/gcd(28, d~/4)   (Z/28 when p_M is torsion, d = 0)
* nu  = chi - 2 n+ - 3 sigma   in Z/48
* xi  = 7 chi - 14 n+ + (3 p^2 - 45 sigma)/2   in Z/3d~   (an integer when d = 0)

with d~ = lcm(4, d).  These satisfy xi = 7 nu (mod 12) and (xi - 7 nu)/12 = mu.
Every residue is returned as a ``Residue`` carrying its modulus.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import _kernels

TCS_D_VALUES = (2, 4, 6, 8, 12, 24)


class DefectError(ValueError):
    pass


class Residue(NamedTuple):
    value: int
    modulus: int | None  # None: an honest integer, not reduced

    @classmethod
    def of(cls, x: int, modulus: int | None) -> "Residue":
        return cls(x if modulus is None else x % modulus, modulus)

    def __str__(self):
        return str(self.value) if self.modulus is None else f"{self.value} mod {self.modulus}"


def _check_d(d: int, allow_zero: bool = False) -> None:
    if d == 0 and allow_zero:
        return
    if d <= 0 or d % 2:
        raise DefectError(f"d must be a positive even integer (p_M is even), got {d}")


def d_tilde(d: int) -> int:
    _check_d(d)
    return math.lcm(4, d)


def mu_modulus(d: int) -> int:
    """gcd(28, d~/4), or 28 in the torsion case d = 0."""
    _check_d(d, allow_zero=True)
    return 28 if d == 0 else math.gcd(28, d_tilde(d) // 4)


def smooth_structure_count(d: int) -> int:
    return math.gcd(28, d_tilde(d) // 4)


def g2_class_count(d: int) -> tuple[int, int]:
    """(classes per value of nu, total) = (Num(d/112), 24 Num(d/112))."""
    _check_d(d)
    per_nu = Fraction(d, 112).numerator
    return per_nu, 24 * per_nu


def tcs_d_validation(d: int) -> bool:
    return d in TCS_D_VALUES


def milnor_lambda(sigma: int, p1_sq: int) -> Residue:
    return Residue.of(45 * sigma + p1_sq, 7)


@dataclass(frozen=True)
class CoboundaryData:
    chi: int
    sigma: int
    n_plus: int
    p_sq: int
    d: int = 0
    p1_sq: int | None = None

    def __post_init__(self):
        _check_d(self.d, allow_zero=True)

    @property
    def congruence_ok(self) -> bool:
        return (self.p_sq - self.sigma) % 8 == 0

    def require_congruence(self) -> None:
        if not self.congruence_ok:
            raise DefectError(f"p^2 = {self.p_sq} and sigma = {self.sigma} violate p^2 = sigma (mod 8)")


def eells_kuiper_mu(data: CoboundaryData) -> Residue:
    data.require_congruence()
    return Residue.of((data.p_sq - data.sigma) // 8, mu_modulus(data.d))


def nu_invariant(chi: int, n_plus: int, sigma: int) -> Residue:
    return Residue.of(chi - 2 * n_plus - 3 * sigma, 48)


def xi_invariant(data: CoboundaryData) -> Residue:
    twice = 3 * data.p_sq - 45 * data.sigma
    if twice % 2:
        raise DefectError("3 p^2 - 45 sigma is odd: inconsistent coboundary data")
    x = 7 * data.chi - 14 * data.n_plus + twice // 2
    return Residue.of(x, None if data.d == 0 else 3 * d_tilde(data.d))


def relation_13_check(xi: int, nu: int) -> bool:
    return (xi - 7 * nu) % 12 == 0


def mu_recovery(xi: int, nu: int, d: int) -> Residue:
    if not relation_13_check(xi, nu):
        raise DefectError(f"xi = {xi}, nu = {nu} violate xi = 7 nu (mod 12)")
    return Residue.of((xi - 7 * nu) // 12, mu_modulus(d))


def parity_check(nu: int, b0: int, b1: int, b2: int, b3: int) -> bool:
    return (nu - (b0 + b1 + b2 + b3)) % 2 == 0


def nu_from_nu_bar(nu_bar: int, b1: int = 0) -> Residue:
    return Residue.of(nu_bar - 24 * (1 + b1), 48)


def g2_bordism_check(nu: int) -> bool:
    """True iff the G2-structure bounds, i.e. 3 divides nu."""
    return nu % 48 % 3 == 0


def closed_relations_check(sigma: int, p_sq: int, p2: int, ind_D: int, chi: int, n_plus: int) -> dict[str, bool]:
    """Verdict per relation for closed spin 8-manifold data."""
    return {
        "signature": 7 * p2 == 4 * p_sq + 45 * sigma,
        "dirac_index": 1440 * ind_D + p2 == 7 * p_sq,
        "spinor_euler": p2 == p_sq + 2 * chi - 4 * n_plus,
    }


def ek_solvability(p_sq: int, sigma: int) -> bool:
    """Do integers (ind D, p2) exist solving the first two closed relations?"""
    if (p_sq - sigma) % 8:
        raise DefectError("p^2 and sigma must agree mod 8")
    return ((p_sq - sigma) // 8) % 28 == 0


def ek_solvability_scan(p_sq, sigma, ind_bound: int = 10_000):
    """Brute-force counterpart of ``ek_solvability`` over |ind D| <= ind_bound (vectorised)."""
    return _kernels.eq8_scan(p_sq, sigma, ind_bound)


@dataclass(frozen=True)
class DefectReport:
    mu: Residue | None
    nu: Residue
    xi: Residue | None
    verdicts: dict[str, bool]
    lam: Residue | None = None

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def defect_report(data: CoboundaryData) -> DefectReport:
    """All invariants plus every relation that can be checked from the data."""
    nu = nu_invariant(data.chi, data.n_plus, data.sigma)
    verdicts = {"p_sq_congruent_sigma_mod_8": data.congruence_ok}
    mu = xi = None
    if data.congruence_ok:
        mu = eells_kuiper_mu(data)
        xi = xi_invariant(data)
        verdicts["xi_equals_7nu_mod_12"] = relation_13_check(xi.value, nu.value)
        if verdicts["xi_equals_7nu_mod_12"]:
            verdicts["mu_recovered_from_xi_nu"] = mu_recovery(xi.value, nu.value, data.d) == mu
    lam = None if data.p1_sq is None else milnor_lambda(data.sigma, data.p1_sq)
    return DefectReport(mu, nu, xi, verdicts, lam)


def modulus_table(d: int) -> dict[str, int]:
    dt = d_tilde(d)
    return {"d": d, "d_tilde": dt, "mu": mu_modulus(d), "nu": 48, "xi": 3 * dt}
