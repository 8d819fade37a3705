"""Generalised Dedekind sums from isolated fixed points of a cyclic action.

    D = (3/k) sum_j cot(pi j / k) sum_p [prod cos(a_i/2) - 1] / prod sin(a_i/2)

The sum runs over group elements gamma^j with their isolated fixed points p and
rotation angles (a_1, a_2, a_3).  The value is rational, so it is evaluated
in 50-digit arithmetic and then matched to a fraction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath

DENOMINATOR_BOUND = 10**6
RECONSTRUCTION_THRESHOLD = 1e-9
ANGLE_TOL = 1e-9

# exact multiple of pi, or radians
AngleValue = Union[Fraction, float]


class FixedPointError(ValueError):
    pass


def _parse_angle(obj, where: str) -> AngleValue:
    if isinstance(obj, dict) and "pi_frac" in obj:
        try:
            return Fraction(str(obj["pi_frac"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise FixedPointError(f"{where}.pi_frac: {exc}") from None
    if isinstance(obj, dict) and "radians" in obj:
        return float(obj["radians"])
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return float(obj)
    raise FixedPointError(f"{where}: expected {{'pi_frac': 'a/b'}} or {{'radians': x}}")


def _angle_obj(a: AngleValue) -> dict:
    return {"pi_frac": str(a)} if isinstance(a, Fraction) else {"radians": a}


def _mp(a: AngleValue):
    if isinstance(a, Fraction):
        return mpmath.pi * a.numerator / a.denominator
    return mpmath.mpf(a)


def _is_multiple_of_two_pi(x: AngleValue) -> bool:
    if isinstance(x, Fraction):
        return x % 2 == 0
    r = float(mpmath.fmod(mpmath.mpf(x), 2 * mpmath.pi))
    return min(abs(r), abs(abs(r) - 2 * float(mpmath.pi))) < ANGLE_TOL


@dataclass(frozen=True)
class FixedPoint:
    j: int
    angles: tuple[AngleValue, AngleValue, AngleValue]

    def conjugate(self, k: int) -> "FixedPoint":
        return FixedPoint(k - self.j, tuple(-a for a in self.angles))


@dataclass(frozen=True)
class FixedPointSet:
    k: int
    entries: tuple[FixedPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.k < 1:
            raise FixedPointError("k must be positive")
        if self.k <= 2 and self.entries:
            raise FixedPointError("groups of order <= 2 have no isolated fixed points compatible with the structure")
        for i, e in enumerate(self.entries):
            if not 1 <= e.j <= self.k - 1:
                raise FixedPointError(f"entries[{i}].j = {e.j} outside 1..{self.k - 1}")
            if len(e.angles) != 3:
                raise FixedPointError(f"entries[{i}]: need exactly three angles")
            for t, a in enumerate(e.angles):
                if _is_multiple_of_two_pi(a):
                    raise FixedPointError(f"entries[{i}].angles[{t}] is a multiple of 2pi: fixed point not isolated")
            if all(isinstance(a, Fraction) for a in e.angles):
                total = sum(e.angles)
            else:
                total = float(sum(_mp(a) for a in e.angles))
            if not _is_multiple_of_two_pi(total):
                raise FixedPointError(f"entries[{i}]: angles must sum to 0 mod 2pi")

    def conjugated(self) -> "FixedPointSet":
        return FixedPointSet(self.k, tuple(e.conjugate(self.k) for e in self.entries))

    def to_obj(self) -> dict:
        return {
            "k": self.k,
            "entries": [{"j": e.j, "angles": [_angle_obj(a) for a in e.angles]} for e in self.entries],
        }

    @classmethod
    def from_obj(cls, obj, where: str = "fixed_points") -> "FixedPointSet":
        if not isinstance(obj, dict) or not isinstance(obj.get("k"), int):
            raise FixedPointError(f"{where}.k: expected an integer")
        entries = []
        for i, e in enumerate(obj.get("entries", [])):
            w = f"{where}.entries[{i}]"
            if not isinstance(e, dict) or not isinstance(e.get("j"), int):
                raise FixedPointError(f"{w}.j: expected an integer")
            angles = e.get("angles")
            if not isinstance(angles, list):
                raise FixedPointError(f"{w}.angles: expected a list")
            entries.append(FixedPoint(e["j"], tuple(_parse_angle(a, f"{w}.angles[{t}]") for t, a in enumerate(angles))))
        return cls(obj["k"], tuple(entries))

    @classmethod
    def from_json(cls, text: str) -> "FixedPointSet":
        return cls.from_obj(json.loads(text))


@dataclass(frozen=True)
class DedekindValue:
    value: float
    rational: Fraction | None
    residual: float = field(default=0.0)
    # fraction also matches the 50-digit value to 40 digits
    certified: bool = False

    @property
    def reconstruction_failed(self) -> bool:
        return self.rational is None


def reconstruct_rational(x: float, bound: int = DENOMINATOR_BOUND, threshold: float = RECONSTRUCTION_THRESHOLD):
    """Best fraction with denominator <= bound, or None if it misses x by more than threshold."""
    q = Fraction(x).limit_denominator(bound)
    return q if abs(float(q) - x) < threshold else None


def dedekind_sum_mp(fps: FixedPointSet, dps: int = 50):
    """High-precision value of the sum."""
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for e in fps.entries:
            half = [_mp(a) / 2 for a in e.angles]
            num = mpmath.fprod(mpmath.cos(h) for h in half) - 1
            den = mpmath.fprod(mpmath.sin(h) for h in half)
            total += mpmath.cot(mpmath.pi * e.j / fps.k) * num / den
        return 3 * total / fps.k


def dedekind_sum(fps: FixedPointSet) -> DedekindValue:
    if not fps.entries:
        return DedekindValue(0.0, Fraction(0), certified=True)
    hp = dedekind_sum_mp(fps)
    x = float(hp)
    q = reconstruct_rational(x)
    if q is None:
        return DedekindValue(x, None, float("nan"))
    with mpmath.workdps(50):
        certified = abs(hp - mpmath.mpf(q.numerator) / q.denominator) < mpmath.mpf(10) ** -40
    return DedekindValue(x, q, abs(x - float(q)), bool(certified))
