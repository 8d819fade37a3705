"""Logarithm of the Dedekind eta function and the torus contributions built from it.

``L(tau) = pi i tau / 12 - sum_{n>=1} sigma_{-1}(n) q^n`` with ``q = exp(2 pi i tau)``,
so ``exp(L) = eta``.  Evaluation first moves tau into the fundamental region
``|Re tau| <= 1/2, |tau| >= 1`` using

    L(tau + 1)  = L(tau) + pi i / 12
    L(-1/tau)   = L(tau) + log(tau / i) / 2      (principal branch)

and then sums the series until the tail bound drops below ``tol / 2``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels

DEFAULT_TOL = 1e-13
MAX_REDUCTION_STEPS = 64
_EPS = 2.0**-52


class EtaError(ValueError):
    pass


class UnsupportedConstant(EtaError):
    """c_{k,eps} is only known on two special families of (k, eps)."""


def sigma_minus_one(n: int) -> Fraction:
    if n <= 0:
        raise EtaError("sigma_{-1}(n) needs n >= 1")
    total = Fraction(0)
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += Fraction(1, d)
            if d * d != n:
                total += Fraction(1, n // d)
        d += 1
    return total


def tail_bound(n_terms: int, im: float) -> float:
    """Bound on sum_{n > N} n r^n with r = exp(-2 pi Im tau); dominates the omitted series."""
    r = math.exp(-2 * math.pi * im)
    n = n_terms
    return r ** (n + 1) * ((n + 1) - n * r) / (1 - r) ** 2


def terms_needed(im: float, tol: float) -> int:
    n = 1
    while tail_bound(n, im) > tol / 2:
        n += 1
    return n


@dataclass(frozen=True)
class EtaValue:
    value: complex
    error: float


def _reduce(tau: complex) -> tuple[complex, complex, int]:
    """Move tau into the fundamental region; returns (tau', correction, steps) with L(tau) = L(tau') + correction."""
    corr = 0j
    for step in range(MAX_REDUCTION_STEPS):
        shift = round(tau.real)
        if shift:
            tau -= shift
            corr += shift * math.pi * 1j / 12
        if abs(tau) >= 1 - 1e-15:
            return tau, corr, step
        # L(tau) = L(-1/tau) - log(tau/i)/2
        corr -= 0.5 * cmath.log(tau / 1j)
        tau = -1 / tau
    raise AssertionError("modular reduction did not terminate")


def _series(tau: complex, n_terms: int) -> complex:
    q = cmath.exp(2j * math.pi * tau)
    acc = 0j
    qn = 1 + 0j
    for n in range(1, n_terms + 1):
        qn *= q
        acc += float(sigma_minus_one(n)) * qn
    return math.pi * 1j * tau / 12 - acc


def dedekind_log(tau: complex, tol: float = DEFAULT_TOL) -> EtaValue:
    if tol <= 0:
        raise EtaError("tol must be positive")
    tau = complex(tau)
    if not tau.imag > 0:
        raise EtaError(f"tau must lie in the upper half plane, got {tau}")
    t, corr, steps = _reduce(tau)
    n = terms_needed(t.imag, tol)
    val = _series(t, n) + corr
    rounding = 16 * _EPS * (abs(val) + abs(corr) + 1) * (steps + n + 1)
    return EtaValue(val, tail_bound(n, t.imag) + rounding)


def dedekind_log_direct(tau: complex, tol: float = DEFAULT_TOL) -> EtaValue:
    """Plain series without reduction; only sensible for Im tau not too small."""
    tau = complex(tau)
    if tau.imag < 0.5:
        raise EtaError("direct summation needs Im tau >= 1/2")
    n = terms_needed(tau.imag, tol)
    val = _series(tau, n)
    return EtaValue(val, tail_bound(n, tau.imag) + 16 * _EPS * (abs(val) + 1) * n)


def dedekind_log_many(taus, tol: float = DEFAULT_TOL, backend: str | None = None) -> np.ndarray:
    """Vectorised L over many tau: reduction in Python, series in the compiled kernel."""
    taus = np.atleast_1d(np.asarray(taus, dtype=complex))
    reduced = [_reduce(complex(t)) for t in taus]
    red = np.array([r[0] for r in reduced])
    corr = np.array([r[1] for r in reduced])
    n = terms_needed(float(red.imag.min()), tol) if len(red) else 1
    series = _kernels.eta_qseries(red.real, red.imag, n, backend=backend)
    return math.pi * 1j * red / 12 - series + corr


# ------------------------------------------------------------------ constants


def c_constant(k: int, eps: int) -> float:
    """c_{k,eps} on the two families where a closed form is known."""
    values = []
    if eps in (1, -1):
        values.append(-eps * math.pi * (k * k - 3 * k + 1) / (6 * k))
    if (eps * eps + 1) % k == 0:
        values.append(math.pi * eps / (6 * k))
    if not values:
        raise UnsupportedConstant(
            f"c_{{{k},{eps}}} is only available for eps = +-1 or eps^2 = -1 mod k; no closed form is used otherwise"
        )
    if len(values) == 2:
        assert math.isclose(values[0], values[1], abs_tol=1e-15), (k, eps, values)
    return values[0]


@dataclass(frozen=True)
class EtaParams:
    k: int
    eps: int
    s_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s_sq", Fraction(self.s_sq))
        if self.k < 1:
            raise EtaError("k must be positive")
        if self.s_sq <= 0:
            raise EtaError("s_sq must be positive")
        if self.k == 1:
            if self.eps != 0:
                raise EtaError("eps must be 0 when k = 1")
        elif math.gcd(self.eps, self.k) != 1:
            raise EtaError(f"eps = {self.eps} is not a unit mod {self.k}")
        if not (-self.k < 2 * self.eps <= self.k):
            raise EtaError(f"eps representative {self.eps} outside (-k/2, k/2]")


def F_small(params: EtaParams, tol: float = DEFAULT_TOL) -> EtaValue:
    """F_{k,eps}(s) = i L((s i + eps)/k) - i L((s i - eps)/k) + c_{k,eps}."""
    c = c_constant(params.k, params.eps)
    if params.k == 1:
        return EtaValue(0.0, 0.0)
    s = math.sqrt(params.s_sq)
    a = dedekind_log(complex(params.eps, s) / params.k, tol / 4)
    b = dedekind_log(complex(-params.eps, s) / params.k, tol / 4)
    val = 1j * a.value - 1j * b.value + c
    err = a.error + b.error
    if abs(val.imag) > max(tol, 10 * err):
        raise EtaError(f"imaginary residual {val.imag:.3e} exceeds tolerance")
    return EtaValue(val.real, err)


def F_contribution(params: EtaParams, tol: float = DEFAULT_TOL) -> EtaValue:
    """(144/pi) F_small."""
    f = F_small(params, tol * math.pi / 144)
    return EtaValue(144 / math.pi * f.value, 144 / math.pi * f.error)
