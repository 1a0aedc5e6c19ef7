"""Semicircle and Marchenko-Pastur limit laws.

Densities and cumulative distributions are evaluated in float64; moments
are exact rationals (Catalan numbers for the semicircle, a Narayana-number
expansion for Marchenko-Pastur) computed with big-integer arithmetic, since
the Catalan numbers involved overflow 64 bits well before s = 60.

The MP moment of order s at aspect ratio gamma is

    sum_{k=1}^{s} gamma^(k-1) * N(s, k),   N(s, k) = (1/s) C(s, k) C(s, k-1).

The exponent convention (gamma^(k-1), not gamma^k) is pinned by the exact
trace identity: the first moment of the spectrum of Y^T Y with unit-norm
columns is exactly 1 for every gamma, which only the k-1 convention
satisfies.  The quadrature cross-check in the test suite arbitrates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import InvalidInputError, NumericalFailureError


# ---------------------------------------------------------------------------
# semicircle law on [-1, 1]
# ---------------------------------------------------------------------------

def semicircle_pdf(x):
    """Density (2/pi) sqrt(1 - x^2) on [-1, 1], zero outside."""
    x = np.asarray(x, dtype=np.float64)
    inside = np.abs(x) <= 1.0
    out = np.zeros_like(x)
    out[inside] = (2.0 / np.pi) * np.sqrt(1.0 - x[inside] ** 2)
    return out if out.ndim else float(out)


def semicircle_cdf(x):
    """Closed-form CDF, clamped to {0, 1} outside the support."""
    x = np.asarray(x, dtype=np.float64)
    xc = np.clip(x, -1.0, 1.0)
    out = 0.5 + (xc * np.sqrt(1.0 - xc**2) + np.arcsin(xc)) / np.pi
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def catalan(k: int) -> int:
    """Catalan number C_k = (2k)! / (k! (k+1)!)."""
    return math.comb(2 * k, k) // (k + 1)


def semicircle_moment(s: int) -> Fraction:
    """Exact s-th moment: C_{s/2} / 2^s for even s, 0 for odd s."""
    if s < 0:
        raise InvalidInputError("moment order must be >= 0")
    if s % 2 == 1:
        return Fraction(0)
    return Fraction(catalan(s // 2), 1 << s)


# ---------------------------------------------------------------------------
# Marchenko-Pastur law on [(1-sqrt(gamma))^2, (1+sqrt(gamma))^2]
# ---------------------------------------------------------------------------

def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma <= 1.0:
        raise InvalidInputError(f"gamma must be in (0, 1], got {gamma}")
    return gamma


def mp_support(gamma: float) -> tuple[float, float]:
    """Support endpoints a = (1 - sqrt(gamma))^2, b = (1 + sqrt(gamma))^2."""
    gamma = _check_gamma(gamma)
    sq = math.sqrt(gamma)
    return (1.0 - sq) ** 2, (1.0 + sq) ** 2


def mp_pdf(x, gamma: float):
    """Density sqrt((b - x)(x - a)) / (2 pi gamma x) on [a, b], zero outside."""
    gamma = _check_gamma(gamma)
    a, b = mp_support(gamma)
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inside = (x >= a) & (x <= b) & (x > 0)
    xi = x[inside]
    out[inside] = np.sqrt(np.clip((b - xi) * (xi - a), 0.0, None)) / (
        2.0 * np.pi * gamma * xi
    )
    return out if out.ndim else float(out)


def mp_cdf(x, gamma: float):
    """CDF by adaptive quadrature of the density from the lower edge.

    Vector inputs are integrated piecewise between consecutive sorted
    points and accumulated, which both reuses work and makes the output
    monotone by construction; everything is clamped to [0, 1].
    """
    gamma = _check_gamma(gamma)
    a, b = mp_support(gamma)
    x_arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    order = np.argsort(x_arr, kind="stable")
    pts = np.clip(x_arr[order], a, b)

    def segment(lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(
                    lambda t: mp_pdf(t, gamma), lo, hi,
                    epsabs=1e-12, epsrel=1e-12, limit=200,
                )
            except integrate.IntegrationWarning as exc:
                raise NumericalFailureError(
                    f"MP cdf quadrature failed on [{lo}, {hi}]: {exc}"
                ) from exc
        if err > 1e-10:
            raise NumericalFailureError(
                f"MP cdf quadrature error {err:.2e} above tolerance"
            )
        return val

    vals = np.empty_like(pts)
    acc = 0.0
    prev = a
    for i, p in enumerate(pts):
        acc += segment(prev, p)
        vals[i] = acc
        prev = p
    out = np.empty_like(vals)
    out[order] = np.clip(vals, 0.0, 1.0)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out[0])
    return out


def narayana(s: int, k: int) -> Fraction:
    """Narayana number N(s, k) = (1/s) C(s, k) C(s, k-1)."""
    return Fraction(math.comb(s, k) * math.comb(s, k - 1), s)


def mp_moment(s: int, gamma) -> Fraction:
    """Exact s-th MP moment: sum_k gamma^(k-1) N(s, k).

    gamma may be a Fraction or a float; floats convert exactly (binary
    rationals such as 0.625 stay exact).
    """
    if s < 1:
        raise InvalidInputError("moment order must be >= 1")
    g = Fraction(gamma)
    if not 0 < g <= 1:
        raise InvalidInputError(f"gamma must be in (0, 1], got {gamma}")
    return sum((g ** (k - 1)) * narayana(s, k) for k in range(1, s + 1))


# ---------------------------------------------------------------------------
# law objects with a common evaluator surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemicircleLaw:
    kind: str = field(default="semicircle", init=False)
    support: tuple[float, float] = field(default=(-1.0, 1.0), init=False)

    def pdf(self, x):
        return semicircle_pdf(x)

    def cdf(self, x):
        return semicircle_cdf(x)

    def moment(self, s: int) -> Fraction:
        return semicircle_moment(s)


@dataclass(frozen=True)
class MarchenkoPasturLaw:
    gamma: float
    kind: str = field(default="marchenko-pastur", init=False)

    def __post_init__(self) -> None:
        _check_gamma(self.gamma)

    @property
    def support(self) -> tuple[float, float]:
        return mp_support(self.gamma)

    def pdf(self, x):
        return mp_pdf(x, self.gamma)

    def cdf(self, x):
        return mp_cdf(x, self.gamma)

    def moment(self, s: int) -> Fraction:
        return mp_moment(s, self.gamma)


def law_curve(law, which: str, x: np.ndarray) -> np.ndarray:
    """Two-column (x, pdf) or (x, cdf) array for CSV export."""
    if which not in ("pdf", "cdf"):
        raise InvalidInputError("which must be 'pdf' or 'cdf'")
    y = law.pdf(x) if which == "pdf" else law.cdf(x)
    return np.column_stack([x, y])
