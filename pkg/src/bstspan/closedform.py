"""Numeric evaluation of the trivariate generating functions.

``Phi(z, u, v)`` (passes, with root) has an explicit closed form in terms of
``Omega = sqrt(1 - 4(1+u) v (1-v))`` and ``(1-z)^Omega``.  ``F(z, u, v)``
(spanning tree without root) is an integral of ``Phi~ = (dPhi/dz - 2v Phi /
(1-z)) (1-z)^2``, which is evaluated here by adaptive quadrature with the
``z``-derivative supplied by the Riccati equation ``dPhi/dz = v(1+u) Phi^2 +
(1-v)/(1-z)^2`` rather than by numeric differentiation.

All evaluation is complex, with principal branches of ``sqrt`` and ``log``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exactdist import VSliceTable, WeightedDistTable, pgf

__all__ = [
    "GfPoint",
    "OmegaFG",
    "DomainError",
    "PoleError",
    "QuadratureError",
    "omega",
    "omega_fg",
    "phi",
    "phi_tilde",
    "F_numeric",
    "series_phi",
    "series_F",
]

POLE_FLOOR = 1e-12


class DomainError(ValueError):
    """Point outside the disc |z| < 1."""


class PoleError(ArithmeticError):
    """Denominator of the closed form vanishes (to within the pole floor)."""


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GfPoint:
    z: complex
    u: complex
    v: complex

    def __post_init__(self):
        for name in ("z", "u", "v"):
            object.__setattr__(self, name, complex(getattr(self, name)))


@dataclass(frozen=True)
class OmegaFG:
    omega: complex
    f_val: complex
    g_val: complex


def omega(u, v) -> complex:
    """Principal square root of ``1 - 4(1+u) v (1-v)``."""
    u, v = complex(u), complex(v)
    return cmath.sqrt(1 - 4 * (1 + u) * v * (1 - v))


def omega_fg(point: GfPoint) -> OmegaFG:
    """``Omega`` with the numerator ``f`` and the bracket ``g`` of the closed form."""
    z, u, v = point.z, point.u, point.v
    if abs(z) >= 1:
        raise DomainError(f"|z| = {abs(z)} >= 1")
    om = omega(u, v)
    power = cmath.exp(om * cmath.log(1 - z))
    f = om + 1 - 2 * v + power * (om - 1 + 2 * v)
    g = om + 1 - 2 * v * (1 + u) + power * (om - 1 + 2 * v * (1 + u))
    return OmegaFG(om, f, g)


def phi(point: GfPoint, pole_floor: float = POLE_FLOOR) -> complex:
    parts = omega_fg(point)
    denom = parts.g_val * (1 - point.z)
    if abs(denom) < pole_floor:
        raise PoleError(f"closed-form denominator {abs(denom):.3g} below {pole_floor:g}")
    return parts.f_val / denom


def phi_tilde(point: GfPoint, pole_floor: float = POLE_FLOOR) -> complex:
    """``(dPhi/dz - 2v Phi/(1-z)) (1-z)^2`` via the Riccati identity."""
    z, u, v = point.z, point.u, point.v
    ph = phi(point, pole_floor)
    w = 1 - z
    return v * (1 + u) * ph * ph * w * w + (1 - v) - 2 * v * ph * w


def F_numeric(
    point: GfPoint,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-12,
    pole_floor: float = POLE_FLOOR,
) -> complex:
    """``F(z,u,v)`` by quadrature of ``Phi~`` along the segment from 0 to z."""
    z, u, v = point.z, point.u, point.v
    if abs(z) >= 1:
        raise DomainError(f"|z| = {abs(z)} >= 1")
    w = 1 - z
    base = (1 + 2 * z * (v - 1)) / (w * w)
    if z == 0:
        return base

    def integrand(tau: float) -> complex:
        return phi_tilde(GfPoint(tau * z, u, v), pole_floor) * z

    total = 0j
    for part, unit in ((lambda t: integrand(t).real, 1.0), (lambda t: integrand(t).imag, 1j)):
        out = integrate.quad(part, 0.0, 1.0, epsabs=abs_tol, epsrel=rel_tol, limit=200, full_output=1)
        if len(out) > 3:
            raise QuadratureError(out[3])
        total += unit * out[0]
    return base + total / (w * w)


def _series(point: GfPoint, N: int, table, kind: str) -> complex:
    z, u, v = point.z, point.u, point.v
    if isinstance(table, VSliceTable):
        if table.kind != kind:
            raise ValueError(f"need a {kind} table, got {table.kind}")
        if table.n_max < N:
            raise ValueError(f"table covers n <= {table.n_max}, need {N}")
        if not cmath.isclose(table.v, v, rel_tol=1e-15, abs_tol=1e-15):
            raise ValueError(f"table is sliced at v={table.v}, point has v={v}")
        upow = u ** np.arange(N + 1)
        per_n = table.values[: N + 1, : N + 1] @ upow
        return complex(np.polynomial.polynomial.polyval(z, per_n))
    if isinstance(table, WeightedDistTable):
        if table.kind != kind:
            raise ValueError(f"need a {kind} table, got {table.kind}")
        if table.n_max < N or table.p_max < N:
            raise ValueError(
                f"table covers (n, p) <= ({table.n_max}, {table.p_max}); need all p <= n <= {N}"
            )
        total = 0j
        zn = 1 + 0j
        for n in range(N + 1):
            inner = 0j
            for p in range(n, -1, -1):
                inner = inner * u + pgf(table, n, p, v) * _binom_float(n, p)
            total += inner * zn
            zn *= z
        return total
    raise TypeError("table must be a WeightedDistTable or VSliceTable")


def _binom_float(n: int, p: int) -> float:
    from math import comb

    return float(comb(n, p))


def series_phi(point: GfPoint, N: int, table) -> complex:
    """Truncated ``sum_{n<=N, p, m} w[n][p][m] z^n u^p v^m`` from an X table."""
    return _series(point, N, table, "X")


def series_F(point: GfPoint, N: int, table) -> complex:
    """Same truncation from a Y table."""
    return _series(point, N, table, "Y")
