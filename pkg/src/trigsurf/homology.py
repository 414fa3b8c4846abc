"""Vanishing of the six wedge integrals of the immersion over the surface.

With ``dx^k = Re(P_k(z) dz / w^2)`` one has, on each sheet,

    dx^i ^ dx^j = (i/2) Im(P_i conj(P_j)) / |w|^4  dz ^ dzbar
                = Im(P_i conj(P_j)) / |w|^4  r dr ^ dtheta,

using ``dz ^ dzbar = -2 i r dr ^ dtheta``.  The density depends on the sheet
only through ``|w|^4 = (r^24 - 2 r^12 cos(12 theta) + 1)^(2/3)``, so summing the
three sheets is a factor 3.  The integral over the z-sphere is split at
``r = 1`` and the outer part is folded back with ``r = 1/rho``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .curve import CURVE_TOL, N, psi_numerators
from .errors import SingularPoint
from .quadrature import QuadratureSpec, integrate_plane

PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(1, 5), 2))
BRANCH_ANGLES = tuple(k * 2 * math.pi / N for k in range(N))
HOMOLOGY_SPEC = QuadratureSpec(abs_tol=1e-7, rel_tol=1e-7)
EXCISION_RADIUS = 1e-3


def _w4(r, theta):
    r12 = np.asarray(r, dtype=float) ** N
    return (r12 * r12 - 2 * r12 * np.cos(N * np.asarray(theta)) + 1) ** (2 / 3)


def _densities(r, theta, pairs=PAIRS):
    """Densities against ``r dr dtheta`` for ``pairs``; shape ``(..., len(pairs))``."""
    z = np.asarray(r) * np.exp(1j * np.asarray(theta))
    p = psi_numerators(z)
    w4 = _w4(r, theta)
    cols = [3 * np.imag(p[..., i - 1] * np.conj(p[..., j - 1])) / w4 for i, j in pairs]
    return np.stack(cols, axis=-1)


def wedge_density(i: int, j: int, z: complex) -> float:
    """Density of ``dx^i ^ dx^j`` against ``r dr dtheta``, summed over the three sheets.

    Parameters
    ----------
    i, j : int
        Coordinate indices with ``1 <= i < j <= 4``.
    z : complex
        Point of the z-sphere, not a 12th root of unity.

    Raises
    ------
    SingularPoint
        If ``z`` lies on the branch locus.
    """
    if not (1 <= i < j <= 4):
        raise ValueError(f"need 1 <= i < j <= 4, got ({i}, {j})")
    z = complex(z)
    if abs(z**N - 1) < CURVE_TOL:
        raise SingularPoint(f"z = {z} is a branch point")
    r, theta = abs(z), math.atan2(z.imag, z.real)
    return float(_densities(np.array([r]), np.array([theta]), ((i, j),))[0, 0])


def _plane_integrand(pairs):
    def f(r, theta):
        d = _densities(r, theta, pairs) * np.asarray(r)[:, None]
        return np.concatenate([d, np.abs(d)], axis=1)
    return f


@dataclass(frozen=True)
class WedgeIntegral:
    pair: tuple[int, int]
    value: float          # signed integral at the nominal excision radius
    halved: float         # signed integral with the excision radius halved
    normalizer: float     # integral of |density|, S_ij
    error: float          # quadrature error estimate of ``value``

    @property
    def relative(self) -> float:
        return abs(self.value) / self.normalizer

    @property
    def excision_change(self) -> float:
        return abs(self.value - self.halved)

    def passes(self, rel_tol: float = 1e-4, excision_tol: float = 1e-6) -> bool:
        return self.normalizer > 0 and self.relative <= rel_tol and self.excision_change < excision_tol


@dataclass(frozen=True)
class HomologyResult:
    integrals: tuple[WedgeIntegral, ...]
    excision_radius: float
    runtime_s: float

    def residuals(self) -> list[float]:
        return [w.relative for w in self.integrals]

    def passes(self, rel_tol: float = 1e-4, excision_tol: float = 1e-6) -> bool:
        return all(w.passes(rel_tol, excision_tol) for w in self.integrals)


def _integrate(pairs, eps, spec):
    res = integrate_plane(_plane_integrand(pairs), spec, excise_angles=BRANCH_ANGLES,
                          excision_radius=eps)
    k = len(pairs)
    value, err = np.atleast_1d(res.value), np.atleast_1d(res.error)
    return value[:k], value[k:], err[:k]


def verify_homological_triviality(excision_radius: float = EXCISION_RADIUS,
                                  spec: QuadratureSpec = HOMOLOGY_SPEC,
                                  pairs=PAIRS) -> HomologyResult:
    """Integrate all six wedge densities over the surface.

    The branch points are cut out by boxes ``|r - 1| < eps`` (in the inner and
    folded radial coordinates), ``|theta - angle| < eps``; the integration is
    repeated with ``eps / 2`` to bound the excision effect.  Results are
    cached per argument set, since the computation is deterministic.
    """
    return _verify_cached(float(excision_radius), spec, tuple(tuple(p) for p in pairs))


@lru_cache(maxsize=8)
def _verify_cached(excision_radius, spec, pairs) -> HomologyResult:
    t0 = time.perf_counter()
    signed, absolute, err = _integrate(pairs, excision_radius, spec)
    signed_half, _, _ = _integrate(pairs, excision_radius / 2, spec)
    out = tuple(
        WedgeIntegral(pair, float(signed[k]), float(signed_half[k]), float(absolute[k]), float(err[k]))
        for k, pair in enumerate(pairs)
    )
    return HomologyResult(out, excision_radius, time.perf_counter() - t0)


def sector_symmetry_check(excision_radius: float = EXCISION_RADIUS,
                          spec: QuadratureSpec = HOMOLOGY_SPEC) -> float:
    """Worst gap between 12 x (one pi/6 sector) and the full integral.

    Applies to the (1,2) and (3,4) densities, which depend on theta only
    through ``cos(12 theta)``; compared for both the signed and the absolute
    integrands.
    """
    pairs = ((1, 2), (3, 4))
    f = _plane_integrand(pairs)
    full = np.atleast_1d(integrate_plane(f, spec, excise_angles=BRANCH_ANGLES,
                                         excision_radius=excision_radius).value)
    sector = math.pi / 6
    one = np.atleast_1d(integrate_plane(
        f, spec, theta_breaks=[0.0, sector], excise_angles=(0.0, sector),
        excision_radius=excision_radius, theta_range=(0.0, sector)).value)
    return float(np.max(np.abs(12 * one - full)))
