"""Beta function and the lattice constants alpha, beta, gamma.

The production route is a Lanczos log-Gamma; the quadrature route in
:func:`beta_by_quadrature` is an independent oracle used only for checking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .quadrature import QuadratureSpec, integrate_path

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def log_gamma(x: float) -> float:
    """log|Gamma(x)| for real ``x`` that is not a nonpositive integer."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        s = math.sin(math.pi * x)
        return math.log(math.pi / abs(s)) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def beta_function(a: float, b: float) -> float:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for positive ``a, b``."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta_function needs positive arguments, got ({a}, {b})")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def beta_by_quadrature(a: float, b: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of t**(a-1) (1-t)**(b-1) over [0, 1], split at 1/2.

    Each half is rewritten with its singular endpoint at the origin so that
    the distance to the singularity is never formed by cancellation.
    """
    if a <= 0 or b <= 0:
        raise DomainError(f"beta_by_quadrature needs positive arguments, got ({a}, {b})")
    spec = spec or QuadratureSpec(1e-13, 1e-13)
    total = 0.0
    for p, q in ((a, b), (b, a)):
        piece = QuadratureSpec(spec.abs_tol, spec.rel_tol, spec.max_depth,
                               min(p - 1.0, 0.0))
        total += integrate_path(lambda s, p=p, q=q: s ** (p - 1) * (1 - s) ** (q - 1),
                                0.0, 0.5, piece, (p < 1, False)).value
    return total


def _gamma_integrand_near_half(s):
    # t = 1/2 + s: 4t^2 - 1 = 4 s (1 + s)
    t = 0.5 + s
    return 1.0 / np.cbrt(4.0 * (1.0 - t * t) * (4.0 * s * (1.0 + s)) ** 2)


def _gamma_integrand_near_one(s):
    # t = 1 - s: 1 - t^2 = s (2 - s)
    t = 1.0 - s
    return 1.0 / np.cbrt(4.0 * s * (2.0 - s) * (4.0 * t * t - 1.0) ** 2)


def gamma_by_quadrature(spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """gamma = int_{1/2}^{1} dt / cbrt(4 (1 - t^2) (4 t^2 - 1)^2) and its error."""
    spec = spec or QuadratureSpec(1e-14, 1e-14)
    r1 = integrate_path(_gamma_integrand_near_half, 0.0, 0.25, spec, (True, False))
    r2 = integrate_path(_gamma_integrand_near_one, 0.0, 0.25, spec, (True, False))
    return r1.value + r2.value, r1.error + r2.error


@dataclass(frozen=True)
class LatticeConstants:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError("lattice constants must be positive")

    @property
    def relation_residual(self) -> float:
        """Relative defect of beta = sqrt(3) gamma."""
        return abs(self.beta - math.sqrt(3) * self.gamma) / self.beta


@lru_cache(maxsize=None)
def lattice_constants() -> LatticeConstants:
    """alpha = B(2/3,1/6)/(6 cbrt 2), beta = B(1/3,1/6)/(4 sqrt 3), gamma by quadrature."""
    alpha = beta_function(2 / 3, 1 / 6) / (6 * 2 ** (1 / 3))
    beta = beta_function(1 / 3, 1 / 6) / (4 * math.sqrt(3))
    gamma, _ = gamma_by_quadrature()
    return LatticeConstants(alpha, beta, gamma)
