"""Period matrix of Psi over the twenty cycles, numerically and exactly.

The numeric route integrates Psi along each cycle with branch-point
regularized quadrature.  The exact route starts from the closed forms for A1
and A2 and transports them with the pullback

    phi^* Psi = e^{2 pi i/3} diag(R(pi/2), R(-pi/3)) Psi,

whose entries lie in Q(i, sqrt 3).  The two routes are independent and are
compared entry by entry.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import LatticeConstants, lattice_constants
from .curve import psi_array
from .cycles import COLUMN_LABELS, CyclePath, HalfArc, generate_all_cycles
from .errors import DomainError, MismatchError
from .exact import E3, E23, I, ONE, S3, QiSqrt3, SymbolicScalar, identity, matmul
from .quadrature import QuadratureSpec, integrate_path
from . import reference

PERIOD_SPEC = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)

HALF = QiSqrt3(Fraction(1, 2))
# diag(R(pi/2), R(-pi/3)) with entries in Q(sqrt 3)
PULLBACK_BLOCK = [
    [QiSqrt3(0), QiSqrt3(-1), QiSqrt3(0), QiSqrt3(0)],
    [QiSqrt3(1), QiSqrt3(0), QiSqrt3(0), QiSqrt3(0)],
    [QiSqrt3(0), QiSqrt3(0), HALF, S3 * HALF],
    [QiSqrt3(0), QiSqrt3(0), -S3 * HALF, HALF],
]
PULLBACK_SCALAR = E23


@lru_cache(maxsize=None)
def _half_arc_period(h: HalfArc, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    track = h.track()

    def integrand(s):
        return psi_array(h.z(s), track(s)) * h.line_element(s)[:, None]

    res = integrate_path(integrand, 0.0, h.length, spec, (True, False))
    return np.asarray(res.value), np.asarray(res.error)


def period_vector(cycle: CyclePath, spec: QuadratureSpec = PERIOD_SPEC) -> tuple[np.ndarray, float]:
    """All four periods of Psi over ``cycle`` and a bound on their error."""
    total = np.zeros(4, dtype=complex)
    err = np.zeros(4)
    for seg in cycle.segments:
        for half in seg.halves():
            v, e = _half_arc_period(half, spec)
            total += v
            err += e
    return total, float(np.max(err))


def period_numeric(cycle: CyclePath, component: int, spec: QuadratureSpec = PERIOD_SPEC) -> complex:
    """The period of the ``component``-th differential (1-based) over ``cycle``."""
    if not 1 <= component <= 4:
        raise DomainError(f"component must be 1..4, got {component}")
    return complex(period_vector(cycle, spec)[0][component - 1])


# --- exact periods ----------------------------------------------------------

def closed_form_periods(base: str) -> list[SymbolicScalar]:
    """Closed-form periods over A1 or A2, with beta written as sqrt(3) gamma."""
    if base == "A1":
        c = ONE + E3
    elif base == "A2":
        c = E23 + E3
    else:
        raise DomainError(f"closed forms exist for A1 and A2 only, got {base}")
    alpha = SymbolicScalar(alpha=1)
    gamma = SymbolicScalar(gamma=1)
    return [alpha * c, alpha * (-c), gamma * (I * S3 * c), gamma * (-I * c)]


def closed_form_numeric(base: str, constants: LatticeConstants | None = None) -> np.ndarray:
    """Closed forms evaluated with beta and gamma kept separate."""
    k = constants or lattice_constants()
    c = 1 + np.exp(1j * math.pi / 3) if base == "A1" else np.exp(2j * math.pi / 3) + np.exp(1j * math.pi / 3)
    return np.array([c * k.alpha, -c * k.alpha, 1j * c * k.beta, -1j * c * k.gamma])


def pullback_power(k: int) -> tuple[QiSqrt3, list[list[QiSqrt3]]]:
    """Scalar and block of (phi^*)^k."""
    block = identity(4, QiSqrt3(1), QiSqrt3(0))
    for _ in range(k):
        block = matmul(PULLBACK_BLOCK, block)
    return PULLBACK_SCALAR**k, block


def period_via_pullback(base: list[SymbolicScalar], k: int) -> list[SymbolicScalar]:
    """Periods over phi^k(C) from the periods over C, exactly."""
    if not 0 <= k <= 12:
        raise DomainError(f"phi power must be in 0..12, got {k}")
    scalar, block = pullback_power(k)
    out = []
    for row in block:
        acc = SymbolicScalar()
        for m, v in zip(row, base):
            if not m.is_zero():
                acc = acc + v * m
        out.append(acc * scalar)
    return out


@dataclass(frozen=True)
class PeriodMatrix:
    numeric: np.ndarray            # 4 x 20 complex
    errors: np.ndarray             # per-column quadrature error bound
    symbolic: list[list[SymbolicScalar]]
    cycle_labels: tuple[str, ...]

    def symbolic_numeric(self, constants: LatticeConstants | None = None) -> np.ndarray:
        k = constants or lattice_constants()
        return np.array([[x.numeric(k.alpha, k.gamma) for x in row] for row in self.symbolic])

    def max_discrepancy(self, constants: LatticeConstants | None = None) -> float:
        return float(np.max(np.abs(self.numeric - self.symbolic_numeric(constants))))

    def matches_reference(self) -> bool:
        ref = reference.omega_matrix()
        return all(a == b for ra, rb in zip(self.symbolic, ref) for a, b in zip(ra, rb))


def symbolic_period_matrix() -> list[list[SymbolicScalar]]:
    cycles = generate_all_cycles()
    cols = []
    for lab in COLUMN_LABELS:
        c = cycles[lab]
        cols.append(period_via_pullback(closed_form_periods(c.base), c.phi_power))
    return [list(r) for r in zip(*cols)]


def numeric_period_matrix(spec: QuadratureSpec = PERIOD_SPEC) -> tuple[np.ndarray, np.ndarray]:
    cycles = generate_all_cycles()
    cols, errs = [], []
    for lab in COLUMN_LABELS:
        v, e = period_vector(cycles[lab], spec)
        cols.append(v)
        errs.append(e)
    return np.array(cols).T, np.array(errs)


def assemble_period_matrix(tol: float = 1e-8, spec: QuadratureSpec = PERIOD_SPEC,
                           constants: LatticeConstants | None = None) -> PeriodMatrix:
    """Both routes to the period matrix; raises if they disagree beyond ``tol``."""
    numeric, errors = numeric_period_matrix(spec)
    pm = PeriodMatrix(numeric, errors, symbolic_period_matrix(), COLUMN_LABELS)
    gap = pm.max_discrepancy(constants)
    if gap > tol:
        raise MismatchError(f"numeric and exact periods differ by {gap:.3e} > {tol:.1e}")
    return pm


@dataclass(frozen=True)
class BetaGammaCheck:
    constant_residual: float       # |beta - sqrt3 gamma| / beta
    direct_vs_closed: float        # B5 period vs -i(e^{2pi i/3}+e^{i pi/3}) beta
    direct_vs_transport: float     # B5 period vs -i(...)(beta/2 + sqrt3 gamma/2)


def verify_beta_gamma_relation(spec: QuadratureSpec = PERIOD_SPEC) -> BetaGammaCheck:
    """beta = sqrt(3) gamma, checked as a constant and through the B5 period."""
    k = lattice_constants()
    b5 = generate_all_cycles()["B5"]
    direct = period_numeric(b5, 3, spec)
    c = np.exp(2j * math.pi / 3) + np.exp(1j * math.pi / 3)
    closed = -1j * c * k.beta
    transported = -1j * c * (k.beta / 2 + math.sqrt(3) * k.gamma / 2)
    return BetaGammaCheck(k.relation_residual, abs(direct - closed), abs(direct - transported))
