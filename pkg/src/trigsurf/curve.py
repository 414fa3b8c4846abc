"""The trigonal curve w**3 = z**n - 1, its sheets and the Weierstrass data.

For genus ``g = 3r + 1`` the curve is ``w**3 = z**(g+2) - 1`` and the four
differentials are

    ((1 - z**2r), i (1 + z**2r), z**(2r-1) + z, i (z**(2r-1) - z)) dz / w**2.

Only genus 10 (``r = 3``, ``n = 12``) carries cycles and period targets; the
other admissible genera are supported as far as the differential basis and
the pointwise conditions go.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy

from .errors import AmbiguousContinuation, BranchPointSingularity, DomainError, SeedOffCurve

CURVE_TOL = 1e-12
OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class CurveParams:
    genus: int = 10

    def __post_init__(self):
        if self.genus < 1 or self.genus % 3 != 1:
            raise DomainError(f"genus must be 3r + 1 with r >= 1, got {self.genus}")

    @property
    def r(self) -> int:
        return (self.genus - 1) // 3

    @property
    def branch_degree(self) -> int:
        return self.genus + 2

    def holomorphic_basis(self) -> list[tuple[int, int]]:
        """Pairs ``(k, e)`` standing for ``z**k dz / w**e``."""
        r = self.r
        return [(k, 2) for k in range(2 * r + 1)] + [(k, 1) for k in range(r)]

    def numerators(self) -> list[sympy.Expr]:
        """Numerators of the four Weierstrass differentials (over ``dz / w**2``)."""
        z = sympy.Symbol("z")
        r = self.r
        return [
            1 - z ** (2 * r),
            sympy.I * (1 + z ** (2 * r)),
            z ** (2 * r - 1) + z,
            sympy.I * (z ** (2 * r - 1) - z),
        ]


GENUS10 = CurveParams(10)
N = GENUS10.branch_degree


@dataclass(frozen=True)
class SurfacePoint:
    z: complex
    w: complex
    n: int = N

    def residual(self) -> float:
        zn = self.z ** self.n
        return abs(self.w**3 - (zn - 1)) / max(1.0, abs(zn))

    def on_curve(self, tol: float = CURVE_TOL) -> bool:
        return self.residual() <= tol


def sheet_values(z: complex, n: int = N) -> list[complex]:
    """The three cube roots of ``z**n - 1``, sorted by principal argument."""
    c = complex(z) ** n - 1
    if c == 0:
        return [0j, 0j, 0j]
    root = abs(c) ** (1 / 3) * cmath.exp(1j * cmath.phase(c) / 3)
    roots = [root * OMEGA**k for k in range(3)]
    return sorted(roots, key=cmath.phase)


def cube_roots(c: np.ndarray) -> np.ndarray:
    """Array of shape ``c.shape + (3,)`` holding the cube roots of ``c``."""
    c = np.asarray(c, dtype=complex)
    base = np.cbrt(np.abs(c)) * np.exp(1j * np.angle(c) / 3)
    return base[..., None] * OMEGA ** np.arange(3)


# --- the Weierstrass data ---------------------------------------------------

def psi_numerators(z, r: int = 3):
    """Numerators of Psi at ``z`` (broadcasts over arrays); shape ``(..., 4)``."""
    z = np.asarray(z, dtype=complex)
    a = z ** (2 * r)
    b = z ** (2 * r - 1)
    return np.stack([1 - a, 1j * (1 + a), b + z, 1j * (b - z)], axis=-1)


def psi_array(z, w, r: int = 3) -> np.ndarray:
    """Psi / dz at on-curve points ``(z, w)``; shape ``(..., 4)``."""
    w = np.asarray(w, dtype=complex)
    return psi_numerators(z, r) / (w * w)[..., None]


def psi(p: SurfacePoint) -> np.ndarray:
    """The four components of Psi / dz at ``p``."""
    if p.w == 0:
        raise BranchPointSingularity(f"Psi is singular at the branch point z = {p.z}")
    r = (p.n - 3) // 3
    return psi_array(p.z, p.w, r)


def conformality_residual(values: np.ndarray) -> float:
    """|sum of squares| relative to the sum of squared moduli."""
    values = np.asarray(values)
    return float(abs(np.sum(values**2)) / max(np.sum(np.abs(values) ** 2), 1e-300))


def conformality_polynomial(params: CurveParams = GENUS10) -> sympy.Expr:
    """Sum of the squared numerators, expanded; zero for the genus-10 data."""
    return sympy.expand(sum(p**2 for p in params.numerators()))


def check_no_common_zeros(numerators: Sequence[sympy.Expr] | None = None,
                          params: CurveParams = GENUS10) -> bool:
    """True iff the differentials ``P_k dz / w**2`` have no common zero.

    At a finite non-branch point ``1/w**2`` is a unit, so the order of each
    differential is the order of its numerator.  At a branch point the local
    parameter is ``tau`` with ``z - z_b ~ tau**3`` and ``w ~ tau``; then
    ``dz / w**2 ~ 3 dtau`` is again a unit and the order is ``3 ord(P_k)``.
    Either way a common zero exists iff the numerators share a root, which is
    decided by an exact gcd over Q(i).
    """
    z = sympy.Symbol("z")
    if numerators is None:
        numerators = params.numerators()
    polys = [sympy.Poly(p, z, domain="QQ_I") for p in numerators]
    nonzero = [p for p in polys if not p.is_zero]
    if not nonzero:
        return False
    g = nonzero[0]
    for p in nonzero[1:]:
        g = sympy.gcd(g, p)
    return g.degree() == 0


def branch_orders(numerators: Sequence[sympy.Expr] | None = None,
                  params: CurveParams = GENUS10) -> list[list[int]]:
    """Order of each differential at each finite branch point (local tau order).

    Row ``m`` is the branch point ``exp(2 pi i m / n)``; the order is
    ``3 * (multiplicity of the root in the numerator)``.
    """
    z = sympy.Symbol("z")
    if numerators is None:
        numerators = params.numerators()
    n = params.branch_degree
    out = []
    for m in range(n):
        zb = sympy.exp(2 * sympy.pi * sympy.I * m / n)
        row = []
        for p in numerators:
            poly = sympy.Poly(p, z)
            if poly.is_zero:
                row.append(math.inf)
                continue
            k = 0
            while sympy.simplify(poly.eval(zb)) == 0:
                poly = sympy.Poly(sympy.quo(poly.as_expr(), z - zb), z)
                k += 1
            row.append(3 * k)
        out.append(row)
    return out


# --- the genus obstruction --------------------------------------------------

@dataclass(frozen=True)
class Admissible:
    r: int

    def __str__(self):
        return f"Admissible({self.r})"


@dataclass(frozen=True)
class Obstructed:
    reason: str

    def __str__(self):
        return f"Obstructed({self.reason})"


def trigonal_obstruction(g: int) -> Admissible | Obstructed:
    """Arithmetic obstruction for trigonal minimal surfaces in flat 4-tori."""
    if isinstance(g, bool) or not isinstance(g, (int, np.integer)):
        raise DomainError(f"genus must be an integer, got {g!r}")
    if g < 0:
        raise DomainError(f"genus must be nonnegative, got {g}")
    if g <= 3:
        return Obstructed("not trigonal")
    if g % 3 == 1:
        return Admissible((g - 1) // 3)
    return Obstructed(f"{g} ≡ {g % 3} mod 3")


# --- sheet continuation -----------------------------------------------------

def _default_fz(z_of_t: Callable, n: int):
    return lambda t: np.asarray(z_of_t(t), dtype=complex) ** n - 1


@dataclass
class SheetTrack:
    """A continuous choice of ``w`` along a parametrized path ``z(t)``.

    The track stores a table of accepted samples.  Evaluating at arbitrary
    ``t`` computes the three cube roots there and keeps the one whose phase is
    closest to the nearest tabulated sample; exactly one root is within pi/3.
    """

    z_of_t: Callable[[np.ndarray], np.ndarray]
    fz_of_t: Callable[[np.ndarray], np.ndarray]
    ts: np.ndarray
    ws: np.ndarray
    guard: float = 1e-6
    n_steps: int = field(default=0)

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        roots = cube_roots(self.fz_of_t(t))
        idx = np.clip(np.searchsorted(self.ts, t), 1, len(self.ts) - 1)
        left_closer = (t - self.ts[idx - 1]) <= (self.ts[idx] - t)
        idx = np.where(left_closer, idx - 1, idx)
        ref = self.ws[idx]
        dphase = np.abs(np.angle(roots / ref[:, None]))
        choice = np.argmin(dphase, axis=1)
        best = dphase[np.arange(len(t)), choice]
        if np.any(best > math.pi / 3 - self.guard):
            bad = t[np.argmax(best)]
            raise AmbiguousContinuation(f"sheet choice is ambiguous near t = {bad}")
        return roots[np.arange(len(t)), choice]

    def endpoint_values(self) -> tuple[complex, complex]:
        return complex(self.ws[0]), complex(self.ws[-1])


def continue_sheet(
    z_of_t: Callable[[np.ndarray], np.ndarray],
    t_seed: float,
    w_seed: complex,
    t_start: float,
    t_end: float,
    n: int = N,
    fz_of_t: Callable[[np.ndarray], np.ndarray] | None = None,
    branch_ends: Sequence[bool] = (False, False),
    end_offset: float = 1e-8,
    min_step: float = 1e-14,
) -> SheetTrack:
    """Continue the sheet value ``w_seed`` at ``t_seed`` over ``[t_start, t_end]``.

    ``fz_of_t`` evaluates ``z(t)**n - 1`` and may be supplied when it can be
    computed more accurately than by forming ``z**n``.  Endpoints flagged in
    ``branch_ends`` are branch points; the table stops ``end_offset`` short of
    them.  Steps start at one 64th of the path length and are halved until
    the nearest-root choice is unambiguous with relative jump below 0.5.
    """
    fz = fz_of_t or _default_fz(z_of_t, n)
    c_seed = complex(np.asarray(fz(np.array([t_seed])))[0])
    w_seed = complex(w_seed)
    z_seed = complex(np.asarray(z_of_t(np.array([t_seed])))[0])
    if abs(w_seed**3 - c_seed) > CURVE_TOL * max(1.0, abs(z_seed) ** n):
        raise SeedOffCurve(f"w = {w_seed} is not on the curve over z = {z_seed}")
    length = abs(t_end - t_start)
    h0 = length / 64 if length > 0 else 0.0
    lo = t_start + (end_offset if branch_ends[0] else 0.0) * np.sign(t_end - t_start)
    hi = t_end - (end_offset if branch_ends[1] else 0.0) * np.sign(t_end - t_start)
    steps = 0

    def march(target: float) -> tuple[list[float], list[complex]]:
        nonlocal steps
        ts, ws = [t_seed], [w_seed]
        t, w = t_seed, w_seed
        h = h0
        direction = np.sign(target - t)
        while direction != 0 and (target - t) * direction > 0:
            h = min(h, abs(target - t))
            tn = t + direction * h
            roots = cube_roots(fz(np.array([tn])))[0]
            d = np.abs(roots - w)
            order = np.argsort(d)
            jump = d[order[0]] / max(abs(w), 1e-300)
            separated = d[order[1]] - d[order[0]] > 1e-9 * max(abs(w), 1e-300)
            if jump < 0.5 and separated:
                t, w = tn, roots[order[0]]
                ts.append(t)
                ws.append(w)
                steps += 1
                h = min(2 * h, h0)
            else:
                h *= 0.5
                if h < min_step * max(length, 1.0):
                    raise AmbiguousContinuation(
                        f"step underflow at t = {t}; two roots equidistant from w = {w}")
        return ts, ws

    ts_hi, ws_hi = march(hi)
    ts_lo, ws_lo = march(lo)
    ts = ts_lo[::-1] + ts_hi[1:]
    ws = ws_lo[::-1] + ws_hi[1:]
    ts_arr, ws_arr = np.array(ts, dtype=float), np.array(ws, dtype=complex)
    if ts_arr[0] > ts_arr[-1]:
        ts_arr, ws_arr = ts_arr[::-1], ws_arr[::-1]
    return SheetTrack(z_of_t, fz, ts_arr, ws_arr, n_steps=steps)
