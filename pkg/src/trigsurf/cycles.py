"""Homology cycles A1..A10, B1..B10 and the automorphisms phi, phi', j.

Every cycle is a union of arcs of the unit circle running between adjacent
branch points (12th roots of unity), each arc carrying the sheet value at its
midpoint.  Angles are stored as integers in units of pi/12 so that rotating
by phi (pi/6 = 2 units) is exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .curve import N, OMEGA, SheetTrack, SurfacePoint, continue_sheet
from .errors import DomainError

UNIT = math.pi / 12
CBRT2 = 2 ** (1 / 3)


@dataclass(frozen=True)
class ArcSegment:
    """``z(t) = exp(i (theta0 + sigma t))`` for ``t`` from ``t_start`` to ``t_end``.

    All angle-like fields are integers in units of pi/12.
    """

    theta0: int
    sigma: int
    t_start: int
    t_end: int
    t_seed: int
    w_seed: complex

    def angle(self, t_units: float) -> float:
        return (self.theta0 + self.sigma * t_units) * UNIT

    def z(self, t: np.ndarray) -> np.ndarray:
        return np.exp(1j * (self.theta0 * UNIT + self.sigma * np.asarray(t)))

    def dz(self, t: np.ndarray) -> np.ndarray:
        return 1j * self.sigma * self.z(t)

    @property
    def start_angle_units(self) -> int:
        return self.theta0 + self.sigma * self.t_start

    @property
    def end_angle_units(self) -> int:
        return self.theta0 + self.sigma * self.t_end

    @property
    def z_start(self) -> complex:
        return cmath.exp(1j * self.start_angle_units * UNIT)

    @property
    def z_end(self) -> complex:
        return cmath.exp(1j * self.end_angle_units * UNIT)

    def seed_point(self) -> SurfacePoint:
        return SurfacePoint(cmath.exp(1j * self.angle(self.t_seed)), self.w_seed)

    def starts_at_branch(self) -> bool:
        return self.start_angle_units % 2 == 0

    def ends_at_branch(self) -> bool:
        return self.end_angle_units % 2 == 0

    def rotated(self, k: int) -> "ArcSegment":
        """Image under phi**k: z -> exp(i k pi/6) z, w unchanged."""
        return replace(self, theta0=self.theta0 + 2 * k)

    def halves(self) -> list["HalfArc"]:
        """Split at the seed parameter into two pieces measured from branch points."""
        if self.t_seed * 2 != self.t_start + self.t_end:
            raise DomainError("seed must sit at the arc midpoint")
        length = abs(self.t_end - self.t_start) * UNIT / 2
        direction = 1 if self.t_end > self.t_start else -1
        first = HalfArc(self.start_angle_units, self.sigma * direction, length,
                        self.w_seed, +1)
        second = HalfArc(self.end_angle_units, -self.sigma * direction, length,
                         self.w_seed, -1)
        return [first, second]


@dataclass(frozen=True)
class HalfArc:
    """Half of an arc, parametrized by the distance ``s`` from its branch point.

    ``z(s) = exp(i (branch_angle + turn s))`` for ``s`` in ``[0, length]``; the
    sheet seed sits at ``s = length``.  ``orientation`` is +1 if the original
    traversal runs away from the branch point (s increasing) and -1 if it runs
    into it.
    """

    branch_units: int
    turn: int
    length: float
    w_seed: complex
    orientation: int

    def z(self, s):
        return np.exp(1j * (self.branch_units * UNIT + self.turn * np.asarray(s)))

    def z12_minus_one(self, s):
        # z_b**12 = 1 exactly, so z**12 - 1 = expm1(12 i turn s) without cancellation
        return np.expm1(12j * self.turn * np.asarray(s, dtype=float))

    def track(self) -> SheetTrack:
        return continue_sheet(self.z, self.length, self.w_seed, 0.0, self.length,
                              fz_of_t=self.z12_minus_one, branch_ends=(True, False))

    def line_element(self, s):
        """``dz/ds``, signed so that integrating over ``[0, length]`` follows the cycle."""
        return 1j * self.turn * self.z(s) * self.orientation


@dataclass(frozen=True)
class CyclePath:
    label: str
    segments: tuple[ArcSegment, ...]
    base: str
    phi_power: int

    def closure_residual(self) -> float:
        """Worst junction mismatch around the loop.

        Junctions between arcs lie at branch points, where all three sheets
        meet at w = 0; the residual combines the z mismatch and the
        distance of the junction from the branch locus.
        """
        worst = 0.0
        segs = self.segments
        for a, b in zip(segs, segs[1:] + segs[:1]):
            worst = max(worst, abs(a.z_end - b.z_start))
            if a.ends_at_branch():
                worst = max(worst, abs(a.z_end**N - 1))
            else:
                track_a = continuation_track(a)
                track_b = continuation_track(b)
                worst = max(worst, abs(track_a.ws[-1] - track_b.ws[0]))
        return worst

    def rotated(self, k: int, label: str) -> "CyclePath":
        return CyclePath(label, tuple(s.rotated(k) for s in self.segments),
                         self.base, self.phi_power + k)


def continuation_track(seg: ArcSegment) -> SheetTrack:
    """Sheet track along a whole arc, in the arc's own parameter t (radians)."""
    lo, hi = sorted((seg.t_start * UNIT, seg.t_end * UNIT))
    flags = (seg.starts_at_branch(), seg.ends_at_branch())
    if seg.t_end < seg.t_start:
        flags = flags[::-1]
    return continue_sheet(seg.z, seg.t_seed * UNIT, seg.w_seed, lo, hi, branch_ends=flags)


def cycle_A1() -> CyclePath:
    return CyclePath("A1", (
        ArcSegment(0, +1, 0, 2, 1, -CBRT2 + 0j),
        ArcSegment(0, -1, -2, 0, -1, -CBRT2 * OMEGA),
    ), "A1", 0)


def cycle_A2() -> CyclePath:
    return CyclePath("A2", (
        ArcSegment(0, +1, 0, 2, 1, -CBRT2 + 0j),
        ArcSegment(0, -1, -2, 0, -1, -CBRT2 * OMEGA**2),
    ), "A2", 0)


#: period-matrix column order: A1, A2, B1, B2, A3, A4, B3, B4, ..., B9, B10
COLUMN_LABELS = tuple(
    lab
    for pair in range(5)
    for lab in (f"A{2 * pair + 1}", f"A{2 * pair + 2}", f"B{2 * pair + 1}", f"B{2 * pair + 2}")
)


def generate_all_cycles() -> dict[str, CyclePath]:
    """All twenty cycles keyed by label.

    A_{2k+1} = phi^2(A_{2k-1}), A_{2k+2} = phi^2(A_{2k}),
    B_{2l-1} = phi(A_{2l-1}),   B_{2l} = phi(A_{2l}).
    """
    cycles = {"A1": cycle_A1(), "A2": cycle_A2()}
    for k in range(1, 5):
        cycles[f"A{2 * k + 1}"] = cycles[f"A{2 * k - 1}"].rotated(2, f"A{2 * k + 1}")
        cycles[f"A{2 * k + 2}"] = cycles[f"A{2 * k}"].rotated(2, f"A{2 * k + 2}")
    for l in range(1, 6):
        cycles[f"B{2 * l - 1}"] = cycles[f"A{2 * l - 1}"].rotated(1, f"B{2 * l - 1}")
        cycles[f"B{2 * l}"] = cycles[f"A{2 * l}"].rotated(1, f"B{2 * l}")
    return {lab: cycles[lab] for lab in COLUMN_LABELS}


# --- automorphisms ----------------------------------------------------------

E6 = cmath.exp(1j * math.pi / 6)
E3 = cmath.exp(1j * math.pi / 3)


def _phi(z, w):
    return E6 * z, w


def _phi_prime(z, w):
    if np.any(np.asarray(z) == 0):
        raise DomainError("phi' is undefined at z = 0")
    return 1 / z, E3 * w / z**4


def _j(z, w):
    return z, OMEGA * w


def _compose(*maps):
    """compose(f, g)(p) = f(g(p))."""
    def composed(z, w):
        for m in reversed(maps):
            z, w = m(z, w)
        return z, w
    return composed


@dataclass(frozen=True)
class Automorphism:
    name: str
    action: Callable
    dz_map: Callable
    """Derivative of the induced map on z, for pulling back ``dz``."""

    def __call__(self, p: SurfacePoint) -> SurfacePoint:
        z, w = self.action(p.z, p.w)
        return SurfacePoint(complex(z), complex(w), p.n)


PHI = Automorphism("phi", _phi, lambda z: E6 + 0 * z)
PHI_PRIME = Automorphism("phi_prime", _phi_prime, lambda z: -1 / z**2)
J = Automorphism("j", _j, lambda z: 1 + 0 * z)
PHI1 = Automorphism("phi1", _compose(_phi, _j, _j), lambda z: E6 + 0 * z)
PHI2 = Automorphism("phi2", _compose(_phi_prime, _j), lambda z: -1 / z**2)

AUTOMORPHISMS = {a.name: a for a in (PHI, PHI_PRIME, J, PHI1, PHI2)}


def apply_automorphism(a: Automorphism | str, p: SurfacePoint) -> SurfacePoint:
    if isinstance(a, str):
        a = AUTOMORPHISMS[a]
    return a(p)
