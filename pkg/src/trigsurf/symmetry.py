"""Pullback identities of the automorphisms and the symmetry group they generate.

An automorphism ``a`` acts on the holomorphic frame by

    a^* Psi = scalar * block * Psi,

with ``scalar`` a root of unity and ``block`` a real orthogonal matrix with
entries in Q(sqrt 3).  Blocks are handled exactly so that group orders are
counted without rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .curve import CURVE_TOL, N, SurfacePoint, cube_roots, psi_array
from .cycles import PHI, PHI1, PHI2, Automorphism, J
from .errors import DomainError, NonClosure, SampleOnSingularLocus
from .exact import E23, ONE, QiSqrt3, QSqrt3, identity, matmul, transpose

Block = list[list[QSqrt3]]

_O, _1 = QSqrt3(0), QSqrt3(1)
_H = QSqrt3(Fraction(1, 2))
_RH = QSqrt3(0, Fraction(1, 2))       # sqrt(3) / 2


def rotation_pi_2() -> Block:
    return [[_O, -_1], [_1, _O]]


def rotation_minus_pi_3() -> Block:
    return [[_H, _RH], [-_RH, _H]]


def block_diag(a: Block, b: Block) -> Block:
    n, m = len(a), len(b)
    out = [[_O] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def diagonal(*entries: int) -> Block:
    k = len(entries)
    return [[QSqrt3(entries[i]) if i == j else _O for j in range(k)] for i in range(k)]


def is_orthogonal(block: Block) -> bool:
    n = len(block)
    prod = matmul(transpose(block), block)
    return prod == identity(n, _1, _O)


@dataclass(frozen=True)
class PullbackMatrix:
    """``a^* Psi = scalar * block * Psi``; ``block`` exactly orthogonal."""

    scalar: QiSqrt3
    block: tuple[tuple[QSqrt3, ...], ...]

    def __init__(self, scalar, block: Sequence[Sequence[QSqrt3]]):
        object.__setattr__(self, "scalar", QiSqrt3.coerce(scalar))
        object.__setattr__(self, "block", tuple(tuple(QSqrt3.coerce(x) for x in row) for row in block))
        if not is_orthogonal(self.rows()):
            raise DomainError("pullback block is not orthogonal")

    def rows(self) -> Block:
        return [list(r) for r in self.block]

    def numeric(self) -> np.ndarray:
        return complex(self.scalar) * np.array([[float(x) for x in r] for r in self.block])


PHI_PULLBACK = PullbackMatrix(E23, block_diag(rotation_pi_2(), rotation_minus_pi_3()))
PHI1_PULLBACK = PullbackMatrix(ONE, block_diag(rotation_pi_2(), rotation_minus_pi_3()))
PHI2_PULLBACK = PullbackMatrix(ONE, diagonal(1, -1, -1, 1))

EXPECTED_PULLBACKS: dict[str, tuple[Automorphism, PullbackMatrix]] = {
    "phi": (PHI, PHI_PULLBACK),
    "phi1": (PHI1, PHI1_PULLBACK),
    "phi2": (PHI2, PHI2_PULLBACK),
}


def sample_points(count: int, seed: int = 0, r_range=(0.2, 2.0), min_branch_distance: float = 1e-2
                  ) -> list[SurfacePoint]:
    """Random points of the curve away from the branch locus and from z = 0."""
    rng = np.random.default_rng(seed)
    out: list[SurfacePoint] = []
    while len(out) < count:
        r = rng.uniform(*r_range)
        z = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if np.min(np.abs(z - np.exp(2j * np.pi * np.arange(N) / N))) < min_branch_distance:
            continue
        roots = cube_roots(z**N - 1)
        out.append(SurfacePoint(complex(z), complex(roots[rng.integers(3)])))
    return out


def verify_pullback(a: Automorphism, expected: PullbackMatrix, sample_count: int = 100,
                    seed: int = 0, points: Sequence[SurfacePoint] | None = None) -> float:
    """Worst relative residual of ``Psi(a(p)) (d a_z/dz)(p) = scalar block Psi(p)``.

    Raises
    ------
    SampleOnSingularLocus
        If a supplied point lies over a branch point or at z = 0 (where the
        inversion-type maps are undefined).
    """
    pts = list(points) if points is not None else sample_points(sample_count, seed)
    m = expected.numeric()
    worst = 0.0
    for p in pts:
        if abs(p.z**N - 1) < CURVE_TOL or abs(p.z) < CURVE_TOL:
            raise SampleOnSingularLocus(f"sample z = {p.z} is singular for the pullback")
        q = a(p)
        lhs = psi_array(q.z, q.w) * a.dz_map(p.z)
        rhs = m @ psi_array(p.z, p.w)
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs))))
    return worst


def gauss_map_j_invariant(points: Sequence[SurfacePoint]) -> bool:
    """``j`` fixes the z-coordinate, hence any map factoring through z."""
    return all(J(p).z == p.z for p in points)


# --- exact group closure ----------------------------------------------------

def _key(block: Block) -> tuple:
    return tuple(x for row in block for x in row)


def preserves_splitting(block: Block) -> bool:
    """Block-diagonal or block-anti-diagonal for coordinates {1,2} + {3,4}."""
    def zero(rows, cols):
        return all(block[i][j].is_zero() for i in rows for j in cols)
    lo, hi = (0, 1), (2, 3)
    return (zero(lo, hi) and zero(hi, lo)) or (zero(lo, lo) and zero(hi, hi))


def is_block_diagonal(block: Block) -> bool:
    lo, hi = (0, 1), (2, 3)
    return all(block[i][j].is_zero() for i in lo for j in hi) and \
        all(block[i][j].is_zero() for i in hi for j in lo)


@dataclass(frozen=True)
class GroupInfo:
    order: int
    elements: tuple[tuple, ...]
    generator_reducible: tuple[bool, ...]
    all_block_diagonal: bool


def generated_group(generators: Sequence[Block], bound: int = 10000) -> GroupInfo:
    """Close the matrix group generated by ``generators`` exactly.

    Raises
    ------
    NonClosure
        If more than ``bound`` distinct elements appear.
    """
    gens = [[[QSqrt3.coerce(x) for x in row] for row in g] for g in generators]
    for g in gens:
        if not is_orthogonal(g):
            raise DomainError("generator is not orthogonal")
    n = len(gens[0]) if gens else 4
    e = identity(n, _1, _O)
    seen = {_key(e): e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = matmul(g, x)
                k = _key(y)
                if k not in seen:
                    seen[k] = y
                    nxt.append(y)
                    if len(seen) > bound:
                        raise NonClosure(f"group exceeds {bound} elements")
        frontier = nxt
    elems = list(seen.values())
    return GroupInfo(
        order=len(elems),
        elements=tuple(seen),
        generator_reducible=tuple(preserves_splitting(g) for g in gens),
        all_block_diagonal=all(is_block_diagonal(x) for x in elems),
    )


def matrix_power(block: Block, k: int) -> Block:
    out = identity(len(block), _1, _O)
    for _ in range(k):
        out = matmul(block, out)
    return out


@dataclass(frozen=True)
class DihedralRelations:
    rotation_order_12: bool      # b1^12 = 1 and no smaller power
    reflection_involution: bool  # b2^2 = 1
    conjugation: bool            # b2 b1 b2 = b1^-1

    def all(self) -> bool:
        return self.rotation_order_12 and self.reflection_involution and self.conjugation


def dihedral_relations(b1: Block | None = None, b2: Block | None = None) -> DihedralRelations:
    b1 = b1 or PHI1_PULLBACK.rows()
    b2 = b2 or PHI2_PULLBACK.rows()
    e = identity(len(b1), _1, _O)
    powers = [matrix_power(b1, k) for k in range(1, 13)]
    order12 = powers[-1] == e and all(p != e for p in powers[:-1])
    inv = transpose(b1)             # orthogonal
    return DihedralRelations(
        rotation_order_12=order12,
        reflection_involution=matmul(b2, b2) == e,
        conjugation=matmul(matmul(b2, b1), b2) == inv,
    )
