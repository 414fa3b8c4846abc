"""Exact lattice identities and the rational rank of the associate periods.

A spanning set ``U`` (4 x m) consists of lattice vectors of the lattice
spanned by ``V`` (4 x n) when integer matrices ``G1`` (m x n) and ``G2``
(n x m) satisfy ``U G1 = V`` and ``V G2 = U``.  All checks here run in the
exact period ring, so a pass means zero residual.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DegenerateAngle, DimensionMismatch, MismatchError
from .exact import QiSqrt3, QSqrt3, SymbolicScalar, mat_equal, matmul, rank_q, transpose
from . import reference
from .periods import symbolic_period_matrix


def _shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def verify_lattice_transformation(U, V, G1, G2) -> bool:
    """True iff ``U G1 = V`` and ``V G2 = U`` hold exactly."""
    (ur, uc), (vr, vc) = _shape(U), _shape(V)
    (g1r, g1c), (g2r, g2c) = _shape(G1), _shape(G2)
    if ur != vr or (g1r, g1c) != (uc, vc) or (g2r, g2c) != (vc, uc):
        raise DimensionMismatch(
            f"U {ur}x{uc}, V {vr}x{vc}, G1 {g1r}x{g1c}, G2 {g2r}x{g2c} do not conform")
    return mat_equal(matmul(U, G1), V) and mat_equal(matmul(V, G2), U)


def real_part(m):
    return [[x.real() for x in row] for row in m]


def imag_part(m):
    return [[x.imag() for x in row] for row in m]


@dataclass(frozen=True)
class LatticeIdentities:
    omega_forward: bool      # Omega G^Omega_1 = (Omega_8, Omega_9)
    omega_backward: bool     # (Omega_8, Omega_9) G^Omega_2 = Omega
    split_matches: bool      # Re/Im of (Omega_8, Omega_9) equal Omega_R, Omega_I
    real_forward: bool       # Omega_R G^R_1 = Lambda
    real_backward: bool      # Lambda G^R_2 = Omega_R
    imag_forward: bool       # Omega_I G^I_1 = Lambda_{pi/2}
    imag_backward: bool      # Lambda_{pi/2} G^I_2 = Omega_I

    def all(self) -> bool:
        return all(vars(self).values())


def lattice_identities(mats: dict | None = None, omega=None) -> LatticeIdentities:
    """Evaluate all six lattice identities plus the real/imaginary split."""
    mats = mats or reference.load_integer_matrices()
    omega = omega if omega is not None else symbolic_period_matrix()
    o89 = reference.omega_8_9()
    o_r, o_i = reference.omega_real(), reference.omega_imag()
    lam, lam2 = reference.lattice_basis(), reference.conjugate_lattice_basis()
    return LatticeIdentities(
        omega_forward=mat_equal(matmul(omega, mats["G_Omega_1"]), o89),
        omega_backward=mat_equal(matmul(o89, mats["G_Omega_2"]), omega),
        split_matches=mat_equal(real_part(o89), o_r) and mat_equal(imag_part(o89), o_i),
        real_forward=mat_equal(matmul(o_r, mats["G_R_1"]), lam),
        real_backward=mat_equal(matmul(lam, mats["G_R_2"]), o_r),
        imag_forward=mat_equal(matmul(o_i, mats["G_I_1"]), lam2),
        imag_backward=mat_equal(matmul(lam2, mats["G_I_2"]), o_i),
    )


def verify_omega_reduction(mats: dict | None = None) -> bool:
    ids = lattice_identities(mats)
    return ids.omega_forward and ids.omega_backward and ids.split_matches


def conjugate_lattice_check(mats: dict | None = None) -> bool:
    mats = mats or reference.load_integer_matrices()
    return verify_lattice_transformation(reference.omega_imag(), reference.conjugate_lattice_basis(),
                                  mats["G_I_1"], mats["G_I_2"])


def real_lattice_check(mats: dict | None = None) -> bool:
    mats = mats or reference.load_integer_matrices()
    return verify_lattice_transformation(reference.omega_real(), reference.lattice_basis(),
                                  mats["G_R_1"], mats["G_R_2"])


def exact_determinant(m: Sequence[Sequence[SymbolicScalar]]) -> dict:
    """Determinant of an upper-triangular 4x4 real period-ring matrix.

    Returned as the product of the diagonal, kept as the list of diagonal
    entries together with a flag for nonvanishing; the ring is not closed
    under products, so the value itself is a monomial in alpha, gamma.
    """
    n = len(m)
    for i in range(n):
        for j in range(i):
            if not m[i][j].is_zero():
                raise ValueError("matrix is not upper triangular")
    diag = [m[i][i] for i in range(n)]
    return {"diagonal": diag, "nonzero": all(not d.is_zero() for d in diag)}


def associate_matrix(m: int, n: int) -> list[list[SymbolicScalar]]:
    """Re(e^{i theta} (Omega_8, Omega_9)) / cos(theta) with sqrt(3) tan(theta) = m/n.

    Equals Omega_R - tan(theta) Omega_I, i.e. the matrix (Omega_10, Omega_11).
    """
    if n == 0:
        raise DegenerateAngle("cos(theta) = 0 has no finite m/n")
    tan = QSqrt3(0, Fraction(m, 3 * n))   # m / (n sqrt 3)
    o_r, o_i = reference.omega_real(), reference.omega_imag()
    return [[a - b * QiSqrt3(tan) for a, b in zip(ra, ri)] for ra, ri in zip(o_r, o_i)]


# Row r of the associate matrix is a rational multiple of one basis element:
# alpha for rows 1-2, gamma for row 3, sqrt3 gamma for row 4.  Indices refer
# to the real coordinates (alpha, sqrt3 alpha, gamma, sqrt3 gamma).
_ROW_BASIS = (0, 0, 2, 3)


def _real_coordinates(x: SymbolicScalar) -> tuple[Fraction, ...]:
    if not x.is_real():
        raise ValueError("expected a real entry")
    return tuple(x.coefficients()[:4])


@lru_cache(maxsize=1)
def _split_coordinates():
    o_r = [[_real_coordinates(x) for x in row] for row in reference.omega_real()]
    o_i = [[_real_coordinates(x) for x in row] for row in reference.omega_imag()]
    return o_r, o_i


def associate_coefficients(m: int, n: int) -> list[list[Fraction]]:
    """The 4 x 8 rational coefficient matrix of (Omega_10, Omega_11).

    Entry (r, c) is the coefficient of row r's basis element (alpha, alpha,
    gamma, sqrt3 gamma); every other coordinate is checked to vanish.
    """
    if n == 0:
        raise DegenerateAngle("cos(theta) = 0 has no finite m/n")
    t = Fraction(m, 3 * n)        # tan(theta) = t sqrt3
    o_r, o_i = _split_coordinates()
    out = []
    for r, (row_r, row_i) in enumerate(zip(o_r, o_i)):
        coeffs = []
        for (a0, a1, g0, g1), (b0, b1, h0, h1) in zip(row_r, row_i):
            # (b0 + b1 sqrt3) * t sqrt3 = 3 t b1 + t b0 sqrt3
            x = (a0 - 3 * t * b1, a1 - t * b0, g0 - 3 * t * h1, g1 - t * h0)
            k = _ROW_BASIS[r]
            if any(v for i, v in enumerate(x) if i != k):
                raise ValueError(f"row {r + 1} leaves its one-dimensional span")
            coeffs.append(x[k])
        out.append(coeffs)
    return out


def associate_rank(m: int, n: int) -> int:
    """rank over Q of the associate period matrix for sqrt(3) tan(theta) = m/n.

    alpha, gamma and sqrt3 gamma are linearly independent over Q, and each row
    lives on one of them, so the Q-rank of the column set equals the rank of
    the 4 x 8 rational coefficient matrix.
    """
    g = gcd(m, n)
    if g > 1:
        m, n = m // g, n // g
    rows = associate_coefficients(m, n)
    return rank_q(rows)


# --- mutation sensitivity -----------------------------------------------------

def identity_operands(omega=None) -> dict[str, tuple[str, list, list]]:
    """For each integer matrix G: (identity flag, left factor U, target) with U G = target."""
    omega = omega if omega is not None else symbolic_period_matrix()
    o89 = reference.omega_8_9()
    lam, lam2 = reference.lattice_basis(), reference.conjugate_lattice_basis()
    o_r, o_i = reference.omega_real(), reference.omega_imag()
    return {
        "G_Omega_1": ("omega_forward", omega, o89),
        "G_Omega_2": ("omega_backward", o89, omega),
        "G_R_1": ("real_forward", o_r, lam),
        "G_R_2": ("real_backward", lam, o_r),
        "G_I_1": ("imag_forward", o_i, lam2),
        "G_I_2": ("imag_backward", lam2, o_i),
    }


def _column(U, G, j):
    out = []
    for row in U:
        acc = SymbolicScalar()
        for u, g_row in zip(row, G):
            if g_row[j]:
                acc = acc + u * g_row[j]
        out.append(acc)
    return out


def mutation_sweep(delta: int = 1, mats: dict | None = None) -> dict[str, list[tuple[int, int]]]:
    """Entries (1-based) whose mutation by ``delta`` leaves every identity intact.

    A change of G[i][j] only touches column j of the one product ``U G`` that
    G enters, so after checking the unmutated identities once, each mutation
    is decided by recomputing that column exactly.
    """
    mats = mats or reference.load_integer_matrices()
    ops = identity_operands()
    if not lattice_identities(mats).all():
        raise MismatchError("the unmutated identities already fail")
    inert: dict[str, list[tuple[int, int]]] = {}
    for name, (_, U, target) in ops.items():
        g = mats[name]
        for i, row in enumerate(g):
            for j in range(len(row)):
                mutated = [list(r) for r in g]
                mutated[i][j] += delta
                col = _column(U, mutated, j)
                if all(a == t[j] for a, t in zip(col, target)):
                    inert.setdefault(name, []).append((i + 1, j + 1))
    return inert


def resolve_printed_orientation(mats_printed: dict | None = None) -> str:
    """Which reading of the printed (G^Omega_2)^T grid satisfies the identity.

    Returns ``"transposed"`` or ``"as-printed"``; raises if neither does.
    """
    mats = mats_printed or reference.apply_errata(reference.printed_matrices(),
                                                   reference.parse_errata(reference._data_text()))
    grid = mats["G_Omega_2_transposed"]
    o89, omega = reference.omega_8_9(), symbolic_period_matrix()
    for label, cand in (("transposed", transpose(grid)), ("as-printed", grid)):
        if len(cand) == len(o89[0]) and mat_equal(matmul(o89, cand), omega):
            return label
    raise MismatchError("no orientation of G_Omega_2 reproduces Omega")
