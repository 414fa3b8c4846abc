"""Published matrices for the genus-10 surface, transcribed entry by entry.

Nothing here is computed; these are the targets that the computed period
matrix and lattice identities are compared against.  The integer
matrices live in ``data/lattice_matrices.txt``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .exact import E3, E23, I, ONE, S3, QiSqrt3, QSqrt3, SymbolicScalar, ZERO, transpose

A = SymbolicScalar(alpha=1)
G = SymbolicScalar(gamma=1)
HALF = Fraction(1, 2)

C1 = ONE + E3          # 1 + e^{i pi/3}
C2 = E23 + E3          # e^{2 pi i/3} + e^{i pi/3}
C3 = -ONE + E23        # -1 + e^{2 pi i/3}


def _vec(a1: int, a2: int, s3: int, g4: int) -> list[SymbolicScalar]:
    """(a1 alpha, a2 alpha, s3 sqrt3 i gamma, g4 i gamma)."""
    return [A * a1, A * a2, G * (I * S3 * s3), G * (I * g4)]


# (scalar, vector) per column, blocks Omega_1 .. Omega_7
_OMEGA_BLOCKS = [
    [(C1, (1, -1, 1, -1)), (C2, (1, -1, 1, -1)), (C3, (1, 1, 0, -2))],
    [(-C1, (1, 1, 0, -2)), (C2, (1, -1, 1, 1)), (C3, (1, -1, 1, 1))],
    [(-C1, (1, 1, 1, -1)), (-C2, (1, 1, 1, -1)), (C3, (1, -1, 0, 2))],
    [(-C1, (1, -1, 0, 2)), (-C2, (1, 1, 1, 1)), (-C3, (1, 1, 1, 1))],
    [(-C1, (1, -1, -1, 1)), (-C2, (1, -1, -1, 1)), (-C3, (1, 1, 0, 2))],
    [(C1, (1, 1, 0, 2)), (-C2, (1, -1, -1, -1)), (-C3, (1, -1, -1, -1))],
    [(C1, (1, 1, -1, 1)), (C2, (1, 1, -1, 1))],
]


def omega_blocks() -> list[list[list[SymbolicScalar]]]:
    """Omega_1 .. Omega_7 as lists of columns."""
    return [[[x * c for x in _vec(*v)] for c, v in block] for block in _OMEGA_BLOCKS]


def omega_matrix() -> list[list[SymbolicScalar]]:
    """The 4 x 20 matrix (Omega_1, ..., Omega_7), row-major."""
    cols = [col for block in omega_blocks() for col in block]
    return transpose(cols)


def omega_8_9() -> list[list[SymbolicScalar]]:
    """The 4 x 8 matrix (Omega_8, Omega_9)."""
    z = ZERO
    o8 = [
        [A * (-2 * (E23 - ONE)), A * (2 * C1), A * C2, A * (-C1)],
        [z, z, A * (-C2), A * C1],
        [z, z, z, z],
        [z, z, z, z],
    ]
    o9 = [
        [z, z, z, z],
        [z, z, z, z],
        [G * (-2 * S3 * I * C2), z, G * (S3 * I * C1), G * (S3 * I * C2)],
        [z, G * (2 * I * C1), G * (I * C1), G * (-I * C2)],
    ]
    return [r8 + r9 for r8, r9 in zip(o8, o9)]


def _real(coef_alpha=0, coef_gamma=0) -> SymbolicScalar:
    return SymbolicScalar(QiSqrt3(coef_alpha), QiSqrt3(coef_gamma))


def _a(q=0, s=0):
    """(q + s sqrt3) alpha."""
    return _real(coef_alpha=QSqrt3(q, s))


def _g(q=0, s=0):
    return _real(coef_gamma=QSqrt3(q, s))


def omega_real() -> list[list[SymbolicScalar]]:
    z = ZERO
    return [
        [_a(3), _a(3), z, _a(-Fraction(3, 2)), z, z, z, z],
        [z, z, z, _a(Fraction(3, 2)), z, z, z, z],
        [z, z, z, z, _g(6), z, _g(-Fraction(3, 2)), _g(-3)],
        [z, z, z, z, z, _g(0, -1), _g(0, -HALF), _g(0, 1)],
    ]


def omega_imag() -> list[list[SymbolicScalar]]:
    z = ZERO
    return [
        [_a(0, -1), _a(0, 1), _a(0, 1), _a(0, -HALF), z, z, z, z],
        [z, z, _a(0, -1), _a(0, HALF), z, z, z, z],
        [z, z, z, z, z, z, _g(0, Fraction(3, 2)), z],
        [z, z, z, z, z, _g(3), _g(Fraction(3, 2)), z],
    ]


def lattice_basis() -> list[list[SymbolicScalar]]:
    """Lambda, whose columns generate the lattice of the torus."""
    z = ZERO
    return [
        [_a(3), _a(Fraction(3, 2)), z, z],
        [z, _a(Fraction(3, 2)), z, z],
        [z, z, _g(3), _g(Fraction(3, 2))],
        [z, z, z, _g(0, HALF)],
    ]


def conjugate_lattice_basis() -> list[list[SymbolicScalar]]:
    """Lambda_{pi/2}, the lattice of the conjugate surface."""
    z = ZERO
    return [
        [_a(0, 1), _a(0, HALF), z, z],
        [z, _a(0, HALF), z, z],
        [z, z, _g(0, 3), _g(0, Fraction(3, 2))],
        [z, z, z, _g(Fraction(3, 2))],
    ]


# --- integer matrices -------------------------------------------------------

_HEADER = re.compile(r"^\[(\w+)\]\s+(\d+)\s*x\s*(\d+)\s*$")


@dataclass(frozen=True)
class Erratum:
    """A misprinted entry of a published grid (1-based row and column)."""

    matrix: str
    row: int
    col: int
    printed: int
    corrected: int


def parse_matrix_file(text: str) -> dict[str, list[list[int]]]:
    """Parse the sectioned integer-grid format; erratum lines are skipped."""
    return _parse(text)[0]


def parse_errata(text: str) -> list[Erratum]:
    return _parse(text)[1]


def _parse(text: str) -> tuple[dict[str, list[list[int]]], list[Erratum]]:
    out: dict[str, list[list[int]]] = {}
    errata: list[Erratum] = []
    name, shape, rows = None, None, []

    def flush():
        if name is None:
            return
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise ValueError(f"matrix {name} does not match its declared shape {shape}")
        out[name] = rows

    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@erratum"):
            fields = line.split()[1:]
            if len(fields) != 5:
                raise ValueError(f"malformed erratum line: {line!r}")
            errata.append(Erratum(fields[0], *(int(x) for x in fields[1:])))
            continue
        m = _HEADER.match(line)
        if m:
            flush()
            name, shape, rows = m.group(1), (int(m.group(2)), int(m.group(3))), []
            continue
        if name is None:
            raise ValueError(f"data before the first section header: {line!r}")
        rows.append([int(x) for x in line.split()])
    flush()
    return out, errata


def _data_text() -> str:
    return resources.files("trigsurf").joinpath("data/lattice_matrices.txt").read_text()


def printed_matrices() -> dict[str, list[list[int]]]:
    """The grids exactly as published, including the transposed G_Omega_2."""
    return parse_matrix_file(_data_text())


def apply_errata(mats: dict[str, list[list[int]]], errata: list[Erratum]) -> dict[str, list[list[int]]]:
    out = {k: [list(r) for r in v] for k, v in mats.items()}
    for e in errata:
        current = out[e.matrix][e.row - 1][e.col - 1]
        if current != e.printed:
            raise ValueError(f"erratum for {e.matrix}[{e.row},{e.col}] expects {e.printed}, found {current}")
        out[e.matrix][e.row - 1][e.col - 1] = e.corrected
    return out


def load_integer_matrices(corrected: bool = True) -> dict[str, list[list[int]]]:
    """G_Omega_1 (20x8), G_Omega_2 (8x20), G_R_1, G_R_2, G_I_1, G_I_2.

    With ``corrected=False`` the published grids are returned verbatim.
    """
    text = _data_text()
    mats, errata = _parse(text)
    if corrected:
        mats = apply_errata(mats, errata)
    mats["G_Omega_2"] = transpose(mats.pop("G_Omega_2_transposed"))
    return mats


def omega_10_11(m: int, n: int) -> list[list[SymbolicScalar]]:
    """The displayed (Omega_10, Omega_11) with sqrt(3) tan(theta) = m / n."""
    q = Fraction(m, n)
    z = ZERO
    return [
        [_a(3 + q), _a(3 - q), _a(-q), _a(-(3 - q) / 2), z, z, z, z],
        [z, z, _a(q), _a((3 - q) / 2), z, z, z, z],
        [z, z, z, z, _g(6), z, _g(-Fraction(3, 2) * (1 + q)), _g(-3)],
        [z, z, z, z, z, _g(0, -(1 + q)), _g(0, -(1 + q) / 2), _g(0, 1)],
    ]
