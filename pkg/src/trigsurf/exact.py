"""Exact arithmetic over Q(sqrt 3), Q(i, sqrt 3) and the period ring.

Period entries are Q(i, sqrt 3)-combinations of the two transcendental
constants alpha and gamma (beta having been eliminated as sqrt(3) * gamma).
Everything here works on :class:`fractions.Fraction` so that matrix
identities can be checked with zero residual.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

SQRT3 = math.sqrt(3.0)


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, str or Fraction")
    return Fraction(x)


class QSqrt3:
    """The number ``a + b*sqrt(3)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _q(a)
        self.b = _q(b)

    @classmethod
    def coerce(cls, x) -> "QSqrt3":
        return x if isinstance(x, QSqrt3) else cls(x)

    def __add__(self, other):
        o = QSqrt3.coerce(other)
        return QSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QSqrt3.coerce(other))

    def __rsub__(self, other):
        return QSqrt3.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (QiSqrt3, SymbolicScalar)):
            return NotImplemented
        o = QSqrt3.coerce(other)
        return QSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - 3 * self.b * self.b

    def inverse(self) -> "QSqrt3":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero in Q(sqrt 3)")
        return QSqrt3(self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * QSqrt3.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QSqrt3.coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSqrt3(other)
        if not isinstance(other, QSqrt3):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT3

    def __repr__(self):
        return f"QSqrt3({self.a}, {self.b})"


class QiSqrt3:
    """Element ``re + i*im`` of Q(i, sqrt 3) with ``re, im`` in Q(sqrt 3)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = QSqrt3.coerce(re)
        self.im = QSqrt3.coerce(im)

    @classmethod
    def coerce(cls, x) -> "QiSqrt3":
        if isinstance(x, QiSqrt3):
            return x
        return cls(x, 0)

    def __add__(self, other):
        if isinstance(other, SymbolicScalar):
            return NotImplemented
        o = QiSqrt3.coerce(other)
        return QiSqrt3(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QiSqrt3(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, SymbolicScalar):
            return NotImplemented
        return self + (-QiSqrt3.coerce(other))

    def __rsub__(self, other):
        return QiSqrt3.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, SymbolicScalar):
            return NotImplemented
        o = QiSqrt3.coerce(other)
        return QiSqrt3(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "QiSqrt3":
        return QiSqrt3(self.re, -self.im)

    def inverse(self) -> "QiSqrt3":
        n = self.re * self.re + self.im * self.im
        ninv = n.inverse()
        return QiSqrt3(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        return self * QiSqrt3.coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QiSqrt3(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QSqrt3)):
            other = QiSqrt3(other)
        if not isinstance(other, QiSqrt3):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QiSqrt3({self.re!r}, {self.im!r})"


I = QiSqrt3(0, 1)
ONE = QiSqrt3(1)
#: e^{i pi/3} and e^{2 pi i/3}
E3 = QiSqrt3(Fraction(1, 2), QSqrt3(0, Fraction(1, 2)))
E23 = QiSqrt3(Fraction(-1, 2), QSqrt3(0, Fraction(1, 2)))
S3 = QSqrt3(0, 1)


class SymbolicScalar:
    """``a * alpha + c * gamma`` with coefficients ``a, c`` in Q(i, sqrt 3).

    Flattened, this is the 8-rational vector
    ``(c1..c4 | c5..c8)`` over the real basis
    ``alpha, sqrt3*alpha, gamma, sqrt3*gamma`` and its ``i`` multiple.
    """

    __slots__ = ("alpha", "gamma")

    def __init__(self, alpha=0, gamma=0):
        self.alpha = QiSqrt3.coerce(alpha)
        self.gamma = QiSqrt3.coerce(gamma)

    @classmethod
    def from_coefficients(cls, c: Sequence) -> "SymbolicScalar":
        c = [_q(x) for x in c]
        if len(c) != 8:
            raise ValueError("need 8 rational coefficients")
        return cls(
            QiSqrt3(QSqrt3(c[0], c[1]), QSqrt3(c[4], c[5])),
            QiSqrt3(QSqrt3(c[2], c[3]), QSqrt3(c[6], c[7])),
        )

    def coefficients(self) -> tuple[Fraction, ...]:
        a, g = self.alpha, self.gamma
        return (a.re.a, a.re.b, g.re.a, g.re.b, a.im.a, a.im.b, g.im.a, g.im.b)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return SymbolicScalar(self.alpha + other.alpha, self.gamma + other.gamma)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicScalar(-self.alpha, -self.gamma)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, SymbolicScalar):
            raise TypeError("product of two transcendental scalars is outside the ring")
        k = QiSqrt3.coerce(k)
        return SymbolicScalar(self.alpha * k, self.gamma * k)

    __rmul__ = __mul__

    def real(self) -> "SymbolicScalar":
        return SymbolicScalar(QiSqrt3(self.alpha.re), QiSqrt3(self.gamma.re))

    def imag(self) -> "SymbolicScalar":
        return SymbolicScalar(QiSqrt3(self.alpha.im), QiSqrt3(self.gamma.im))

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.gamma.is_zero()

    def is_real(self) -> bool:
        return self.alpha.im.is_zero() and self.gamma.im.is_zero()

    def numeric(self, alpha: float, gamma: float) -> complex:
        return complex(self.alpha) * alpha + complex(self.gamma) * gamma

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, SymbolicScalar):
            return NotImplemented
        return self.alpha == other.alpha and self.gamma == other.gamma

    def __hash__(self):
        return hash((self.alpha, self.gamma))

    def __repr__(self):
        return f"SymbolicScalar({list(map(str, self.coefficients()))})"


ZERO = SymbolicScalar()
ALPHA = SymbolicScalar(alpha=1)
GAMMA = SymbolicScalar(gamma=1)


# --- matrices as lists of rows ----------------------------------------------

def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    """Product of two row-major matrices; entries only need ``*`` and ``+``."""
    m = len(b)
    if any(len(row) != m for row in a):
        raise ValueError("inner dimensions differ")
    p = len(b[0]) if m else 0
    out = []
    for row in a:
        new = []
        for j in range(p):
            acc = 0
            for k in range(m):
                x = b[k][j]
                if isinstance(x, int) and x == 0:
                    continue
                acc = acc + row[k] * x
            new.append(acc)
        out.append(new)
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def mat_equal(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if not _entry_eq(x, y):
                return False
    return True


def _entry_eq(x, y) -> bool:
    if isinstance(x, int) and x == 0:
        x, y = y, x
    if isinstance(y, int) and y == 0:
        return x == 0 if not hasattr(x, "is_zero") else x.is_zero()
    return x == y


def identity(n: int, one=1, zero=0) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def rank_q(rows: Iterable[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Entries must be rationals; they are scaled to integers row by row first.
    """
    mat = []
    for row in rows:
        row = [_q(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        mat.append([int(x * den) for x in row])
    if not mat:
        return 0
    n_rows, n_cols = len(mat), len(mat[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                # Bareiss keeps every intermediate an exact integer
                mat[r][c] = (p * mat[r][c] - mat[r][col] * mat[rank][c]) // prev
            mat[r][col] = 0
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank
