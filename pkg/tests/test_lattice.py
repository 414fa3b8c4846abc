"""Published integer matrices and the exact lattice identities."""
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trigsurf import reference
from trigsurf.errors import DegenerateAngle, DimensionMismatch, MismatchError
from trigsurf.exact import SymbolicScalar, identity, rank_q
from trigsurf.lattice import (associate_coefficients, associate_matrix, associate_rank,
                              conjugate_lattice_check, exact_determinant, lattice_identities,
                              mutation_sweep, real_lattice_check, resolve_printed_orientation,
                              verify_omega_reduction, verify_lattice_transformation)

ONE_S, ZERO_S = SymbolicScalar(alpha=1), SymbolicScalar()


# --- data file -------------------------------------------------------------

def test_matrix_shapes():
    mats = reference.load_integer_matrices()
    shapes = {k: (len(v), len(v[0])) for k, v in mats.items()}
    assert shapes == {"G_Omega_1": (20, 8), "G_Omega_2": (8, 20), "G_R_1": (8, 4),
                      "G_R_2": (4, 8), "G_I_1": (8, 4), "G_I_2": (4, 8)}


def test_printed_grid_is_verbatim_transposed():
    printed = reference.printed_matrices()
    assert "G_Omega_2_transposed" in printed
    grid = printed["G_Omega_2_transposed"]
    assert (len(grid), len(grid[0])) == (20, 8)
    assert grid[5][6] == 1


def test_single_erratum():
    errata = reference.parse_errata(reference._data_text())
    assert errata == [reference.Erratum("G_Omega_2_transposed", 6, 7, 1, -1)]
    corrected = reference.load_integer_matrices()["G_Omega_2"]
    assert corrected[6][5] == -1


def test_erratum_checks_printed_value():
    mats = reference.printed_matrices()
    bad = reference.Erratum("G_Omega_2_transposed", 6, 7, 5, -1)
    with pytest.raises(ValueError):
        reference.apply_errata(mats, [bad])


def test_parser_rejects_bad_input():
    with pytest.raises(ValueError):
        reference.parse_matrix_file("[M] 2 x 2\n1 2\n3\n")
    with pytest.raises(ValueError):
        reference.parse_matrix_file("1 2\n")
    with pytest.raises(ValueError):
        reference.parse_errata("@erratum M 1 1\n")


def test_parser_round_trip():
    text = "# comment\n[A] 2 x 3\n1 -2 3\n0 0 7\n\n[B] 1 x 1\n-4\n@erratum B 1 1 -4 4\n"
    assert reference.parse_matrix_file(text) == {"A": [[1, -2, 3], [0, 0, 7]], "B": [[-4]]}
    mats = reference.apply_errata(reference.parse_matrix_file(text), reference.parse_errata(text))
    assert mats["B"] == [[4]]


# --- identities ------------------------------------------------------------

def test_all_identities_hold():
    ids = lattice_identities()
    assert ids.all()
    assert verify_omega_reduction()
    assert real_lattice_check()
    assert conjugate_lattice_check()


def test_printed_grid_fails_only_backward_identity():
    printed = reference.printed_matrices()
    printed["G_Omega_2"] = [list(r) for r in zip(*printed.pop("G_Omega_2_transposed"))]
    ids = lattice_identities(printed)
    failing = [k for k, v in vars(ids).items() if not v]
    assert failing == ["omega_backward"]


def test_orientation_is_transposed():
    assert resolve_printed_orientation() == "transposed"


def test_trivial_proposition():
    e = identity(4, ONE_S, ZERO_S)
    i4 = [[int(i == j) for j in range(4)] for i in range(4)]
    assert verify_lattice_transformation(e, e, i4, i4)


def test_dimension_mismatch():
    e = identity(4, ONE_S, ZERO_S)
    with pytest.raises(DimensionMismatch):
        verify_lattice_transformation(e, e, [[1] * 3] * 4, [[1] * 4] * 4)


def test_mutated_real_matrix_fails():
    mats = reference.load_integer_matrices()
    mats["G_R_1"][0][0] += 1
    assert not real_lattice_check(mats)


def test_zeroed_imag_matrix_fails():
    mats = reference.load_integer_matrices()
    mats["G_I_1"] = [[0] * 4 for _ in range(8)]
    assert not conjugate_lattice_check(mats)


def test_omega_real_and_imag_rows():
    s3g = lambda c: SymbolicScalar(gamma=reference.QSqrt3(0, c))  # noqa: E731
    s3a = lambda c: SymbolicScalar(alpha=reference.QSqrt3(0, c))  # noqa: E731
    assert reference.omega_real()[3] == [ZERO_S] * 5 + [s3g(-1), s3g(Fraction(-1, 2)), s3g(1)]
    assert reference.omega_imag()[1] == [ZERO_S, ZERO_S, s3a(-1), s3a(Fraction(1, 2))] + [ZERO_S] * 4


def test_lattice_determinants_nonzero():
    for lam in (reference.lattice_basis(), reference.conjugate_lattice_basis()):
        assert exact_determinant(lam)["nonzero"]
    diag = exact_determinant(reference.conjugate_lattice_basis())["diagonal"]
    k = (1.0, 1.0)
    assert math.isclose(math.prod(d.numeric(*k).real for d in diag),
                        math.sqrt(3) * math.sqrt(3) / 2 * 3 * math.sqrt(3) * 1.5)


def test_determinant_requires_triangular():
    m = identity(4, ONE_S, ZERO_S)
    m[3][0] = ONE_S
    with pytest.raises(ValueError):
        exact_determinant(m)


# --- mutation sensitivity --------------------------------------------------

INERT = {"G_R_1": [(3, j) for j in range(1, 5)],
         "G_I_1": [(5, j) for j in range(1, 5)] + [(8, j) for j in range(1, 5)]}


@pytest.mark.parametrize("delta", [1, -1])
def test_mutation_sweep_inert_entries(delta):
    # rows of G multiplying all-zero columns of Omega_R / Omega_I cannot be detected
    assert mutation_sweep(delta) == INERT


def test_inert_rows_multiply_zero_columns():
    o_r, o_i = reference.omega_real(), reference.omega_imag()
    assert all(row[2].is_zero() for row in o_r)
    assert all(row[4].is_zero() and row[7].is_zero() for row in o_i)


def test_mutation_sweep_refuses_broken_base():
    mats = reference.load_integer_matrices()
    mats["G_R_2"][0][0] += 1
    with pytest.raises(MismatchError):
        mutation_sweep(1, mats)


# --- associate family ------------------------------------------------------

@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (-3, 1), (2, 4), (7, -5)])
def test_associate_rank_examples(m, n):
    assert associate_rank(m, n) == 4


def test_associate_rank_sweep():
    for m in range(-20, 21):
        for n in range(-20, 21):
            if n != 0 and math.gcd(m, n) == 1:
                assert associate_rank(m, n) == 4, (m, n)


def test_associate_degenerate():
    with pytest.raises(DegenerateAngle):
        associate_rank(1, 0)
    with pytest.raises(DegenerateAngle):
        associate_matrix(1, 0)


@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (-3, 2), (5, 7)])
def test_associate_matrix_equals_displayed_family(m, n):
    assert associate_matrix(m, n) == reference.omega_10_11(m, n)


def test_associate_at_zero_is_real_part():
    assert associate_matrix(0, 1) == reference.omega_real()


@given(st.integers(-20, 20), st.integers(1, 20), st.randoms(use_true_random=False),
       st.lists(st.fractions().filter(lambda q: q != 0), min_size=8, max_size=8))
def test_rank_invariant_under_column_operations(m, n, rnd, scales):
    rows = associate_coefficients(m, n)
    perm = list(range(8))
    rnd.shuffle(perm)
    moved = [[row[p] * Fraction(scales[k]) for k, p in enumerate(perm)] for row in rows]
    assert rank_q(moved) == rank_q(rows) == 4
